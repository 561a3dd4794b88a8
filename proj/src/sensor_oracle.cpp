#include <cmath>

#include <Eigen/QR>

#include "filterstat/correlation_engine.hpp"
#include "filterstat/errors.hpp"

namespace filterstat {
namespace {

// Augmented space: system (x) sensor 1 (x) sensor 2, sensor index = 2*n1 + n2.
struct Augmented {
  int n = 0, D = 0;
  SuperOp L;
  std::vector<int> exc;  // sensor excitations of each basis state
};

Augmented build(const EmitterModel& m, double omega_F, double lambda, double eps) {
  Augmented a;
  a.n = m.dim;
  a.D = 4 * m.dim;
  const CMatrix I2 = CMatrix::Identity(2, 2), In = CMatrix::Identity(a.n, a.n);
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 1) = 1.0;
  const CMatrix s1 = kron(In, kron(s, I2)), s2 = kron(In, kron(I2, s));
  const CMatrix I4 = CMatrix::Identity(4, 4);
  const CMatrix em = kron(m.emission_minus, I4), ep = em.adjoint();

  CMatrix H = kron(m.hamiltonian, I4) + omega_F * (s1.adjoint() * s1 + s2.adjoint() * s2);
  for (const CMatrix* si : {&s1, &s2}) H += eps * (si->adjoint() * em + ep * (*si));
  H = 0.5 * (H + H.adjoint()).eval();
  a.L = hamiltonian_superop(H);
  for (const auto& c : m.channels)
    if (c.rate > 0.0) a.L += dissipator(kron(c.op, I4), c.rate);
  a.L += dissipator(s1, 2.0 * lambda) + dissipator(s2, 2.0 * lambda);

  a.exc.resize(a.D);
  for (int i = 0; i < a.D; ++i) {
    const int k = i % 4;
    a.exc[i] = (k >> 1) + (k & 1);
  }
  return a;
}

double solve(const EmitterModel& m, double omega_F, double lambda, double eps) {
  const auto a = build(m, omega_F, lambda, eps);
  const int D = a.D, MM = D * D;
  // similarity scaling by eps^(excitations of ket + bra): forward couplings become O(1)
  std::vector<int> k(MM);
  for (int i = 0; i < D; ++i)
    for (int j = 0; j < D; ++j) k[i * D + j] = a.exc[i] + a.exc[j];
  Eigen::MatrixXcd A(MM + 1, MM);
  for (int p = 0; p < MM; ++p)
    for (int q = 0; q < MM; ++q)
      A(p, q) = a.L(p, q) == cplx(0.0) ? cplx(0.0) : a.L(p, q) * std::pow(eps, k[q] - k[p]);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(MM + 1);
  for (int q = 0; q < MM; ++q) A(MM, q) = 0.0;
  for (int i = 0; i < D; ++i) A(MM, i * D + i) = std::pow(eps, k[i * D + i]);
  rhs(MM) = 1.0;
  const Eigen::VectorXcd x = A.colPivHouseholderQr().solve(rhs);

  double T = 0.0, B1 = 0.0, B2 = 0.0, AA = 0.0;
  for (int i = 0; i < D; ++i) {
    const double v = x(i * D + i).real();
    const int s = i % 4;
    T += std::pow(eps, k[i * D + i]) * v;
    if (s == 2) B1 += v;
    if (s == 1) B2 += v;
    if (s == 3) AA += v;
  }
  const double e2 = eps * eps;
  const double den = (B1 + e2 * AA) * (B2 + e2 * AA);
  if (!(den > 0.0)) throw ZeroIntensity("g2_sensor_oracle: sensor occupation vanishes");
  return AA * T / den;
}

}  // namespace

SensorResult g2_sensor_oracle(const EmitterModel& model, double omega_F, double lambda, double epsilon) {
  model.validate();
  if (!(lambda > 0.0)) throw InvalidArgument("g2_sensor_oracle: lambda must be positive");
  if (!(epsilon > 0.0)) {
    double rmin = INFINITY;
    for (const auto& c : model.channels)
      if (c.rate > 0.0) rmin = std::min(rmin, c.rate);
    if (!std::isfinite(rmin)) rmin = lambda;
    epsilon = 1e-3 * rmin;
  }
  SensorResult r;
  r.epsilon = epsilon;
  r.g2 = solve(model, omega_F, lambda, epsilon);
  r.g2_half_epsilon = solve(model, omega_F, lambda, 0.5 * epsilon);
  r.converged = std::abs(r.g2 - r.g2_half_epsilon) <= 1e-3 * std::abs(r.g2);
  return r;
}

}  // namespace filterstat
