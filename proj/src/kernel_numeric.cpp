#include <array>
#include <cmath>

#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "filterstat/errors.hpp"
#include "filterstat/filter_kernels.hpp"
#include "filterstat/quadrature.hpp"

namespace filterstat {
namespace {

namespace ode = boost::numeric::odeint;
using State = std::array<double, 8>;

// Ordered integral  int_{t0<x1<...<x_{n+1}<t1} prod g_i(x_i) exp(sum Om_i (x_{i+1}-x_i))
// as the cascade h_1' = Om_1 h_1 + g_0, h_{i+1}' = Om_{i+1} h_{i+1} + g_i h_i, out' = g_n h_n.
struct Cascade {
  FilterSpec f;
  int n;                       // number of decays (1 or 3)
  std::array<bool, 4> conj;    // which factors are f* (ascending time)
  std::array<cplx, 3> om;

  void operator()(const State& x, State& dx, double t) const {
    const cplx fv = filter_time_response(f, t);
    cplx g[4];
    for (int i = 0; i <= n; ++i) g[i] = conj[i] ? std::conj(fv) : fv;
    cplx h[3];
    for (int i = 0; i < n; ++i) h[i] = {x[2 * i], x[2 * i + 1]};
    cplx d[4];
    d[0] = om[0] * h[0] + g[0];
    for (int i = 1; i < n; ++i) d[i] = om[i] * h[i] + g[i] * h[i - 1];
    d[n] = g[n] * h[n - 1];
    for (int i = 0; i < 4; ++i) {
      dx[2 * i] = i <= n ? d[i].real() : 0.0;
      dx[2 * i + 1] = i <= n ? d[i].imag() : 0.0;
    }
  }
};

cplx run(const Cascade& c, double t0, double t1, double rtol, double atol) {
  State x{};
  auto stepper = ode::make_controlled(atol, rtol, ode::runge_kutta_fehlberg78<State>());
  const size_t steps = ode::integrate_adaptive(stepper, c, x, t0, t1, 1e-3);
  if (steps > 50'000'000) throw QuadratureFailure("kernel_numeric: step budget exhausted");
  return {x[2 * c.n], x[2 * c.n + 1]};
}

// support of f in units of 1/lambda (lambda = 1 internally)
std::pair<double, double> window(FilterKind k, double w) {
  switch (k) {
    case FilterKind::Lorentzian: return {0.0, std::log(1e17)};
    case FilterKind::Gaussian: {
      const double T = std::sqrt(std::log(1e17));
      return {-T, T};
    }
    case FilterKind::Rectangular: return {-w, w};
  }
  return {0.0, 0.0};
}

KernelValue evaluate(Cascade c, double scale, const NumericOptions& opt) {
  const auto [t0, t1] = window(c.f.kind, opt.rect_window);
  const cplx v = scale * run(c, t0, t1, opt.rel_tol, opt.abs_tol);
  double err;
  if (c.f.kind == FilterKind::Rectangular) {
    const cplx half = scale * run(c, 0.5 * t0, 0.5 * t1, opt.rel_tol, opt.abs_tol);
    err = std::abs(v - half);
  } else {
    const cplx loose = scale * run(c, t0, t1, 100.0 * opt.rel_tol, 100.0 * opt.abs_tol);
    err = std::abs(v - loose);
  }
  return {v, err};
}

FilterSpec unit_filter(const FilterSpec& f) { return {f.kind, f.omega_F / f.lambda, 1.0}; }

// E1(w) for Re w >= 0: power series near the origin, continued fraction elsewhere
cplx expint_e1(cplx w) {
  if (std::abs(w) < 2.0) {
    cplx sum = 0.0, term = 1.0;
    for (int k = 1; k < 80; ++k) {
      term *= -w / static_cast<double>(k);
      const cplx c = term / static_cast<double>(k);
      sum += c;
      if (std::abs(c) < 1e-18 * std::abs(sum)) break;
    }
    return -std::numbers::egamma - std::log(w) - sum;
  }
  // modified Lentz on 1/(w+1-1/(w+3-4/(w+5-...)))
  const double tiny = 1e-300;
  cplx b = w + 1.0, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 10000; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-w);
}

// Rectangular s from its lag form: the filter autocorrelation is sin(u)/(pi u) (lambda = 1),
// so s = (1/pi) int_0^inf exp(z u) sin(u)/u du with z = Omega - i omega_F. The head is
// integrated numerically, the tail int_U^inf in closed form through E1.
KernelValue rect_s_lag(const FilterSpec& f, cplx omega, const NumericOptions& opt) {
  const cplx z = (omega - cplx(0.0, f.omega_F)) / f.lambda;
  const double U = 20.0;
  const double freq = std::max({1.0, std::abs(z.imag() + 1.0), std::abs(z.imag() - 1.0)});
  std::vector<double> pts;
  const int n = static_cast<int>(std::ceil(U * freq / 2.0));
  for (int i = 0; i <= n; ++i) pts.push_back(U * i / n);
  Quadrature q;
  q.rel_tol = opt.rel_tol;
  q.abs_tol = 1e-18;
  q.max_subdivisions = 100000;
  auto g = [&](double u) { return std::exp(z * u) * (u == 0.0 ? 1.0 : std::sin(u) / u); };
  const QuadResult head = integrate(g, pts, q);
  const cplx I(0.0, 1.0);
  const cplx tail = (expint_e1(-(z + I) * U) - expint_e1(-(z - I) * U)) / (2.0 * I);
  return {(head.value + tail) / std::numbers::pi, head.error / std::numbers::pi};
}

// Lorentzian and Gaussian s in lag form, s = int_0^T exp(Omega u) C(u) du with the
// autocorrelation C(u) = int f*(t) f(t+u) dt itself computed by quadrature. Unlike the
// ODE cascade this keeps its accuracy when many oscillations fit into the window.
KernelValue smooth_s_lag(const FilterSpec& f, cplx omega, const NumericOptions& opt) {
  const FilterSpec uf = unit_filter(f);
  const cplx z = omega / f.lambda;
  const auto [t0, t1] = window(uf.kind, opt.rect_window);
  const double T = t1 - t0;
  Quadrature inner;
  inner.rel_tol = 1e-13;
  inner.abs_tol = 1e-30;  // C(0) = O(1)
  auto C = [&](double u) {
    const double hi = t1 - u;
    if (!(hi > t0)) return cplx(0.0);
    return integrate([&](double t) { return std::conj(filter_time_response(uf, t)) * filter_time_response(uf, t + u); },
                     {t0, 0.5 * (t0 + hi), hi}, inner)
        .value;
  };
  const double freq = 1.0 + std::abs(z.imag() - uf.omega_F);
  std::vector<double> pts;
  const int n = static_cast<int>(std::ceil(T * freq / 2.0));
  for (int i = 0; i <= n; ++i) pts.push_back(T * i / n);
  Quadrature q;
  q.rel_tol = opt.rel_tol;
  q.abs_tol = 1e-24;  // kernels are O(1): s(0) = 1/2
  q.max_subdivisions = 100000;
  const QuadResult r = integrate([&](double u) { return std::exp(z * u) * C(u); }, pts, q);
  return {r.value, r.error};
}

}  // namespace

KernelValue s_kernel_numeric(const FilterSpec& f, cplx omega, const NumericOptions& opt) {
  f.validate();
  if (f.kind == FilterKind::Rectangular) return rect_s_lag(f, omega, opt);
  return smooth_s_lag(f, omega, opt);
}

KernelValue z_kernel_numeric(const FilterSpec& f, Region k, const OmegaTriple& om,
                             const NumericOptions& opt) {
  f.validate();
  Cascade c{unit_filter(f), 3, {}, {om[2] / f.lambda, om[1] / f.lambda, om[0] / f.lambda}};
  switch (k) {
    case Region::i: c.conj = {true, false, false, true}; break;
    case Region::ii: c.conj = {true, false, true, false}; break;
    case Region::iii: c.conj = {true, true, false, false}; break;
  }
  return evaluate(c, 4.0, opt);
}

}  // namespace filterstat
