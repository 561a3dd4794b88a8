#include "filterstat/correlation_engine.hpp"

#include <algorithm>
#include <cmath>

#include "filterstat/errors.hpp"

namespace filterstat {
namespace {

struct ThetaFactors {
  Eigen::MatrixXcd AL, AR;    // E- from the left / E+ from the right, in the eigenbasis
  Eigen::VectorXcd t, tm;     // Tr(E+ v_j), Tr(E- v_j)
  Eigen::VectorXcd c1, d1;    // coefficients of rho E+ and E- rho
};

ThetaFactors factors(const LiouvillianSpectrum& spec, const CMatrix& em, const CMatrix& ep,
                     const CMatrix& rho) {
  const auto n = em.rows();
  if (spec.dim != n * n || ep.rows() != n || rho.rows() != n)
    throw DimensionError("correlation: operator dimensions do not match the spectrum");
  const CMatrix I = CMatrix::Identity(n, n);
  const Eigen::MatrixXcd Ut = spec.norms.cwiseInverse().asDiagonal() * spec.left_vectors;
  const auto& V = spec.right_vectors;
  ThetaFactors f;
  f.AL = Ut * left_right_superop(em, I) * V;
  f.AR = Ut * left_right_superop(I, ep) * V;
  // Tr(X v) = vec(X^T) . v
  f.t = (vec(ep.transpose()).transpose() * V).transpose();
  f.tm = (vec(em.transpose()).transpose() * V).transpose();
  f.c1 = Ut * vec(rho * ep);
  f.d1 = Ut * vec(em * rho);
  return f;
}

cplx cached_z(const EmitterAnalysis& a, const FilterSpec& f, Region k, const std::array<int, 3>& j,
              const KernelOptions& opt, double& err) {
  const KernelCache::Key key{f.kind, f.omega_F, f.lambda, static_cast<int>(k), j[0], j[1], j[2]};
  if (auto v = a.cache.find(key)) {
    err = 0.0;
    return *v;
  }
  const auto& ev = a.spec.eigenvalues;
  const auto kv = z_kernel(f, k, {ev(j[0]), ev(j[1]), ev(j[2])}, opt);
  err = kv.error_estimate;
  a.cache.insert(key, kv.value);
  return kv.value;
}

struct Job {
  int region;
  size_t entry;
};

std::vector<Job> jobs_of(const EmitterAnalysis& a) {
  std::vector<Job> jobs;
  for (int r = 0; r < 3; ++r)
    for (size_t e = 0; e < a.theta[r].idx.size(); ++e) jobs.push_back({r, e});
  return jobs;
}

NumeratorSum reduce(const EmitterAnalysis& a, const std::vector<Job>& jobs,
                    const std::vector<cplx>& z, const std::vector<double>& err) {
  NumeratorSum s;
  cplx direct = 0.0, mirror = 0.0;
  for (size_t n = 0; n < jobs.size(); ++n) {
    const auto& th = a.theta[jobs[n].region];
    direct += z[n] * th.value[jobs[n].entry];
    mirror += std::conj(z[n]) * th.mirror[jobs[n].entry];
    s.kernel_error += err[n] * std::abs(th.value[jobs[n].entry]);
  }
  s.direct = direct;
  s.total = direct + mirror;
  s.evaluations = jobs.size();
  return s;
}

}  // namespace

QCoefficients q_coeffs(const LiouvillianSpectrum& spec, const CMatrix& em, const CMatrix& ep,
                       const CMatrix& rho) {
  const auto f = factors(spec, em, ep, rho);
  return {f.t.cwiseProduct(f.d1), f.tm.cwiseProduct(f.c1)};
}

cplx ThetaTensor::sum() const {
  cplx s = 0.0;
  for (const auto& v : data) s += v;
  return s;
}

ThetaTensor theta_tensor(const LiouvillianSpectrum& spec, const CMatrix& em, const CMatrix& ep,
                         const CMatrix& rho, Region k, bool mirror) {
  const auto f = factors(spec, em, ep, rho);
  const Eigen::MatrixXcd* X = nullptr;
  const Eigen::MatrixXcd* Y = nullptr;
  const Eigen::VectorXcd* first = nullptr;
  const Eigen::VectorXcd* last = mirror ? &f.tm : &f.t;
  // Theta[j1,j2,j3] = last[j3] X[j3,j2] Y[j2,j1] first[j1]
  switch (k) {
    case Region::i:
      if (!mirror) { X = &f.AL; Y = &f.AL; first = &f.c1; }
      else { X = &f.AR; Y = &f.AR; first = &f.d1; }
      break;
    case Region::ii:
      if (!mirror) { X = &f.AL; Y = &f.AR; first = &f.d1; }
      else { X = &f.AR; Y = &f.AL; first = &f.c1; }
      break;
    case Region::iii:
      if (!mirror) { X = &f.AR; Y = &f.AL; first = &f.d1; }
      else { X = &f.AL; Y = &f.AR; first = &f.c1; }
      break;
  }
  ThetaTensor t;
  t.k = k;
  t.mirror = mirror;
  t.M = spec.dim;
  const auto M = t.M;
  t.data.assign(static_cast<size_t>(M * M * M), 0.0);
  for (Eigen::Index j3 = 0; j3 < M; ++j3) {
    const cplx w3 = (*last)(j3);
    if (w3 == cplx(0.0)) continue;
    for (Eigen::Index j2 = 0; j2 < M; ++j2) {
      const cplx w32 = w3 * (*X)(j3, j2);
      if (w32 == cplx(0.0)) continue;
      for (Eigen::Index j1 = 0; j1 < M; ++j1)
        t.data[(j3 * M + j2) * M + j1] = w32 * (*Y)(j2, j1) * (*first)(j1);
    }
  }
  return t;
}

PrunedTheta prune(const ThetaTensor& t, const ThetaTensor& mirror,
                  const std::vector<Eigen::Index>& conjugate, double rel) {
  PrunedTheta p;
  p.full_size = t.data.size();
  double mx = 0.0;
  for (const auto& v : t.data) mx = std::max(mx, std::abs(v));
  for (const auto& v : mirror.data) mx = std::max(mx, std::abs(v));
  const double thr = rel * mx;
  const auto M = t.M;
  // within a degenerate eigenspace the conjugate pairing is only fixed up to a basis
  // change, so an entry can vanish by selection rule while its partner does not
  for (Eigen::Index j3 = 0; j3 < M; ++j3)
    for (Eigen::Index j2 = 0; j2 < M; ++j2)
      for (Eigen::Index j1 = 0; j1 < M; ++j1) {
        const cplx v = t(j1, j2, j3);
        const cplx m = mirror(conjugate[j1], conjugate[j2], conjugate[j3]);
        if (!(std::abs(v) > thr) && !(std::abs(m) > thr)) continue;
        p.idx.push_back({static_cast<int>(j1), static_cast<int>(j2), static_cast<int>(j3)});
        p.value.push_back(v);
        p.mirror.push_back(m);
      }
  return p;
}

std::shared_ptr<const EmitterAnalysis> analyze(const EmitterModel& model, const AnalysisOptions& opt) {
  auto a = std::make_shared<EmitterAnalysis>();
  a->model = model;
  a->spec = decompose(assemble(model), opt.decompose);
  a->rho = steady_state(a->spec);
  a->em = model.emission_minus;
  a->ep = model.emission_plus();
  a->q = q_coeffs(a->spec, a->em, a->ep, a->rho);
  for (Region k : kRegions) {
    const auto t = theta_tensor(a->spec, a->em, a->ep, a->rho, k, false);
    const auto m = theta_tensor(a->spec, a->em, a->ep, a->rho, k, true);
    a->theta[static_cast<int>(k)] = prune(t, m, a->spec.conjugate, opt.prune_rel);
  }
  a->n1 = (a->ep * a->em * a->rho).trace().real();
  a->n2 = (a->ep * a->ep * a->em * a->em * a->rho).trace().real();
  return a;
}

IntensityResult filtered_intensity(const LiouvillianSpectrum& spec, const FilterSpec& filter,
                                   const QCoefficients& q, const KernelOptions& opt) {
  const auto M = spec.dim;
  std::vector<cplx> s(M);
  for (Eigen::Index j = 0; j < M; ++j) s[j] = s_kernel(filter, spec.eigenvalues(j), opt).value;
  cplx direct = 0.0, mirror = 0.0;
  double scale = 0.0;
  for (Eigen::Index j = 0; j < M; ++j) {
    direct += s[j] * q.q(j);
    mirror += std::conj(s[spec.conjugate[j]]) * q.q_mirror(j);
    scale += std::abs(s[j] * q.q(j));
  }
  const cplx total = direct + mirror;
  IntensityResult r;
  r.value = 2.0 * direct.real();
  r.imag_residual = std::abs(total) > 0.0 ? std::abs(total.imag()) / std::abs(total) : 0.0;
  if (r.value < 0.0) {
    if (r.value < -1e-10 * scale)
      throw NegativeIntensity("filtered_intensity: negative intensity " + std::to_string(r.value));
    r.value = 0.0;
  }
  return r;
}

std::vector<std::pair<double, double>> emission_spectrum(const LiouvillianSpectrum& spec,
                                                         const QCoefficients& q,
                                                         const std::vector<double>& omega_grid,
                                                         double probe_lambda) {
  if (!(probe_lambda > 0.0)) throw InvalidArgument("emission_spectrum: probe_lambda must be positive");
  std::vector<std::pair<double, double>> out(omega_grid.size());
#pragma omp parallel for schedule(static)
  for (size_t i = 0; i < omega_grid.size(); ++i) {
    const FilterSpec f{FilterKind::Lorentzian, omega_grid[i], probe_lambda};
    out[i] = {omega_grid[i], filtered_intensity(spec, f, q).value};
  }
  return out;
}

NumeratorSum numerator_serial(const EmitterAnalysis& a, const FilterSpec& f, const KernelOptions& opt) {
  const auto jobs = jobs_of(a);
  std::vector<cplx> z(jobs.size());
  std::vector<double> err(jobs.size());
  for (size_t n = 0; n < jobs.size(); ++n) {
    const auto& th = a.theta[jobs[n].region];
    z[n] = cached_z(a, f, static_cast<Region>(jobs[n].region), th.idx[jobs[n].entry], opt, err[n]);
  }
  return reduce(a, jobs, z, err);
}

NumeratorSum numerator_parallel(const EmitterAnalysis& a, const FilterSpec& f,
                                const KernelOptions& opt) {
  const auto jobs = jobs_of(a);
  std::vector<cplx> z(jobs.size());
  std::vector<double> err(jobs.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
  for (size_t n = 0; n < jobs.size(); ++n) {
    try {
      const auto& th = a.theta[jobs[n].region];
      z[n] = cached_z(a, f, static_cast<Region>(jobs[n].region), th.idx[jobs[n].entry], opt, err[n]);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return reduce(a, jobs, z, err);
}

G2Result g2_zero(const EmitterAnalysis& a, const FilterSpec& f, const G2Options& opt) {
  f.validate();
  G2Result r;
  const auto I = filtered_intensity(a.spec, f, a.q, opt.kernel);
  r.intensity = I.value;
  r.intensity_imag_residual = I.imag_residual;
  if (!(r.intensity > 1e-300) || r.intensity <= 1e-14 * a.q.q.cwiseAbs().sum())
    throw ZeroIntensity("g2_zero: filtered intensity vanishes");
  const auto s = opt.parallel ? numerator_parallel(a, f, opt.kernel) : numerator_serial(a, f, opt.kernel);
  r.numerator = 2.0 * s.direct.real();
  r.imag_residual = std::abs(s.total) > 0.0 ? std::abs(s.total.imag()) / std::abs(s.total) : 0.0;
  r.kernel_error = 2.0 * s.kernel_error;
  r.kernel_evaluations = s.evaluations;
  double scale = 0.0;
  for (const auto& th : a.theta)
    for (const auto& v : th.value) scale += std::abs(v);
  if (r.numerator < -1e-9 * scale)
    throw NegativeIntensity("g2_zero: negative numerator " + std::to_string(r.numerator));
  r.g2 = std::max(0.0, r.numerator) / (r.intensity * r.intensity);
  return r;
}

G2Result g2_zero(const EmitterModel& model, const FilterSpec& f, const G2Options& opt) {
  return g2_zero(*analyze(model), f, opt);
}

double g2_unfiltered(const EmitterAnalysis& a) {
  if (!(a.n1 > 1e-300)) throw ZeroIntensity("g2_unfiltered: emission vanishes");
  return std::max(0.0, a.n2) / (a.n1 * a.n1);
}

double g2_unfiltered(const EmitterModel& model) {
  const auto spec = decompose(assemble(model));
  const CMatrix rho = steady_state(spec);
  const CMatrix em = model.emission_minus, ep = model.emission_plus();
  const double n1 = (ep * em * rho).trace().real();
  const double n2 = (ep * ep * em * em * rho).trace().real();
  if (!(n1 > 1e-300)) throw ZeroIntensity("g2_unfiltered: emission vanishes");
  return std::max(0.0, n2) / (n1 * n1);
}

}  // namespace filterstat
