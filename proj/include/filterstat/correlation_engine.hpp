#pragma once

#include <array>
#include <memory>
#include <utility>
#include <vector>

#include "filterstat/emitter_models.hpp"
#include "filterstat/filter_kernels.hpp"
#include "filterstat/liouvillian_spectral.hpp"

namespace filterstat {

struct QCoefficients {
  Eigen::VectorXcd q;         // Tr(E+ [E- rho](Omega_j))
  Eigen::VectorXcd q_mirror;  // Tr(E- [rho E+](Omega_j)), the anti-ordered region
  cplx sum() const { return q.sum(); }
};

QCoefficients q_coeffs(const LiouvillianSpectrum& spec, const CMatrix& em, const CMatrix& ep,
                       const CMatrix& rho);

/// Dense M^3 tensor, data[(j3*M + j2)*M + j1].
struct ThetaTensor {
  Region k = Region::i;
  bool mirror = false;
  Eigen::Index M = 0;
  std::vector<cplx> data;
  cplx operator()(Eigen::Index j1, Eigen::Index j2, Eigen::Index j3) const {
    return data[(j3 * M + j2) * M + j1];
  }
  cplx sum() const;
};

/// Trace tensor of region k. With mirror = true the anti-ordered partner region
/// (E+ and E- roles exchanged) is returned instead.
ThetaTensor theta_tensor(const LiouvillianSpectrum& spec, const CMatrix& em, const CMatrix& ep,
                         const CMatrix& rho, Region k, bool mirror = false);

/// Entries of one region above the pruning threshold, with the matching mirror
/// entry at the conjugate index triple.
struct PrunedTheta {
  std::vector<std::array<int, 3>> idx;
  std::vector<cplx> value;
  std::vector<cplx> mirror;
  size_t full_size = 0;
};

PrunedTheta prune(const ThetaTensor& t, const ThetaTensor& mirror,
                  const std::vector<Eigen::Index>& conjugate, double rel = 1e-14);

struct AnalysisOptions {
  DecomposeOptions decompose{};
  double prune_rel = 1e-14;
};

/// Everything about one emitter that does not depend on the filter. Shared
/// read-only between workers (the kernel cache is internally synchronized).
struct EmitterAnalysis {
  EmitterModel model;
  LiouvillianSpectrum spec;
  CMatrix rho, em, ep;
  QCoefficients q;
  std::array<PrunedTheta, 3> theta;
  double n1 = 0.0;  // <E+ E->
  double n2 = 0.0;  // <E+ E+ E- E->
  mutable KernelCache cache;
};

std::shared_ptr<const EmitterAnalysis> analyze(const EmitterModel& model,
                                               const AnalysisOptions& opt = {});

struct IntensityResult {
  double value = 0.0;
  double imag_residual = 0.0;
};

IntensityResult filtered_intensity(const LiouvillianSpectrum& spec, const FilterSpec& filter,
                                   const QCoefficients& q, const KernelOptions& opt = {});

std::vector<std::pair<double, double>> emission_spectrum(const LiouvillianSpectrum& spec,
                                                         const QCoefficients& q,
                                                         const std::vector<double>& omega_grid,
                                                         double probe_lambda);

struct NumeratorSum {
  cplx direct;        // sum_k sum Z_k Theta_k over the three ordered regions
  cplx total;         // direct + explicitly evaluated mirror regions
  double kernel_error = 0.0;
  size_t evaluations = 0;
};

NumeratorSum numerator_serial(const EmitterAnalysis& a, const FilterSpec& f,
                              const KernelOptions& opt = {});
/// Same sum with kernel evaluations spread over OpenMP threads; the final
/// reduction runs in index order so results do not depend on the thread count.
NumeratorSum numerator_parallel(const EmitterAnalysis& a, const FilterSpec& f,
                                const KernelOptions& opt = {});

struct G2Options {
  KernelOptions kernel{};
  bool parallel = true;
};

struct G2Result {
  double intensity = 0.0;
  double numerator = 0.0;
  double g2 = 0.0;
  double imag_residual = 0.0;            // numerator
  double intensity_imag_residual = 0.0;
  double kernel_error = 0.0;
  size_t kernel_evaluations = 0;
};

G2Result g2_zero(const EmitterAnalysis& a, const FilterSpec& f, const G2Options& opt = {});
G2Result g2_zero(const EmitterModel& model, const FilterSpec& f, const G2Options& opt = {});

double g2_unfiltered(const EmitterAnalysis& a);
double g2_unfiltered(const EmitterModel& model);

struct SensorResult {
  double g2 = 0.0;
  double g2_half_epsilon = 0.0;
  double epsilon = 0.0;
  bool converged = true;  // false: halving epsilon moved g2 by more than 1e-3
};

/// Two weakly coupled two-level sensors at omega_F with linewidth 2*lambda.
/// epsilon <= 0 picks 1e-3 * (smallest nonzero model rate).
SensorResult g2_sensor_oracle(const EmitterModel& model, double omega_F, double lambda,
                              double epsilon = 0.0);

}  // namespace filterstat
