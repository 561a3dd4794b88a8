#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "filterstat/emitter_models.hpp"
#include "filterstat/filter_kernels.hpp"

namespace filterstat {

struct GridSpec {
  double min = 0.0, max = 1.0;
  int points = 2;
  bool log = false;
  std::vector<double> values() const;
  void validate(const std::string& what) const;
};

enum class SweepAxis { Lambda, Chi, RabiRatio, OmegaF };
std::string to_string(SweepAxis a);

/// Flat JSON config; see README for the key schema.
struct RunConfig {
  std::string model = "rf";
  RFParams rf;
  QDParams qd;
  double tau_S_ns = 0.0;               // when > 0 overrides gamma_S_e/h (equal split)
  std::vector<double> pump_ratios;     // qd: P = r*gamma_sp; >1 entries -> P->0 extrapolation

  std::vector<FilterKind> filters;
  double omega_F = 0.0;                // relative to the X line (qd) or the drive (rf)
  std::string omega_F_line;            // "", "X" or "XX": centre tracks that line
  double lambda = 1.0;

  SweepAxis axis = SweepAxis::Lambda;
  GridSpec sweep;
  bool optimize_lambda = false;        // inner minimisation over lambda per sweep point
  GridSpec lambda_grid;
  int refine_steps = 0;                // extra parabolic evaluations around each minimum
  bool first_local_minimum = false;    // lambda minima: lowest-lambda interior local minimum

  bool spectrum = false;
  GridSpec spectrum_grid;
  double probe_lambda = 0.0;

  std::string oracle = "none";         // none | sensor | kernel
  std::string output = "out";
  int threads = 0;

  KernelOptions kernel;
  double prune_rel = 1e-14;

  nlohmann::json raw;                  // document as read
};

/// Throws ConfigError with line/column or key context.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace filterstat
