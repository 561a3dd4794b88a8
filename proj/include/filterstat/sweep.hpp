#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "filterstat/correlation_engine.hpp"
#include "filterstat/run_config.hpp"

namespace filterstat {

struct MinimumResult {
  double x = 0.0;
  double y = 0.0;
  bool boundary = false;
};

/// Grid argmin refined by a 3-point parabola (in log x when log_axis); falls
/// back to the grid point, flagged boundary, when the argmin is an end point.
/// With first_local the lowest-x interior local minimum is used instead of the
/// global argmin (global when there is none).
MinimumResult find_minimum(const std::vector<double>& x, const std::vector<double>& y, bool log_axis,
                           bool first_local = false);

struct PointResult {
  double g2 = 0.0, intensity = 0.0, imag_residual = 0.0, kernel_error = 0.0;
};

/// Evaluates g2 for one (sweep value, filter, lambda), building and caching the
/// emitter analyses it needs. Pump extrapolation P -> 0 happens here.
class PointEvaluator {
 public:
  explicit PointEvaluator(const RunConfig& cfg);

  PointResult g2(double axis_value, FilterKind kind, double lambda) const;
  double omega_F(double axis_value) const;
  EmitterModel model(double axis_value, size_t pump_index = 0) const;
  std::shared_ptr<const EmitterAnalysis> analysis(double axis_value, size_t pump_index) const;
  size_t pump_count() const;
  /// Sensor-method g2 with the same pump extrapolation.
  SensorResult sensor(double axis_value, double lambda) const;

 private:
  const RunConfig& cfg_;
  mutable std::mutex mutex_;
  mutable std::map<std::pair<double, size_t>, std::shared_ptr<const EmitterAnalysis>> cache_;
  double extrapolate(const std::vector<double>& v) const;
};

/// Grid + parabola, then up to `steps` further evaluations by successive
/// parabolic interpolation in log(lambda). y_min never exceeds the grid minimum.
MinimumResult minimize_lambda(const PointEvaluator& ev, double axis_value, FilterKind kind,
                              const GridSpec& grid, int steps, std::vector<double>* grid_g2 = nullptr,
                              bool first_local = false);

struct SweepRow {
  double value = 0.0;
  FilterKind kind = FilterKind::Lorentzian;
  double omega_F = 0.0, lambda = 0.0;
  double g2 = NAN, intensity = NAN, imag_residual = NAN, kernel_error = NAN;
  std::string status = "ok";
  bool boundary = false;
};

struct FilterMinimum {
  FilterKind kind;
  MinimumResult min;
};

struct OracleRow {
  std::string text;  // one CSV line
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<FilterMinimum> minima;
  std::vector<std::pair<double, double>> spectrum;
  std::vector<OracleRow> oracle;
  std::string oracle_header;
  int failed = 0;
};

SweepResult run(const RunConfig& cfg);
SweepResult run_spectrum(const RunConfig& cfg);

/// 12 significant digits, scientific.
std::string fmt(double v);

void write_outputs(const RunConfig& cfg, const SweepResult& r, const std::string& dir, bool sweep_files);

}  // namespace filterstat
