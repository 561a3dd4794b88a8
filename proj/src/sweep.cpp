#include "filterstat/sweep.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <boost/version.hpp>

#include "filterstat/errors.hpp"

namespace filterstat {
namespace {

constexpr const char* kVersion = "0.1.0";

double vertex(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double d = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
  if (d == 0.0) return NAN;
  return x1 - 0.5 * ((x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0)) / d;
}

double parabola_at(double x0, double y0, double x1, double y1, double x2, double y2, double x) {
  return y0 * (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2)) +
         y1 * (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2)) +
         y2 * (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
}

size_t argmin(const std::vector<double>& y, bool first_local) {
  if (first_local)
    for (size_t k = 1; k + 1 < y.size(); ++k)
      if (y[k] <= y[k - 1] && y[k] < y[k + 1]) return k;
  size_t i = 0;
  for (size_t k = 1; k < y.size(); ++k)
    if (y[k] < y[i]) i = k;
  return i;
}

}  // namespace

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

MinimumResult find_minimum(const std::vector<double>& x, const std::vector<double>& y, bool log_axis,
                           bool first_local) {
  if (x.size() != y.size() || x.size() < 3) throw InvalidArgument("find_minimum: need >= 3 rows");
  const size_t i = argmin(y, first_local);
  if (i == 0 || i + 1 == y.size()) return {x[i], y[i], true};
  auto u = [&](double v) { return log_axis ? std::log(v) : v; };
  const double u0 = u(x[i - 1]), u1 = u(x[i]), u2 = u(x[i + 1]);
  const double uv = vertex(u0, y[i - 1], u1, y[i], u2, y[i + 1]);
  if (!std::isfinite(uv) || uv <= u0 || uv >= u2) return {x[i], y[i], false};
  const double yv = std::min(y[i], parabola_at(u0, y[i - 1], u1, y[i], u2, y[i + 1], uv));
  return {log_axis ? std::exp(uv) : uv, yv, false};
}

PointEvaluator::PointEvaluator(const RunConfig& cfg) : cfg_(cfg) {}

size_t PointEvaluator::pump_count() const {
  return cfg_.model == "qd" && !cfg_.pump_ratios.empty() ? cfg_.pump_ratios.size() : 1;
}

double PointEvaluator::omega_F(double v) const {
  if (cfg_.axis == SweepAxis::OmegaF) return v;
  if (cfg_.omega_F_line == "XX") return -(cfg_.axis == SweepAxis::Chi ? v : cfg_.qd.chi);
  if (cfg_.omega_F_line == "X") return 0.0;
  return cfg_.omega_F;
}

EmitterModel PointEvaluator::model(double v, size_t pump_index) const {
  if (cfg_.model == "rf") {
    RFParams p = cfg_.rf;
    if (cfg_.axis == SweepAxis::RabiRatio) p.gamma_sp = 2.0 * p.omega_R / v;
    return resonance_fluorescence(p);
  }
  QDParams p = cfg_.qd;
  if (cfg_.axis == SweepAxis::Chi) p.chi = v;
  if (!cfg_.pump_ratios.empty()) p.pump_P = cfg_.pump_ratios.at(pump_index) * p.gamma_sp;
  return neutral_qd(p);
}

std::shared_ptr<const EmitterAnalysis> PointEvaluator::analysis(double v, size_t pump_index) const {
  {
    std::lock_guard lock(mutex_);
    auto it = cache_.find({v, pump_index});
    if (it != cache_.end()) return it->second;
  }
  AnalysisOptions opt;
  opt.prune_rel = cfg_.prune_rel;
  auto a = analyze(model(v, pump_index), opt);
  std::lock_guard lock(mutex_);
  return cache_.emplace(std::make_pair(v, pump_index), a).first->second;
}

double PointEvaluator::extrapolate(const std::vector<double>& g) const {
  if (g.size() == 1) return g[0];
  // Lagrange polynomial through (P_i, g_i) evaluated at P = 0
  const auto& r = cfg_.pump_ratios;
  double s = 0.0;
  for (size_t i = 0; i < g.size(); ++i) {
    double w = 1.0;
    for (size_t j = 0; j < g.size(); ++j)
      if (j != i) w *= r[j] / (r[j] - r[i]);
    s += w * g[i];
  }
  return s;
}

PointResult PointEvaluator::g2(double v, FilterKind kind, double lambda) const {
  const FilterSpec f{kind, omega_F(v), lambda};
  G2Options opt;
  opt.kernel = cfg_.kernel;
  std::vector<double> g;
  PointResult out;
  for (size_t p = 0; p < pump_count(); ++p) {
    const auto r = g2_zero(*analysis(v, p), f, opt);
    g.push_back(r.g2);
    out.imag_residual = std::max({out.imag_residual, r.imag_residual, r.intensity_imag_residual});
    out.kernel_error = std::max(out.kernel_error, r.kernel_error / (r.intensity * r.intensity));
    if (p == pump_count() - 1) out.intensity = r.intensity;
  }
  out.g2 = extrapolate(g);
  return out;
}

SensorResult PointEvaluator::sensor(double v, double lambda) const {
  std::vector<double> g, gh;
  SensorResult out;
  for (size_t p = 0; p < pump_count(); ++p) {
    const auto r = g2_sensor_oracle(model(v, p), omega_F(v), lambda);
    g.push_back(r.g2);
    gh.push_back(r.g2_half_epsilon);
    out.epsilon = r.epsilon;
  }
  out.g2 = extrapolate(g);
  out.g2_half_epsilon = extrapolate(gh);
  out.converged = std::abs(out.g2 - out.g2_half_epsilon) <= 1e-3 * std::abs(out.g2);
  return out;
}

namespace {

// parabolic refinement around the grid minimum of (xs, ys)
MinimumResult refine_minimum(const PointEvaluator& ev, double v, FilterKind kind, const std::vector<double>& xs,
                             const std::vector<double>& ys, bool log_axis, int steps, bool first_local) {
  MinimumResult m = find_minimum(xs, ys, log_axis, first_local);
  if (m.boundary || steps <= 0) return m;

  auto u = [&](double x) { return log_axis ? std::log(x) : x; };
  auto x_of = [&](double uu) { return log_axis ? std::exp(uu) : uu; };
  const size_t i = argmin(ys, first_local);
  double a = u(xs[i - 1]), b = u(xs[i]), c = u(xs[i + 1]);
  double fa = ys[i - 1], fb = ys[i], fc = ys[i + 1];
  MinimumResult best{xs[i], ys[i], false};
  for (int s = 0; s < steps; ++s) {
    double w = vertex(a, fa, b, fb, c, fc);
    if (!std::isfinite(w) || w <= a || w >= c) break;
    if (std::abs(w - b) < 1e-6 * (c - a)) w = b + ((c - b > b - a) ? 0.25 * (c - b) : -0.25 * (b - a));
    const double fw = ev.g2(v, kind, x_of(w)).g2;
    if (fw < best.y) best = {x_of(w), fw, false};
    if (w < b) {
      if (fw < fb) { c = b; fc = fb; b = w; fb = fw; }
      else { a = w; fa = fw; }
    } else {
      if (fw < fb) { a = b; fa = fb; b = w; fb = fw; }
      else { c = w; fc = fw; }
    }
  }
  return best;
}

}  // namespace

MinimumResult minimize_lambda(const PointEvaluator& ev, double v, FilterKind kind, const GridSpec& grid,
                              int steps, std::vector<double>* grid_g2, bool first_local) {
  const auto xs = grid.values();
  std::vector<double> ys(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) ys[i] = ev.g2(v, kind, xs[i]).g2;
  if (grid_g2) *grid_g2 = ys;
  return refine_minimum(ev, v, kind, xs, ys, grid.log, steps, first_local);
}

SweepResult run(const RunConfig& cfg) {
  SweepResult res;
  PointEvaluator ev(cfg);
  const auto values = cfg.sweep.values();
  const auto nf = cfg.filters.size();
  res.rows.resize(values.size() * nf);
  // build the analyses up front so the parallel section only reads them
  for (double v : values)
    for (size_t p = 0; p < ev.pump_count(); ++p) {
      try {
        ev.analysis(v, p);
      } catch (const std::exception&) {
        // reported per row below
      }
    }

#pragma omp parallel for schedule(dynamic, 1)
  for (size_t t = 0; t < res.rows.size(); ++t) {
    const size_t iv = t / nf, ifl = t % nf;
    SweepRow& row = res.rows[t];
    row.value = values[iv];
    row.kind = cfg.filters[ifl];
    row.omega_F = ev.omega_F(row.value);
    try {
      if (cfg.axis == SweepAxis::Lambda) {
        row.lambda = row.value;
      } else if (cfg.optimize_lambda) {
        const auto m = minimize_lambda(ev, row.value, row.kind, cfg.lambda_grid, cfg.refine_steps, nullptr,
                                       cfg.first_local_minimum);
        row.lambda = m.x;
        row.boundary = m.boundary;
      } else {
        row.lambda = cfg.lambda;
      }
      const auto r = ev.g2(row.value, row.kind, row.lambda);
      row.g2 = r.g2;
      row.intensity = r.intensity;
      row.imag_residual = r.imag_residual;
      row.kernel_error = r.kernel_error;
      if (r.imag_residual > 1e-6) row.status = "failed: imaginary residual " + fmt(r.imag_residual);
    } catch (const std::exception& e) {
      row.status = std::string("failed: ") + e.what();
    }
  }
  for (auto& row : res.rows) {
    std::replace(row.status.begin(), row.status.end(), ',', ';');
    std::replace(row.status.begin(), row.status.end(), '\n', ' ');
    if (row.status != "ok") ++res.failed;
  }

  for (size_t ifl = 0; ifl < nf; ++ifl) {
    std::vector<double> x, y;
    for (size_t iv = 0; iv < values.size(); ++iv) {
      const auto& row = res.rows[iv * nf + ifl];
      if (row.status == "ok") {
        x.push_back(row.value);
        y.push_back(row.g2);
      }
    }
    if (x.size() < 3) continue;
    const bool lam = cfg.axis == SweepAxis::Lambda;
    MinimumResult m = find_minimum(x, y, cfg.sweep.log, cfg.first_local_minimum && lam);
    if (lam && cfg.refine_steps > 0) {
      try {
        m = refine_minimum(ev, values.front(), cfg.filters[ifl], x, y, cfg.sweep.log, cfg.refine_steps,
                           cfg.first_local_minimum);
      } catch (const std::exception&) {
        // keep the grid minimum
      }
    }
    res.minima.push_back({cfg.filters[ifl], m});
  }

  if (cfg.spectrum) {
    const auto a = ev.analysis(values.front(), 0);
    res.spectrum = emission_spectrum(a->spec, a->q, cfg.spectrum_grid.values(), cfg.probe_lambda);
  }

  if (cfg.oracle == "sensor") {
    res.oracle_header = "sweep_value,lambda,g2,g2_sensor,rel_diff,converged";
    for (size_t t = 0; t < res.rows.size(); ++t) {
      const auto& row = res.rows[t];
      if (row.kind != FilterKind::Lorentzian || row.status != "ok") continue;
      try {
        const auto s = ev.sensor(row.value, row.lambda);
        res.oracle.push_back({fmt(row.value) + "," + fmt(row.lambda) + "," + fmt(row.g2) + "," + fmt(s.g2) +
                              "," + fmt(std::abs(row.g2 - s.g2) / row.g2) + "," +
                              (s.converged ? "true" : "false")});
      } catch (const std::exception& e) {
        res.oracle.push_back({fmt(row.value) + "," + fmt(row.lambda) + "," + fmt(row.g2) + ",nan,nan,false"});
      }
    }
  } else if (cfg.oracle == "kernel") {
    res.oracle_header = "filter_kind,region,j1,j2,j3,closed_re,closed_im,numeric_re,numeric_im,rel_diff,numeric_error";
    const double v = values.front();
    const auto a = ev.analysis(v, 0);
    for (FilterKind kind : cfg.filters) {
      const double lam = cfg.axis == SweepAxis::Lambda ? v : cfg.lambda;
      const FilterSpec f{kind, ev.omega_F(v), lam};
      for (Region k : kRegions) {
        const auto& th = a->theta[static_cast<int>(k)];
        std::vector<size_t> order(th.idx.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](size_t p, size_t q) { return std::abs(th.value[p]) > std::abs(th.value[q]); });
        for (size_t n = 0; n < std::min<size_t>(3, order.size()); ++n) {
          const auto& j = th.idx[order[n]];
          const auto& e = a->spec.eigenvalues;
          const OmegaTriple om{e(j[0]), e(j[1]), e(j[2])};
          const auto zc = z_kernel(f, k, om, cfg.kernel);
          const auto zn = z_kernel_numeric(f, k, om);
          res.oracle.push_back({to_string(kind) + "," + to_string(k) + "," + std::to_string(j[0]) + "," +
                                std::to_string(j[1]) + "," + std::to_string(j[2]) + "," + fmt(zc.value.real()) +
                                "," + fmt(zc.value.imag()) + "," + fmt(zn.value.real()) + "," +
                                fmt(zn.value.imag()) + "," + fmt(std::abs(zc.value - zn.value) / std::abs(zn.value)) +
                                "," + fmt(zn.error_estimate)});
        }
      }
    }
  }
  return res;
}

SweepResult run_spectrum(const RunConfig& cfg) {
  if (!cfg.spectrum) throw ConfigError("spectrum: set \"spectrum\": true with a spectrum grid and probe_lambda");
  SweepResult res;
  PointEvaluator ev(cfg);
  const auto a = ev.analysis(cfg.sweep.values().front(), 0);
  res.spectrum = emission_spectrum(a->spec, a->q, cfg.spectrum_grid.values(), cfg.probe_lambda);
  return res;
}

void write_outputs(const RunConfig& cfg, const SweepResult& r, const std::string& dir, bool sweep_files) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream o(fs::path(dir) / "spectrum.csv");
    o << "omega,intensity\n";
    for (const auto& [w, I] : r.spectrum) o << fmt(w) << "," << fmt(I) << "\n";
  }
  if (sweep_files) {
    std::ofstream o(fs::path(dir) / "g2_sweep.csv");
    o << "sweep_axis,sweep_value,filter_kind,omega_F,lambda,g2,intensity,imag_residual,kernel_error,status\n";
    for (const auto& row : r.rows)
      o << to_string(cfg.axis) << "," << fmt(row.value) << "," << to_string(row.kind) << "," << fmt(row.omega_F)
        << "," << fmt(row.lambda) << "," << fmt(row.g2) << "," << fmt(row.intensity) << ","
        << fmt(row.imag_residual) << "," << fmt(row.kernel_error) << "," << row.status << "\n";

    auto round12 = [](double v) { return std::isfinite(v) ? std::stod(fmt(v)) : 0.0; };
    nlohmann::ordered_json m;
    m["sweep_axis"] = to_string(cfg.axis);
    m["filters"] = nlohmann::ordered_json::array();
    for (const auto& fm : r.minima)
      m["filters"].push_back({{"filter_kind", to_string(fm.kind)},
                              {"axis_opt", round12(fm.min.x)},
                              {"g2_min", round12(fm.min.y)},
                              {"boundary", fm.min.boundary}});
    if (cfg.optimize_lambda) {
      m["lambda_optimum"] = nlohmann::ordered_json::array();
      for (const auto& row : r.rows)
        m["lambda_optimum"].push_back({{"sweep_value", round12(row.value)},
                                       {"filter_kind", to_string(row.kind)},
                                       {"lambda_opt", round12(row.lambda)},
                                       {"g2_min", round12(row.g2)},
                                       {"boundary", row.boundary},
                                       {"status", row.status}});
    }
    std::ofstream(fs::path(dir) / "minima.json") << m.dump(2) << "\n";
    if (!r.oracle.empty()) {
      std::ofstream o(fs::path(dir) / "oracle.csv");
      o << r.oracle_header << "\n";
      for (const auto& line : r.oracle) o << line.text << "\n";
    }
  }
  nlohmann::ordered_json man;
  man["tool"] = "filterstat";
  man["version"] = kVersion;
  man["config"] = cfg.raw;
  man["libraries"] = {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                    "." + std::to_string(EIGEN_MINOR_VERSION)},
                      {"boost", BOOST_LIB_VERSION},
                      {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                            std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                            std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
#ifdef __VERSION__
  man["compiler"] = __VERSION__;
#endif
  man["seeds"] = nlohmann::ordered_json::array();  // no stochastic steps
  man["outputs"] = sweep_files ? nlohmann::ordered_json{"spectrum.csv", "g2_sweep.csv", "minima.json"}
                               : nlohmann::ordered_json{"spectrum.csv"};
  std::ofstream(fs::path(dir) / "run_manifest.json") << man.dump(2) << "\n";
}

}  // namespace filterstat
