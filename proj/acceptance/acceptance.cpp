// Acceptance checks. Usage: acceptance [criterion...]; prints one PASS/FAIL line per
// criterion and exits nonzero if any failed.
#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "filterstat/correlation_engine.hpp"
#include "filterstat/errors.hpp"
#include "filterstat/sweep.hpp"

using namespace filterstat;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
};

std::string f3(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

const std::vector<FilterKind> kAll{FilterKind::Lorentzian, FilterKind::Gaussian, FilterKind::Rectangular};

RunConfig config(const std::string& name) {
  return load_config((fs::path(FILTERSTAT_SOURCE_DIR) / "configs" / name).string());
}

const SweepRow& row_of(const SweepResult& r, const RunConfig& c, size_t iv, FilterKind k) {
  const size_t nf = c.filters.size();
  const size_t ifl = std::find(c.filters.begin(), c.filters.end(), k) - c.filters.begin();
  return r.rows[iv * nf + ifl];
}

MinimumResult min_of(const SweepResult& r, FilterKind k) {
  for (const auto& m : r.minima)
    if (m.kind == k) return m.min;
  throw std::runtime_error("no minimum for " + to_string(k));
}

QDParams pumped_qd(double chi) {
  QDParams p = QDParams::with_spin_flip_time(chi, 0.67, 20.0, 10.0, 0.0);
  p.pump_P = 0.1 * p.gamma_sp;
  return p;
}

// 1: Lorentzian closed form against the sensor method
Outcome criterion1() {
  Outcome o;
  const auto m = resonance_fluorescence({1.0, 0.3, 0.0});
  const auto a = analyze(m);
  double worst = 0.0;
  for (double lam : GridSpec{0.02, 2.0, 12, true}.values()) {
    const double g = g2_zero(*a, {FilterKind::Lorentzian, 2.0, lam}).g2;
    const auto s = g2_sensor_oracle(m, 2.0, lam);
    const double d = std::abs(g - s.g2) / g;
    worst = std::max(worst, d);
    if (!(d <= 1e-3)) o.fail("lambda " + f3(lam) + ": rel diff " + f3(d));
    if (!s.converged) o.fail("sensor not converged at lambda " + f3(lam));
  }
  o.note("max rel diff " + f3(worst));
  return o;
}

// 2: closed-form kernels against the time-domain oracle on random eigenvalue triples
Outcome criterion2() {
  Outcome o;
  std::mt19937 rng(20240611);
  struct Source {
    std::shared_ptr<const EmitterAnalysis> a;
    double omega_F, lam_lo, lam_hi;
  };
  const std::vector<Source> sources{
      {analyze(resonance_fluorescence({1.0, 0.3, 0.0})), 2.0, 0.05, 2.0},
      {analyze(neutral_qd(pumped_qd(2000.0))), 0.0, 30.0, 1000.0}};
  // relative errors of kernels far below their O(1) scale are taken against this floor
  constexpr double kFloor = 1e-15;
  double worst[3] = {0, 0, 0}, worst_s = 0.0;
  int count = 0;
  for (int t = 0; t < 100; ++t) {
    const auto& src = sources[t % 2];
    const auto& ev = src.a->spec.eigenvalues;
    std::uniform_int_distribution<Eigen::Index> pick(0, ev.size() - 1);
    std::uniform_real_distribution<double> ul(std::log(src.lam_lo), std::log(src.lam_hi));
    const OmegaTriple om{ev[pick(rng)], ev[pick(rng)], ev[pick(rng)]};
    const double lam = std::exp(ul(rng));
    const Region k = kRegions[t % 3];
    if (std::getenv("ACCEPTANCE_TRIPLE") && std::atoi(std::getenv("ACCEPTANCE_TRIPLE")) != t) continue;
    for (int ik = 0; ik < 3; ++ik) {
      const FilterSpec f{kAll[ik], src.omega_F, lam};
      try {
        const cplx z = z_kernel(f, k, om).value;
        const cplx n = z_kernel_numeric(f, k, om).value;
        const double d = std::abs(z - n) / std::max(std::abs(n), kFloor);
        worst[ik] = std::max(worst[ik], d);
        const double tol = kAll[ik] == FilterKind::Rectangular ? 1e-4 : 1e-6;
        if (!(d <= tol))
          o.fail("triple " + std::to_string(t) + " " + to_string(kAll[ik]) + " region " + to_string(k) +
                 ": rel " + f3(d));
        const cplx s = s_kernel(f, om[0]).value;
        const cplx sn = s_kernel_numeric(f, om[0]).value;
        const double ds = std::abs(s - sn) / std::max(std::abs(sn), kFloor);
        worst_s = std::max(worst_s, ds);
        if (!(ds <= 1e-8)) o.fail("triple " + std::to_string(t) + " " + to_string(kAll[ik]) + " s: rel " + f3(ds));
        ++count;
      } catch (const std::exception& e) {
        o.fail("triple " + std::to_string(t) + " " + to_string(kAll[ik]) + ": " + e.what());
      }
    }
  }
  o.note(std::to_string(count) + " kernel pairs; max rel Z L/G/R " + f3(worst[0]) + "/" + f3(worst[1]) + "/" +
         f3(worst[2]) + ", s " + f3(worst_s));
  return o;
}

// 3: very wide filters reproduce the unfiltered g2
Outcome criterion3() {
  Outcome o;
  for (const auto& m : {resonance_fluorescence({1.0, 0.3, 0.0}), neutral_qd(pumped_qd(2000.0))}) {
    const auto a = analyze(m);
    const double g0 = g2_unfiltered(*a);
    const double lam = 1e4 * a->spec.scale();
    const double w = m.dim == 2 ? 2.0 : 0.0;
    for (FilterKind k : kAll) {
      const double g = g2_zero(*a, {k, w, lam}).g2;
      const double d = std::abs(g - g0);
      if (!(d <= 1e-3 * std::max(1.0, g0)))
        o.fail((m.dim == 2 ? "rf " : "qd ") + to_string(k) + ": g2 " + f3(g) + " vs " + f3(g0));
    }
    o.note((m.dim == 2 ? "rf" : "qd") + std::string(" unfiltered g2 ") + f3(g0));
  }
  return o;
}

// 4: dot, g2 vs bandwidth, minima
Outcome criterion4() {
  Outcome o;
  const RunConfig c = config("fig4b_qd_lambda.json");
  const auto r = run(c);
  if (r.failed) o.fail(std::to_string(r.failed) + " sweep rows failed");
  const double ref[3] = {0.0027, 0.0025, 0.0048};
  double y[3];
  for (int i = 0; i < 3; ++i) {
    const auto m = min_of(r, kAll[i]);
    y[i] = m.y;
    o.note(to_string(kAll[i]) + " " + f3(m.y) + " at " + f3(m.x));
    if (m.boundary) o.fail(to_string(kAll[i]) + " minimum on the grid boundary");
    if (!(std::abs(m.y - ref[i]) <= 0.5 * ref[i])) o.fail(to_string(kAll[i]) + " outside +-50%");
  }
  if (!(y[1] < y[0] && y[0] < y[2])) o.fail("ordering G < L < R violated");
  const double lopt = min_of(r, FilterKind::Lorentzian).x;
  if (!(lopt >= 50.0 && lopt <= 200.0)) o.fail("Lorentzian lambda_opt " + f3(lopt) + " not within 2x of 100");
  return o;
}

// 5: ordering of minima over the binding energy
Outcome criterion5() {
  Outcome o;
  const RunConfig c = config("fig4c_qd_chi.json");
  const auto r = run(c);
  if (r.failed) o.fail(std::to_string(r.failed) + " sweep rows failed");
  const auto chis = c.sweep.values();
  for (size_t iv = 0; iv < chis.size(); ++iv) {
    const double L = row_of(r, c, iv, FilterKind::Lorentzian).g2;
    const double G = row_of(r, c, iv, FilterKind::Gaussian).g2;
    const double R = row_of(r, c, iv, FilterKind::Rectangular).g2;
    o.note("chi " + f3(chis[iv]) + ": G " + f3(G) + " L " + f3(L) + " R " + f3(R));
    if (!(G <= L && L <= R)) o.fail("ordering G <= L <= R violated at chi " + f3(chis[iv]));
  }
  return o;
}

// 6: resonance fluorescence, minima over 0 < lambda < 2 Omega_R vs Rabi strength
Outcome criterion6() {
  Outcome o;
  RunConfig c = config("fig5d_rf_rabi.json");
  PointEvaluator ev(c);
  const std::vector<double> ratios{6.7, 10.0, 20.0, 50.0, 100.0};
  std::map<double, std::map<FilterKind, double>> best;
  for (double ratio : ratios)
    for (FilterKind k : kAll) {
      const auto m = minimize_lambda(ev, ratio, k, c.lambda_grid, c.refine_steps, nullptr, true);
      if (m.boundary) o.fail(to_string(k) + " at ratio " + f3(ratio) + ": no interior minimum");
      best[ratio][k] = m.y;
    }
  for (double ratio : {6.7, 20.0, 100.0}) {
    const auto& b = best[ratio];
    o.note("ratio " + f3(ratio) + ": G " + f3(b.at(FilterKind::Gaussian)) + " L " +
           f3(b.at(FilterKind::Lorentzian)) + " R " + f3(b.at(FilterKind::Rectangular)));
  }
  const auto& b67 = best[6.7];
  if (!(b67.at(FilterKind::Gaussian) < b67.at(FilterKind::Rectangular) &&
        b67.at(FilterKind::Rectangular) < b67.at(FilterKind::Lorentzian)))
    o.fail("ordering G < R < L violated at 6.7");
  auto winner = [&](double ratio) {
    const auto& b = best[ratio];
    return std::min_element(b.begin(), b.end(), [](auto& x, auto& y) { return x.second < y.second; })->first;
  };
  if (winner(20.0) != FilterKind::Gaussian) o.fail("Gaussian not best at 20");
  if (winner(100.0) != FilterKind::Rectangular) o.fail("rectangular not best at 100 (" + to_string(winner(100.0)) + ")");
  for (FilterKind k : kAll)
    for (size_t i = 1; i < ratios.size(); ++i)
      if (!(best[ratios[i]][k] < best[ratios[i - 1]][k]))
        o.fail(to_string(k) + " minimum not decreasing between " + f3(ratios[i - 1]) + " and " + f3(ratios[i]));
  return o;
}

// 7: Mollow triplet positions
Outcome criterion7() {
  Outcome o;
  const RunConfig c = config("fig5c_rf_lambda.json");
  const auto r = run_spectrum(c);
  const auto& s = r.spectrum;
  const double step = (c.spectrum_grid.max - c.spectrum_grid.min) / (c.spectrum_grid.points - 1);
  std::vector<double> peaks;
  for (size_t i = 1; i + 1 < s.size(); ++i)
    if (s[i].second > s[i - 1].second && s[i].second >= s[i + 1].second) peaks.push_back(s[i].first);
  std::string list;
  for (double p : peaks) list += (list.empty() ? "" : ",") + f3(p);
  o.note("peaks at " + list);
  const double om = c.rf.omega_R;
  if (peaks.size() != 3) return o.fail("expected 3 peaks"), o;
  const double want[3] = {-2 * om, 0.0, 2 * om};
  for (int i = 0; i < 3; ++i)
    if (!(std::abs(peaks[i] - want[i]) <= step + 1e-12)) o.fail("peak " + f3(peaks[i]) + " off by more than a step");
  return o;
}

// 8: structural properties and reproducibility
Outcome criterion8() {
  Outcome o;
  std::mt19937 rng(11);
  std::normal_distribution<double> nd;
  for (const auto& m : {resonance_fluorescence({1.0, 0.3, 0.2}), neutral_qd(pumped_qd(2000.0)),
                        neutral_qd(pumped_qd(1000.0))}) {
    const std::string tag = m.dim == 2 ? "rf" : "qd";
    const SuperOp L = assemble(m);
    // trace preservation: Tr(L rho) = 0 for any rho
    CMatrix X(m.dim, m.dim);
    for (int i = 0; i < m.dim; ++i)
      for (int j = 0; j < m.dim; ++j) X(i, j) = {nd(rng), nd(rng)};
    if (std::abs(unvec(L * vec(X)).trace()) > 1e-10 * L.cwiseAbs().maxCoeff()) o.fail(tag + " trace not preserved");
    const auto a = analyze(m);
    const auto& sp = a->spec;
    const Eigen::Index M = sp.eigenvalues.size();
    for (Eigen::Index j = 0; j < M; ++j)
      if (sp.eigenvalues[j].real() > 1e-9 * sp.scale()) o.fail(tag + " eigenvalue with positive real part");
    CMatrix B = sp.left_vectors * sp.right_vectors;
    for (Eigen::Index j = 0; j < M; ++j) B.row(j) /= sp.norms[j];
    if ((B - CMatrix::Identity(M, M)).cwiseAbs().maxCoeff() > 1e-9) o.fail(tag + " not biorthogonal");
    CMatrix P = CMatrix::Zero(M, M);
    for (Eigen::Index j = 0; j < M; ++j) P += sp.right_vectors.col(j) * sp.left_vectors.row(j) / sp.norms[j];
    if ((P - CMatrix::Identity(M, M)).cwiseAbs().maxCoeff() > 1e-8) o.fail(tag + " not complete");
    if (std::abs(a->q.sum() - a->n1) > 1e-12 * a->n1) o.fail(tag + " sum q != <E+E->");
    for (Region k : kRegions) {
      const auto t = theta_tensor(sp, a->em, a->ep, a->rho, k);
      if (std::abs(t.sum() - a->n2) > 1e-10 * std::max(a->n2, a->n1 * a->n1))
        o.fail(tag + " sum Theta_" + to_string(k) + " != <E+E+E-E->");
    }
    const double w = m.dim == 2 ? 2.0 : 0.0;
    for (FilterKind k : kAll)
      for (double lam : m.dim == 2 ? std::vector<double>{0.1, 0.7} : std::vector<double>{50.0, 400.0}) {
        const auto g = g2_zero(*a, {k, w, lam});
        if (!(g.intensity > 0.0 && g.g2 >= 0.0)) o.fail(tag + " negative intensity or g2");
        if (!(g.imag_residual < 1e-8 && g.intensity_imag_residual < 1e-8)) o.fail(tag + " imaginary residual");
      }
  }
  // byte-identical outputs for different thread counts
  RunConfig c = config("fig5c_rf_lambda.json");
  c.spectrum = false;
  c.oracle = "none";
  c.sweep.points = 6;
  const fs::path base = fs::temp_directory_path() / "filterstat_acceptance";
  std::string ref;
  for (int threads : {1, 2, 4}) {
    omp_set_num_threads(threads);
    const auto dir = base / std::to_string(threads);
    fs::remove_all(dir);
    write_outputs(c, run(c), dir.string(), true);
    std::ifstream in(dir / "g2_sweep.csv", std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    if (threads == 1) ref = ss.str();
    else if (ss.str() != ref) o.fail("g2_sweep.csv differs with " + std::to_string(threads) + " threads");
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<Outcome()>> crit{criterion1, criterion2, criterion3, criterion4,
                                                  criterion5, criterion6, criterion7, criterion8};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::stoi(argv[i]));
  if (which.empty())
    for (int i = 1; i <= 8; ++i) which.push_back(i);
  int failed = 0;
  for (int n : which) {
    if (n < 1 || n > 8) {
      std::fprintf(stderr, "unknown criterion %d\n", n);
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = crit[n - 1]();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d (%.1f s): %s\n", o.pass ? "PASS" : "FAIL", n, secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed ? 1 : 0;
}
