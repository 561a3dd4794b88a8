#include <doctest.h>

#include "filterstat/correlation_engine.hpp"
#include "filterstat/errors.hpp"

using namespace filterstat;

namespace {

const EmitterModel& rf() {
  static const EmitterModel m = resonance_fluorescence({1.0, 0.3, 0.0});
  return m;
}

QDParams qd_params(double chi) {
  QDParams p = QDParams::with_spin_flip_time(chi, 0.67, 20.0, 10.0, 0.0);
  p.pump_P = 0.1 * p.gamma_sp;
  return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_SUITE("correlation_engine") {
  TEST_CASE("q coefficients sum to the emitted intensity") {
    for (const auto& m : {rf(), neutral_qd(qd_params(2000.0))}) {
      const auto a = analyze(m);
      CHECK(std::abs(a->q.sum() - a->n1) < 1e-12 * a->n1);
      CHECK(std::abs(a->q.q_mirror.sum() - a->n1) < 1e-12 * a->n1);
    }
  }

  TEST_CASE("every region's trace tensor sums to the two-photon expectation") {
    for (const auto& m : {rf(), neutral_qd(qd_params(2000.0))}) {
      const auto a = analyze(m);
      for (Region k : kRegions)
        for (bool mirror : {false, true}) {
          const auto t = theta_tensor(a->spec, a->em, a->ep, a->rho, k, mirror);
          CHECK(std::abs(t.sum() - a->n2) < 1e-10 * std::max(a->n2, a->n1 * a->n1));
        }
    }
  }

  TEST_CASE("pruning keeps entries that carry the sum") {
    const auto a = analyze(neutral_qd(qd_params(2000.0)));
    for (Region k : kRegions) {
      const auto& p = a->theta[static_cast<int>(k)];
      CHECK(p.idx.size() < p.full_size);
      cplx s = 0.0;
      for (const auto& v : p.value) s += v;
      CHECK(std::abs(s - a->n2) < 1e-10 * a->n1 * a->n1);
    }
  }

  TEST_CASE("resonance fluorescence is antibunched without a filter") {
    CHECK(g2_unfiltered(rf()) == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("explicit mirror regions equal the complex conjugate of the direct ones") {
    // the dot spectrum is degenerate, so this also covers the conjugate pairing
    for (const auto& m : {rf(), neutral_qd(qd_params(2000.0)), neutral_qd(qd_params(1000.0))}) {
      const auto a = analyze(m);
      const double w = m.dim == 2 ? 2.0 : 0.0;
      const double lam = m.dim == 2 ? 0.4 : 60.0;
      for (FilterKind kind : {FilterKind::Lorentzian, FilterKind::Gaussian, FilterKind::Rectangular}) {
        const auto r = numerator_serial(*a, {kind, w, lam});
        CHECK(std::abs(r.total - 2.0 * r.direct.real()) < 1e-8 * std::abs(r.total));
        const auto g = g2_zero(*a, {kind, w, lam});
        CHECK(g.imag_residual < 1e-8);
        CHECK(g.g2 >= 0.0);
      }
    }
  }

  TEST_CASE("parallel numerator reproduces the serial one exactly") {
    const auto a = analyze(neutral_qd(qd_params(2000.0)));
    for (FilterKind kind : {FilterKind::Lorentzian, FilterKind::Gaussian, FilterKind::Rectangular}) {
      const FilterSpec f{kind, 0.0, 80.0};
      const auto s = numerator_serial(*a, f);
      const auto p = numerator_parallel(*a, f);
      CHECK(s.direct == p.direct);
      CHECK(s.total == p.total);
    }
  }

  TEST_CASE("wide filters recover the unfiltered statistics") {
    const auto a = analyze(neutral_qd(qd_params(2000.0)));
    const double g0 = g2_unfiltered(*a);
    for (FilterKind kind : {FilterKind::Lorentzian, FilterKind::Gaussian, FilterKind::Rectangular}) {
      const auto g = g2_zero(*a, {kind, -1000.0, 1e6});
      CHECK(g.g2 == doctest::Approx(g0).epsilon(1e-3));
    }
  }

  TEST_CASE("Lorentzian filter agrees with the sensor method") {
    for (double lam : {0.05, 0.4, 2.0}) {
      const double g = g2_zero(rf(), {FilterKind::Lorentzian, 2.0, lam}).g2;
      const auto s = g2_sensor_oracle(rf(), 2.0, lam);
      CHECK(s.converged);
      CHECK(rel(g, s.g2) < 1e-4);
    }
    const auto qd = neutral_qd(qd_params(2000.0));
    const double g = g2_zero(qd, {FilterKind::Lorentzian, 0.0, 100.0}).g2;
    CHECK(rel(g, g2_sensor_oracle(qd, 0.0, 100.0).g2) < 1e-4);
  }

  TEST_CASE("rectangular filter at the band edge converges in the branch offset") {
    // omega_F = lambda puts the zero-frequency line on the window edge
    const auto a = analyze(rf());
    const FilterSpec f{FilterKind::Rectangular, 2.0, 2.0};
    for (double eps : {1e-12, 1e-10, 1e-8}) {
      KernelOptions ko;
      ko.epsilon_branch = eps;
      G2Options o;
      o.kernel = ko;
      CHECK(g2_zero(*a, f, o).g2 == doctest::Approx(2.1946224419).epsilon(2e-8));
    }
  }

  TEST_CASE("filtered intensity is the emission spectrum seen through the filter") {
    const auto a = analyze(rf());
    const FilterSpec f{FilterKind::Lorentzian, 2.0, 0.01};
    const auto i = filtered_intensity(a->spec, f, a->q);
    const auto s = emission_spectrum(a->spec, a->q, {2.0}, 0.01);
    CHECK(i.value == doctest::Approx(s[0].second).epsilon(1e-10));
    CHECK(i.imag_residual < 1e-12);
  }

  TEST_CASE("Mollow triplet peaks at 0 and twice the Rabi frequency") {
    const auto a = analyze(resonance_fluorescence({5.0, 0.3, 0.0}));
    std::vector<double> grid;
    for (int i = 0; i <= 3000; ++i) grid.push_back(-15.0 + 0.01 * i);
    const auto s = emission_spectrum(a->spec, a->q, grid, 1e-3);
    std::vector<double> peaks;
    for (size_t i = 1; i + 1 < s.size(); ++i)
      if (s[i].second > s[i - 1].second && s[i].second > s[i + 1].second) peaks.push_back(s[i].first);
    REQUIRE(peaks.size() == 3);
    CHECK(peaks[0] == doctest::Approx(-10.0).epsilon(2e-3));
    CHECK(std::abs(peaks[1]) < 1e-9);
    CHECK(peaks[2] == doctest::Approx(10.0).epsilon(2e-3));
  }

  TEST_CASE("dark emitter has no filtered intensity") {
    const auto m = resonance_fluorescence({0.0, 0.3, 0.0});
    CHECK_THROWS_AS(g2_zero(m, {FilterKind::Lorentzian, 0.0, 1.0}), ZeroIntensity);
  }

  TEST_CASE("kernel cache fills once per evaluated triple") {
    const auto a = analyze(rf());
    const FilterSpec f{FilterKind::Gaussian, 2.0, 0.3};
    const auto first = g2_zero(*a, f);
    const size_t n = a->cache.size();
    const auto second = g2_zero(*a, f);
    CHECK(a->cache.size() == n);
    CHECK(first.g2 == second.g2);
  }
}
