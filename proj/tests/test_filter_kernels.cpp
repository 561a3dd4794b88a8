#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "filterstat/errors.hpp"
#include "filterstat/filter_kernels.hpp"
#include "filterstat/quadrature.hpp"

using namespace filterstat;
using std::numbers::pi;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

struct FrozenCase {
  OmegaTriple om;
  double omega_F, lambda;
  cplx zg[3], zr[3];
  cplx sr, sg;  // at om[0]
};

// values from 30-digit frequency-domain quadrature
const FrozenCase kFrozen[] = {
    {{cplx(-0.3, 0.5), cplx(-0.2, -1.1), cplx(-0.6, 0.3)},
     0.4,
     1.3,
     {{0.10167000729753907, -0.004767788348255691},
      {0.10056317071898555, -0.0356898073277074},
      {0.082660180429173141, -0.053350497221951537}},
     {{0.091703127343635213, -0.028293972161640531},
      {0.079665658736972789, -0.055365495253366294},
      {0.04855506166968037, -0.062227207105420665}},
     {0.42741388737517061, 0.023282144600419486},
     {0.41874268684267474, 0.023196544130043472}},
    {{cplx(-0.05, 2.0), cplx(-0.1, 0.0), cplx(-0.5, -1.0)},
     -1.0,
     0.7,
     {{0.070391636299971458, 0.058391639115906273},
      {0.0084688070385080874, 0.03861571262222574},
      {-0.020883069057688202, 0.015495861098950953}},
     {{0.03187485235508928, 0.097282771861850595},
      {0.0023912690132545, 0.02851205203139345},
      {-0.0073753015757682698, 0.0013285686452980275}},
     {0.0013087336162230143, 0.075642963495178614},
     {0.0019801543986762188, 0.09934034601910112}},
    {{cplx(-1.2, 0.0), cplx(-0.4, 0.9), cplx(-0.3, -0.3)},
     0.0,
     2.0,
     {{0.10492488935278059, 0.011325918964811643},
      {0.10492488935278059, 0.011325918964811643},
      {0.10492488935278059, 0.011325918964811643}},
     {{0.098040707855796674, 0.029646865924755933},
      {0.098040707855796674, 0.029646865924755933},
      {0.098040707855796674, 0.029646865924755933}},
     {0.32797913037736931, 0.0},
     {0.32834059446067843, 0.0}},
};

}  // namespace

TEST_SUITE("filter_kernels") {
  TEST_CASE("validation") {
    CHECK_THROWS_AS((FilterSpec{FilterKind::Lorentzian, 0.0, 0.0}.validate()), InvalidArgument);
    CHECK_THROWS_AS((FilterSpec{FilterKind::Gaussian, 0.0, -1.0}.validate()), InvalidArgument);
    CHECK(parse_filter_kind("gaussian") == FilterKind::Gaussian);
    CHECK(parse_filter_kind("rectangular") == FilterKind::Rectangular);
    CHECK(to_string(FilterKind::Lorentzian) == "lorentzian");
    CHECK_THROWS(parse_filter_kind("boxcar"));
  }

  TEST_CASE("s at zero is one half for every filter") {
    for (auto kind : {FilterKind::Lorentzian, FilterKind::Gaussian, FilterKind::Rectangular})
      for (double lam : {0.3, 1.0, 7.0}) {
        const auto s = s_kernel({kind, 0.0, lam}, 0.0);
        CHECK(std::abs(s.value - 0.5) < 1e-11);
        CHECK(s.error_estimate >= 0.0);
      }
  }

  TEST_CASE("Z at zero is one sixth for every filter and region") {
    for (auto kind : {FilterKind::Lorentzian, FilterKind::Gaussian, FilterKind::Rectangular})
      for (auto k : kRegions) {
        CAPTURE(to_string(kind));
        CAPTURE(to_string(k));
        const auto z = z_kernel({kind, 0.0, 1.3}, k, {0.0, 0.0, 0.0});
        CHECK(std::abs(z.value - 1.0 / 6.0) < 1e-9);
      }
  }

  TEST_CASE("closed forms against frozen high-precision values") {
    for (const auto& c : kFrozen) {
      const FilterSpec g{FilterKind::Gaussian, c.omega_F, c.lambda};
      const FilterSpec r{FilterKind::Rectangular, c.omega_F, c.lambda};
      for (auto k : kRegions) {
        CAPTURE(to_string(k));
        CAPTURE(c.omega_F);
        const int ki = static_cast<int>(k);
        CHECK(rel(z_kernel(g, k, c.om).value, c.zg[ki]) < 1e-9);
        CHECK(rel(z_kernel(r, k, c.om).value, c.zr[ki]) < 1e-8);
      }
      CHECK(rel(s_kernel(g, c.om[0]).value, c.sg) < 1e-12);
      CHECK(rel(s_kernel(r, c.om[0]).value, c.sr) < 1e-12);
    }
  }

  TEST_CASE("Lorentzian closed forms against the time-domain oracle") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> re(-2.0, -0.01), im(-3.0, 3.0);
    for (int t = 0; t < 10; ++t) {
      const OmegaTriple om{cplx(re(rng), im(rng)), cplx(re(rng), im(rng)), cplx(re(rng), im(rng))};
      const FilterSpec f{FilterKind::Lorentzian, im(rng), 0.2 + std::abs(im(rng))};
      for (auto k : kRegions) {
        const auto a = z_kernel(f, k, om), b = z_kernel_numeric(f, k, om);
        CHECK(rel(a.value, b.value) < 1e-8);
      }
      CHECK(rel(s_kernel(f, om[0]).value, s_kernel_numeric(f, om[0]).value) < 1e-8);
    }
  }

  TEST_CASE("Gaussian and rectangular numeric oracles") {
    CHECK(std::abs(z_kernel_numeric({FilterKind::Gaussian, 0.0, 1.0}, Region::i, {0.0, 0.0, 0.0}).value -
                   1.0 / 6.0) < 1e-8);
    const auto& c = kFrozen[0];
    const FilterSpec g{FilterKind::Gaussian, c.omega_F, c.lambda};
    for (auto k : kRegions) CHECK(rel(z_kernel_numeric(g, k, c.om).value, c.zg[static_cast<int>(k)]) < 1e-6);
    const FilterSpec r{FilterKind::Rectangular, c.omega_F, c.lambda};
    const auto n = z_kernel_numeric(r, Region::ii, c.om);
    CHECK(rel(n.value, c.zr[1]) < 1e-4);
    CHECK(n.error_estimate >= 0.0);
    NumericOptions wide;
    wide.rect_window *= 2;
    const auto n2 = z_kernel_numeric(r, Region::ii, c.om, wide);
    CHECK(std::abs(n2.value - n.value) <= std::max(n.error_estimate, 1e-12));
  }

  TEST_CASE("filter_time_response") {
    const FilterSpec L{FilterKind::Lorentzian, 0.7, 1.1};
    CHECK(filter_time_response(L, -0.5) == cplx(0.0));
    CHECK(std::abs(filter_time_response(L, 0.0) - 1.1) < 1e-15);
    const FilterSpec R{FilterKind::Rectangular, 0.7, 1.1};
    CHECK(std::abs(filter_time_response(R, 0.0) - 1.1 / pi) < 1e-15);
    const FilterSpec R0{FilterKind::Rectangular, 0.0, 1.1};
    CHECK(std::abs(filter_time_response(R0, 1e-5) - filter_time_response(R0, 0.0)) < 1e-10);
    CHECK(std::abs(filter_time_response(R0, 2e-4) - filter_time_response(R0, 0.0)) < 1e-8);
    Quadrature q;
    q.rel_tol = 1e-12;
    // normalization: the demodulated response integrates to one
    auto demod = [](const FilterSpec& f) {
      return [f](double t) { return filter_time_response(f, t) * std::exp(cplx(0.0, f.omega_F * t)); };
    };
    CHECK(std::abs(integrate(demod(L), {0.0, 1.0, 5.0, 40.0}, q).value - 1.0) < 1e-8);
    const FilterSpec G{FilterKind::Gaussian, 0.7, 1.1};
    CHECK(std::abs(integrate(demod(G), {-10.0, 0.0, 10.0}, q).value - 1.0) < 1e-8);
    // rectangular: integral of sin(x)/(pi x) truncated at |x| = X is 1 - O(1/X)
    const double X = 2000.0;
    std::vector<double> pts;
    for (double x = -X; x <= X + 1e-9; x += pi) pts.push_back(x / 1.1);
    const cplx rn = integrate(demod(R), pts, q).value;
    CHECK(std::abs(rn - 1.0) < 2.0 / (pi * X));
  }

  TEST_CASE("Fourier transform of the Gaussian response") {
    const FilterSpec G{FilterKind::Gaussian, 0.4, 0.9};
    Quadrature q;
    q.rel_tol = 1e-12;
    for (double w = -3.0; w <= 3.0; w += 0.5) {
      const cplx F = integrate([&](double t) { return filter_time_response(G, t) * std::exp(cplx(0.0, w * t)); },
                               {-12.0, -4.0, 0.0, 4.0, 12.0}, q)
                         .value;
      const double d = (w - G.omega_F) / G.lambda;
      CHECK(std::abs(F - std::exp(-d * d / 4.0)) < 1e-6);
    }
  }

  TEST_CASE("unfiltered flattening") {
    const OmegaTriple om{cplx(-0.3, 1.0), cplx(-0.1, -2.0), cplx(-0.5, 0.2)};
    for (auto kind : {FilterKind::Lorentzian, FilterKind::Gaussian, FilterKind::Rectangular}) {
      const FilterSpec f{kind, 0.0, 2.0e4};
      for (auto k : kRegions) {
        const cplx z0 = z_kernel(f, k, {0.0, 0.0, 0.0}).value;
        CHECK(std::abs(z_kernel(f, k, om).value - z0) <= 1e-3 * std::abs(z0));
      }
      CHECK(std::abs(s_kernel(f, om[1]).value - 0.5) <= 0.5e-3);
    }
  }

  TEST_CASE("narrow Gaussian does not overflow") {
    const FilterSpec g{FilterKind::Gaussian, 2000.0, 0.5};
    const OmegaTriple om{cplx(-0.3, 2000.0), cplx(-0.6, 0.0), cplx(-0.3, -1980.0)};
    for (auto k : kRegions) {
      const auto z = z_kernel(g, k, om);
      CHECK(std::isfinite(z.value.real()));
      CHECK(std::isfinite(z.value.imag()));
    }
    CHECK(std::isfinite(std::abs(s_kernel(g, cplx(-0.3, -2000.0)).value)));
  }

  TEST_CASE("branch offset convergence") {
    const auto& c = kFrozen[1];
    const FilterSpec r{FilterKind::Rectangular, c.omega_F, c.lambda};
    KernelOptions a, b;
    a.epsilon_branch = 1e-10;
    b.epsilon_branch = 1e-13;
    for (auto k : kRegions)
      CHECK(rel(z_kernel(r, k, c.om, a).value, z_kernel(r, k, c.om, b).value) < 1e-8);
  }

  TEST_CASE("kernel cache") {
    KernelCache cache;
    const KernelCache::Key key{FilterKind::Gaussian, 0.1, 0.2, 1, 3, 4, 5};
    CHECK_FALSE(cache.find(key).has_value());
    cache.insert(key, cplx(1.0, 2.0));
    CHECK(cache.find(key).value() == cplx(1.0, 2.0));
    auto other = key;
    other.j3 = 6;
    CHECK_FALSE(cache.find(other).has_value());
    CHECK(cache.size() == 1);
  }
}
