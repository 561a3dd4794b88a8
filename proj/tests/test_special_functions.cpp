#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "filterstat/errors.hpp"
#include "filterstat/special_functions.hpp"

using namespace filterstat;
using std::numbers::pi;

namespace {
double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_SUITE("special_functions") {
  TEST_CASE("erf basics") {
    CHECK(std::abs(erf_c(0.0)) == 0.0);
    CHECK(std::abs(erf_c(3.0) - 0.999977909503) < 1e-12);
    CHECK(std::abs(erf_c(40.0) - 1.0) < 1e-15);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int i = 0; i < 200; ++i) {
      const cplx z(u(rng), u(rng));
      CHECK(std::abs(erf_c(-z) + erf_c(z)) <= 1e-15 * std::abs(erf_c(z)));
    }
  }

  TEST_CASE("erf and erfcx against high-precision values") {
    struct Case { cplx z, erfcx, erf; };
    const Case cases[] = {
        {{0.3, 0.2}, {0.71380105298365193, -0.13473859470829444}, {0.34123748147213856, 0.20852883788276888}},
        {{2, -1}, {0.21849261527489069, 0.092997809392601868}, {1.0036063427256519, 0.011259006028815025}},
        {{-1.5, 2.5}, {-0.098535764947462412, -0.19759688490253616}, {-7.2546886934779264, 8.7859672933704562}},
        {{4, 4}, {0.071570433426365335, -0.06937451861377146}, {0.97854923307608188, 0.097339690630831865}},
        {{0.01, -3}, {0.00090883070674158053, 0.20114646254019641}, {91.375616296956878, -1627.2525771673356}},
        {{20, 1}, {0.028104521704702713, -0.0014017433440084847}, {1.0, -3.4051091735694785e-36}},
        {{-3, -4}, {-0.069017359275733464, 0.087688439086944431}, {120.18699139507945, 27.750337293623904}},
    };
    for (const auto& c : cases) {
      CAPTURE(c.z);
      CHECK(rel(erfcx_c(c.z), c.erfcx) < 1e-13);
      CHECK(std::abs(erf_c(c.z) - c.erf) < 1e-13 * std::max(1.0, std::abs(c.erf)));
    }
  }

  TEST_CASE("erfcx range") {
    CHECK(std::abs(erfcx_c(0.0) - 1.0) < 1e-14);
    const double x = 100.0;
    CHECK(std::abs(erfcx_c(x).real() * x * std::sqrt(pi) - 1.0) < 1e-4);  // 1/(x sqrt(pi)) up to 1/(2x^2)
    CHECK(rel(erfcx_c(x), 1.0 / (x * std::sqrt(pi)) * (1.0 - 0.5 / (x * x) + 0.75 / std::pow(x, 4))) < 1e-6);
    for (double r : {1e3, 1e6, 1e8}) {
      const cplx v = erfcx_c(cplx(r, 0.3 * r));
      CHECK(std::isfinite(v.real()));
      CHECK(rel(v, 1.0 / (std::sqrt(pi) * cplx(r, 0.3 * r))) < 1e-6);
    }
  }

  TEST_CASE("erfcx(-y) equals exp(y^2)(1+erf y)") {
    // right-hand side evaluated in 40-digit arithmetic
    const std::pair<cplx, cplx> cases[] = {
        {{-2.568, 0.433}, {0.20155886685644404, 0.030182636673153465}},
        {{-1.274, 1.018}, {0.27510699004319531, 0.16478834615471825}},
        {{1.232, -4.258}, {-0.038074468589364894, -0.12443682077772822}},
        {{-4.771, 3.307}, {0.080168907583859307, 0.0539792947071309}},
        {{-2.358, -2.604}, {0.11250889689317392, -0.11459959341796584}},
        {{4.857, -0.291}, {-30730420664.240158, -10007326280.144474}},
        {{3.297, -0.232}, {4083.64055029503, -99577.551393406109}},
        {{1.363, -3.424}, {-0.062460486319914957, -0.14428763405105334}},
        {{1.322, 3.607}, {-0.05543359480205796, 0.14016420680611516}},
        {{0.227, 2.364}, {-0.032250056926790328, 0.26975518358813578}},
        {{1.68, -4.272}, {-0.047818699281196475, -0.1155507600715752}},
        {{2.531, 0.893}, {-104.29207517165185, -535.39052434233546}},
    };
    for (const auto& [y, v] : cases) {
      CAPTURE(y);
      CHECK(rel(erfcx_c(-y), v) < 1e-13);
    }
  }

  TEST_CASE("erfcx/erf consistency on the grid |Re|,|Im| <= 5") {
    for (double x = -5; x <= 5; x += 0.25)
      for (double y = -5; y <= 5; y += 0.25) {
        const cplx z(x, y);
        const cplx lhs = erfcx_c(z) * std::exp(-z * z);
        const cplx rhs = 1.0 - erf_c(z);
        CAPTURE(z);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
      }
  }

  TEST_CASE("dilog constants and identities") {
    CHECK(std::abs(dilog(1.0) - pi * pi / 6) < 1e-15);
    CHECK(std::abs(dilog(-1.0) + pi * pi / 12) < 1e-15);
    CHECK(std::abs(dilog(0.0)) == 0.0);
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-1, 1);
    int n = 0;
    while (n < 200) {
      const cplx z(u(rng), u(rng));
      if (std::abs(z) >= 1.0) continue;
      ++n;
      const cplx landen = pi * pi / 6 - std::log(z) * std::log(1.0 - z);
      CHECK(std::abs(dilog(z) + dilog(1.0 - z) - landen) < 1e-12);
    }
    std::uniform_real_distribution<double> w(-6, 6);
    for (int i = 0; i < 200; ++i) {
      const cplx z(w(rng), w(rng));
      if (std::abs(z.imag()) < 1e-3) continue;
      const cplx l = std::log(-z);
      CHECK(std::abs(dilog(z) + dilog(1.0 / z) + pi * pi / 6 + 0.5 * l * l) < 1e-10);
    }
  }

  TEST_CASE("dilog against high-precision values") {
    const std::pair<cplx, cplx> cases[] = {
        {{0.5, 0.5}, {0.45398526915029558, 0.6437673328892688}},
        {{-2, 0.1}, {-1.4372861256310636, 0.054921879804569744}},
        {{3, 1e-3}, {2.3191332706258341, 3.4511614206720815}},
        {{3, -1e-3}, {2.3191332706258341, -3.4511614206720815}},
        {{0.9, 0.05}, {1.2898324980216134, 0.12612490025403636}},
        {{-0.7, -0.2}, {-0.60999206858506694, -0.15134442208846016}},
        {{10, 10}, {-2.4280993034848328, 6.2932108173538719}},
        {{1.2, -0.3}, {1.5411219798572926, -0.98047862536500385}},
    };
    for (const auto& [z, v] : cases) {
      CAPTURE(z);
      CHECK(rel(dilog(z), v) < 1e-13);
    }
    // signed zero on the cut picks the side
    CHECK(dilog(cplx(3.0, -0.0)).imag() < 0.0);
    CHECK(dilog(cplx(3.0, 0.0)).imag() > 0.0);
    CHECK(std::abs(dilog(cplx(3.0, -0.0)) - dilog(cplx(3.0, -1e-12))) < 1e-10);
  }

  TEST_CASE("phi values, continuity, derivative") {
    CHECK(rel(phi({-1, 1}, {2, 1}, 0.0), {2.408129412843051, 1.5555431520252134}) < 1e-13);
    CHECK(rel(phi({0.3, 0.2}, {-0.5, 0.4}, {1.1, -0.2}), {0.46064234466312337, 0.83727777355415223}) < 1e-13);
    std::mt19937 rng(10);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 100; ++i) {
      const cplx a(u(rng), 0.5 + std::abs(u(rng))), b(u(rng), 0.5 + std::abs(u(rng)));
      const cplx z(u(rng), -0.3);
      const double h = 1e-6;
      const cplx fd = (phi(a, b, z + h) - phi(a, b, z - h)) / (2 * h);
      const cplx exact = (std::log(z - a) - std::log(-a)) / (z - b);
      const cplx f0 = phi(a, b, z), f1 = phi(a, b, z + 1e-9);
      // skip the few points where the segment straddles the (t-a)/(b-a) cut
      if (std::abs(f1 - f0) > 1e-3) continue;
      CHECK(std::abs(f1 - f0) < 1e-6);
      CHECK(std::abs(fd - exact) < 1e-6 * std::max(1.0, std::abs(exact)));
    }
    CHECK_THROWS_AS(phi(cplx(1.0, 0.0), cplx(2.0, 1.0), cplx(0.5, 0.0)), ArgumentOnCut);
  }

  TEST_CASE("capital_phi") {
    const auto r = capital_phi({-0.3, 0.2}, {2.5, 0.4}, {1.1, 0.3}, 2.0);
    CHECK(rel(r.value, {5.1399826167233771, 6.5574360931405247}) < 1e-9);
    CHECK(r.error <= 1e-10 * std::abs(r.value) + 1e-14);
    const auto m = capital_phi({-1.3, 0.2}, {-2.5, 0.4}, {-0.9, 0.05}, -2.0);
    CHECK(rel(m.value, {1.454252814397031, 3.4946445425749881}) < 1e-9);
    // nearly constant phi: a and b far from the segment
    const cplx a(-1e6, 1.0), b(1e6, 1.0), c(0.7, 1e-3);
    const cplx k = phi(a, b, 1.0);
    const auto f = capital_phi(a, b, c, 2.0);
    CHECK(std::abs(f.value - k * (std::log(2.0 - c) - std::log(-c))) < 1e-5 * std::abs(f.value));
    // smooth regime: few subdivisions
    const auto s = capital_phi({-0.3, 0.2}, {2.5, 0.4}, {1.0, 10.0}, 2.0);
    CHECK(s.subdivisions < 20);
    // more subdivisions do not change the answer beyond the estimate
    Quadrature q2;
    q2.max_subdivisions = 4000;
    const auto r2 = capital_phi({-0.3, 0.2}, {2.5, 0.4}, {1.1, 0.3}, 2.0, q2);
    CHECK(std::abs(r2.value - r.value) <= r.error + 1e-13);
  }

  TEST_CASE("quad_semi_infinite") {
    Quadrature q;
    const auto a = quad_semi_infinite([](double z) { return cplx(std::exp(-z * z)); }, 0.0, 1.0, q);
    CHECK(std::abs(a.value - std::sqrt(pi) / 2) < 1e-13);
    const auto b = quad_semi_infinite([](double z) { return cplx(std::exp(-(z - 3) * (z - 3))); }, 3.0, 1.0, q);
    CHECK(std::abs(b.value - std::sqrt(pi) / 2 * (1 + erf_c(3.0).real())) < 1e-13);
    const auto c = quad_semi_infinite(
        [](double z) {
          const double e = erf_c(z).real();
          return cplx(std::exp(-z * z) * (1 - e) * (2 * e) / std::sqrt(pi));
        },
        0.0, 1.0, q);
    CHECK(std::abs(c.value - 1.0 / 6.0) < 1e-13);
    CHECK(c.error <= std::max(q.rel_tol * std::abs(c.value), q.abs_tol));
    Quadrature tiny;
    tiny.max_subdivisions = 1;
    tiny.rel_tol = 1e-16;
    tiny.abs_tol = 0.0;
    CHECK_THROWS_AS(integrate([](double x) { return cplx(std::sqrt(std::abs(x - 0.3))); }, {0.0, 1.0}, tiny),
                    QuadratureFailure);
  }
}
