#include <doctest.h>

#include "filterstat/errors.hpp"
#include "filterstat/operator_algebra.hpp"
#include "test_helpers.hpp"

using namespace filterstat;
using testutil::maxabs;

namespace {
CMatrix sigma_minus() {
  CMatrix s = CMatrix::Zero(2, 2);
  s(0, 1) = 1.0;  // |g><e|, basis {g, e}
  return s;
}
}  // namespace

TEST_SUITE("operator_algebra") {
  TEST_CASE("vec is row-major") {
    CMatrix m(2, 2);
    m << 1.0, 2.0, 3.0, 4.0;
    const auto v = vec(m);
    CHECK(v(0) == cplx(1.0));
    CHECK(v(1) == cplx(2.0));
    CHECK(v(2) == cplx(3.0));
    CHECK(v(3) == cplx(4.0));
    const auto id = vec(CMatrix::Identity(2, 2));
    CHECK(id(0) == cplx(1.0));
    CHECK(id(1) == cplx(0.0));
    CHECK(id(2) == cplx(0.0));
    CHECK(id(3) == cplx(1.0));
  }

  TEST_CASE("vec/unvec round trip up to dim 6") {
    std::mt19937 rng(1);
    for (int n = 1; n <= 6; ++n) {
      const auto m = testutil::random_matrix(n, rng);
      CHECK(unvec(vec(m)) == m);
    }
    CHECK_THROWS_AS(unvec(VecOp::Zero(5)), DimensionError);
  }

  TEST_CASE("kron") {
    const CMatrix sp = sigma_minus().adjoint();
    const CMatrix k = kron(sp, CMatrix::Identity(2, 2));
    CMatrix expect = CMatrix::Zero(4, 4);
    expect(2, 0) = expect(3, 1) = 1.0;  // sigma+ = |e><g| puts the identity block at rows {2,3}, cols {0,1}
    CHECK(maxabs(k - expect) == 0.0);
    CHECK(maxabs(kron(CMatrix::Identity(3, 3), CMatrix::Identity(2, 2)) - CMatrix::Identity(6, 6)) == 0.0);
    std::mt19937 rng(2);
    for (int t = 0; t < 5; ++t) {
      const auto A = testutil::random_matrix(2, rng), B = testutil::random_matrix(2, rng);
      const auto C = testutil::random_matrix(2, rng), D = testutil::random_matrix(2, rng);
      CHECK(maxabs(kron(A, B) * kron(C, D) - kron(A * C, B * D)) < 1e-12);
    }
  }

  TEST_CASE("left_right_superop matches direct multiplication") {
    std::mt19937 rng(3);
    for (int n = 1; n <= 6; ++n) {
      const auto A = testutil::random_matrix(n, rng), B = testutil::random_matrix(n, rng);
      const auto rho = testutil::random_matrix(n, rng);
      CHECK(maxabs(unvec(left_right_superop(A, B) * vec(rho)) - A * rho * B) < 1e-12 * n);
    }
    CHECK(maxabs(left_right_superop(CMatrix::Identity(3, 3), CMatrix::Identity(3, 3)) -
                 CMatrix::Identity(9, 9)) == 0.0);
    const CMatrix sm = sigma_minus();
    CMatrix ee = CMatrix::Zero(2, 2);
    ee(1, 1) = 1.0;
    CMatrix gg = CMatrix::Zero(2, 2);
    gg(0, 0) = 1.0;
    CHECK(maxabs(unvec(left_right_superop(sm, sm.adjoint()) * vec(ee)) - gg) == 0.0);
    CHECK_THROWS_AS(left_right_superop(CMatrix::Identity(2, 2), CMatrix::Identity(3, 3)), DimensionError);
  }

  TEST_CASE("dissipator") {
    const double g = 0.7;
    const CMatrix sm = sigma_minus();
    CMatrix ee = CMatrix::Zero(2, 2), gg = CMatrix::Zero(2, 2);
    ee(1, 1) = 1.0;
    gg(0, 0) = 1.0;
    CHECK(maxabs(unvec(dissipator(sm, g) * vec(ee)) - g * (gg - ee)) < 1e-15);
    CHECK(maxabs(dissipator(CMatrix::Identity(3, 3), 2.0)) < 1e-15);
    CHECK_THROWS_AS(dissipator(sm, -1.0), InvalidArgument);
    std::mt19937 rng(4);
    for (int n = 2; n <= 6; ++n) {
      const auto A = testutil::random_matrix(n, rng);
      const auto rho = testutil::random_density(n, rng);
      CHECK(std::abs(unvec(dissipator(A, 1.3) * vec(rho)).trace()) < 1e-13 * n * n);
    }
  }

  TEST_CASE("hamiltonian_superop sign convention") {
    const double w = 1.7;
    const CMatrix sm = sigma_minus();
    const CMatrix H = w * sm.adjoint() * sm;
    CMatrix eg = CMatrix::Zero(2, 2);
    eg(1, 0) = 1.0;  // |e><g|
    const CMatrix d = unvec(hamiltonian_superop(H) * vec(eg));
    CHECK(std::abs(d(1, 0) - cplx(0.0, -w)) < 1e-15);  // d/dt rho_eg = -i w rho_eg
    CMatrix Hd = CMatrix::Zero(3, 3), rd = CMatrix::Zero(3, 3);
    Hd.diagonal() << 1.0, 2.0, -3.0;
    rd.diagonal() << 0.2, 0.3, 0.5;
    CHECK(maxabs(unvec(hamiltonian_superop(Hd) * vec(rd))) == 0.0);
    std::mt19937 rng(5);
    const auto a = testutil::random_matrix(4, rng);
    const CMatrix Hh = a + a.adjoint();
    CHECK(std::abs(unvec(hamiltonian_superop(Hh) * vec(testutil::random_matrix(4, rng))).trace()) < 1e-12);
    CHECK_THROWS_AS(hamiltonian_superop(a), InvalidArgument);
  }

  TEST_CASE("trace preservation and hermiticity of assembled generators") {
    std::mt19937 rng(6);
    for (int n = 2; n <= 6; ++n) {
      const auto a = testutil::random_matrix(n, rng);
      SuperOp L = hamiltonian_superop(a + a.adjoint());
      for (int c = 0; c < 3; ++c) L += dissipator(testutil::random_matrix(n, rng), 0.5 + c);
      const auto rho = testutil::random_density(n, rng);
      const CMatrix d = unvec(L * vec(rho));
      CHECK(std::abs(d.trace()) < 1e-12 * n * n);
      CHECK(maxabs(d - d.adjoint()) < 1e-12 * n * n);
    }
  }
}
