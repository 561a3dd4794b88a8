#pragma once

#include <random>

#include "filterstat/operator_algebra.hpp"

namespace testutil {

inline filterstat::CMatrix random_matrix(int n, std::mt19937& rng) {
  std::normal_distribution<double> d;
  filterstat::CMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = {d(rng), d(rng)};
  return m;
}

inline filterstat::CMatrix random_density(int n, std::mt19937& rng) {
  const auto a = random_matrix(n, rng);
  filterstat::CMatrix r = a * a.adjoint();
  return r / r.trace();
}

inline double maxabs(const filterstat::CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testutil
