#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace filterstat {

struct Quadrature {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 2000;
};

struct QuadResult {
  std::complex<double> value;
  double error = 0.0;
  int subdivisions = 0;
};

using ComplexIntegrand = std::function<std::complex<double>(double)>;

/// Globally adaptive Gauss-Kronrod (10/21) from points.front() to points.back()
/// (reversed orientation gives the negated integral).
/// Interior points are initial panel boundaries. Throws QuadratureFailure when the
/// subdivision budget runs out before the tolerance is met.
QuadResult integrate(const ComplexIntegrand& f, std::vector<double> points, const Quadrature& q);

/// Integral over [0, inf) of an integrand with a Gaussian envelope (center, width).
/// Truncated at center + 12*width.
QuadResult quad_semi_infinite(const ComplexIntegrand& f, double center, double width,
                              const Quadrature& q);

}  // namespace filterstat
