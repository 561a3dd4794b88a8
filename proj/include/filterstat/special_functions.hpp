#pragma once

#include <complex>

#include "filterstat/quadrature.hpp"

namespace filterstat {

using cplx = std::complex<double>;

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
cplx faddeeva_w(cplx z);

/// exp(z^2) erfc(z), finite for |z| up to ~1e8 wherever the true value is.
cplx erfcx_c(cplx z);

cplx erf_c(cplx z);

/// Principal-branch Li2 with cut [1, inf). On the cut the sign of a zero
/// imaginary part selects the side: -0.0 gives the value from below.
cplx dilog(cplx z);

/// phi(a,b;z) = -ln(z-b) ln(-a) + ln(z-a) ln((z-b)/(a-b)) + Li2((z-a)/(b-a)).
/// For b == a (relative 1e-9) the antiderivative ln^2(z-a)/2 - ln(-a) ln(z-a) is
/// returned instead; phi only enters through differences along a path.
/// Throws ArgumentOnCut when any argument lies on a cut without imaginary offset.
cplx phi(cplx a, cplx b, cplx z);

/// phi at real t; when t sits exactly on a cut, the limit taken from the side of `toward`.
cplx phi_limit(cplx a, cplx b, double t, double toward);

/// Integral of phi(a,b;t)/(t-c) for real t from 0 to z_end.
QuadResult capital_phi(cplx a, cplx b, cplx c, double z_end, const Quadrature& q = {});

}  // namespace filterstat
