#include "filterstat/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "filterstat/errors.hpp"

namespace filterstat {
namespace {

using std::numbers::pi;
constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr cplx I1(0.0, 1.0);

// Weideman rational approximation of w(z) in the upper half plane, N = 40 terms.
struct Weideman {
  static constexpr int N = 40;
  double L;
  std::array<double, N> a;  // a[n-1] multiplies Z^(n-1)

  Weideman() {
    const int M = 2 * N, M2 = 2 * M;
    L = std::sqrt(N / std::sqrt(2.0));
    std::vector<double> f(M2, 0.0);
    for (int k = -M + 1; k <= M - 1; ++k) {
      const double t = L * std::tan(k * pi / M / 2.0);
      f[k + M] = std::exp(-t * t) * (L * L + t * t);
    }
    // a_n = Re(DFT(fftshift(f)))_n / M2
    for (int n = 1; n <= N; ++n) {
      double acc = 0.0;
      for (int m = 0; m < M2; ++m) {
        const double fs = f[(m + M2 / 2) % M2];
        acc += fs * std::cos(2.0 * pi * n * m / M2);
      }
      a[n - 1] = acc / M2;
    }
  }

  cplx operator()(cplx z) const {
    const cplx d = L - I1 * z;
    const cplx Z = (L + I1 * z) / d;
    cplx p = a[N - 1];
    for (int n = N - 2; n >= 0; --n) p = p * Z + a[n];
    return 2.0 * p / (d * d) + kInvSqrtPi / d;
  }
};

const Weideman& weideman() {
  static const Weideman w;
  return w;
}

cplx w_upper(cplx z) {
  if (std::abs(z) > 8.0) {
    cplx r = 0.0;
    for (int k = 20; k >= 1; --k) r = (0.5 * k) / (z - r);
    return I1 * kInvSqrtPi / (z - r);
  }
  return weideman()(z);
}

cplx erf_series(cplx z) {
  const cplx z2 = z * z;
  cplx term = z, sum = z;
  for (int n = 1; n < 40; ++n) {
    term *= -z2 / static_cast<double>(n);
    const cplx c = term / static_cast<double>(2 * n + 1);
    sum += c;
    if (std::abs(c) < 1e-17 * std::abs(sum)) break;
  }
  return 2.0 * kInvSqrtPi * sum;
}

// B_{2k}/(2k+1)!, k = 1..11
constexpr std::array<double, 11> kBern = {
    1.0 / 6.0 / 6.0,
    -1.0 / 30.0 / 120.0,
    1.0 / 42.0 / 5040.0,
    -1.0 / 30.0 / 362880.0,
    5.0 / 66.0 / 39916800.0,
    -691.0 / 2730.0 / 6227020800.0,
    7.0 / 6.0 / 1307674368000.0,
    -3617.0 / 510.0 / 355687428096000.0,
    43867.0 / 798.0 / 121645100408832000.0,
    -174611.0 / 330.0 / 51090942171709440000.0,
    854513.0 / 138.0 / 25852016738884976640000.0};

// Li2 via the Bernoulli series in u = -ln(1-z), valid for |u| well inside 2*pi.
cplx li2_series(cplx u) {
  const cplx u2 = u * u;
  cplx s = kBern.back();
  for (int k = static_cast<int>(kBern.size()) - 2; k >= 0; --k) s = s * u2 + kBern[k];
  return u - 0.25 * u2 + u * u2 * s;
}

cplx checked_log(cplx x, const char* what) {
  if (x.imag() == 0.0 && x.real() <= 1e-14)
    throw ArgumentOnCut(std::string("phi: logarithm argument on cut (") + what + ")");
  return std::log(x);
}

}  // namespace

cplx faddeeva_w(cplx z) {
  if (z.imag() >= 0.0) return w_upper(z);
  // w(z) = 2 exp(-z^2) - w(-z)
  return 2.0 * std::exp(-z * z) - w_upper(-z);
}

cplx erfcx_c(cplx z) { return faddeeva_w(I1 * z); }

cplx erf_c(cplx z) {
  if (std::abs(z) < 0.5) return erf_series(z);
  if (z.real() < 0.0) return -erf_c(-z);
  return 1.0 - std::exp(-z * z) * erfcx_c(z);
}

cplx dilog(cplx z) {
  constexpr double pi2_6 = pi * pi / 6.0;
  const double x = z.real(), y = z.imag();
  if (y == 0.0) {
    if (x == 1.0) return pi2_6;
    if (x > 1.0) {
      const double lx = std::log(x);
      const double re = pi * pi / 3.0 - 0.5 * lx * lx - dilog(cplx(1.0 / x, 0.0)).real();
      return {re, std::signbit(y) ? -pi * lx : pi * lx};
    }
  }
  const double nz = std::norm(z);
  if (nz < 1e-32) return z;
  if (x <= 0.5) {
    if (nz > 1.0) {
      const cplx lz = std::log(-z);
      return -li2_series(-std::log(1.0 - 1.0 / z)) - 0.5 * lz * lz - pi2_6;
    }
    return li2_series(-std::log(1.0 - z));
  }
  if (nz <= 2.0 * x) {
    // reflection: Li2(z) = -Li2(1-z) + pi^2/6 - ln z ln(1-z)
    const cplx u = -std::log(z);
    return -li2_series(u) + u * std::log(1.0 - z) + pi2_6;
  }
  const cplx lz = std::log(-z);
  return -li2_series(-std::log(1.0 - 1.0 / z)) - 0.5 * lz * lz - pi2_6;
}

cplx phi(cplx a, cplx b, cplx z) {
  if (std::abs(b - a) <= 1e-9 * (1.0 + std::abs(a))) {
    // b -> a: same derivative, different additive constant (callers only use differences)
    const cplx l = checked_log(z - a, "z-a");
    return 0.5 * l * l - l * checked_log(-a, "-a");
  }
  // w = 1 - v computed from v so ln(v) and Li2(w) always sit on matching sides of their cuts
  const cplx v = (z - b) / (a - b);
  const cplx w = 1.0 - v;
  if (w.imag() == 0.0 && w.real() >= 1.0 - 1e-14)
    throw ArgumentOnCut("phi: dilogarithm argument on cut");
  return -checked_log(z - b, "z-b") * checked_log(-a, "-a") +
         checked_log(z - a, "z-a") * checked_log(v, "(z-b)/(a-b)") + dilog(w);
}

cplx phi_limit(cplx a, cplx b, double t, double toward) {
  try {
    return phi(a, b, cplx(t, 0.0));
  } catch (const ArgumentOnCut&) {
  }
  const double dir = toward > t ? 1.0 : -1.0;
  double h = 1e-13 * std::max(1.0, std::abs(t));
  for (int i = 0; i < 4; ++i, h *= 100.0) {
    try {
      return phi(a, b, cplx(t + dir * h, 0.0));
    } catch (const ArgumentOnCut&) {
    }
  }
  throw ArgumentOnCut("phi: no off-cut point next to the path end");
}

QuadResult capital_phi(cplx a, cplx b, cplx c, double z_end, const Quadrature& q) {
  const double lo = std::min(0.0, z_end), hi = std::max(0.0, z_end);
  const double len = hi - lo;
  auto inside = [&](double t) { return t > lo && t < hi; };
  std::vector<double> pts{0.0};
  // a, b, c close to the path are (near-)singular points of the integrand; cluster
  // panel edges geometrically around them so bisection does not have to get there
  for (cplx p : {a, b, c}) {
    const double x = std::clamp(p.real(), lo, hi);
    const double dist = std::hypot(p.real() - x, p.imag());
    if (!(dist < 0.1 * len)) continue;
    if (inside(x)) pts.push_back(x);
    for (double r = std::max(dist, 1e-15 * len); r < len; r *= 4.0) {
      if (inside(x - r)) pts.push_back(x - r);
      if (inside(x + r)) pts.push_back(x + r);
    }
  }
  // where (t-b)/(a-b) crosses the negative real axis, phi jumps across its cuts
  const cplx e = a - b;
  double tcut = NAN;
  if (e.imag() != 0.0 && a.imag() / e.imag() > 1.0) {
    tcut = b.real() - b.imag() * e.real() / e.imag();
    if (inside(tcut)) pts.push_back(tcut);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (z_end < 0.0) std::reverse(pts.begin(), pts.end());
  pts.erase(std::remove(pts.begin(), pts.end(), 0.0), pts.end());
  pts.insert(pts.begin(), 0.0);
  pts.push_back(z_end);

  // subtract phi(Re c)/(t-c) when c hugs the path and phi is continuous there
  const double xc = c.real();
  const bool subtract = xc >= lo && xc <= hi && std::abs(c.imag()) < 0.1 * len && xc != tcut;
  const cplx phic = subtract ? phi_limit(a, b, xc, 0.5 * (lo + hi)) : cplx(0.0);
  // nodes within rounding of tcut can land on the cut; take the value from their own side
  auto integrand = [&](double t) {
    const double away = std::isnan(tcut) ? 0.5 * (lo + hi) : (t > tcut ? t + 1.0 : t - 1.0);
    return (phi_limit(a, b, t, away) - phic) / (t - c);
  };
  const cplx added = subtract ? phic * (std::log(z_end - c) - std::log(-c)) : cplx(0.0);
  // tolerance relative to the whole result, not just the subtracted remainder
  Quadrature qq = q;
  qq.abs_tol = std::max(q.abs_tol, q.rel_tol * std::abs(added));
  // singular points sitting on a path end converge slowly (log powers over many
  // decades); extend the budget with the number of decades below 1e-6*len
  for (cplx p : {a, b, c}) {
    const double d = std::min(std::abs(p), std::abs(p - z_end));
    const double decades = std::log10(len / std::max(d, 1e-300 * len));
    if (decades > 6.0) qq.max_subdivisions += static_cast<int>(500.0 * std::min(decades - 6.0, 12.0));
  }
  QuadResult r = integrate(integrand, pts, qq);
  r.value += added;
  return r;
}

}  // namespace filterstat
