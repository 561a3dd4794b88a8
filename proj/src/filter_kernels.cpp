#include "filterstat/filter_kernels.hpp"

#include <cmath>
#include <mutex>
#include <numbers>

#include "filterstat/errors.hpp"

namespace filterstat {
namespace {

using std::numbers::pi;
constexpr cplx I1(0.0, 1.0);
constexpr double kSqrtPi = 1.7724538509055160273;

cplx lorentz_z(const FilterSpec& f, Region k, const OmegaTriple& om) {
  const double l = f.lambda;
  const cplx iw = I1 * f.omega_F;
  switch (k) {
    case Region::i:
      return l / (l - iw - om[0]) * l / (2.0 * l - om[1]) * l / (3.0 * l + iw - om[2]);
    case Region::ii:
      return l / (l + iw - om[0]) * l / (2.0 * l - om[1]) * l / (3.0 * l + iw - om[2]);
    case Region::iii:
      return l / (l + iw - om[0]) * l / (2.0 * l + 2.0 * iw - om[1]) * l / (3.0 * l + iw - om[2]);
  }
  return 0.0;
}

// (2/pi) * exp(-2s^2 + P s) * erfcx(s + C) * G(s; k) with
// G(s; k) = int_{-s}^{s} exp(-r^2 + k r) dr, every exponential folded so no
// intermediate overflows. Requires Re k >= 0, Re P + Re k <= 0.
cplx gauss_integrand(double s, cplx P, cplx C, cplx k) {
  const cplx e0 = -2.0 * s * s + P * s;
  const cplx ex = erfcx_c(s + C);
  cplx g;
  if (s >= 0.5 * k.real()) {
    g = kSqrtPi * std::exp(e0 + 0.25 * k * k) -
        0.5 * kSqrtPi *
            (std::exp(e0 - s * s + k * s) * erfcx_c(s - 0.5 * k) +
             std::exp(e0 - s * s - k * s) * erfcx_c(s + 0.5 * k));
  } else {
    g = 0.5 * kSqrtPi *
        (std::exp(e0 - s * s + k * s) * erfcx_c(0.5 * k - s) -
         std::exp(e0 - s * s - k * s) * erfcx_c(s + 0.5 * k));
  }
  return (2.0 / pi) * ex * g;
}

// The integration by parts behind the rectangular form needs phi(a,b;t) continuous on
// the real path from 0 to z_end. Principal-branch phi jumps where v = (t-b)/(a-b)
// crosses the negative real axis (the ln(v) and Li2(1-v) cuts). Removing the jump J
// from phi beyond t* changes phi(z_end)*L - Phi by J*(ln(-c) - ln(t*-c)).
cplx cut_crossing(cplx a, cplx b, cplx c, double z_end) {
  const cplx e = a - b;
  if (e.imag() == 0.0) return 0.0;
  const double x = a.imag() / e.imag();  // 1 - v at the crossing, free of cancellation
  if (!(x > 1.0)) return 0.0;
  const double ts = b.real() - b.imag() * e.real() / e.imag();
  const double lo = std::min(0.0, z_end), hi = std::max(0.0, z_end);
  const double tol = 1e-12 * (hi - lo);
  if (!(ts > lo - tol && ts < hi + tol)) return 0.0;
  if (std::abs(ts) <= tol) return 0.0;  // at the start: only shifts phi by a constant
  if (std::abs(ts - z_end) <= tol) {
    // within rounding of the end: follow the side phi(z_end) was actually evaluated on
    const double s0 = ((0.0 - b) / e).imag(), s1 = ((z_end - b) / e).imag();
    if (s1 == 0.0 || (s0 > 0.0) == (s1 > 0.0)) return 0.0;
  }
  cplx J = 2.0 * pi * I1 * (std::log(ts - a) - std::log(x));
  if ((1.0 / e).imag() * (z_end > 0.0 ? 1.0 : -1.0) < 0.0) J = -J;
  return J * (std::log(-c) - std::log(ts - c));
}

}  // namespace

std::string to_string(FilterKind k) {
  switch (k) {
    case FilterKind::Lorentzian: return "lorentzian";
    case FilterKind::Gaussian: return "gaussian";
    case FilterKind::Rectangular: return "rectangular";
  }
  return "?";
}

FilterKind parse_filter_kind(const std::string& s) {
  if (s == "lorentzian" || s == "L") return FilterKind::Lorentzian;
  if (s == "gaussian" || s == "G") return FilterKind::Gaussian;
  if (s == "rectangular" || s == "R") return FilterKind::Rectangular;
  throw InvalidArgument("unknown filter kind '" + s + "'");
}

std::string to_string(Region k) {
  switch (k) {
    case Region::i: return "i";
    case Region::ii: return "ii";
    case Region::iii: return "iii";
  }
  return "?";
}

void FilterSpec::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InvalidArgument("filter: lambda must be positive");
  if (!std::isfinite(omega_F)) throw InvalidArgument("filter: omega_F must be finite");
}

GaussianCoefficients gaussian_coefficients(const FilterSpec& f, Region k, const OmegaTriple& om) {
  const double l2 = 2.0 * f.lambda;
  const cplx iw2 = 2.0 * I1 * f.omega_F;
  const cplx &O1 = om[0], &O2 = om[1], &O3 = om[2];
  switch (k) {
    case Region::i: return {(O1 - O2 + O3) / l2, (-iw2 - O1 + O3) / l2, -O2 / l2};
    case Region::ii: return {(-iw2 + O1 - O2 + O3) / l2, (-O1 + O3) / l2, -O2 / l2};
    case Region::iii: return {(O1 - O2 + O3) / l2, (-O1 + O3) / l2, (iw2 - O2) / l2};
  }
  return {};
}

RectCoefficients rect_coefficients(const FilterSpec& f, Region k, const OmegaTriple& om,
                                   double eps) {
  const double l = f.lambda;
  const double w = f.omega_F / l;
  const cplx ie = I1 * eps;
  const cplx O1 = om[0] / l, O2 = om[1] / l, O3 = om[2] / l;
  RectCoefficients c;
  c.alpha = -w - I1 * O3 + ie;
  switch (k) {
    case Region::i:
      c.beta = -I1 * O2 + ie;
      c.gamma = w + 1.0 - I1 * O1 + ie;
      break;
    case Region::ii:
      c.beta = -I1 * O2 + ie;
      c.gamma = -w + 1.0 - I1 * O1 + ie;
      break;
    case Region::iii:
      c.beta = -2.0 * w - I1 * O2 + ie;
      c.gamma = -w + 1.0 - I1 * O1 + ie;
      break;
  }
  return c;
}

KernelValue s_kernel(const FilterSpec& f, cplx omega, const KernelOptions& opt) {
  f.validate();
  const double l = f.lambda;
  switch (f.kind) {
    case FilterKind::Lorentzian:
      return {0.5 * l / (I1 * f.omega_F + l - omega), 0.0};
    case FilterKind::Gaussian: {
      const cplx y = (omega - I1 * f.omega_F) / (std::sqrt(2.0) * l);
      return {0.5 * erfcx_c(-y), 0.0};
    }
    case FilterKind::Rectangular: {
      const double w = f.omega_F / l;
      const cplx o = omega / l;
      const cplx ie = I1 * opt.epsilon_branch;
      const cplx v = (std::log(w + 1.0 + I1 * o - ie) - std::log(w - 1.0 + I1 * o - ie)) / (2.0 * pi * I1);
      return {v, 0.0};
    }
  }
  return {};
}

KernelValue z_kernel(const FilterSpec& f, Region k, const OmegaTriple& om, const KernelOptions& opt) {
  f.validate();
  switch (f.kind) {
    case FilterKind::Lorentzian:
      return {lorentz_z(f, k, om), 0.0};
    case FilterKind::Gaussian: {
      const auto g = gaussian_coefficients(f, k, om);
      const cplx P = 2.0 * (g.A - g.C);
      cplx kap = -2.0 * g.B;
      if (kap.real() < 0.0) kap = -kap;  // G(s; k) is even in k
      const cplx C = g.C;
      auto fn = [&](double s) { return gauss_integrand(s, P, C, kap); };
      // e^{Ps} oscillates over ~|Im P| radians per unit s; scale the budget with it
      Quadrature q = opt.quad;
      q.max_subdivisions += static_cast<int>(4.0 * (std::abs(P.imag()) + std::abs(kap.imag())));
      const auto r = quad_semi_infinite(fn, 0.0, 1.0 / std::sqrt(2.0), q);
      return {r.value, r.error};
    }
    case FilterKind::Rectangular: {
      const auto c = rect_coefficients(f, k, om, opt.epsilon_branch);
      const cplx ap = c.alpha + 1.0, am = c.alpha - 1.0;
      const cplx bp = c.beta + 2.0, bm = c.beta - 2.0;
      const cplx g = c.gamma;
      const auto P1 = capital_phi(ap, bp, g, 2.0, opt.quad);
      const auto P2 = capital_phi(am, bm, g - 2.0, -2.0, opt.quad);
      cplx t = (phi_limit(ap, bp, 2.0, 0.0) + phi_limit(am, bm, -2.0, 0.0)) * (std::log(2.0 - g) - std::log(-g)) -
               P1.value + P2.value;
      t += cut_crossing(ap, bp, g, 2.0) - cut_crossing(am, bm, g - 2.0, -2.0);
      const double pref = 1.0 / (2.0 * pi * pi * pi);
      return {I1 * pref * t, pref * (P1.error + P2.error)};
    }
  }
  return {};
}

cplx filter_time_response(const FilterSpec& f, double tau) {
  const double l = f.lambda;
  const cplx ph = std::exp(-I1 * (f.omega_F * tau));
  switch (f.kind) {
    case FilterKind::Lorentzian:
      return tau < 0.0 ? cplx(0.0) : l * std::exp(-l * tau) * ph;
    case FilterKind::Gaussian:
      return l / kSqrtPi * std::exp(-(l * tau) * (l * tau)) * ph;
    case FilterKind::Rectangular: {
      const double x = l * tau;
      const double sinc = std::abs(x) < 1e-4 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
      return l / pi * sinc * ph;
    }
  }
  return 0.0;
}

std::optional<cplx> KernelCache::find(const Key& k) const {
  std::shared_lock lock(mutex_);
  auto it = map_.find(k);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

void KernelCache::insert(const Key& k, cplx v) {
  std::unique_lock lock(mutex_);
  map_.emplace(k, v);
}

size_t KernelCache::size() const {
  std::shared_lock lock(mutex_);
  return map_.size();
}

}  // namespace filterstat
