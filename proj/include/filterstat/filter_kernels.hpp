#pragma once

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>

#include "filterstat/quadrature.hpp"
#include "filterstat/special_functions.hpp"

namespace filterstat {

enum class FilterKind { Lorentzian, Gaussian, Rectangular };

std::string to_string(FilterKind k);
FilterKind parse_filter_kind(const std::string& s);

struct FilterSpec {
  FilterKind kind = FilterKind::Lorentzian;
  double omega_F = 0.0;
  double lambda = 1.0;
  void validate() const;
};

struct KernelValue {
  cplx value;
  double error_estimate = 0.0;
};

/// Time-ordering regions of the g2 numerator; the other three are their mirrors.
enum class Region { i = 0, ii = 1, iii = 2 };
inline constexpr std::array<Region, 3> kRegions{Region::i, Region::ii, Region::iii};
std::string to_string(Region k);

using OmegaTriple = std::array<cplx, 3>;

struct KernelOptions {
  Quadrature quad{};
  double epsilon_branch = 1e-12;  // +i0 offsets, in units of lambda
};

struct GaussianCoefficients {
  cplx A, B, C;
};
struct RectCoefficients {
  cplx alpha, beta, gamma;
};

/// Both in units of lambda.
GaussianCoefficients gaussian_coefficients(const FilterSpec& f, Region k, const OmegaTriple& om);
RectCoefficients rect_coefficients(const FilterSpec& f, Region k, const OmegaTriple& om,
                                   double epsilon_branch);

KernelValue s_kernel(const FilterSpec& f, cplx omega, const KernelOptions& opt = {});
KernelValue z_kernel(const FilterSpec& f, Region k, const OmegaTriple& om,
                     const KernelOptions& opt = {});

cplx filter_time_response(const FilterSpec& f, double tau);

struct NumericOptions {
  double rel_tol = 1e-11;
  double abs_tol = 1e-16;
  double rect_window = 4e4;  // |tau|*lambda truncation for the rectangular filter, error ~ 1/window
};

/// Brute-force time-domain evaluation: the ordered integrals are written as a
/// cascade of linear ODEs and integrated over the (truncated) support of f.
KernelValue s_kernel_numeric(const FilterSpec& f, cplx omega, const NumericOptions& opt = {});
KernelValue z_kernel_numeric(const FilterSpec& f, Region k, const OmegaTriple& om,
                             const NumericOptions& opt = {});

/// Memo of kernel values keyed by filter and eigen-index triple; safe for
/// concurrent use.
class KernelCache {
 public:
  struct Key {
    FilterKind kind;
    double omega_F, lambda;
    int region;  // -1 for s
    int j1, j2, j3;
    auto operator<=>(const Key&) const = default;
  };
  std::optional<cplx> find(const Key& k) const;
  void insert(const Key& k, cplx v);
  size_t size() const;

 private:
  mutable std::shared_mutex mutex_;
  std::map<Key, cplx> map_;
};

}  // namespace filterstat
