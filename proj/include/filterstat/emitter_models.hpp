#pragma once

#include <string>
#include <vector>

#include "filterstat/operator_algebra.hpp"

namespace filterstat {

inline constexpr double kHbarMicroeVns = 0.6582119569;

struct Channel {
  CMatrix op;
  double rate = 0.0;
  std::string label;
};

struct EmitterModel {
  int dim = 0;
  CMatrix hamiltonian;
  std::vector<Channel> channels;
  CMatrix emission_minus;
  std::string energy_unit = "ueV";
  std::vector<std::string> labels;

  CMatrix emission_plus() const { return emission_minus.adjoint(); }
  /// Throws InvalidArgument on non-hermitian H, negative rates or size mismatch.
  void validate() const;
};

struct RFParams {
  double omega_R = 1.0;
  double gamma_sp = 0.3;
  double gamma_ph = 0.0;
};

struct QDParams {
  double chi = 2000.0;
  double gamma_sp = 0.67;
  double gamma_ph = 20.0;
  double gamma_S_e = 0.0;
  double gamma_S_h = 0.0;
  double pump_P = 0.0;

  /// Equal electron/hole split of the total spin-flip rate 1/tau_S.
  static QDParams with_spin_flip_time(double chi, double gamma_sp, double gamma_ph,
                                      double tau_S_ns, double pump_P);
};

EmitterModel resonance_fluorescence(const RFParams& p);

/// Basis {G, BX1, BX2, DX1, DX2, XX}; frame with omega_X = 0.
EmitterModel neutral_qd(const QDParams& p);

enum class Unit { MicroeV, Nanosecond, PerNanosecond };

Unit parse_unit(const std::string& s);

/// Energies, lifetimes and rates related through hbar (ueV*ns).
double unit_convert(double value, Unit from, Unit to);

}  // namespace filterstat
