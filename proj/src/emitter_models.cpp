#include "filterstat/emitter_models.hpp"

#include "filterstat/errors.hpp"

namespace filterstat {
namespace {

CMatrix ket_bra(int n, int i, int j) {
  CMatrix m = CMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

enum QD { G = 0, BX1 = 1, BX2 = 2, DX1 = 3, DX2 = 4, XX = 5 };

}  // namespace

void EmitterModel::validate() const {
  if (dim < 1) throw InvalidArgument("model: dimension must be positive");
  if (hamiltonian.rows() != dim || hamiltonian.cols() != dim)
    throw InvalidArgument("model: hamiltonian has wrong size");
  if (!is_hermitian(hamiltonian)) throw InvalidArgument("model: hamiltonian is not hermitian");
  if (emission_minus.rows() != dim || emission_minus.cols() != dim)
    throw InvalidArgument("model: emission operator has wrong size");
  for (const auto& c : channels) {
    if (c.op.rows() != dim || c.op.cols() != dim)
      throw InvalidArgument("model: channel '" + c.label + "' has wrong size");
    if (!(c.rate >= 0.0)) throw InvalidArgument("model: channel '" + c.label + "' has negative rate");
  }
}

QDParams QDParams::with_spin_flip_time(double chi, double gamma_sp, double gamma_ph,
                                       double tau_S_ns, double pump_P) {
  QDParams p;
  p.chi = chi;
  p.gamma_sp = gamma_sp;
  p.gamma_ph = gamma_ph;
  const double gS = tau_S_ns > 0.0 ? unit_convert(tau_S_ns, Unit::Nanosecond, Unit::MicroeV) : 0.0;
  p.gamma_S_e = 0.5 * gS;
  p.gamma_S_h = 0.5 * gS;
  p.pump_P = pump_P;
  return p;
}

EmitterModel resonance_fluorescence(const RFParams& p) {
  if (!(p.omega_R >= 0.0 && p.gamma_sp >= 0.0 && p.gamma_ph >= 0.0))
    throw InvalidArgument("resonance_fluorescence: parameters must be nonnegative");
  EmitterModel m;
  m.dim = 2;
  m.labels = {"g", "e"};
  const CMatrix sm = ket_bra(2, 0, 1);
  const CMatrix sp = sm.adjoint();
  CMatrix sz = CMatrix::Zero(2, 2);
  sz(0, 0) = -1.0;
  sz(1, 1) = 1.0;
  m.hamiltonian = p.omega_R * (sp + sm);
  m.channels = {{sm, p.gamma_sp, "spontaneous"}, {sz, 0.5 * p.gamma_ph, "dephasing"}};
  m.emission_minus = sm;
  m.validate();
  return m;
}

EmitterModel neutral_qd(const QDParams& p) {
  for (double v : {p.chi, p.gamma_sp, p.gamma_ph, p.gamma_S_e, p.gamma_S_h, p.pump_P})
    if (!(v >= 0.0)) throw InvalidArgument("neutral_qd: parameters must be nonnegative");
  const int n = 6;
  EmitterModel m;
  m.dim = n;
  m.labels = {"G", "BX1", "BX2", "DX1", "DX2", "XX"};
  m.hamiltonian = -p.chi * ket_bra(n, XX, XX);

  auto add = [&](CMatrix op, double rate, std::string label) {
    m.channels.push_back({std::move(op), rate, std::move(label)});
  };
  add(ket_bra(n, G, BX1), p.gamma_sp, "sp BX1->G");
  add(ket_bra(n, G, BX2), p.gamma_sp, "sp BX2->G");
  add(ket_bra(n, BX2, XX), p.gamma_sp, "sp XX->BX2");
  add(ket_bra(n, BX1, XX), p.gamma_sp, "sp XX->BX1");

  add(ket_bra(n, DX1, BX1), p.gamma_S_e, "e-flip BX1->DX1");
  add(ket_bra(n, BX1, DX1), p.gamma_S_e, "e-flip DX1->BX1");
  add(ket_bra(n, DX2, BX2), p.gamma_S_e, "e-flip BX2->DX2");
  add(ket_bra(n, BX2, DX2), p.gamma_S_e, "e-flip DX2->BX2");
  add(ket_bra(n, DX2, BX1), p.gamma_S_h, "h-flip BX1->DX2");
  add(ket_bra(n, BX1, DX2), p.gamma_S_h, "h-flip DX2->BX1");
  add(ket_bra(n, DX1, BX2), p.gamma_S_h, "h-flip BX2->DX1");
  add(ket_bra(n, BX2, DX1), p.gamma_S_h, "h-flip DX1->BX2");

  CMatrix ntot = CMatrix::Zero(n, n);
  for (int s : {BX1, BX2, DX1, DX2}) ntot(s, s) = 1.0;
  ntot(XX, XX) = 2.0;
  add(ntot, p.gamma_ph, "dephasing");

  add(ket_bra(n, BX1, G) + ket_bra(n, XX, BX2), p.pump_P, "pump BX1");
  add(ket_bra(n, BX2, G) + ket_bra(n, XX, BX1), p.pump_P, "pump BX2");
  add(ket_bra(n, DX1, G) + ket_bra(n, XX, DX2), p.pump_P, "pump DX1");
  add(ket_bra(n, DX2, G) + ket_bra(n, XX, DX1), p.pump_P, "pump DX2");

  m.emission_minus = ket_bra(n, G, BX1) + ket_bra(n, G, BX2) + ket_bra(n, BX2, XX) +
                     ket_bra(n, BX1, XX);
  m.validate();
  return m;
}

Unit parse_unit(const std::string& s) {
  if (s == "ueV" || s == "μeV" || s == "microeV") return Unit::MicroeV;
  if (s == "ns") return Unit::Nanosecond;
  if (s == "1/ns" || s == "ns^-1" || s == "ns-1") return Unit::PerNanosecond;
  throw InvalidArgument("unknown unit '" + s + "'");
}

double unit_convert(double value, Unit from, Unit to) {
  if (value == 0.0 || from == to) return value;
  // everything through energy in ueV
  double e = 0.0;
  switch (from) {
    case Unit::MicroeV: e = value; break;
    case Unit::Nanosecond: e = kHbarMicroeVns / value; break;
    case Unit::PerNanosecond: e = kHbarMicroeVns * value; break;
  }
  switch (to) {
    case Unit::MicroeV: return e;
    case Unit::Nanosecond: return kHbarMicroeVns / e;
    case Unit::PerNanosecond: return e / kHbarMicroeVns;
  }
  return e;
}

}  // namespace filterstat
