#pragma once

#include <optional>
#include <vector>

#include "filterstat/emitter_models.hpp"
#include "filterstat/operator_algebra.hpp"

namespace filterstat {

struct DecomposeOptions {
  double ztol_rel = 1e-9;   // zero-eigenvalue tolerance relative to max|Omega|
  double cond_max = 1e10;   // DegenerateSpectrum above this basis condition
  bool balance = true;      // diagonal similarity balancing per block
};

struct LiouvillianSpectrum {
  Eigen::Index dim = 0;
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd right_vectors;  // columns v_j
  Eigen::MatrixXcd left_vectors;   // rows u_j
  Eigen::VectorXcd norms;          // u_j . v_j
  std::optional<Eigen::Index> steady_index;
  int zero_modes = 0;
  double basis_condition = 1.0;
  std::vector<int> block;          // invariant-subspace id per eigen index
  /// j -> index of the conjugate eigenvalue (a bijection).
  std::vector<Eigen::Index> conjugate;

  double scale() const;  // max |Omega|
};

SuperOp assemble(const EmitterModel& model);

/// Full eigendecomposition. L is first split into its irreducible diagonal blocks
/// (exact zero pattern); each block is balanced and diagonalized separately.
LiouvillianSpectrum decompose(const SuperOp& L, const DecomposeOptions& opt = {});

CMatrix steady_state(const LiouvillianSpectrum& spec);

struct SpectralComponent {
  cplx omega;
  CMatrix component;
};

SpectralComponent project(const LiouvillianSpectrum& spec, const CMatrix& O, Eigen::Index j);

/// All expansion coefficients (u_j . vec(O)) / (u_j . v_j).
Eigen::VectorXcd coefficients(const LiouvillianSpectrum& spec, const CMatrix& O);

}  // namespace filterstat
