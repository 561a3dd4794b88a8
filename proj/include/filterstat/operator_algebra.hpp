#pragma once

#include <Eigen/Dense>
#include <complex>

namespace filterstat {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using VecOp = Eigen::VectorXcd;
using SuperOp = Eigen::MatrixXcd;

inline constexpr double kHermitianAtol = 1e-10;

/// Row-major stacking: vec(O)[i*N + j] = O(i, j).
VecOp vec(const CMatrix& O);
CMatrix unvec(const VecOp& v);

CMatrix kron(const CMatrix& A, const CMatrix& B);

bool is_hermitian(const CMatrix& M, double atol = kHermitianAtol);

/// Matrix S with S*vec(rho) = vec(A*rho*B).
SuperOp left_right_superop(const CMatrix& A, const CMatrix& B);

/// rho -> rate*(A rho A^+ - 1/2 {A^+A, rho})
SuperOp dissipator(const CMatrix& A, double rate);

/// rho -> i[rho, H]
SuperOp hamiltonian_superop(const CMatrix& H, double atol = kHermitianAtol);

}  // namespace filterstat
