#include "filterstat/operator_algebra.hpp"

#include <cmath>

#include "filterstat/errors.hpp"

namespace filterstat {

VecOp vec(const CMatrix& O) {
  const auto n = O.rows();
  const auto m = O.cols();
  VecOp v(n * m);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) v(i * m + j) = O(i, j);
  return v;
}

CMatrix unvec(const VecOp& v) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (n * n != v.size()) throw DimensionError("unvec: length is not a perfect square");
  CMatrix O(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) O(i, j) = v(i * n + j);
  return O;
}

CMatrix kron(const CMatrix& A, const CMatrix& B) {
  CMatrix K(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

bool is_hermitian(const CMatrix& M, double atol) {
  if (M.rows() != M.cols()) return false;
  return (M - M.adjoint()).cwiseAbs().maxCoeff() <= atol;
}

SuperOp left_right_superop(const CMatrix& A, const CMatrix& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
    throw DimensionError("left_right_superop: operators must be square with equal dimension");
  return kron(A, B.transpose());
}

SuperOp dissipator(const CMatrix& A, double rate) {
  if (!(rate >= 0.0)) throw InvalidArgument("dissipator: negative rate");
  if (A.rows() != A.cols()) throw DimensionError("dissipator: operator must be square");
  const auto n = A.rows();
  const CMatrix I = CMatrix::Identity(n, n);
  const CMatrix AdA = A.adjoint() * A;
  return rate * (left_right_superop(A, A.adjoint()) - 0.5 * left_right_superop(AdA, I) -
                 0.5 * left_right_superop(I, AdA));
}

SuperOp hamiltonian_superop(const CMatrix& H, double atol) {
  if (H.rows() != H.cols()) throw DimensionError("hamiltonian_superop: H must be square");
  if (!is_hermitian(H, atol)) throw InvalidArgument("hamiltonian_superop: H is not hermitian");
  const CMatrix I = CMatrix::Identity(H.rows(), H.cols());
  const cplx i(0.0, 1.0);
  return i * (left_right_superop(I, H) - left_right_superop(H, I));
}

}  // namespace filterstat
