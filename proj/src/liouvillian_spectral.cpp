#include "filterstat/liouvillian_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "filterstat/errors.hpp"

namespace filterstat {
namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

// Parlett-Reinsch balancing with radix 2; returns d such that diag(d)^-1 A diag(d) is balanced.
Eigen::VectorXd balance(Eigen::MatrixXcd& A) {
  const auto n = A.rows();
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  bool done = false;
  for (int sweep = 0; sweep < 200 && !done; ++sweep) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(A(j, i));
        r += std::abs(A(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      const double s = c + r;
      double f = 1.0;
      while (c < 0.5 * r) { c *= 2.0; r *= 0.5; f *= 2.0; }
      while (c >= 2.0 * r) { c *= 0.5; r *= 2.0; f *= 0.5; }
      if (c + r < 0.95 * s) {
        done = false;
        d(i) *= f;
        A.row(i) /= f;
        A.col(i) *= f;
      }
    }
  }
  return d;
}

}  // namespace

double LiouvillianSpectrum::scale() const {
  return eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
}

SuperOp assemble(const EmitterModel& model) {
  model.validate();
  SuperOp L = hamiltonian_superop(model.hamiltonian);
  for (const auto& c : model.channels)
    if (c.rate > 0.0) L += dissipator(c.op, c.rate);
  return L;
}

LiouvillianSpectrum decompose(const SuperOp& L, const DecomposeOptions& opt) {
  const auto M = L.rows();
  if (L.cols() != M) throw DimensionError("decompose: L must be square");
  if (!L.allFinite()) throw InvalidArgument("decompose: L has non-finite entries");

  UnionFind uf(static_cast<int>(M));
  for (Eigen::Index i = 0; i < M; ++i)
    for (Eigen::Index j = 0; j < M; ++j)
      if (L(i, j) != cplx(0.0)) uf.unite(static_cast<int>(i), static_cast<int>(j));
  std::vector<std::vector<Eigen::Index>> blocks;
  {
    std::vector<int> id(M, -1);
    for (Eigen::Index i = 0; i < M; ++i) {
      const int r = uf.find(static_cast<int>(i));
      if (id[r] < 0) {
        id[r] = static_cast<int>(blocks.size());
        blocks.emplace_back();
      }
      blocks[id[r]].push_back(i);
    }
  }

  // unsorted results
  Eigen::VectorXcd ev(M);
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(M, M), U = Eigen::MatrixXcd::Zero(M, M);
  std::vector<int> blk(M);
  double cond = 1.0;
  Eigen::Index pos = 0;
  for (size_t b = 0; b < blocks.size(); ++b) {
    const auto& idx = blocks[b];
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd A(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) A(i, j) = L(idx[i], idx[j]);
    Eigen::VectorXd d = opt.balance ? balance(A) : Eigen::VectorXd::Ones(n);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, true);
    if (es.info() != Eigen::Success) throw DegenerateSpectrum("decompose: eigensolver failed");
    Eigen::MatrixXcd Vb = es.eigenvectors();
    for (Eigen::Index j = 0; j < n; ++j) Vb.col(j).normalize();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Vb);
    const auto& sv = svd.singularValues();
    const double c = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1) : INFINITY;
    cond = std::max(cond, c);
    if (!(c <= opt.cond_max))
      throw DegenerateSpectrum(
          "decompose: eigenvector basis is (near-)defective (condition " + std::to_string(c) +
          "); nudge a rate or frequency slightly to lift the degeneracy");
    Eigen::MatrixXcd Ub = Vb.fullPivLu().inverse();
    for (Eigen::Index j = 0; j < n; ++j) {
      ev(pos + j) = es.eigenvalues()(j);
      blk[pos + j] = static_cast<int>(b);
      for (Eigen::Index i = 0; i < n; ++i) {
        V(idx[i], pos + j) = d(i) * Vb(i, j);
        U(pos + j, idx[i]) = Ub(j, i) / d(i);
      }
    }
    pos += n;
  }

  std::vector<Eigen::Index> order(M);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (ev(a).real() != ev(b).real()) return ev(a).real() > ev(b).real();
    return ev(a).imag() > ev(b).imag();
  });

  LiouvillianSpectrum s;
  s.dim = M;
  s.eigenvalues.resize(M);
  s.right_vectors.resize(M, M);
  s.left_vectors.resize(M, M);
  s.block.resize(M);
  for (Eigen::Index k = 0; k < M; ++k) {
    s.eigenvalues(k) = ev(order[k]);
    s.right_vectors.col(k) = V.col(order[k]);
    s.left_vectors.row(k) = U.row(order[k]);
    s.block[k] = blk[order[k]];
  }
  s.norms = (s.left_vectors.cwiseProduct(s.right_vectors.transpose())).rowwise().sum();
  s.basis_condition = cond;

  const double ztol = opt.ztol_rel * s.scale();
  Eigen::Index zi = -1;
  for (Eigen::Index k = 0; k < M; ++k)
    if (std::abs(s.eigenvalues(k)) <= ztol) {
      ++s.zero_modes;
      zi = k;
    }
  if (s.zero_modes == 1) {
    s.steady_index = zi;
    s.eigenvalues(zi) = 0.0;
  }

  // greedy conjugate pairing
  s.conjugate.assign(M, -1);
  std::vector<char> used(M, 0);
  for (Eigen::Index j = 0; j < M; ++j) {
    if (s.conjugate[j] >= 0) continue;
    const cplx target = std::conj(s.eigenvalues(j));
    Eigen::Index best = -1;
    double bd = INFINITY;
    for (Eigen::Index k = 0; k < M; ++k) {
      if (used[k]) continue;
      const double dd = std::abs(s.eigenvalues(k) - target);
      if (dd < bd) { bd = dd; best = k; }
    }
    if (best < 0) best = j;
    s.conjugate[j] = best;
    s.conjugate[best] = j;
    used[j] = used[best] = 1;
  }
  return s;
}

CMatrix steady_state(const LiouvillianSpectrum& spec) {
  if (!spec.steady_index)
    throw NonPhysicalSteadyState("steady_state: no unique zero eigenvalue (" +
                                 std::to_string(spec.zero_modes) + " zero modes)");
  CMatrix rho = unvec(spec.right_vectors.col(*spec.steady_index));
  const cplx tr = rho.trace();
  if (std::abs(tr) <= 1e-12 * rho.norm()) throw NonPhysicalSteadyState("steady_state: trace vanishes");
  rho /= tr;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-10)
    throw NonPhysicalSteadyState("steady_state: negative eigenvalue " +
                                 std::to_string(es.eigenvalues().minCoeff()));
  return rho;
}

Eigen::VectorXcd coefficients(const LiouvillianSpectrum& spec, const CMatrix& O) {
  if (O.size() != spec.dim) throw DimensionError("coefficients: operator dimension mismatch");
  return (spec.left_vectors * vec(O)).cwiseQuotient(spec.norms);
}

SpectralComponent project(const LiouvillianSpectrum& spec, const CMatrix& O, Eigen::Index j) {
  if (j < 0 || j >= spec.dim) throw InvalidArgument("project: eigen-index out of range");
  if (O.size() != spec.dim) throw DimensionError("project: operator dimension mismatch");
  const cplx c = (spec.left_vectors.row(j) * vec(O))(0) / spec.norms(j);
  return {spec.eigenvalues(j), unvec(spec.right_vectors.col(j) * c)};
}

}  // namespace filterstat
