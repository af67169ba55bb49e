#pragma once

#include "lvem/core.hpp"

#include <Eigen/Sparse>
#include <unsupported/Eigen/MatrixFunctions>

#include <numeric>
#include <vector>

namespace lvem {

using SparseOp = Eigen::SparseMatrix<Complex>;

namespace detail {

class DisjointSets {
public:
  explicit DisjointSets(Eigen::Index n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), Eigen::Index{0});
  }
  Eigen::Index find(Eigen::Index i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }
  void unite(Eigen::Index a, Eigen::Index b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

private:
  std::vector<Eigen::Index> parent_;
};

}  // namespace detail

/// Index sets of the connected components of the sparsity graph of X.
/// Components are listed in order of their smallest index, each sorted.
inline std::vector<std::vector<Eigen::Index>> connected_blocks(const SparseOp& x) {
  detail::DisjointSets sets(x.rows());
  for (Eigen::Index k = 0; k < x.outerSize(); ++k)
    for (SparseOp::InnerIterator it(x, k); it; ++it)
      if (it.value() != Complex(0.0)) sets.unite(it.row(), it.col());

  std::vector<Eigen::Index> root_slot(static_cast<std::size_t>(x.rows()), -1);
  std::vector<std::vector<Eigen::Index>> blocks;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Eigen::Index r = sets.find(i);
    if (root_slot[r] < 0) {
      root_slot[r] = static_cast<Eigen::Index>(blocks.size());
      blocks.emplace_back();
    }
    blocks[root_slot[r]].push_back(i);
  }
  return blocks;
}

/// exp(scale * X) for sparse X whose connected components are small enough to
/// exponentiate densely.  Each block uses Pade scaling-and-squaring.
inline SparseOp block_expm(const SparseOp& x, Complex scale = 1.0) {
  if (x.rows() != x.cols()) throw InvalidInput("block_expm needs a square matrix");
  const auto blocks = connected_blocks(x);
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(static_cast<std::size_t>(x.rows()));
  std::vector<Eigen::Index> local(static_cast<std::size_t>(x.rows()), -1);

  for (const auto& blk : blocks) {
    const auto n = static_cast<Eigen::Index>(blk.size());
    for (Eigen::Index a = 0; a < n; ++a) local[blk[a]] = a;
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (SparseOp::InnerIterator it(x, blk[a]); it; ++it)
        if (it.value() != Complex(0.0)) dense(local[it.row()], a) = scale * it.value();
    const Eigen::MatrixXcd e = dense.exp();
    if (!e.allFinite()) throw ConvergenceError("matrix exponential produced non-finite entries");
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < n; ++r)
        if (e(r, c) != Complex(0.0)) trip.emplace_back(blk[r], blk[c], e(r, c));
  }
  SparseOp out(x.rows(), x.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

/// exp(scale * X) v by a truncated Taylor series.  The mean diagonal is
/// shifted out first, then the interval is cut into steps of 1-norm at most
/// four, which bounds the growth of intermediate terms by about e^4.
inline Eigen::VectorXcd expm_action(const SparseOp& x, const Eigen::VectorXcd& v, Complex scale = 1.0) {
  if (x.rows() != x.cols() || x.cols() != v.size()) throw InvalidInput("expm_action dimension mismatch");
  const Eigen::Index n = x.rows();
  const Complex mu = n > 0 ? x.diagonal().sum() / static_cast<double>(n) : Complex(0.0);
  SparseOp shifted = x;
  if (mu != Complex(0.0)) {
    SparseOp eye(n, n);
    eye.setIdentity();
    shifted = x - mu * eye;
  }

  double norm1 = 0.0;
  for (Eigen::Index k = 0; k < shifted.outerSize(); ++k) {
    double col = 0.0;
    for (SparseOp::InnerIterator it(shifted, k); it; ++it) col += std::abs(it.value());
    norm1 = std::max(norm1, col);
  }
  constexpr double kStepNorm = 4.0;
  const int steps = std::max(1, static_cast<int>(std::ceil(norm1 * std::abs(scale) / kStepNorm)));
  const Complex h = scale / static_cast<double>(steps);
  const Complex phase = std::exp(h * mu);

  Eigen::VectorXcd out = v;
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXcd term = out;
    for (int k = 1;; ++k) {
      term = (h / static_cast<double>(k)) * (shifted * term);
      out += term;
      const double t = term.lpNorm<Eigen::Infinity>();
      if (t == 0.0 || (k > 4 && t <= 1e-17 * out.lpNorm<Eigen::Infinity>())) break;
      if (k > 200) throw ConvergenceError("Taylor series for the exponential action did not settle");
    }
    out *= phase;
  }
  if (!out.allFinite()) throw ConvergenceError("exponential action produced non-finite entries");
  return out;
}

}  // namespace lvem
