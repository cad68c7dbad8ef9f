#pragma once

#include <cstdint>
#include <vector>

#include "bco/errors.hpp"

namespace bco {

/// Dense n-by-n matrix of doubles, row major. Used for probability heatmaps,
/// predicted rate matrices, and edge scores. Symmetry is a convention of the
/// producers (set_sym), not enforced on raw writes.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n, double fill = 0.0) : n_(n), data_(static_cast<std::size_t>(n) * n, fill) {
    if (n <= 0) throw InvalidArgument("matrix dimension must be positive");
  }

  int n() const { return n_; }

  double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }

  /// Writes both triangles.
  void set_sym(int i, int j, double v) {
    (*this)(i, j) = v;
    (*this)(j, i) = v;
  }

 private:
  int n_ = 0;
  std::vector<double> data_;
};

using ProbHeatmap = SquareMatrix;
using RateMatrix = SquareMatrix;

/// Symmetric binary adjacency matrix with a zero diagonal; the diffusion
/// state. Mutation goes through set_sym so both triangles stay mirrored.
class EdgeMatrix {
 public:
  EdgeMatrix() = default;
  explicit EdgeMatrix(int n) : n_(n), data_(static_cast<std::size_t>(n) * n, 0) {
    if (n <= 0) throw InvalidArgument("matrix dimension must be positive");
  }

  int n() const { return n_; }

  std::uint8_t operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * n_ + j]; }

  void set_sym(int i, int j, bool active) {
    if (i == j) throw InvalidArgument("edge matrix diagonal is fixed at zero");
    data_[static_cast<std::size_t>(i) * n_ + j] = active ? 1 : 0;
    data_[static_cast<std::size_t>(j) * n_ + i] = active ? 1 : 0;
  }

  /// Number of active undirected edges (each counted once).
  int active_edges() const {
    int count = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) count += (*this)(i, j);
    return count;
  }

  bool subset_of(const EdgeMatrix& other) const {
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if ((*this)(i, j) > other(i, j)) return false;
    return true;
  }

  /// Element-wise maximum; the minimal repair that makes `other` a superset.
  static EdgeMatrix max_of(const EdgeMatrix& a, const EdgeMatrix& b) {
    EdgeMatrix out(a.n());
    for (int i = 0; i < a.n(); ++i)
      for (int j = i + 1; j < a.n(); ++j) out.set_sym(i, j, a(i, j) || b(i, j));
    return out;
  }

  bool operator==(const EdgeMatrix& other) const { return n_ == other.n_ && data_ == other.data_; }

 private:
  int n_ = 0;
  std::vector<std::uint8_t> data_;
};

}  // namespace bco
