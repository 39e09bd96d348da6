#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bcop/basis.hpp"

namespace bcop {

/// Hard cap on dimension; tensor storage grows as (m+1)^n.
inline constexpr int kMaxDimension = 6;

/// Throws std::invalid_argument unless 1 <= n <= kMaxDimension.
void check_dimension(int n);

std::size_t ipow(std::size_t base, int exp);

// Dense tensors with the same extent on every axis, row-major (last axis
// fastest).
std::size_t ravel(std::span<const int> index, int extent);
void unravel(std::size_t flat, int extent, std::span<int> index);

/// Full contraction sum_i T[i] prod_k weights[k][i_k]. Each weight vector has
/// `extent` entries and there is one per axis. Cost O(extent^n).
double contract(std::span<const double> tensor, int extent,
                std::span<const std::vector<double>> weights);

/// Forward difference along one axis of a tensor of shape `shape`:
/// out[.., j, ..] = in[.., j+1, ..] - in[.., j, ..]. The axis extent drops by one.
std::vector<double> difference_along(std::span<const double> tensor, std::span<const int> shape,
                                     int axis);

/// Row-major set of n-dimensional points stored contiguously.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(int dim) : dim_(dim) {}
  PointSet(int dim, std::vector<double> coords);

  int dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return coords_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<double> operator[](std::size_t i) {
    return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }

  void push_back(std::span<const double> point);
  void resize(std::size_t count) { coords_.resize(count * dim_); }

  const std::vector<double>& coords() const { return coords_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  int dim_ = 0;
  std::vector<double> coords_;
};

/// All points (i_1/res, ..., i_n/res), i_k in {0..res}, last coordinate fastest.
PointSet unit_lattice(int n, int res);

/// Interior lattice (i/(res+1)), i in {1..res}, on every axis.
PointSet interior_lattice(int n, int res);

}  // namespace bcop
