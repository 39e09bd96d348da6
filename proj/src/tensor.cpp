#include "bcop/tensor.hpp"

#include <stdexcept>
#include <string>

namespace bcop {

void check_dimension(int n) {
  if (n < 1 || n > kMaxDimension)
    throw std::invalid_argument("dimension must be in [1, " + std::to_string(kMaxDimension) +
                                "], got " + std::to_string(n));
}

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int k = 0; k < exp; ++k) r *= base;
  return r;
}

std::size_t ravel(std::span<const int> index, int extent) {
  std::size_t flat = 0;
  for (int c : index) flat = flat * extent + static_cast<std::size_t>(c);
  return flat;
}

void unravel(std::size_t flat, int extent, std::span<int> index) {
  for (std::size_t k = index.size(); k-- > 0;) {
    index[k] = static_cast<int>(flat % extent);
    flat /= extent;
  }
}

double contract(std::span<const double> tensor, int extent,
                std::span<const std::vector<double>> weights) {
  const int n = static_cast<int>(weights.size());
  if (tensor.size() != ipow(extent, n))
    throw std::invalid_argument("contract: tensor size does not match extent^n");

  // Contract the fastest axis first; each pass shrinks the buffer by `extent`.
  std::size_t outer = tensor.size() / extent;
  std::vector<double> buf(outer);
  const auto& wl = weights[n - 1];
  for (std::size_t j = 0; j < outer; ++j) {
    const double* row = tensor.data() + j * extent;
    double s = 0.0;
    for (int i = 0; i < extent; ++i) s += row[i] * wl[i];
    buf[j] = s;
  }
  for (int axis = n - 2; axis >= 0; --axis) {
    const auto& w = weights[axis];
    outer /= extent;
    for (std::size_t j = 0; j < outer; ++j) {
      const double* row = buf.data() + j * extent;
      double s = 0.0;
      for (int i = 0; i < extent; ++i) s += row[i] * w[i];
      buf[j] = s;
    }
  }
  return buf[0];
}

std::vector<double> difference_along(std::span<const double> tensor, std::span<const int> shape,
                                     int axis) {
  std::size_t inner = 1;
  for (std::size_t k = axis + 1; k < shape.size(); ++k) inner *= shape[k];
  std::size_t outer = 1;
  for (int k = 0; k < axis; ++k) outer *= shape[k];
  const std::size_t len = shape[axis];
  if (len < 2) throw std::invalid_argument("difference_along: axis extent must be >= 2");

  std::vector<double> out(outer * (len - 1) * inner);
  for (std::size_t o = 0; o < outer; ++o) {
    const double* src = tensor.data() + o * len * inner;
    double* dst = out.data() + o * (len - 1) * inner;
    for (std::size_t j = 0; j + 1 < len; ++j)
      for (std::size_t r = 0; r < inner; ++r)
        dst[j * inner + r] = src[(j + 1) * inner + r] - src[j * inner + r];
  }
  return out;
}

PointSet::PointSet(int dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
  if (dim_ < 1 || coords_.size() % dim_ != 0)
    throw std::invalid_argument("PointSet: coordinate count is not a multiple of the dimension");
}

void PointSet::push_back(std::span<const double> point) {
  if (static_cast<int>(point.size()) != dim_)
    throw std::invalid_argument("PointSet::push_back: dimension mismatch");
  coords_.insert(coords_.end(), point.begin(), point.end());
}

PointSet unit_lattice(int n, int res) {
  if (res < 1) throw std::invalid_argument("unit_lattice: resolution must be >= 1");
  const std::size_t count = ipow(res + 1, n);
  PointSet pts(n);
  pts.resize(count);
  std::vector<int> idx(n);
  for (std::size_t f = 0; f < count; ++f) {
    unravel(f, res + 1, idx);
    auto p = pts[f];
    for (int k = 0; k < n; ++k) p[k] = static_cast<double>(idx[k]) / res;
  }
  return pts;
}

PointSet interior_lattice(int n, int res) {
  if (res < 1) throw std::invalid_argument("interior_lattice: resolution must be >= 1");
  const std::size_t count = ipow(res, n);
  PointSet pts(n);
  pts.resize(count);
  std::vector<int> idx(n);
  for (std::size_t f = 0; f < count; ++f) {
    unravel(f, res, idx);
    auto p = pts[f];
    for (int k = 0; k < n; ++k) p[k] = static_cast<double>(idx[k] + 1) / (res + 1);
  }
  return pts;
}

}  // namespace bcop
