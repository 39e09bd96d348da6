#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "bcop/basis.hpp"
#include "bcop/rng.hpp"

namespace bcop {

enum class Family { independence, min, w2, fgm, clayton };

std::string_view family_name(Family f);
/// Throws std::invalid_argument on an unknown name.
Family parse_family(std::string_view name);

/// Identifies where a copula (or grid, or sample) came from.
struct CopulaDescriptor {
  std::string family;  // a family name, "empirical", or "bernstein"
  double theta = 0.0;
  int dim = 0;

  std::string label() const;
  friend bool operator==(const CopulaDescriptor&, const CopulaDescriptor&) = default;
};

/// An n-variate copula given by callables.
///
/// Partial derivatives and an exact sampler of the copula measure are
/// optional. Axes are 0-based throughout the library.
class Copula {
 public:
  using EvalFn = std::function<double(std::span<const double>)>;
  using PartialFn = std::function<double(int, std::span<const double>)>;
  using SamplerFn = std::function<void(Rng&, std::span<double>)>;

  Copula(CopulaDescriptor desc, EvalFn eval, PartialFn partial = {}, SamplerFn sampler = {});

  int dim() const { return desc_.dim; }
  const CopulaDescriptor& descriptor() const { return desc_; }

  double operator()(std::span<const double> x) const;

  bool has_partials() const { return static_cast<bool>(partial_); }
  /// dC/dx_axis at x. Throws std::logic_error when no partials are available.
  double partial(int axis, std::span<const double> x) const;

  bool has_sampler() const { return static_cast<bool>(sampler_); }
  /// Writes one draw from the copula measure into `out` (length dim()).
  void sample(Rng& rng, std::span<double> out) const;

 private:
  CopulaDescriptor desc_;
  EvalFn eval_;
  PartialFn partial_;
  SamplerFn sampler_;
};

/// Built-in families. All carry analytic partials (right derivatives at kinks
/// of min and w2) and exact samplers.
///
///   independence  prod x_k
///   min           min_k x_k
///   w2            max(x_1 + x_2 - 1, 0), n = 2 only
///   fgm(theta)    prod x_k (1 + theta prod (1 - x_k)), theta in [-1, 1]
///   clayton(theta) (sum x_k^-theta - n + 1)^(-1/theta), theta > 0
Copula make_family(Family family, int n, double theta = 0.0);

/// Delta_v g(p) = g(p + v) - g(p). Throws std::domain_error if p or p + v
/// leaves the unit cube.
double delta_along(const std::function<double(std::span<const double>)>& g,
                   std::span<const double> v, std::span<const double> p);

struct Box {
  UnitPoint lower;
  UnitPoint upper;
};

/// C-volume of a box: the 2^n-term inclusion-exclusion sum, i.e. the nested
/// differences Delta_{v_1} ... Delta_{v_n} C(lower) with v_k = (upper_k - lower_k) e_k.
double c_volume(const std::function<double(std::span<const double>)>& c, const Box& box);
double c_volume(const Copula& c, const Box& box);

}  // namespace bcop
