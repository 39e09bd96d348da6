#include "bcop/copula.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bcop/tensor.hpp"

namespace bcop {

std::string_view family_name(Family f) {
  switch (f) {
    case Family::independence: return "independence";
    case Family::min: return "min";
    case Family::w2: return "w2";
    case Family::fgm: return "fgm";
    case Family::clayton: return "clayton";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::independence, Family::min, Family::w2, Family::fgm, Family::clayton})
    if (family_name(f) == name) return f;
  throw std::invalid_argument("unknown copula family '" + std::string(name) + "'");
}

std::string CopulaDescriptor::label() const {
  std::ostringstream os;
  os << family;
  if (family == "fgm" || family == "clayton") os << "(" << theta << ")";
  os << " n=" << dim;
  return os.str();
}

Copula::Copula(CopulaDescriptor desc, EvalFn eval, PartialFn partial, SamplerFn sampler)
    : desc_(std::move(desc)),
      eval_(std::move(eval)),
      partial_(std::move(partial)),
      sampler_(std::move(sampler)) {
  check_dimension(desc_.dim);
  if (!eval_) throw std::invalid_argument("Copula: missing evaluation function");
}

double Copula::operator()(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim())
    throw std::invalid_argument("Copula: point dimension does not match copula dimension");
  return eval_(x);
}

double Copula::partial(int axis, std::span<const double> x) const {
  if (!partial_) throw std::logic_error(desc_.label() + " has no analytic partial derivatives");
  if (axis < 0 || axis >= dim()) throw std::out_of_range("Copula::partial: axis out of range");
  if (static_cast<int>(x.size()) != dim())
    throw std::invalid_argument("Copula::partial: dimension mismatch");
  return partial_(axis, x);
}

void Copula::sample(Rng& rng, std::span<double> out) const {
  if (!sampler_) throw std::logic_error(desc_.label() + " has no exact sampler");
  if (static_cast<int>(out.size()) != dim())
    throw std::invalid_argument("Copula::sample: output dimension mismatch");
  sampler_(rng, out);
}

namespace {

Copula independence(int n) {
  auto eval = [](std::span<const double> x) {
    double p = 1.0;
    for (double v : x) p *= v;
    return p;
  };
  auto partial = [](int axis, std::span<const double> x) {
    double p = 1.0;
    for (std::size_t r = 0; r < x.size(); ++r)
      if (static_cast<int>(r) != axis) p *= x[r];
    return p;
  };
  auto sampler = [](Rng& rng, std::span<double> out) {
    for (double& v : out) v = uniform_open(rng);
  };
  return Copula({"independence", 0.0, n}, eval, partial, sampler);
}

Copula upper_frechet(int n) {
  auto eval = [](std::span<const double> x) { return *std::min_element(x.begin(), x.end()); };
  // Right derivative: 1 only where x_axis is the strict minimum.
  auto partial = [](int axis, std::span<const double> x) {
    for (std::size_t r = 0; r < x.size(); ++r)
      if (static_cast<int>(r) != axis && x[r] <= x[axis]) return 0.0;
    return 1.0;
  };
  auto sampler = [](Rng& rng, std::span<double> out) {
    const double u = uniform_open(rng);
    std::fill(out.begin(), out.end(), u);
  };
  return Copula({"min", 0.0, n}, eval, partial, sampler);
}

Copula lower_frechet2() {
  auto eval = [](std::span<const double> x) { return std::max(x[0] + x[1] - 1.0, 0.0); };
  auto partial = [](int, std::span<const double> x) { return x[0] + x[1] >= 1.0 ? 1.0 : 0.0; };
  auto sampler = [](Rng& rng, std::span<double> out) {
    const double u = uniform_open(rng);
    out[0] = u;
    out[1] = 1.0 - u;
  };
  return Copula({"w2", 0.0, 2}, eval, partial, sampler);
}

Copula fgm(int n, double theta) {
  if (!(theta >= -1.0 && theta <= 1.0))
    throw std::invalid_argument("fgm: theta must lie in [-1, 1]");
  auto eval = [theta](std::span<const double> x) {
    double prod = 1.0;
    double co = 1.0;
    for (double v : x) {
      prod *= v;
      co *= 1.0 - v;
    }
    return prod * (1.0 + theta * co);
  };
  auto partial = [theta](int axis, std::span<const double> x) {
    double prod = 1.0;
    double co = 1.0;
    for (std::size_t r = 0; r < x.size(); ++r) {
      if (static_cast<int>(r) == axis) continue;
      prod *= x[r];
      co *= 1.0 - x[r];
    }
    return prod * (1.0 + theta * (1.0 - 2.0 * x[axis]) * co);
  };
  Copula::SamplerFn sampler;
  if (n == 2) {
    // Invert v -> v (1 + a (1 - v)) = w, a = theta (1 - 2u), on [0,1].
    sampler = [theta](Rng& rng, std::span<double> out) {
      const double u = uniform_open(rng);
      const double w = uniform_open(rng);
      const double a = theta * (1.0 - 2.0 * u);
      const double b = 1.0 + a;
      out[0] = u;
      out[1] = 2.0 * w / (b + std::sqrt(b * b - 4.0 * a * w));
    };
  } else {
    // Density 1 + theta prod(1 - 2x_k) is bounded by 1 + |theta|.
    sampler = [theta](Rng& rng, std::span<double> out) {
      const double bound = 1.0 + std::abs(theta);
      for (;;) {
        double co = 1.0;
        for (double& v : out) {
          v = uniform_open(rng);
          co *= 1.0 - 2.0 * v;
        }
        if (uniform_open(rng) * bound <= 1.0 + theta * co) return;
      }
    };
  }
  return Copula({"fgm", theta, n}, eval, partial, sampler);
}

Copula clayton(int n, double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw std::invalid_argument("clayton: theta must be positive");
  auto eval = [theta](std::span<const double> x) {
    double s = 0.0;
    for (double v : x) {
      if (v <= 0.0) return 0.0;
      s += std::pow(v, -theta);
    }
    s -= static_cast<double>(x.size()) - 1.0;
    return std::pow(s, -1.0 / theta);
  };
  auto partial = [theta](int axis, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t r = 0; r < x.size(); ++r) {
      if (x[r] <= 0.0) return static_cast<int>(r) == axis ? 1.0 : 0.0;
      s += std::pow(x[r], -theta);
    }
    s -= static_cast<double>(x.size()) - 1.0;
    return std::pow(x[axis], -theta - 1.0) * std::pow(s, -1.0 / theta - 1.0);
  };
  // Marshall-Olkin: gamma frailty V ~ Gamma(1/theta), U_k = (1 + E_k / V)^(-1/theta).
  auto sampler = [theta](Rng& rng, std::span<double> out) {
    std::gamma_distribution<double> frailty(1.0 / theta, 1.0);
    const double v = frailty(rng);
    for (double& u : out) {
      const double e = -std::log(uniform_open(rng));
      u = std::pow(1.0 + e / v, -1.0 / theta);
    }
  };
  return Copula({"clayton", theta, n}, eval, partial, sampler);
}

}  // namespace

Copula make_family(Family family, int n, double theta) {
  check_dimension(n);
  if (n < 2) throw std::invalid_argument("copula families need dimension >= 2");
  switch (family) {
    case Family::independence: return independence(n);
    case Family::min: return upper_frechet(n);
    case Family::w2:
      if (n != 2) throw std::invalid_argument("w2 is only a copula in dimension 2");
      return lower_frechet2();
    case Family::fgm: return fgm(n, theta);
    case Family::clayton: return clayton(n, theta);
  }
  throw std::invalid_argument("unknown copula family");
}

namespace {
bool inside_cube(std::span<const double> p) {
  return std::all_of(p.begin(), p.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
}
}  // namespace

double delta_along(const std::function<double(std::span<const double>)>& g,
                   std::span<const double> v, std::span<const double> p) {
  if (v.size() != p.size()) throw std::invalid_argument("delta_along: dimension mismatch");
  UnitPoint shifted(p.begin(), p.end());
  for (std::size_t k = 0; k < p.size(); ++k) shifted[k] += v[k];
  if (!inside_cube(p) || !inside_cube(shifted))
    throw std::domain_error("delta_along: p and p + v must lie in the unit cube");
  return g(shifted) - g(p);
}

double c_volume(const std::function<double(std::span<const double>)>& c, const Box& box) {
  const std::size_t n = box.lower.size();
  if (box.upper.size() != n || n == 0) throw std::invalid_argument("c_volume: malformed box");
  for (std::size_t k = 0; k < n; ++k)
    if (!(box.lower[k] <= box.upper[k]))
      throw std::invalid_argument("c_volume: box lower corner exceeds upper corner");
  if (!inside_cube(box.lower) || !inside_cube(box.upper))
    throw std::domain_error("c_volume: box must lie in the unit cube");

  UnitPoint vertex(n);
  double vol = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    int lower_count = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const bool up = (mask >> k) & 1U;
      vertex[k] = up ? box.upper[k] : box.lower[k];
      lower_count += up ? 0 : 1;
    }
    const double value = c(vertex);
    vol += (lower_count % 2 == 0) ? value : -value;
  }
  return vol;
}

double c_volume(const Copula& c, const Box& box) {
  if (static_cast<int>(box.lower.size()) != c.dim())
    throw std::invalid_argument("c_volume: box dimension does not match copula");
  return c_volume([&c](std::span<const double> x) { return c(x); }, box);
}

}  // namespace bcop
