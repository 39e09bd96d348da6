#include "bcop/kemperman.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bcop {

int count_below(std::span<const double> values, double x) {
  return static_cast<int>(std::count_if(values.begin(), values.end(),
                                        [x](double v) { return v < x; }));
}

std::vector<double> order_statistics(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("order_statistics: values are not pairwise distinct");
  return sorted;
}

int cell_index(double x, int m) {
  int k = static_cast<int>(std::ceil(x * m));
  // Settle rounding in x * m against the node values k/m themselves.
  while (k > 1 && x <= static_cast<double>(k - 1) / m) --k;
  while (k < m && x > static_cast<double>(k) / m) ++k;
  return std::clamp(k, 1, m);
}

namespace {

// Fills `row` with m distinct sorted uniforms; `raw` keeps draw order.
void draw_axis(Rng& rng, int m, std::span<double> raw, std::span<double> sorted) {
  for (int attempt = 0; attempt < kRedrawBudget; ++attempt) {
    for (double& v : raw) v = uniform_open(rng);
    std::copy(raw.begin(), raw.end(), sorted.begin());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) return;
  }
  throw std::runtime_error("kemperman draw: tied auxiliary uniforms after " +
                           std::to_string(kRedrawBudget) + " re-draws (m=" +
                           std::to_string(m) + ")");
}

void check_sampler_args(const Copula& c, int m) {
  if (m < 1) throw std::invalid_argument("kemperman draw: degree must be >= 1");
  if (!c.has_sampler())
    throw std::logic_error(c.descriptor().label() + " has no exact sampler");
}

// Core of one draw; writes Y into `y`. `aux` and `sorted` are n*m scratch.
void draw_into(const Copula& c, int m, Rng& rng, std::span<double> base, std::span<double> aux,
               std::span<double> sorted, std::span<int> cell, std::span<double> y) {
  const int n = c.dim();
  c.sample(rng, base);
  for (int r = 0; r < n; ++r)
    draw_axis(rng, m, aux.subspan(r * m, m), sorted.subspan(r * m, m));
  for (int r = 0; r < n; ++r) {
    cell[r] = cell_index(base[r], m);
    y[r] = sorted[r * m + cell[r] - 1];
  }
}

}  // namespace

AuxiliaryDraw kemperman_draw_detailed(const Copula& c, int m, Rng& rng) {
  check_sampler_args(c, m);
  const int n = c.dim();
  AuxiliaryDraw d;
  d.m = m;
  d.base.resize(n);
  d.aux.resize(static_cast<std::size_t>(n) * m);
  d.order_stats.resize(d.aux.size());
  d.cell.resize(n);
  d.y.resize(n);
  draw_into(c, m, rng, d.base, d.aux, d.order_stats, d.cell, d.y);
  return d;
}

UnitPoint kemperman_draw(const Copula& c, int m, const RngState& state) {
  Rng rng = state.engine();
  return kemperman_draw_detailed(c, m, rng).y;
}

namespace {

struct DrawScratch {
  DrawScratch(int n, int m) : base(n), aux(n * m), sorted(n * m), cell(n) {}
  std::vector<double> base, aux, sorted;
  std::vector<int> cell;
};

void draw_indexed(const Copula& c, int m, std::uint64_t seed, std::size_t i, DrawScratch& s,
                  PointSet& out) {
  Rng rng = RngState{seed, i}.engine();
  draw_into(c, m, rng, s.base, s.aux, s.sorted, s.cell, out[i]);
}

SampleBatch empty_batch(const Copula& c, int m, std::size_t count, std::uint64_t seed) {
  check_sampler_args(c, m);
  if (count < 1) throw std::invalid_argument("sample_batch: count must be >= 1");
  SampleBatch batch{c.descriptor(), m, seed, PointSet(c.dim())};
  batch.points.resize(count);
  return batch;
}

}  // namespace

namespace serial {

SampleBatch sample_batch(const Copula& c, int m, std::size_t count, std::uint64_t seed) {
  SampleBatch batch = empty_batch(c, m, count, seed);
  DrawScratch scratch(c.dim(), m);
  for (std::size_t i = 0; i < count; ++i) draw_indexed(c, m, seed, i, scratch, batch.points);
  return batch;
}

std::vector<double> empirical_cdf(const PointSet& samples, const PointSet& at) {
  if (samples.dim() != at.dim()) throw std::invalid_argument("empirical_cdf: dimension mismatch");
  const int n = samples.dim();
  std::vector<double> out(at.size());
  for (std::size_t p = 0; p < at.size(); ++p) {
    const auto x = at[p];
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const auto y = samples[s];
      bool below = true;
      for (int r = 0; r < n && below; ++r) below = y[r] < x[r];
      hits += below ? 1 : 0;
    }
    out[p] = static_cast<double>(hits) / static_cast<double>(samples.size());
  }
  return out;
}

}  // namespace serial

SampleBatch sample_batch(const Copula& c, int m, std::size_t count, std::uint64_t seed) {
  SampleBatch batch = empty_batch(c, m, count, seed);
  const auto total = static_cast<std::int64_t>(count);
  // Exceptions must not cross the parallel region.
  bool failed = false;
  std::string message;
#pragma omp parallel
  {
    DrawScratch scratch(c.dim(), m);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < total; ++i) {
      try {
        draw_indexed(c, m, seed, static_cast<std::size_t>(i), scratch, batch.points);
      } catch (const std::exception& e) {
#pragma omp critical(bcop_sample_error)
        {
          failed = true;
          message = e.what();
        }
      }
    }
  }
  if (failed) throw std::runtime_error(message);
  return batch;
}

std::vector<double> empirical_cdf(const PointSet& samples, const PointSet& at) {
  if (samples.dim() != at.dim()) throw std::invalid_argument("empirical_cdf: dimension mismatch");
  const int n = samples.dim();
  std::vector<double> out(at.size());
  const auto points = static_cast<std::int64_t>(at.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t p = 0; p < points; ++p) {
    const auto x = at[p];
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const auto y = samples[s];
      bool below = true;
      for (int r = 0; r < n && below; ++r) below = y[r] < x[r];
      hits += below ? 1 : 0;
    }
    out[p] = static_cast<double>(hits) / static_cast<double>(samples.size());
  }
  return out;
}

double cdf_tolerance(std::size_t n_samples) {
  return 4.0 * std::sqrt(0.25 / static_cast<double>(n_samples));
}

CdfTestReport cdf_agreement_test(const SampleBatch& batch, const BernsteinCopula& b,
                                 const PointSet& test_points) {
  if (!(batch.source == b.source()) || batch.m != b.degree())
    throw std::invalid_argument("cdf_agreement_test: batch is " + batch.source.label() +
                                " m=" + std::to_string(batch.m) + " but copula is " +
                                b.source().label() + " m=" + std::to_string(b.degree()));
  if (test_points.empty()) throw std::invalid_argument("cdf_agreement_test: no test points");
  if (test_points.dim() != b.dim())
    throw std::invalid_argument("cdf_agreement_test: test point dimension mismatch");

  CdfTestReport report;
  report.test_points = test_points;
  report.n_samples = batch.points.size();
  report.empirical = empirical_cdf(batch.points, test_points);
  report.model = evaluate_points(b, test_points);
  for (std::size_t p = 0; p < test_points.size(); ++p)
    report.max_abs_dev =
        std::max(report.max_abs_dev, std::abs(report.empirical[p] - report.model[p]));
  return report;
}

bool ordstat_count_duality_check(int m, int trials, const RngState& state) {
  if (m < 1) throw std::invalid_argument("duality check: degree must be >= 1");
  if (trials < 1) throw std::invalid_argument("duality check: trials must be >= 1");
  Rng rng = state.engine();
  std::vector<double> raw(m);
  std::vector<double> sorted(m);
  for (int t = 0; t < trials; ++t) {
    draw_axis(rng, m, raw, sorted);
    const double x = uniform_open(rng);
    const int count = count_below(raw, x);
    const auto stats = order_statistics(raw);
    for (int k = 1; k <= m; ++k)
      if ((count >= k) != (stats[k - 1] < x)) return false;
  }
  return true;
}

}  // namespace bcop
