#include "landmark/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <numbers>
#include <string>

#include "landmark/error.hpp"

namespace landmark {

namespace {

constexpr std::size_t kDensityPoints = 512;
constexpr std::size_t kMinDensitySamples = 50;

double wrap_unit(double t) {
  double w = t - std::floor(t);
  return w >= 1.0 ? 0.0 : w;
}

// Signed difference a - b folded into [-0.5, 0.5).
double wrapped_diff(double a, double b) {
  double d = a - b;
  return d - std::floor(d + 0.5);
}

double circular_mean(std::span<const double> values) {
  double s = 0.0;
  double c = 0.0;
  for (double v : values) {
    s += std::sin(2.0 * std::numbers::pi * v);
    c += std::cos(2.0 * std::numbers::pi * v);
  }
  return wrap_unit(std::atan2(s, c) / (2.0 * std::numbers::pi));
}

// Component values as points on the line: unchanged for open curves,
// unwrapped around the circular mean for closed curves.
std::vector<double> linearized(std::span<const double> values, Topology topology, double center) {
  std::vector<double> out(values.begin(), values.end());
  if (topology == Topology::Closed) {
    for (auto& v : out) v = center + wrapped_diff(v, center);
  }
  return out;
}

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double ref = v[0];
  double mean_shift = 0.0;
  for (double x : v) mean_shift += x - ref;
  mean_shift /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) {
    const double d = (x - ref) - mean_shift;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

std::vector<double> component_values(const PosteriorSampleSet& samples, std::size_t j) {
  std::vector<double> v;
  v.reserve(samples.size());
  for (const auto& s : samples.samples) v.push_back(s.theta.at(j));
  return v;
}

double normal_kernel(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

} // namespace

double sorted_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InputError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

PosteriorSummary summarize(const PosteriorSampleSet& samples) {
  if (samples.samples.empty()) throw InputError("cannot summarize an empty sample set");
  const std::size_t k = samples.samples.front().k();
  for (const auto& s : samples.samples) {
    if (s.k() != k) {
      throw InputError("summary needs a single landmark count; filter the samples by k first");
    }
  }
  PosteriorSummary out;
  out.k = k;
  out.n_samples = samples.size();
  out.accept_rate = samples.accept_rate;

  for (std::size_t j = 0; j < k; ++j) {
    const auto raw = component_values(samples, j);
    ComponentSummary c;
    if (samples.topology == Topology::Closed) {
      const double center = circular_mean(raw);
      auto lin = linearized(raw, samples.topology, center);
      std::sort(lin.begin(), lin.end());
      c.mean = center;
      c.sd = sample_sd(lin);
      c.median = wrap_unit(sorted_quantile(lin, 0.5));
      c.ci_low = wrap_unit(sorted_quantile(lin, 0.025));
      c.ci_high = wrap_unit(sorted_quantile(lin, 0.975));
    } else {
      double shift = 0.0;
      for (double x : raw) shift += x - raw[0];
      c.mean = raw[0] + shift / static_cast<double>(raw.size());
      c.sd = sample_sd(raw);
      auto sorted = raw;
      std::sort(sorted.begin(), sorted.end());
      c.median = sorted_quantile(sorted, 0.5);
      c.ci_low = sorted_quantile(sorted, 0.025);
      c.ci_high = sorted_quantile(sorted, 0.975);
    }
    out.components.push_back(c);
  }

  const auto best = std::max_element(samples.log_post.begin(), samples.log_post.end());
  const auto idx = static_cast<std::size_t>(best - samples.log_post.begin());
  out.map = samples.samples[idx];
  out.map_log_post = *best;
  return out;
}

PosteriorSampleSet filter_k(const PosteriorSampleSet& samples, std::size_t k) {
  PosteriorSampleSet out;
  out.topology = samples.topology;
  out.variable_k = samples.variable_k;
  out.accept_rate = samples.accept_rate;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples.samples[i].k() != k) continue;
    out.samples.push_back(samples.samples[i]);
    out.log_post.push_back(samples.log_post[i]);
    if (i < samples.iteration.size()) out.iteration.push_back(samples.iteration[i]);
    if (i < samples.kappa.size()) out.kappa.push_back(samples.kappa[i]);
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> k_histogram(const PosteriorSampleSet& samples) {
  std::map<std::size_t, std::size_t> counts;
  for (const auto& s : samples.samples) ++counts[s.k()];
  return {counts.begin(), counts.end()};
}

Density marginal_density(const PosteriorSampleSet& samples, std::size_t component) {
  if (samples.size() < kMinDensitySamples) {
    throw InputError("density estimation needs at least " + std::to_string(kMinDensitySamples) +
                     " samples, got " + std::to_string(samples.size()));
  }
  const auto raw = component_values(samples, component);
  const bool closed = samples.topology == Topology::Closed;
  const double center = closed ? circular_mean(raw) : 0.0;
  auto lin = linearized(raw, samples.topology, center);
  std::sort(lin.begin(), lin.end());
  const double n = static_cast<double>(lin.size());
  const double sd = sample_sd(lin);
  const double iqr = sorted_quantile(lin, 0.75) - sorted_quantile(lin, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = sd;
  const double step = 1.0 / static_cast<double>(kDensityPoints - 1);
  const double h = std::max(0.9 * spread * std::pow(n, -0.2), step);

  Density out;
  out.grid.resize(kDensityPoints);
  out.values.assign(kDensityPoints, 0.0);
  for (std::size_t g = 0; g < kDensityPoints; ++g) {
    const double x = static_cast<double>(g) * step;
    out.grid[g] = x;
    double acc = 0.0;
    for (double v : raw) {
      if (closed) {
        for (double w : {-1.0, 0.0, 1.0}) acc += normal_kernel((x - v - w) / h);
      } else {
        acc += normal_kernel((x - v) / h) + normal_kernel((x + v) / h) +
               normal_kernel((x - (2.0 - v)) / h);
      }
    }
    out.values[g] = acc / (n * h);
  }
  double integral = 0.0;
  for (std::size_t g = 0; g + 1 < kDensityPoints; ++g) {
    integral += 0.5 * step * (out.values[g] + out.values[g + 1]);
  }
  if (integral > 0.0) {
    for (auto& v : out.values) v /= integral;
  }
  return out;
}

double average_error_sq(const CurveSample& sample, const PosteriorSampleSet& samples) {
  if (samples.samples.empty()) throw InputError("no retained samples to average");
  double sum = 0.0;
  for (const auto& s : samples.samples) sum += total_error_sq(sample, s);
  return sum / static_cast<double>(samples.size());
}

std::vector<DistanceCriterionPoint> distance_criterion(const CurveSample& sample,
                                                       std::size_t k_lo, std::size_t k_hi,
                                                       const ModelSpec& spec,
                                                       const RwmConfig& rwm) {
  if (k_lo > k_hi) throw InputError("empty k range for the distance criterion");
  if (k_lo < min_landmarks(sample.topology())) {
    throw InputError("k range starts below the minimum landmark count");
  }
  std::vector<std::future<DistanceCriterionPoint>> jobs;
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    RwmConfig cfg = rwm;
    cfg.seed = rwm.seed + (k - k_lo);
    jobs.push_back(std::async(std::launch::async, [&sample, spec, cfg, k] {
      const auto chain = run_chain(std::nullopt, k, sample, spec, cfg);
      return DistanceCriterionPoint{k, average_error_sq(sample, chain), chain.accept_rate};
    }));
  }
  std::vector<DistanceCriterionPoint> out;
  out.reserve(jobs.size());
  for (auto& job : jobs) out.push_back(job.get());
  return out;
}

PlanarCurve extrinsic_mean(const CurveSample& sample) {
  const auto& curves = sample.curves();
  const std::size_t n = curves.front().size();
  for (const auto& c : curves) {
    if (c.size() != n) throw InputError("extrinsic mean needs curves with equal point counts");
  }
  std::vector<Point> pts(n);
  const double inv = 1.0 / static_cast<double>(curves.size());
  for (std::size_t i = 0; i < n; ++i) {
    Point sum;
    for (const auto& c : curves) sum = sum + c[i];
    pts[i] = inv * sum;
  }
  return PlanarCurve(std::move(pts), sample.topology());
}

double effective_sample_size(std::span<const double> chain) {
  const std::size_t n = chain.size();
  if (n < 4) return static_cast<double>(n);
  double mean = 0.0;
  for (double x : chain) mean += x;
  mean /= static_cast<double>(n);
  const auto autocov = [&](std::size_t lag) {
    double acc = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) acc += (chain[i] - mean) * (chain[i + lag] - mean);
    return acc / static_cast<double>(n);
  };
  const double var = autocov(0);
  if (!(var > 0.0)) return static_cast<double>(n);
  double tau = -1.0;
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    const double pair = (autocov(2 * m) + autocov(2 * m + 1)) / var;
    if (!(pair > 0.0)) break;
    tau += 2.0 * pair;
  }
  const double ess = static_cast<double>(n) / std::max(tau, 1e-12);
  return std::min(ess, static_cast<double>(n));
}

} // namespace landmark
