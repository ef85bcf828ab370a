#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "landmark/model.hpp"
#include "landmark/sampler.hpp"

namespace landmark {

struct ComponentSummary {
  double mean = 0.0;
  double median = 0.0;
  double sd = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct PosteriorSummary {
  std::size_t k = 0;
  std::size_t n_samples = 0;
  std::vector<ComponentSummary> components;
  LandmarkConfig map;
  double map_log_post = 0.0;
  double accept_rate = 0.0;
};

/// Linear-interpolation quantile of sorted data (the R type-7 rule).
double sorted_quantile(std::span<const double> sorted, double p);

/// Per-component mean, median, sd and equal-tailed 95% interval, plus the
/// retained sample with the highest log posterior as MAP.
///
/// All samples must share one k. Closed-curve components are summarized on
/// the circle: the mean is the angular mean, and median and interval are
/// taken after unwrapping around it. Align closed-curve samples first.
PosteriorSummary summarize(const PosteriorSampleSet& samples);

/// Samples with exactly k landmarks, in chain order.
PosteriorSampleSet filter_k(const PosteriorSampleSet& samples, std::size_t k);

/// (k, count) pairs in increasing k.
std::vector<std::pair<std::size_t, std::size_t>> k_histogram(const PosteriorSampleSet& samples);

struct Density {
  std::vector<double> grid;
  std::vector<double> values;
};

/// Gaussian kernel density of one component on 512 points of [0,1] with
/// Silverman's bandwidth. Open curves reflect kernels at 0 and 1; closed
/// curves wrap them. The result integrates to 1 under the trapezoid rule.
Density marginal_density(const PosteriorSampleSet& samples, std::size_t component);

struct DistanceCriterionPoint {
  std::size_t k = 0;
  double dk2 = 0.0;
  double accept_rate = 0.0;
};

/// Average summed squared reconstruction error over the retained samples of
/// a fixed-k chain, for each k in [k_lo, k_hi]. Chains for different k run
/// concurrently with seeds rwm.seed + (k - k_lo).
std::vector<DistanceCriterionPoint> distance_criterion(const CurveSample& sample,
                                                       std::size_t k_lo, std::size_t k_hi,
                                                       const ModelSpec& spec,
                                                       const RwmConfig& rwm);

/// Average of the retained samples' total squared reconstruction error.
double average_error_sq(const CurveSample& sample, const PosteriorSampleSet& samples);

/// Pointwise coordinate average of curves sharing a point count.
PlanarCurve extrinsic_mean(const CurveSample& sample);

/// Effective sample size from the initial positive sequence of
/// autocorrelations.
double effective_sample_size(std::span<const double> chain);

} // namespace landmark
