#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "landmark/curve.hpp"
#include "landmark/reconstruction.hpp"

namespace landmark {

using Rng = std::mt19937_64;

/// Which likelihood the posterior uses. `Constant` drops the data term and
/// turns every sampler into a prior sampler, used for validation runs.
enum class LikelihoodKind { Srvf, Constant };

/// How the summed squared SRVF error enters the likelihood.
///
/// `GridWeighted` multiplies it by the grid spacing, which is the same as
/// differentiating per sample index instead of per unit of t. It keeps the
/// error on the scale of the L2 distance, where the Gamma rate b acts as a
/// floor. `Euclidean` uses the raw sum over the N nodes.
enum class ErrorScale { GridWeighted, Euclidean };

/// Hyperparameters of the landmark model.
///
/// kappa ~ Gamma(a, rate b) is the noise precision and is integrated out;
/// s ~ Dir(alpha 1) is the spacing prior; lambda is the Poisson rate of
/// the landmark-count prior used in variable-k mode.
struct ModelSpec {
  double a = 1.0;
  double b = 0.01;
  double alpha = 1.0;
  double lambda = 1.0;
  std::size_t n_eval = 200;
  Topology topology = Topology::Open;
  LikelihoodKind likelihood = LikelihoodKind::Srvf;
  bool sample_kappa = false;
  ErrorScale error_scale = ErrorScale::GridWeighted;

  void validate() const;
};

/// M preprocessed curves sharing one topology and evaluation grid, with
/// their SRVFs cached.
class CurveSample {
public:
  CurveSample(std::vector<PlanarCurve> curves, std::size_t n_eval);

  std::size_t size() const { return curves_.size(); }
  Topology topology() const { return grid_.topology(); }
  const EvaluationGrid& grid() const { return grid_; }
  const std::vector<PlanarCurve>& curves() const { return curves_; }
  const std::vector<Srvf>& srvfs() const { return srvfs_; }

private:
  std::vector<PlanarCurve> curves_;
  EvaluationGrid grid_;
  std::vector<Srvf> srvfs_;
};

/// Preprocessing applied to raw input: unit length, N samples at uniform
/// arc length.
PlanarCurve preprocess_curve(const PlanarCurve& raw, std::size_t n_eval);

/// Configurations with a gap below this are given zero likelihood.
double min_gap(std::size_t n_eval);

/// Summed squared reconstruction error over all curves, added in curve order.
double total_error_sq(const CurveSample& sample, const LandmarkConfig& cfg);

/// Total error D as it enters the likelihood, scaled per spec.error_scale.
double model_error(const CurveSample& sample, const LandmarkConfig& cfg, const ModelSpec& spec);

double log_prior_spacing(const SpacingVector& s, const ModelSpec& spec);

/// Shifted-Poisson log-pmf of the landmark count.
double log_prior_k(std::size_t k, const ModelSpec& spec);

/// Closed-form log marginal likelihood given the (scaled) total error D.
double log_marginal_from_error(double total_error, std::size_t n_eval, std::size_t n_curves,
                               const ModelSpec& spec);

double log_marginal_likelihood(const CurveSample& sample, const LandmarkConfig& cfg,
                               const ModelSpec& spec);

/// Unnormalized log posterior. Invalid configurations give -inf.
///
/// In variable-k mode the landmark-count prior is added, and closed curves
/// get the extra log k that turns the labeled-start density into the
/// density of a sorted configuration.
double log_posterior(const CurveSample& sample, const LandmarkConfig& cfg, const ModelSpec& spec,
                     bool variable_k = false);

/// Draw from the full conditional of kappa, Gamma(a + NM, rate b + D).
double draw_kappa(double total_error, std::size_t n_eval, std::size_t n_curves,
                  const ModelSpec& spec, Rng& rng);

/// s ~ Dir(alpha 1) of dimension p.
std::vector<double> draw_dirichlet(std::size_t p, double alpha, Rng& rng);

} // namespace landmark
