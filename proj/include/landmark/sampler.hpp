#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "landmark/model.hpp"
#include "landmark/reconstruction.hpp"

namespace landmark {

/// Random-walk Metropolis settings. proposal_var is the variance v of the
/// normal step applied to one landmark per iteration.
struct RwmConfig {
  std::size_t n_iter = 100000;
  double burn_in_frac = 0.1;
  std::size_t thin = 100;
  double proposal_var = 0.02;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Retained chain output plus diagnostics.
struct PosteriorSampleSet {
  Topology topology = Topology::Open;
  bool variable_k = false;
  std::vector<LandmarkConfig> samples;
  std::vector<double> log_post;
  std::vector<std::size_t> iteration;
  /// Filled only when the model samples kappa.
  std::vector<double> kappa;
  /// Acceptance rate over the post-burn-in iterations.
  double accept_rate = 0.0;
  /// Log posterior and landmark count at every iteration, burn-in included.
  std::vector<double> trace;
  std::vector<std::size_t> trace_k;
  std::vector<std::string> warnings;
  /// Post-burn-in acceptance rate per move type (reversible-jump runs only).
  std::vector<std::pair<std::string, double>> move_accept_rates;

  std::size_t size() const { return samples.size(); }
};

struct ChainState {
  LandmarkConfig config;
  double log_post = 0.0;
};

struct StepResult {
  ChainState state;
  bool accepted = false;
};

/// One Metropolis update of a single landmark.
///
/// Random draws, in order: the component index (uniform_int), the normal
/// increment, and the uniform acceptance variate. All three are drawn on
/// every call so the stream position does not depend on the outcome.
/// Closed curves wrap the proposal mod 1; open-curve proposals that break
/// the ordering have zero prior mass and are rejected.
StepResult rwm_step(const ChainState& current, const CurveSample& sample, const ModelSpec& spec,
                    const RwmConfig& rwm, Rng& rng, bool variable_k = false);

/// Draws an initial configuration with k landmarks from the prior, retrying
/// until its log posterior is finite.
ChainState draw_initial_state(std::size_t k, const CurveSample& sample, const ModelSpec& spec,
                              Rng& rng, bool variable_k = false);

/// Number of leading iterations discarded as burn-in.
std::size_t burn_in_count(std::size_t n_iter, double burn_in_frac);

/// Runs a fixed-k chain. Without `init`, the start is drawn from the prior.
PosteriorSampleSet run_chain(const std::optional<LandmarkConfig>& init, std::size_t k,
                             const CurveSample& sample, const ModelSpec& spec,
                             const RwmConfig& rwm);

} // namespace landmark
