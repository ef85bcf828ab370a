#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>

#include "landmark/model.hpp"
#include "landmark/sampler.hpp"

namespace landmark {

/// Birth-death-stay reversible-jump settings. Stay moves reuse the
/// random-walk update with variance proposal_var.
struct RjmcmcConfig {
  std::size_t n_iter = 100000;
  double burn_in_frac = 0.1;
  std::size_t thin = 100;
  double proposal_var = 0.02;
  std::uint64_t seed = 1;
  /// Birth, death, stay.
  std::array<double, 3> move_probs{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  std::size_t k_max = 50;

  void validate() const;
  RwmConfig stay_config() const;
};

struct MoveProbabilities {
  double birth = 0.0;
  double death = 0.0;
  double stay = 0.0;
};

/// Move probabilities at landmark count k. At the minimum count the death
/// mass is handed to birth.
MoveProbabilities move_probabilities(std::size_t k, Topology topology, const RjmcmcConfig& cfg);

struct JumpProposal {
  LandmarkConfig config;
  /// log of q(reverse) / q(forward), including the move-type probabilities.
  double log_proposal_ratio = 0.0;
};

/// Lebesgue measure of the locations a new landmark may not take: points
/// closer than `gap` to an existing landmark (or to 0 and 1 on open curves).
double birth_exclusion(const LandmarkConfig& cfg, double gap);

/// True when location u lies inside the excluded region.
bool birth_collides(const LandmarkConfig& cfg, double u, double gap);

/// Deterministic birth at location u. The new landmark is inserted in
/// order; the Jacobian of the map is 1. A colliding u gives a -inf ratio.
JumpProposal birth_at(const LandmarkConfig& state, double u, double gap, const RjmcmcConfig& cfg);

/// Deterministic death of landmark `index`; the reverse of birth_at.
JumpProposal death_at(const LandmarkConfig& state, std::size_t index, double gap,
                      const RjmcmcConfig& cfg);

/// Birth at a uniform location, redrawn while it collides.
JumpProposal propose_birth(const LandmarkConfig& state, double gap, const RjmcmcConfig& cfg,
                           Rng& rng);

/// Death of a uniformly chosen landmark. Requires k above the minimum.
JumpProposal propose_death(const LandmarkConfig& state, double gap, const RjmcmcConfig& cfg,
                           Rng& rng);

/// Runs the reversible-jump chain over (k, theta). Without `init`, k is
/// drawn from the shifted Poisson prior truncated at k_max, then theta | k
/// from the Dirichlet prior.
PosteriorSampleSet run_rjmcmc(const std::optional<LandmarkConfig>& init, const CurveSample& sample,
                              const ModelSpec& spec, const RjmcmcConfig& cfg);

} // namespace landmark
