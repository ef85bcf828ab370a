#include "landmark/rjmcmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "landmark/error.hpp"

namespace landmark {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::uint64_t kKappaStream = 0x9e3779b97f4a7c15ULL;

// Gaps between consecutive anchors: 0, theta..., 1 for open curves and the
// cyclic gaps for closed curves.
std::vector<double> anchor_gaps(const LandmarkConfig& cfg) {
  std::vector<double> theta = cfg.theta;
  std::sort(theta.begin(), theta.end());
  std::vector<double> gaps;
  if (cfg.topology == Topology::Open) {
    double prev = 0.0;
    for (double t : theta) {
      gaps.push_back(t - prev);
      prev = t;
    }
    gaps.push_back(1.0 - prev);
  } else {
    for (std::size_t i = 0; i + 1 < theta.size(); ++i) gaps.push_back(theta[i + 1] - theta[i]);
    gaps.push_back(theta.front() + 1.0 - theta.back());
  }
  return gaps;
}

double log_birth_ratio(std::size_t k_small, double exclusion, Topology topo,
                       const RjmcmcConfig& cfg) {
  // Forward: birth at k_small with density 1/(1 - exclusion).
  // Reverse: death at k_small + 1 choosing one of k_small + 1 landmarks.
  const auto forward = move_probabilities(k_small, topo, cfg);
  const auto reverse = move_probabilities(k_small + 1, topo, cfg);
  if (!(exclusion < 1.0)) return kNegInf;
  return std::log(reverse.death) - std::log(static_cast<double>(k_small + 1)) -
         std::log(forward.birth) + std::log1p(-exclusion);
}

} // namespace

void RjmcmcConfig::validate() const {
  stay_config().validate();
  double total = 0.0;
  for (double p : move_probs) {
    if (!(p > 0.0)) throw InputError("move probabilities must all be positive");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InputError("move probabilities must sum to 1");
  if (k_max < 3) throw InputError("k_max must be at least 3");
}

RwmConfig RjmcmcConfig::stay_config() const {
  return RwmConfig{n_iter, burn_in_frac, thin, proposal_var, seed};
}

MoveProbabilities move_probabilities(std::size_t k, Topology topology, const RjmcmcConfig& cfg) {
  const auto [birth, death, stay] = cfg.move_probs;
  if (k <= min_landmarks(topology)) return {birth + death, 0.0, stay};
  return {birth, death, stay};
}

double birth_exclusion(const LandmarkConfig& cfg, double gap) {
  double total = 0.0;
  for (double g : anchor_gaps(cfg)) total += std::min(g, 2.0 * gap);
  return std::min(total, 1.0);
}

bool birth_collides(const LandmarkConfig& cfg, double u, double gap) {
  if (cfg.topology == Topology::Open) {
    if (u < gap || 1.0 - u < gap) return true;
    for (double t : cfg.theta) {
      if (std::abs(u - t) < gap) return true;
    }
    return false;
  }
  for (double t : cfg.theta) {
    const double d = std::abs(u - t);
    if (std::min(d, 1.0 - d) < gap) return true;
  }
  return false;
}

JumpProposal birth_at(const LandmarkConfig& state, double u, double gap, const RjmcmcConfig& cfg) {
  LandmarkConfig next = state;
  auto pos = std::upper_bound(next.theta.begin(), next.theta.end(), u);
  next.theta.insert(pos, u);
  if (birth_collides(state, u, gap)) return {std::move(next), kNegInf};
  const double ratio =
      log_birth_ratio(state.k(), birth_exclusion(state, gap), state.topology, cfg);
  return {std::move(next), ratio};
}

JumpProposal death_at(const LandmarkConfig& state, std::size_t index, double gap,
                      const RjmcmcConfig& cfg) {
  if (state.k() <= min_landmarks(state.topology)) {
    throw InputError("death move proposed at the minimum landmark count");
  }
  if (index >= state.k()) throw InputError("death index out of range");
  LandmarkConfig next = state;
  const double removed = next.theta[index];
  next.theta.erase(next.theta.begin() + static_cast<std::ptrdiff_t>(index));
  if (birth_collides(next, removed, gap)) return {std::move(next), kNegInf};
  const double ratio = log_birth_ratio(next.k(), birth_exclusion(next, gap), state.topology, cfg);
  return {std::move(next), -ratio};
}

JumpProposal propose_birth(const LandmarkConfig& state, double gap, const RjmcmcConfig& cfg,
                           Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (!(birth_exclusion(state, gap) < 1.0)) {
    return {state, kNegInf};
  }
  double u = unif(rng);
  while (birth_collides(state, u, gap)) u = unif(rng);
  return birth_at(state, u, gap, cfg);
}

JumpProposal propose_death(const LandmarkConfig& state, double gap, const RjmcmcConfig& cfg,
                           Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, state.k() - 1);
  return death_at(state, pick(rng), gap, cfg);
}

PosteriorSampleSet run_rjmcmc(const std::optional<LandmarkConfig>& init, const CurveSample& sample,
                              const ModelSpec& spec, const RjmcmcConfig& cfg) {
  cfg.validate();
  spec.validate();
  const Topology topo = sample.topology();
  const std::size_t k_min = min_landmarks(topo);
  if (cfg.k_max < k_min) throw InputError("k_max is below the minimum landmark count");
  const RwmConfig stay = cfg.stay_config();
  const double gap = min_gap(sample.grid().size());
  Rng rng(cfg.seed);
  Rng kappa_rng(cfg.seed ^ kKappaStream);

  ChainState state;
  if (init) {
    LandmarkConfig c = *init;
    if (c.topology == Topology::Closed) std::sort(c.theta.begin(), c.theta.end());
    if (c.k() > cfg.k_max) throw InputError("initial configuration exceeds k_max");
    const double lp = log_posterior(sample, c, spec, true);
    if (!std::isfinite(lp)) throw InputError("initial configuration has zero posterior density");
    state = {std::move(c), lp};
  } else {
    std::poisson_distribution<std::size_t> poisson(spec.lambda);
    std::size_t k = 0;
    do {
      k = k_min + poisson(rng);
    } while (k > cfg.k_max);
    state = draw_initial_state(k, sample, spec, rng, true);
  }

  PosteriorSampleSet out;
  out.topology = topo;
  out.variable_k = true;
  const std::size_t burn = burn_in_count(cfg.n_iter, cfg.burn_in_frac);
  out.trace.reserve(cfg.n_iter);
  out.trace_k.reserve(cfg.n_iter);

  std::array<std::size_t, 3> proposed{};
  std::array<std::size_t, 3> accepted{};
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t t = 1; t <= cfg.n_iter; ++t) {
    const auto probs = move_probabilities(state.config.k(), topo, cfg);
    const double pick = unif(rng);
    int move = 2;
    bool ok = false;
    if (pick < probs.birth) {
      move = 0;
    } else if (pick < probs.birth + probs.death) {
      move = 1;
    }
    if (move == 2) {
      auto step = rwm_step(state, sample, spec, stay, rng, true);
      ok = step.accepted;
      state = std::move(step.state);
    } else {
      JumpProposal jump = move == 0 ? propose_birth(state.config, gap, cfg, rng)
                                    : propose_death(state.config, gap, cfg, rng);
      const double u = unif(rng);
      double lp = kNegInf;
      if (jump.config.k() <= cfg.k_max && std::isfinite(jump.log_proposal_ratio)) {
        lp = log_posterior(sample, jump.config, spec, true);
      }
      if (std::log(u) < lp - state.log_post + jump.log_proposal_ratio) {
        state = {std::move(jump.config), lp};
        ok = true;
      }
    }
    out.trace.push_back(state.log_post);
    out.trace_k.push_back(state.config.k());
    if (t <= burn) continue;
    ++proposed[static_cast<std::size_t>(move)];
    if (ok) ++accepted[static_cast<std::size_t>(move)];
    if ((t - burn) % cfg.thin == 0) {
      out.samples.push_back(state.config);
      out.log_post.push_back(state.log_post);
      out.iteration.push_back(t);
      if (spec.sample_kappa) {
        const double d = model_error(sample, state.config, spec);
        out.kappa.push_back(draw_kappa(d, sample.grid().size(), sample.size(), spec, kappa_rng));
      }
    }
  }

  const std::size_t post = cfg.n_iter - burn;
  const std::size_t total_accepted = accepted[0] + accepted[1] + accepted[2];
  out.accept_rate =
      post > 0 ? static_cast<double>(total_accepted) / static_cast<double>(post) : 0.0;
  const char* names[3] = {"birth", "death", "stay"};
  for (std::size_t m = 0; m < 3; ++m) {
    const double rate = proposed[m] > 0 ? static_cast<double>(accepted[m]) /
                                              static_cast<double>(proposed[m])
                                        : 0.0;
    out.move_accept_rates.emplace_back(names[m], rate);
  }
  if (total_accepted == 0) {
    out.warnings.push_back("no proposal was accepted after burn-in; the chain did not move");
  }
  return out;
}

} // namespace landmark
