#include "landmark/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "landmark/error.hpp"

namespace landmark {

namespace {

constexpr std::size_t kMaxInitAttempts = 10000;
constexpr std::uint64_t kKappaStream = 0x9e3779b97f4a7c15ULL;

double wrap_unit(double t) {
  double w = t - std::floor(t);
  return w >= 1.0 ? 0.0 : w;
}

} // namespace

void RwmConfig::validate() const {
  if (n_iter < 1000) throw InputError("n_iter must be at least 1000");
  if (!(burn_in_frac >= 0.0 && burn_in_frac < 1.0)) {
    throw InputError("burn_in_frac must lie in [0,1)");
  }
  if (thin < 1) throw InputError("thin must be at least 1");
  if (!(proposal_var > 0.0)) throw InputError("proposal_var must be positive");
}

std::size_t burn_in_count(std::size_t n_iter, double burn_in_frac) {
  return static_cast<std::size_t>(std::floor(static_cast<double>(n_iter) * burn_in_frac));
}

StepResult rwm_step(const ChainState& current, const CurveSample& sample, const ModelSpec& spec,
                    const RwmConfig& rwm, Rng& rng, bool variable_k) {
  const std::size_t k = current.config.k();
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  std::normal_distribution<double> step(0.0, std::sqrt(rwm.proposal_var));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t j = pick(rng);
  const double z = step(rng);
  const double u = unif(rng);

  LandmarkConfig proposal = current.config;
  proposal.theta[j] += z;
  if (proposal.topology == Topology::Closed) {
    proposal.theta[j] = wrap_unit(proposal.theta[j]);
    std::sort(proposal.theta.begin(), proposal.theta.end());
  }
  const double lp = log_posterior(sample, proposal, spec, variable_k);
  if (std::log(u) < lp - current.log_post) {
    return {{std::move(proposal), lp}, true};
  }
  return {current, false};
}

ChainState draw_initial_state(std::size_t k, const CurveSample& sample, const ModelSpec& spec,
                              Rng& rng, bool variable_k) {
  const Topology topo = sample.topology();
  if (k < min_landmarks(topo)) {
    throw InputError("k=" + std::to_string(k) + " is below the minimum for " + to_string(topo) +
                     " curves");
  }
  const std::size_t p = topo == Topology::Open ? k + 1 : k;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t attempt = 0; attempt < kMaxInitAttempts; ++attempt) {
    SpacingVector s{draw_dirichlet(p, spec.alpha, rng), topo};
    const double start = topo == Topology::Closed ? unif(rng) : 0.0;
    LandmarkConfig cfg = spacing_to_theta(s, start);
    const double lp = log_posterior(sample, cfg, spec, variable_k);
    if (std::isfinite(lp)) return {std::move(cfg), lp};
  }
  throw RuntimeFailure("could not draw an initial configuration with finite posterior");
}

PosteriorSampleSet run_chain(const std::optional<LandmarkConfig>& init, std::size_t k,
                             const CurveSample& sample, const ModelSpec& spec,
                             const RwmConfig& rwm) {
  rwm.validate();
  spec.validate();
  Rng rng(rwm.seed);
  Rng kappa_rng(rwm.seed ^ kKappaStream);

  ChainState state;
  if (init) {
    LandmarkConfig cfg = *init;
    if (cfg.topology == Topology::Closed) std::sort(cfg.theta.begin(), cfg.theta.end());
    const double lp = log_posterior(sample, cfg, spec);
    if (!std::isfinite(lp)) throw InputError("initial configuration has zero posterior density");
    state = {std::move(cfg), lp};
  } else {
    state = draw_initial_state(k, sample, spec, rng);
  }

  PosteriorSampleSet out;
  out.topology = sample.topology();
  const std::size_t burn = burn_in_count(rwm.n_iter, rwm.burn_in_frac);
  const std::size_t kept = (rwm.n_iter - burn) / rwm.thin;
  out.samples.reserve(kept);
  out.log_post.reserve(kept);
  out.iteration.reserve(kept);
  out.trace.reserve(rwm.n_iter);
  out.trace_k.reserve(rwm.n_iter);

  std::size_t accepted = 0;
  for (std::size_t t = 1; t <= rwm.n_iter; ++t) {
    auto step = rwm_step(state, sample, spec, rwm, rng);
    state = std::move(step.state);
    out.trace.push_back(state.log_post);
    out.trace_k.push_back(state.config.k());
    if (t <= burn) continue;
    if (step.accepted) ++accepted;
    if ((t - burn) % rwm.thin == 0) {
      out.samples.push_back(state.config);
      out.log_post.push_back(state.log_post);
      out.iteration.push_back(t);
      if (spec.sample_kappa) {
        const double d = model_error(sample, state.config, spec);
        out.kappa.push_back(draw_kappa(d, sample.grid().size(), sample.size(), spec, kappa_rng));
      }
    }
  }
  const std::size_t post = rwm.n_iter - burn;
  out.accept_rate = post > 0 ? static_cast<double>(accepted) / static_cast<double>(post) : 0.0;
  if (accepted == 0) {
    out.warnings.push_back("no proposal was accepted after burn-in; the chain did not move");
  }
  return out;
}

} // namespace landmark
