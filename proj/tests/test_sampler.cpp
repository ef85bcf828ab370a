#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "landmark/error.hpp"
#include "landmark/posterior.hpp"
#include "landmark/sampler.hpp"
#include "support.hpp"

using namespace landmark;
using namespace test_support;

namespace {

ModelSpec spec_for(std::size_t n, Topology topo = Topology::Open) {
  ModelSpec spec;
  spec.n_eval = n;
  spec.topology = topo;
  return spec;
}

struct Draws {
  std::size_t index;
  double step;
  double u;
};

// Replays the documented draw order of one step on a copy of the stream.
Draws replay(Rng rng, std::size_t k, double var) {
  std::uniform_int_distribution<std::size_t> pick(0, k - 1);
  std::normal_distribution<double> normal(0.0, std::sqrt(var));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const std::size_t j = pick(rng);
  const double z = normal(rng);
  return {j, z, unif(rng)};
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

TEST_CASE("configuration validation") {
  RwmConfig rwm;
  CHECK_NOTHROW(rwm.validate());
  rwm.n_iter = 999;
  CHECK_THROWS_AS(rwm.validate(), InputError);
  rwm = RwmConfig{};
  rwm.burn_in_frac = 1.0;
  CHECK_THROWS_AS(rwm.validate(), InputError);
  rwm = RwmConfig{};
  rwm.thin = 0;
  CHECK_THROWS_AS(rwm.validate(), InputError);
  rwm = RwmConfig{};
  rwm.proposal_var = 0.0;
  CHECK_THROWS_AS(rwm.validate(), InputError);
  CHECK(burn_in_count(100000, 0.1) == 10000);
}

TEST_CASE("a proposal equal to the current state is always accepted") {
  const CurveSample sample({zigzag(25)}, 25);
  const auto spec = spec_for(25);
  RwmConfig rwm;
  rwm.proposal_var = 1e-300;
  const LandmarkConfig cfg{{0.2, 0.5, 0.8}, Topology::Open};
  ChainState state{cfg, log_posterior(sample, cfg, spec)};
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto r = rwm_step(state, sample, spec, rwm, rng);
    CHECK(r.accepted);
    CHECK(r.state.config == cfg);
  }
}

TEST_CASE("acceptance decisions match an independent threshold comparison") {
  const CurveSample sample({zigzag(25)}, 25);
  const auto spec = spec_for(25);
  RwmConfig rwm;
  Rng rng(99);
  auto state = draw_initial_state(3, sample, spec, rng);
  int order_violations = 0;
  int accepts = 0;
  for (int i = 0; i < 3000; ++i) {
    const Draws d = replay(rng, state.config.k(), rwm.proposal_var);
    LandmarkConfig proposal = state.config;
    proposal.theta[d.index] += d.step;
    const bool broken = !is_valid(proposal);
    const double delta = log_posterior(sample, proposal, spec) - state.log_post;
    const bool expected = !broken && d.u < std::min(1.0, std::exp(delta));

    const auto r = rwm_step(state, sample, spec, rwm, rng);
    CHECK(r.accepted == expected);
    if (broken) {
      ++order_violations;
      CHECK_FALSE(r.accepted);
    }
    if (r.accepted) {
      ++accepts;
      CHECK(r.state.config == proposal);
    } else {
      CHECK(r.state.config == state.config);
    }
    state = r.state;
  }
  CHECK(order_violations > 100);
  CHECK(accepts > 10);
}

TEST_CASE("closed-curve proposals wrap around") {
  const CurveSample sample({preprocess_curve(circle_curve(100), 40)}, 40);
  auto spec = spec_for(40, Topology::Closed);
  spec.likelihood = LikelihoodKind::Constant;
  RwmConfig rwm;
  rwm.proposal_var = 0.05;
  ChainState state{{{0.1, 0.4, 0.95}, Topology::Closed}, 0.0};
  state.log_post = log_posterior(sample, state.config, spec);
  Rng rng(5);
  int wrapped = 0;
  for (int i = 0; i < 2000; ++i) {
    const Draws d = replay(rng, state.config.k(), rwm.proposal_var);
    const double raw = state.config.theta[d.index] + d.step;
    const auto r = rwm_step(state, sample, spec, rwm, rng);
    CHECK(is_valid(r.state.config));
    if (r.accepted && (raw < 0.0 || raw >= 1.0)) ++wrapped;
    state = r.state;
  }
  CHECK(wrapped > 10);
}

TEST_CASE("chains are deterministic in the seed") {
  const CurveSample sample({zigzag(25)}, 25);
  const auto spec = spec_for(25);
  RwmConfig rwm;
  rwm.n_iter = 20000;
  rwm.thin = 10;
  rwm.seed = 42;
  const auto a = run_chain(std::nullopt, 2, sample, spec, rwm);
  const auto b = run_chain(std::nullopt, 2, sample, spec, rwm);
  REQUIRE(a.size() == b.size());
  CHECK(same_bits(a.log_post, b.log_post));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_bits(a.samples[i].theta, b.samples[i].theta));
  CHECK(a.accept_rate == b.accept_rate);

  rwm.seed = 43;
  const auto c = run_chain(std::nullopt, 2, sample, spec, rwm);
  CHECK_FALSE(same_bits(a.log_post, c.log_post));
}

TEST_CASE("retained samples respect burn-in, thinning and validity") {
  const CurveSample sample({zigzag(25)}, 25);
  const auto spec = spec_for(25);
  RwmConfig rwm;
  rwm.n_iter = 10000;
  rwm.thin = 7;
  rwm.burn_in_frac = 0.25;
  const auto out = run_chain(std::nullopt, 3, sample, spec, rwm);
  CHECK(out.size() == (10000 - 2500) / 7);
  CHECK(out.trace.size() == 10000);
  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK(out.iteration[i] == 2500 + 7 * (i + 1));
    CHECK(is_valid(out.samples[i]));
    CHECK(out.samples[i].k() == 3);
    CHECK(std::isfinite(out.log_post[i]));
    CHECK(out.log_post[i] == doctest::Approx(log_posterior(sample, out.samples[i], spec)));
  }
  CHECK(out.warnings.empty());
  CHECK(out.accept_rate > 0.0);
}

TEST_CASE("an initial state with zero density is rejected") {
  const CurveSample sample({zigzag(25)}, 25);
  RwmConfig rwm;
  rwm.n_iter = 1000;
  CHECK_THROWS_AS(run_chain(LandmarkConfig{{0.5, 0.4}, Topology::Open}, 2, sample, spec_for(25), rwm),
                  InputError);
  Rng rng(1);
  CHECK_THROWS_AS(draw_initial_state(0, sample, spec_for(25), rng), InputError);
}

TEST_CASE("a chain that never moves reports a warning") {
  const CurveSample sample({zigzag(25)}, 25);
  RwmConfig rwm;
  rwm.n_iter = 1000;
  rwm.thin = 1;
  rwm.proposal_var = 1e12;
  const auto out = run_chain(LandmarkConfig{{0.2, 0.4, 0.6, 0.8}, Topology::Open}, 4, sample,
                             spec_for(25), rwm);
  CHECK(out.accept_rate == 0.0);
  REQUIRE(out.warnings.size() == 1);
  CHECK(out.warnings[0].find("no proposal") != std::string::npos);
}

TEST_CASE("constant likelihood recovers the Dirichlet prior") {
  for (Topology topo : {Topology::Open, Topology::Closed}) {
    const auto curve = topo == Topology::Open ? zigzag(25) : preprocess_curve(circle_curve(60), 25);
    const CurveSample sample({curve}, 25);
    auto spec = spec_for(25, topo);
    spec.likelihood = LikelihoodKind::Constant;
    RwmConfig rwm;
    rwm.n_iter = 200000;
    rwm.thin = 5;
    rwm.proposal_var = 0.01;
    rwm.seed = 7;
    const auto out = run_chain(std::nullopt, 3, sample, spec, rwm);
    // Sorted closed triples are uniform order statistics, so the gap that
    // wraps through 0 spans two of the four uniform spacings.
    const std::vector<double> expected = topo == Topology::Open
                                             ? std::vector<double>{0.25, 0.25, 0.25, 0.25}
                                             : std::vector<double>{0.25, 0.25, 0.5};
    for (std::size_t c = 0; c < expected.size(); ++c) {
      std::vector<double> s;
      for (const auto& cfg : out.samples) s.push_back(theta_to_spacing(cfg).s[c]);
      double mean = 0.0;
      for (double v : s) mean += v;
      mean /= static_cast<double>(s.size());
      double var = 0.0;
      for (double v : s) var += (v - mean) * (v - mean);
      var /= static_cast<double>(s.size() - 1);
      const double se = std::sqrt(var / effective_sample_size(s));
      INFO("component ", c, " mean ", mean, " se ", se);
      CHECK(std::abs(mean - expected[c]) <= 3.0 * se);
    }
  }
}

TEST_CASE("k=1 chain matches a dense-grid posterior") {
  const auto curve = zigzag(25);
  const CurveSample sample({curve}, 25);
  const auto spec = spec_for(25);
  const auto probs = binned_density(
      [&](double t) { return oracle_log_posterior(curve, {{t}, Topology::Open}, spec); }, 40, 50);
  const double peak = *std::max_element(probs.begin(), probs.end());
  INFO("largest bin mass ", peak);
  CHECK(peak < 0.5);
  RwmConfig rwm;
  rwm.n_iter = 400000;
  rwm.thin = 10;
  rwm.seed = 11;
  const auto out = run_chain(std::nullopt, 1, sample, spec, rwm);
  std::vector<double> draws;
  for (const auto& cfg : out.samples) draws.push_back(cfg.theta[0]);
  const double tv = histogram_tv(draws, probs);
  INFO("TV = ", tv);
  CHECK(tv <= 0.05);
}

TEST_CASE("k=2 chain matches a two-dimensional grid posterior") {
  const auto curve = zigzag(25);
  const CurveSample sample({curve}, 25);
  auto spec = spec_for(25);
  spec.b = 1.0;
  constexpr std::size_t kBins = 20;
  constexpr std::size_t kFine = 15;
  constexpr std::size_t kTotal = kBins * kFine;
  std::vector<double> probs(kBins * kBins, 0.0);
  std::vector<double> lp(kTotal * kTotal, -INFINITY);
  double top = -INFINITY;
  for (std::size_t i = 0; i < kTotal; ++i) {
    for (std::size_t j = i + 1; j < kTotal; ++j) {
      const double x = (static_cast<double>(i) + 0.5) / kTotal;
      const double y = (static_cast<double>(j) + 0.5) / kTotal;
      lp[i * kTotal + j] = oracle_log_posterior(curve, {{x, y}, Topology::Open}, spec);
      top = std::max(top, lp[i * kTotal + j]);
    }
  }
  double z = 0.0;
  for (std::size_t i = 0; i < kTotal; ++i) {
    for (std::size_t j = 0; j < kTotal; ++j) {
      const double v = lp[i * kTotal + j];
      const double w = std::isfinite(v) ? std::exp(v - top) : 0.0;
      probs[(i / kFine) * kBins + j / kFine] += w;
      z += w;
    }
  }
  for (auto& p : probs) p /= z;
  const double peak = *std::max_element(probs.begin(), probs.end());
  INFO("largest bin mass ", peak);
  CHECK(peak < 0.5);

  RwmConfig rwm;
  rwm.n_iter = 600000;
  rwm.thin = 10;
  rwm.seed = 12;
  const auto out = run_chain(std::nullopt, 2, sample, spec, rwm);
  std::vector<double> counts(kBins * kBins, 0.0);
  for (const auto& cfg : out.samples) {
    const auto bx = std::min<std::size_t>(static_cast<std::size_t>(cfg.theta[0] * kBins), kBins - 1);
    const auto by = std::min<std::size_t>(static_cast<std::size_t>(cfg.theta[1] * kBins), kBins - 1);
    counts[bx * kBins + by] += 1.0;
  }
  double tv = 0.0;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    tv += std::abs(counts[b] / static_cast<double>(out.size()) - probs[b]);
  }
  tv *= 0.5;
  INFO("TV = ", tv);
  CHECK(tv <= 0.05);
}

TEST_CASE("optional kappa draws are positive and recorded per sample") {
  const CurveSample sample({zigzag(25)}, 25);
  auto spec = spec_for(25);
  spec.sample_kappa = true;
  RwmConfig rwm;
  rwm.n_iter = 5000;
  rwm.thin = 50;
  const auto out = run_chain(std::nullopt, 2, sample, spec, rwm);
  REQUIRE(out.kappa.size() == out.size());
  for (double k : out.kappa) CHECK(k > 0.0);
}
