#include "landmark/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "landmark/error.hpp"

namespace landmark {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

void ModelSpec::validate() const {
  if (!(a > 0.0) || !(b > 0.0) || !(alpha > 0.0) || !(lambda > 0.0)) {
    throw InputError("model hyperparameters a, b, alpha, lambda must all be positive");
  }
  if (n_eval < EvaluationGrid::kMinNodes) {
    throw InputError("n_eval must be at least " + std::to_string(EvaluationGrid::kMinNodes));
  }
}

CurveSample::CurveSample(std::vector<PlanarCurve> curves, std::size_t n_eval)
    : curves_(std::move(curves)),
      grid_(n_eval, curves_.empty() ? Topology::Open : curves_.front().topology()) {
  if (curves_.empty()) throw InputError("a curve sample needs at least one curve");
  srvfs_.reserve(curves_.size());
  for (const auto& c : curves_) {
    if (c.topology() != grid_.topology()) {
      throw InputError("all curves in a sample must share one topology");
    }
    srvfs_.push_back(compute_srvf(c, grid_));
  }
}

PlanarCurve preprocess_curve(const PlanarCurve& raw, std::size_t n_eval) {
  return rescale_unit_length(raw, n_eval);
}

double min_gap(std::size_t n_eval) { return 1.0 / (4.0 * static_cast<double>(n_eval)); }

double total_error_sq(const CurveSample& sample, const LandmarkConfig& cfg) {
  double sum = 0.0;
  for (std::size_t m = 0; m < sample.size(); ++m) {
    sum += reconstruction_error_sq(sample.curves()[m], sample.srvfs()[m], cfg);
  }
  return sum;
}

double model_error(const CurveSample& sample, const LandmarkConfig& cfg, const ModelSpec& spec) {
  const double raw = total_error_sq(sample, cfg);
  return spec.error_scale == ErrorScale::GridWeighted ? raw * sample.grid().spacing() : raw;
}

double log_prior_spacing(const SpacingVector& s, const ModelSpec& spec) {
  const auto p = static_cast<double>(s.s.size());
  double acc = 0.0;
  for (double v : s.s) {
    if (!(v > 0.0)) return kNegInf;
    acc += std::log(v);
  }
  return std::lgamma(p * spec.alpha) - p * std::lgamma(spec.alpha) + (spec.alpha - 1.0) * acc;
}

double log_prior_k(std::size_t k, const ModelSpec& spec) {
  const std::size_t k_min = min_landmarks(spec.topology);
  if (k < k_min) return kNegInf;
  const auto nu = static_cast<double>(k - k_min);
  const double log_lambda_term = nu == 0.0 ? 0.0 : nu * std::log(spec.lambda);
  return log_lambda_term - spec.lambda - std::lgamma(nu + 1.0);
}

double log_marginal_from_error(double total_error, std::size_t n_eval, std::size_t n_curves,
                               const ModelSpec& spec) {
  if (!std::isfinite(total_error)) return kNegInf;
  const double nm = static_cast<double>(n_eval) * static_cast<double>(n_curves);
  return -nm * std::log(std::numbers::pi) + std::lgamma(spec.a + nm) + spec.a * std::log(spec.b) -
         std::lgamma(spec.a) - (spec.a + nm) * std::log(spec.b + total_error);
}

double log_marginal_likelihood(const CurveSample& sample, const LandmarkConfig& cfg,
                               const ModelSpec& spec) {
  if (!is_valid(cfg) || cfg.topology != sample.topology()) return kNegInf;
  if (min_spacing(cfg) < min_gap(sample.grid().size())) return kNegInf;
  return log_marginal_from_error(model_error(sample, cfg, spec), sample.grid().size(), sample.size(),
                                 spec);
}

double log_posterior(const CurveSample& sample, const LandmarkConfig& cfg, const ModelSpec& spec,
                     bool variable_k) {
  if (!is_valid(cfg) || cfg.topology != sample.topology()) return kNegInf;
  const SpacingVector s = theta_to_spacing(cfg);
  double lp = log_prior_spacing(s, spec);
  if (variable_k) {
    lp += log_prior_k(cfg.k(), spec);
    if (cfg.topology == Topology::Closed) lp += std::log(static_cast<double>(cfg.k()));
  }
  if (lp == kNegInf || spec.likelihood == LikelihoodKind::Constant) return lp;
  const double smallest = *std::min_element(s.s.begin(), s.s.end());
  if (smallest < min_gap(sample.grid().size())) return kNegInf;
  return lp + log_marginal_from_error(model_error(sample, cfg, spec), sample.grid().size(),
                                      sample.size(), spec);
}

double draw_kappa(double total_error, std::size_t n_eval, std::size_t n_curves,
                  const ModelSpec& spec, Rng& rng) {
  const double nm = static_cast<double>(n_eval) * static_cast<double>(n_curves);
  std::gamma_distribution<double> gamma(spec.a + nm, 1.0 / (spec.b + total_error));
  return gamma(rng);
}

std::vector<double> draw_dirichlet(std::size_t p, double alpha, Rng& rng) {
  std::vector<double> out(p);
  for (;;) {
    double total = 0.0;
    for (auto& v : out) {
      std::gamma_distribution<double> gamma(alpha, 1.0);
      v = gamma(rng);
      total += v;
    }
    if (total > 0.0) {
      for (auto& v : out) v /= total;
      return out;
    }
  }
}

} // namespace landmark
