#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "landmark/curve.hpp"
#include "landmark/model.hpp"
#include "landmark/posterior.hpp"
#include "landmark/reconstruction.hpp"

namespace test_support {

using landmark::LandmarkConfig;
using landmark::PlanarCurve;
using landmark::Point;
using landmark::Topology;

inline constexpr double kPi = std::numbers::pi;

inline PlanarCurve sine_curve(std::size_t n, double amplitude = 1.0) {
  std::vector<Point> pts(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) / static_cast<double>(n - 1);
    pts[j] = {t, amplitude * std::sin(4.0 * kPi * t)};
  }
  return PlanarCurve(std::move(pts), Topology::Open);
}

inline PlanarCurve circle_curve(std::size_t n, double radius = 1.0) {
  std::vector<Point> pts(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double phi = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    pts[j] = {radius * std::cos(phi), radius * std::sin(phi)};
  }
  return PlanarCurve(std::move(pts), Topology::Closed);
}

inline PlanarCurve square_curve(std::size_t per_side) {
  std::vector<Point> pts;
  const Point corners[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  for (int c = 0; c < 4; ++c) {
    const Point a = corners[c];
    const Point b = corners[(c + 1) % 4];
    for (std::size_t i = 0; i < per_side; ++i) {
      const double f = static_cast<double>(i) / static_cast<double>(per_side);
      pts.push_back(a + f * (b - a));
    }
  }
  return PlanarCurve(std::move(pts), Topology::Closed);
}

inline Point rotate(Point p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p.x - s * p.y, s * p.x + c * p.y};
}

template <typename F>
PlanarCurve map_points(const PlanarCurve& curve, F&& f) {
  std::vector<Point> pts;
  for (const auto& p : curve.points()) pts.push_back(f(p));
  return PlanarCurve(std::move(pts), curve.topology());
}

/// Random polygon with n vertices: a perturbed star-shaped outline for
/// closed curves, a random walk for open curves.
inline PlanarCurve random_curve(std::size_t n, Topology topology, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Point> pts(n);
  if (topology == Topology::Closed) {
    for (std::size_t j = 0; j < n; ++j) {
      const double phi = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
      const double r = 1.0 + 0.3 * u(rng);
      pts[j] = {r * std::cos(phi), r * std::sin(phi)};
    }
  } else {
    Point p{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      pts[j] = p;
      p = p + Point{0.5 + 0.5 * (u(rng) + 1.0), u(rng)};
    }
  }
  return PlanarCurve(std::move(pts), topology);
}

/// Random valid configuration whose gaps are all at least `gap`.
inline LandmarkConfig random_config(std::size_t k, Topology topology, double gap,
                                    std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    std::vector<double> theta(k);
    for (auto& t : theta) t = u(rng);
    std::sort(theta.begin(), theta.end());
    LandmarkConfig cfg{theta, topology};
    if (landmark::is_valid(cfg) && landmark::min_spacing(cfg) >= gap) return cfg;
  }
}

/// Independent SRVF of points sampled on a uniform grid with spacing h:
/// centered differences, one-sided at open ends.
inline std::vector<Point> oracle_srvf(const std::vector<Point>& pos, bool closed, double h) {
  const std::size_t n = pos.size();
  std::vector<Point> q(n);
  for (std::size_t j = 0; j < n; ++j) {
    Point d;
    if (closed) {
      const Point a = pos[(j + n - 1) % n];
      const Point b = pos[(j + 1) % n];
      d = {(b.x - a.x) / (2.0 * h), (b.y - a.y) / (2.0 * h)};
    } else if (j == 0) {
      d = {(pos[1].x - pos[0].x) / h, (pos[1].y - pos[0].y) / h};
    } else if (j == n - 1) {
      d = {(pos[n - 1].x - pos[n - 2].x) / h, (pos[n - 1].y - pos[n - 2].y) / h};
    } else {
      d = {(pos[j + 1].x - pos[j - 1].x) / (2.0 * h), (pos[j + 1].y - pos[j - 1].y) / (2.0 * h)};
    }
    const double speed = std::hypot(d.x, d.y);
    q[j] = speed < 1e-12 ? Point{} : Point{d.x / std::sqrt(speed), d.y / std::sqrt(speed)};
  }
  return q;
}

/// Independent piecewise-linear interpolation of a polyline under its own
/// normalized chord-length parameterization; closed curves wrap.
inline Point oracle_eval(const std::vector<Point>& pts, bool closed, double t) {
  const std::size_t n = pts.size();
  const std::size_t nseg = closed ? n : n - 1;
  std::vector<long double> cum(nseg + 1, 0.0L);
  for (std::size_t i = 0; i < nseg; ++i) {
    const Point a = pts[i];
    const Point b = pts[(i + 1) % n];
    cum[i + 1] = cum[i] + std::hypot(static_cast<long double>(b.x - a.x),
                                     static_cast<long double>(b.y - a.y));
  }
  if (closed) t -= std::floor(t);
  const long double target = static_cast<long double>(t) * cum.back();
  std::size_t i = 0;
  while (i + 1 < nseg && cum[i + 1] <= target) ++i;
  const long double span = cum[i + 1] - cum[i];
  const double f = span > 0 ? static_cast<double>((target - cum[i]) / span) : 0.0;
  const Point a = pts[i];
  const Point b = pts[(i + 1) % n];
  return {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
}

/// Independent d^2: samples the curve and its reconstruction on the grid
/// and compares their SRVFs node by node.
inline double oracle_error_sq(const PlanarCurve& curve, const LandmarkConfig& cfg) {
  const bool closed = curve.topology() == Topology::Closed;
  std::vector<Point> pts(curve.points().begin(), curve.points().end());
  const std::size_t n = pts.size();
  const double h = closed ? 1.0 / static_cast<double>(n) : 1.0 / static_cast<double>(n - 1);
  std::vector<double> knots;
  if (!closed) knots.push_back(0.0);
  for (double t : cfg.theta) knots.push_back(t);
  if (!closed) knots.push_back(1.0);
  std::vector<Point> anchors;
  for (double t : knots) anchors.push_back(oracle_eval(pts, closed, t));
  std::vector<Point> data(n);
  std::vector<Point> recon(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = static_cast<double>(j) * h;
    data[j] = oracle_eval(pts, closed, t);
    std::size_t seg = knots.size();
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
      if (t >= knots[i] && t <= knots[i + 1]) {
        seg = i;
        break;
      }
    }
    Point a, b;
    double t0, t1;
    if (seg < knots.size()) {
      a = anchors[seg];
      b = anchors[seg + 1];
      t0 = knots[seg];
      t1 = knots[seg + 1];
    } else {
      a = anchors.back();
      b = anchors.front();
      t0 = knots.back();
      t1 = knots.front() + 1.0;
    }
    double tt = t;
    if (tt < t0) tt += 1.0;
    const double f = (tt - t0) / (t1 - t0);
    recon[j] = {a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)};
  }
  const auto q1 = oracle_srvf(data, closed, h);
  const auto q2 = oracle_srvf(recon, closed, h);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double dx = q1[j].x - q2[j].x;
    const double dy = q1[j].y - q2[j].y;
    sum += dx * dx + dy * dy;
  }
  return sum;
}

/// Independent unnormalized log posterior for a single curve stored at the
/// grid nodes: Dirichlet prior, spacing guard and the closed-form marginal.
inline double oracle_log_posterior(const PlanarCurve& curve, const LandmarkConfig& cfg,
                                   const landmark::ModelSpec& spec) {
  const bool closed = curve.topology() == Topology::Closed;
  const auto n = static_cast<double>(curve.size());
  std::vector<double> gaps;
  for (std::size_t i = 0; i + 1 < cfg.theta.size(); ++i) gaps.push_back(cfg.theta[i + 1] - cfg.theta[i]);
  if (closed) {
    gaps.push_back(1.0 - cfg.theta.back() + cfg.theta.front());
  } else {
    gaps.insert(gaps.begin(), cfg.theta.front());
    gaps.push_back(1.0 - cfg.theta.back());
  }
  double log_prior = std::lgamma(spec.alpha * static_cast<double>(gaps.size()));
  for (double g : gaps) {
    if (g < 1.0 / (4.0 * n)) return -INFINITY;
    log_prior += (spec.alpha - 1.0) * std::log(g) - std::lgamma(spec.alpha);
  }
  const double h = closed ? 1.0 / n : 1.0 / (n - 1.0);
  double d = oracle_error_sq(curve, cfg);
  if (spec.error_scale == landmark::ErrorScale::GridWeighted) d *= h;
  return log_prior + std::lgamma(spec.a + n) + spec.a * std::log(spec.b) - std::lgamma(spec.a) -
         n * std::log(kPi) - (spec.a + n) * std::log(spec.b + d);
}

/// Total-variation distance between a histogram of samples in [0,1) and
/// reference bin probabilities.
inline double histogram_tv(const std::vector<double>& draws, const std::vector<double>& probs) {
  const std::size_t bins = probs.size();
  std::vector<double> counts(bins, 0.0);
  for (double x : draws) {
    auto b = static_cast<std::size_t>(x * static_cast<double>(bins));
    counts[std::min(b, bins - 1)] += 1.0;
  }
  double tv = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    tv += std::abs(counts[b] / static_cast<double>(draws.size()) - probs[b]);
  }
  return 0.5 * tv;
}

/// Reference bin probabilities of a 1-D log density sampled at `fine`
/// midpoints per bin.
template <typename F>
std::vector<double> binned_density(F&& log_density, std::size_t bins, std::size_t fine) {
  const std::size_t total = bins * fine;
  std::vector<double> lp(total);
  double top = -INFINITY;
  for (std::size_t i = 0; i < total; ++i) {
    lp[i] = log_density((static_cast<double>(i) + 0.5) / static_cast<double>(total));
    top = std::max(top, lp[i]);
  }
  std::vector<double> probs(bins, 0.0);
  double z = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    const double w = std::isfinite(lp[i]) ? std::exp(lp[i] - top) : 0.0;
    probs[i / fine] += w;
    z += w;
  }
  for (auto& p : probs) p /= z;
  return probs;
}

// log of integral over kappa of Gamma(kappa; a, b) (kappa/pi)^NM exp(-kappa D),
// integrated numerically in u = log kappa around the integrand's peak.
inline double kappa_quadrature(double d, double nm, const landmark::ModelSpec& spec) {
  const auto log_integrand = [&](double u) {
    return spec.a * std::log(spec.b) - std::lgamma(spec.a) + spec.a * u - spec.b * std::exp(u) +
           nm * (u - std::log(kPi)) - d * std::exp(u);
  };
  const double peak = std::log((spec.a + nm) / (spec.b + d));
  const double width = 40.0 / std::sqrt(spec.a + nm);
  const double top = log_integrand(peak);
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double u) { return std::exp(log_integrand(u) - top); }, peak - width, peak + width, 20,
      1e-14);
  return top + std::log(integral);
}

// Rounds to multiples of 2^-32 so translations by small integers stay exact.
inline PlanarCurve dyadic(const PlanarCurve& c) {
  return map_points(c, [](Point p) {
    return Point{std::ldexp(std::round(std::ldexp(p.x, 32)), -32),
                 std::ldexp(std::round(std::ldexp(p.y, 32)), -32)};
  });
}

inline PlanarCurve zigzag(std::size_t n_eval) {
  return landmark::preprocess_curve(
      PlanarCurve({{0.0, 0.0}, {1.0, 0.0}, {1.5, 0.8}, {2.5, 0.6}}, Topology::Open), n_eval);
}

inline double poisson_pmf(std::size_t nu, double lambda) {
  return std::exp(static_cast<double>(nu) * std::log(lambda) - lambda -
                  std::lgamma(static_cast<double>(nu) + 1.0));
}

// Chi-square goodness of fit of the visited k against the shifted Poisson
// prior, with counts deflated to the effective sample size of the k trace.
inline double k_prior_p_value(const landmark::PosteriorSampleSet& out, std::size_t k_min, double lambda) {
  std::vector<double> ks;
  for (const auto& s : out.samples) ks.push_back(static_cast<double>(s.k()));
  const double n = static_cast<double>(ks.size());
  const double ess = std::min(n, landmark::effective_sample_size(ks));
  std::map<std::size_t, double> counts;
  for (double k : ks) counts[static_cast<std::size_t>(k)] += 1.0;

  // Pool the upper tail so every expected cell holds at least 5 effective draws.
  std::vector<double> observed;
  std::vector<double> expected;
  double tail_p = 1.0;
  double tail_obs = n;
  for (std::size_t nu = 0;; ++nu) {
    const double p = poisson_pmf(nu, lambda);
    if (ess * (tail_p - p) < 5.0) break;
    const double obs = counts.count(k_min + nu) ? counts[k_min + nu] : 0.0;
    observed.push_back(obs);
    expected.push_back(p);
    tail_p -= p;
    tail_obs -= obs;
  }
  observed.push_back(tail_obs);
  expected.push_back(tail_p);

  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected[i] * n;
    stat += (observed[i] - e) * (observed[i] - e) / e;
  }
  stat *= ess / n;
  const boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

} // namespace test_support
