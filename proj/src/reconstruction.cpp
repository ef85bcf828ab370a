#include "landmark/reconstruction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "landmark/error.hpp"

namespace landmark {

namespace {

double wrap_unit(double t) {
  double w = t - std::floor(t);
  return w >= 1.0 ? 0.0 : w;
}

// Evaluates the interpolant through (params[i], anchors[i]) at every grid node.
// params is strictly increasing; for closed curves it spans one full period.
template <class PointAt>
std::vector<Point> interpolate_on_grid(const LandmarkConfig& cfg, const EvaluationGrid& grid,
                                       PointAt&& point_at) {
  std::vector<double> theta = cfg.theta;
  std::sort(theta.begin(), theta.end());

  std::vector<double> params;
  std::vector<Point> anchors;
  params.reserve(theta.size() + 2);
  anchors.reserve(theta.size() + 2);
  const bool closed = cfg.topology == Topology::Closed;
  if (!closed) {
    params.push_back(0.0);
    anchors.push_back(point_at(0.0));
  }
  for (double t : theta) {
    params.push_back(t);
    anchors.push_back(point_at(t));
  }
  if (closed) {
    params.push_back(theta.front() + 1.0);
    anchors.push_back(anchors.front());
  } else {
    params.push_back(1.0);
    anchors.push_back(point_at(1.0));
  }

  std::vector<Point> out(grid.size());
  const double first = params.front();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double t = grid.node(j);
    if (closed && t < first) t += 1.0;
    auto it = std::upper_bound(params.begin(), params.end(), t);
    std::size_t i = it == params.begin() ? 0 : static_cast<std::size_t>(it - params.begin()) - 1;
    i = std::min(i, params.size() - 2);
    const double w = (t - params[i]) / (params[i + 1] - params[i]);
    out[j] = (1.0 - w) * anchors[i] + w * anchors[i + 1];
  }
  return out;
}

} // namespace

std::size_t min_landmarks(Topology topology) { return topology == Topology::Closed ? 3 : 1; }

bool is_valid(const LandmarkConfig& cfg) {
  const std::size_t k = cfg.k();
  if (k < min_landmarks(cfg.topology)) return false;
  for (double t : cfg.theta) {
    if (!(t >= 0.0 && t < 1.0)) return false;
  }
  if (cfg.topology == Topology::Open) {
    if (!(cfg.theta.front() > 0.0)) return false;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      if (!(cfg.theta[i] < cfg.theta[i + 1])) return false;
    }
    return true;
  }
  std::size_t descents = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double a = cfg.theta[i];
    const double b = cfg.theta[(i + 1) % k];
    if (a == b) return false;
    if (b < a) ++descents;
  }
  return descents == 1;
}

void require_valid(const LandmarkConfig& cfg) {
  if (!is_valid(cfg)) {
    throw InputError("invalid landmark configuration (k=" + std::to_string(cfg.k()) + ", " +
                     to_string(cfg.topology) + " curve): ordering or range violated");
  }
}

SpacingVector theta_to_spacing(const LandmarkConfig& cfg) {
  require_valid(cfg);
  const auto& th = cfg.theta;
  const std::size_t k = th.size();
  SpacingVector out{{}, cfg.topology};
  if (cfg.topology == Topology::Open) {
    out.s.resize(k + 1);
    out.s[0] = th[0];
    for (std::size_t i = 1; i < k; ++i) out.s[i] = th[i] - th[i - 1];
    out.s[k] = 1.0 - th[k - 1];
    return out;
  }
  out.s.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    double d = th[(i + 1) % k] - th[i];
    if (d < 0.0) d += 1.0;
    out.s[i] = d;
  }
  return out;
}

LandmarkConfig spacing_to_theta(const SpacingVector& s, double start) {
  const std::size_t p = s.s.size();
  LandmarkConfig cfg{{}, s.topology};
  if (s.topology == Topology::Open) {
    if (p < 2) throw InputError("open spacing vector needs at least 2 entries");
    cfg.theta.resize(p - 1);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < p; ++i) {
      acc += s.s[i];
      cfg.theta[i] = acc;
    }
    return cfg;
  }
  if (p < 1) throw InputError("closed spacing vector is empty");
  cfg.theta.resize(p);
  double acc = start;
  for (std::size_t i = 0; i < p; ++i) {
    cfg.theta[i] = wrap_unit(acc);
    acc += s.s[i];
  }
  std::sort(cfg.theta.begin(), cfg.theta.end());
  return cfg;
}

double min_spacing(const LandmarkConfig& cfg) {
  const auto s = theta_to_spacing(cfg);
  return *std::min_element(s.s.begin(), s.s.end());
}

PlanarCurve linear_reconstruction(const PlanarCurve& curve, const LandmarkConfig& cfg,
                                  const EvaluationGrid& grid) {
  require_valid(cfg);
  if (curve.topology() != cfg.topology || grid.topology() != cfg.topology) {
    throw InputError("curve, grid and landmark topologies differ");
  }
  auto pts = interpolate_on_grid(cfg, grid, [&](double t) { return evaluate_at(curve, t); });
  return PlanarCurve(std::move(pts), cfg.topology);
}

double reconstruction_error_sq(const PlanarCurve& curve, const Srvf& curve_srvf,
                               const LandmarkConfig& cfg) {
  const auto& grid = curve_srvf.grid;
  auto pts = interpolate_on_grid(cfg, grid, [&](double t) { return displacement_at(curve, t); });
  const Srvf recon = srvf_from_samples(pts, grid);
  double sum = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    sum += squared_norm(curve_srvf.values[j] - recon.values[j]);
  }
  return sum;
}

double reconstruction_error_sq(const PlanarCurve& curve, const LandmarkConfig& cfg,
                               const EvaluationGrid& grid) {
  require_valid(cfg);
  if (curve.topology() != cfg.topology) {
    throw InputError("curve and landmark topologies differ");
  }
  return reconstruction_error_sq(curve, compute_srvf(curve, grid), cfg);
}

} // namespace landmark
