#include "landmark/curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "landmark/error.hpp"

namespace landmark {

namespace {

constexpr double kZeroSpeed = 1e-12;

std::size_t segment_count(std::size_t n_points, Topology topology) {
  return topology == Topology::Closed ? n_points : n_points - 1;
}

// Index of the segment containing normalized parameter t.
std::size_t locate_segment(std::span<const double> params, double t) {
  auto it = std::upper_bound(params.begin(), params.end(), t);
  std::size_t i = it == params.begin() ? 0 : static_cast<std::size_t>(it - params.begin()) - 1;
  return std::min(i, params.size() - 2);
}

double wrap_unit(double t) {
  double w = t - std::floor(t);
  return w >= 1.0 ? 0.0 : w;
}

double checked_param(const PlanarCurve& curve, double t) {
  if (curve.topology() == Topology::Closed) {
    return wrap_unit(t);
  }
  if (!(t >= 0.0 && t <= 1.0)) {
    throw InputError("evaluation parameter " + std::to_string(t) +
                     " outside [0,1] on an open curve");
  }
  return t;
}

struct SegmentHit {
  std::size_t index;
  double fraction;
};

SegmentHit find(const PlanarCurve& curve, double t) {
  auto params = curve.node_params();
  std::size_t i = locate_segment(params, t);
  double span = params[i + 1] - params[i];
  double f = span > 0.0 ? (t - params[i]) / span : 0.0;
  return {i, f};
}

const Point& node_wrapped(const PlanarCurve& curve, std::size_t i) {
  return curve[i == curve.size() ? 0 : i];
}

// Resampled displacements from the first point at uniform arc length.
std::vector<Point> resample_displacements(const PlanarCurve& curve, std::size_t m) {
  const auto pts = curve.points();
  const std::size_t n = pts.size();
  const std::size_t nseg = segment_count(n, curve.topology());
  const bool closed = curve.topology() == Topology::Closed;

  std::vector<double> cum(nseg + 1, 0.0);
  for (std::size_t i = 0; i < nseg; ++i) {
    cum[i + 1] = cum[i] + norm(node_wrapped(curve, i + 1) - pts[i]);
  }
  const double total = cum.back();
  const double denom = closed ? static_cast<double>(m) : static_cast<double>(m - 1);

  std::vector<Point> out(m);
  std::size_t seg = 0;
  for (std::size_t j = 0; j < m; ++j) {
    if (!closed && j == m - 1) {
      out[j] = pts[n - 1] - pts[0];
      break;
    }
    const double s = total * (static_cast<double>(j) / denom);
    while (seg + 1 < nseg && cum[seg + 1] <= s) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double f = len > 0.0 ? (s - cum[seg]) / len : 0.0;
    out[j] = (pts[seg] - pts[0]) + f * (node_wrapped(curve, seg + 1) - pts[seg]);
  }
  return out;
}

double polyline_length(std::span<const Point> pts, Topology topology) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) total += norm(pts[i + 1] - pts[i]);
  if (topology == Topology::Closed) total += norm(pts.front() - pts.back());
  return total;
}

} // namespace

double norm(Point p) { return std::hypot(p.x, p.y); }
double squared_norm(Point p) { return p.x * p.x + p.y * p.y; }

const char* to_string(Topology topology) {
  return topology == Topology::Closed ? "closed" : "open";
}

Topology parse_topology(const std::string& text) {
  if (text == "open") return Topology::Open;
  if (text == "closed") return Topology::Closed;
  throw InputError("unknown topology '" + text + "' (expected open or closed)");
}

PlanarCurve::PlanarCurve(std::vector<Point> points, Topology topology)
    : points_(std::move(points)), topology_(topology) {
  if (topology_ == Topology::Closed && points_.size() > 3 && points_.front() == points_.back()) {
    points_.pop_back();
  }
  if (points_.size() < 3) {
    throw InputError("a curve needs at least 3 points, got " + std::to_string(points_.size()));
  }
  for (const auto& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw InputError("curve contains a non-finite coordinate");
    }
  }
  const std::size_t nseg = segment_count(points_.size(), topology_);
  std::vector<double> cum(nseg + 1, 0.0);
  for (std::size_t i = 0; i < nseg; ++i) {
    const Point& next = points_[i + 1 == points_.size() ? 0 : i + 1];
    cum[i + 1] = cum[i] + norm(next - points_[i]);
  }
  length_ = cum.back();
  params_.resize(nseg + 1);
  for (std::size_t i = 0; i <= nseg; ++i) {
    params_[i] = length_ > 0.0 ? cum[i] / length_
                               : static_cast<double>(i) / static_cast<double>(nseg);
  }
  params_.back() = 1.0;
}

EvaluationGrid::EvaluationGrid(std::size_t n_eval, Topology topology)
    : n_(n_eval), topology_(topology) {
  if (n_eval < kMinNodes) {
    throw InputError("evaluation grid needs at least " + std::to_string(kMinNodes) +
                     " nodes, got " + std::to_string(n_eval));
  }
  intervals_ = topology == Topology::Closed ? static_cast<double>(n_eval)
                                            : static_cast<double>(n_eval - 1);
  spacing_ = 1.0 / intervals_;
}

std::vector<double> EvaluationGrid::nodes() const {
  std::vector<double> out(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = node(j);
  return out;
}

double Srvf::squared_l2() const {
  double sum = 0.0;
  for (const auto& q : values) sum += squared_norm(q);
  return sum * grid.spacing();
}

PlanarCurve resample_arc_length(const PlanarCurve& curve, std::size_t n_points) {
  if (n_points < 3) throw InputError("resampling needs at least 3 points");
  auto disp = resample_displacements(curve, n_points);
  for (auto& p : disp) p = curve[0] + p;
  return PlanarCurve(std::move(disp), curve.topology());
}

PlanarCurve rescale_unit_length(const PlanarCurve& curve, std::optional<std::size_t> n_points) {
  if (!(curve.length() > 0.0) || !std::isfinite(curve.length())) {
    throw InputError("degenerate curve: polygonal length is zero");
  }
  const std::size_t m = n_points.value_or(curve.size());
  if (m < 3) throw InputError("resampling needs at least 3 points");
  auto disp = resample_displacements(curve, m);
  const double len = polyline_length(disp, curve.topology());
  if (!(len > 0.0)) throw InputError("degenerate curve: resampled length is zero");
  for (auto& p : disp) p = (1.0 / len) * p;
  return PlanarCurve(std::move(disp), curve.topology());
}

Point evaluate_at(const PlanarCurve& curve, double t) {
  const double u = checked_param(curve, t);
  const auto hit = find(curve, u);
  const Point& a = curve[hit.index];
  const Point& b = node_wrapped(curve, hit.index + 1);
  if (hit.fraction == 0.0) return a;
  if (hit.fraction == 1.0) return b;
  return a + hit.fraction * (b - a);
}

Point displacement_at(const PlanarCurve& curve, double t) {
  const double u = checked_param(curve, t);
  const auto hit = find(curve, u);
  const Point& a = curve[hit.index];
  const Point& b = node_wrapped(curve, hit.index + 1);
  if (hit.fraction == 1.0) return b - curve[0];
  return (a - curve[0]) + hit.fraction * (b - a);
}

Srvf srvf_from_samples(std::span<const Point> positions, const EvaluationGrid& grid) {
  const std::size_t n = grid.size();
  if (positions.size() != n) {
    throw InputError("sample count does not match evaluation grid size");
  }
  const double h = grid.spacing();
  Srvf out{std::vector<Point>(n), grid};
  const bool closed = grid.topology() == Topology::Closed;
  for (std::size_t j = 0; j < n; ++j) {
    Point v;
    if (closed) {
      const Point& next = positions[j + 1 == n ? 0 : j + 1];
      const Point& prev = positions[j == 0 ? n - 1 : j - 1];
      v = (0.5 / h) * (next - prev);
    } else if (j == 0) {
      v = (1.0 / h) * (positions[1] - positions[0]);
    } else if (j == n - 1) {
      v = (1.0 / h) * (positions[n - 1] - positions[n - 2]);
    } else {
      v = (0.5 / h) * (positions[j + 1] - positions[j - 1]);
    }
    const double speed = norm(v);
    out.values[j] = speed < kZeroSpeed ? Point{} : (1.0 / std::sqrt(speed)) * v;
  }
  return out;
}

Srvf compute_srvf(const PlanarCurve& curve, const EvaluationGrid& grid) {
  if (curve.topology() != grid.topology()) {
    throw InputError("curve and evaluation grid topologies differ");
  }
  std::vector<Point> positions(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    positions[j] = displacement_at(curve, grid.node(j));
  }
  return srvf_from_samples(positions, grid);
}

PlanarCurve srvf_to_curve(const Srvf& q, Point start) {
  const std::size_t n = q.values.size();
  const double h = q.grid.spacing();
  std::vector<Point> pts(n);
  pts[0] = start;
  Point prev = norm(q.values[0]) * q.values[0];
  for (std::size_t j = 1; j < n; ++j) {
    const Point cur = norm(q.values[j]) * q.values[j];
    pts[j] = pts[j - 1] + (0.5 * h) * (prev + cur);
    prev = cur;
  }
  return PlanarCurve(std::move(pts), q.grid.topology());
}

std::vector<double> discrete_curvature(const PlanarCurve& curve) {
  const std::size_t n = curve.size();
  const bool closed = curve.topology() == Topology::Closed;
  const auto at = [&](std::ptrdiff_t i) -> const Point& {
    const auto m = static_cast<std::ptrdiff_t>(n);
    return curve[static_cast<std::size_t>(((i % m) + m) % m)];
  };

  std::vector<Point> smooth(n);
  for (std::size_t i = 0; i < n; ++i) {
    Point sum;
    int count = 0;
    for (std::ptrdiff_t d = -2; d <= 2; ++d) {
      const auto idx = static_cast<std::ptrdiff_t>(i) + d;
      if (!closed && (idx < 0 || idx >= static_cast<std::ptrdiff_t>(n))) continue;
      sum = sum + at(idx);
      ++count;
    }
    smooth[i] = (1.0 / count) * sum;
  }

  std::vector<double> kappa(n, 0.0);
  const std::size_t first = closed ? 0 : 1;
  const std::size_t last = closed ? n : n - 1;
  for (std::size_t i = first; i < last; ++i) {
    const Point& prev = smooth[i == 0 ? n - 1 : i - 1];
    const Point& next = smooth[i + 1 == n ? 0 : i + 1];
    const Point d1 = 0.5 * (next - prev);
    const Point d2 = next - 2.0 * smooth[i] + prev;
    const double speed2 = squared_norm(d1);
    if (std::sqrt(speed2) < kZeroSpeed) continue;
    kappa[i] = std::abs(d1.x * d2.y - d1.y * d2.x) / std::pow(speed2, 1.5);
  }
  if (!closed) {
    kappa[0] = kappa[1];
    kappa[n - 1] = kappa[n - 2];
  }
  return kappa;
}

PlanarCurve shift_start(const PlanarCurve& curve, std::size_t offset) {
  if (curve.topology() != Topology::Closed) {
    throw InputError("only closed curves can change their start point");
  }
  const std::size_t n = curve.size();
  std::vector<Point> pts(n);
  for (std::size_t i = 0; i < n; ++i) pts[i] = curve[(i + offset) % n];
  return PlanarCurve(std::move(pts), Topology::Closed);
}

} // namespace landmark
