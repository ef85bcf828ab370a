#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace landmark {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point p) { return {s * p.x, s * p.y}; }
  friend bool operator==(Point a, Point b) = default;
};

double norm(Point p);
double squared_norm(Point p);

enum class Topology { Open, Closed };

const char* to_string(Topology topology);
Topology parse_topology(const std::string& text);

/// Ordered planar samples of a curve. Closed curves are stored cyclically
/// without a duplicated end point; a trailing copy of the first point is
/// dropped on construction.
///
/// The curve is parameterized by normalized polygonal arc length, so the
/// i-th node sits at parameter node_params()[i] in [0,1].
class PlanarCurve {
public:
  PlanarCurve(std::vector<Point> points, Topology topology);

  std::span<const Point> points() const { return points_; }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }
  Topology topology() const { return topology_; }

  /// Polygonal length, including the closing segment for closed curves.
  double length() const { return length_; }

  /// Arc-length fraction of every node; for closed curves an extra final
  /// entry equal to 1 marks the return to the first node.
  std::span<const double> node_params() const { return params_; }

private:
  std::vector<Point> points_;
  Topology topology_;
  double length_ = 0.0;
  std::vector<double> params_;
};

/// N evaluation nodes on [0,1]: both end points for open curves, the
/// right end point excluded for closed curves.
class EvaluationGrid {
public:
  static constexpr std::size_t kMinNodes = 16;

  EvaluationGrid(std::size_t n_eval, Topology topology);

  std::size_t size() const { return n_; }
  Topology topology() const { return topology_; }
  double spacing() const { return spacing_; }
  /// t_j = j/(N-1) for open curves, j/N for closed curves (exact at j = N-1).
  double node(std::size_t j) const { return static_cast<double>(j) / intervals_; }
  std::vector<double> nodes() const;

  friend bool operator==(const EvaluationGrid&, const EvaluationGrid&) = default;

private:
  std::size_t n_;
  Topology topology_;
  double intervals_;
  double spacing_;
};

/// Discrete square-root velocity function on an evaluation grid.
struct Srvf {
  std::vector<Point> values;
  EvaluationGrid grid;

  /// Riemann sum of |q|^2, which approximates the curve length.
  double squared_l2() const;
};

/// Scales a curve to unit polygonal length and resamples it at uniform
/// arc-length spacing, either at the stored resolution or at n_points.
/// The first sample is moved to the origin.
PlanarCurve rescale_unit_length(const PlanarCurve& curve,
                                std::optional<std::size_t> n_points = std::nullopt);

/// Arc-length resampling to n_points without rescaling or translation.
PlanarCurve resample_arc_length(const PlanarCurve& curve, std::size_t n_points);

/// Linear interpolation of the stored polyline at arc-length parameter t.
/// Open curves require t in [0,1]; closed curves wrap t mod 1.
Point evaluate_at(const PlanarCurve& curve, double t);

/// Same as evaluate_at, expressed relative to the first stored point.
/// Only coordinate differences enter the result.
Point displacement_at(const PlanarCurve& curve, double t);

Srvf compute_srvf(const PlanarCurve& curve, const EvaluationGrid& grid);

/// SRVF of a curve already sampled at the grid nodes (positions[j] at node j).
/// Derivatives are centered differences, one-sided at open end points.
Srvf srvf_from_samples(std::span<const Point> positions, const EvaluationGrid& grid);

/// Trapezoidal integration of q|q| starting from `start`.
PlanarCurve srvf_to_curve(const Srvf& q, Point start);

/// Absolute curvature at every node after 5-point moving-average smoothing.
std::vector<double> discrete_curvature(const PlanarCurve& curve);

/// Cyclic relabeling of a closed curve so that node `offset` becomes node 0.
PlanarCurve shift_start(const PlanarCurve& curve, std::size_t offset);

} // namespace landmark
