#pragma once

#include <cstddef>
#include <vector>

#include "landmark/curve.hpp"

namespace landmark {

/// Landmark locations on the arc-length domain [0,1).
///
/// Open curves keep 0 < theta_1 < ... < theta_k < 1. Closed curves keep
/// distinct values in cyclic ascending order; samplers store them sorted,
/// while posterior alignment may rotate the labels.
struct LandmarkConfig {
  std::vector<double> theta;
  Topology topology = Topology::Open;

  std::size_t k() const { return theta.size(); }
  friend bool operator==(const LandmarkConfig&, const LandmarkConfig&) = default;
};

/// Consecutive landmark gaps; k+1 entries for open curves, k for closed.
struct SpacingVector {
  std::vector<double> s;
  Topology topology = Topology::Open;
};

/// Smallest admissible landmark count: 1 for open curves, 3 for closed.
std::size_t min_landmarks(Topology topology);

bool is_valid(const LandmarkConfig& cfg);
void require_valid(const LandmarkConfig& cfg);

SpacingVector theta_to_spacing(const LandmarkConfig& cfg);

/// Cumulative sums of the gaps. Open curves start at 0 and ignore `start`;
/// closed curves start at `start`, wrap mod 1 and sort.
LandmarkConfig spacing_to_theta(const SpacingVector& s, double start = 0.0);

/// Smallest gap of the configuration, including the end gaps (open) or the
/// wrap gap (closed).
double min_spacing(const LandmarkConfig& cfg);

/// Piecewise-linear interpolant through the landmarks, evaluated at the grid
/// nodes. Open curves also pass through both end points.
PlanarCurve linear_reconstruction(const PlanarCurve& curve, const LandmarkConfig& cfg,
                                  const EvaluationGrid& grid);

/// Squared Euclidean norm of the stacked SRVF difference between the curve
/// and its landmark reconstruction; no grid-spacing weight.
double reconstruction_error_sq(const PlanarCurve& curve, const LandmarkConfig& cfg,
                               const EvaluationGrid& grid);

/// Same quantity with the data SRVF supplied by the caller.
double reconstruction_error_sq(const PlanarCurve& curve, const Srvf& curve_srvf,
                               const LandmarkConfig& cfg);

} // namespace landmark
