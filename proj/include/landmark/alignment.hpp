#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "landmark/model.hpp"
#include "landmark/sampler.hpp"

namespace landmark {

/// Node of maximal smoothed curvature; ties go to the lowest index.
std::size_t select_reference_point(const PlanarCurve& curve);

/// Cyclic start offsets that align a closed-curve sample: the first curve's
/// offset is its reference point, every other curve's offset minimizes the
/// squared SRVF distance to the (shifted) first curve over all N shifts.
std::vector<std::size_t> start_offsets(const CurveSample& sample);

CurveSample align_sample_starts(const CurveSample& sample);

/// min{|a-b|, |a-1-b|, |a+1-b|}.
double circular_component_distance(double a, double b);

/// Summed circular distance between theta rotated by `shift` (component j
/// taken from theta[(j + shift) mod k]) and the reference.
double rotated_distance(std::span<const double> theta, std::span<const double> reference,
                        std::size_t shift);

/// Rotation minimizing rotated_distance; ties go to the smallest shift.
std::size_t best_cyclic_rotation(std::span<const double> theta,
                                 std::span<const double> reference);

/// Relabels closed-curve samples by the cyclic rotation closest to the first
/// sample. Variable-k sets are aligned within each k separately, using the
/// first sample of that k as reference. Open-curve sets are returned as is.
PosteriorSampleSet align_posterior_samples(const PosteriorSampleSet& samples);

} // namespace landmark
