#include "landmark/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "landmark/error.hpp"

namespace landmark {

std::size_t select_reference_point(const PlanarCurve& curve) {
  const auto kappa = discrete_curvature(curve);
  std::size_t best = 0;
  for (std::size_t i = 1; i < kappa.size(); ++i) {
    if (kappa[i] > kappa[best]) best = i;
  }
  return best;
}

namespace {

double shifted_srvf_distance(const Srvf& q, const Srvf& ref, std::size_t shift) {
  const std::size_t n = ref.values.size();
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sum += squared_norm(q.values[(j + shift) % n] - ref.values[j]);
  }
  return sum;
}

} // namespace

std::vector<std::size_t> start_offsets(const CurveSample& sample) {
  if (sample.topology() != Topology::Closed) {
    throw InputError("start-point alignment applies to closed curves only");
  }
  const auto& curves = sample.curves();
  std::vector<std::size_t> offsets(curves.size(), 0);
  offsets[0] = select_reference_point(curves[0]);
  if (curves.size() == 1) return offsets;

  const Srvf ref = compute_srvf(shift_start(curves[0], offsets[0]), sample.grid());
  const std::size_t n = sample.grid().size();
  for (std::size_t m = 1; m < curves.size(); ++m) {
    if (curves[m].size() != n) {
      throw InputError("start-point alignment needs curves stored at the grid resolution");
    }
    const Srvf& q = sample.srvfs()[m];
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < n; ++s) {
      const double d = shifted_srvf_distance(q, ref, s);
      if (d < best_d) {
        best_d = d;
        best = s;
      }
    }
    offsets[m] = best;
  }
  return offsets;
}

CurveSample align_sample_starts(const CurveSample& sample) {
  const auto offsets = start_offsets(sample);
  std::vector<PlanarCurve> shifted;
  shifted.reserve(sample.size());
  for (std::size_t m = 0; m < sample.size(); ++m) {
    shifted.push_back(shift_start(sample.curves()[m], offsets[m]));
  }
  return CurveSample(std::move(shifted), sample.grid().size());
}

double circular_component_distance(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

double rotated_distance(std::span<const double> theta, std::span<const double> reference,
                        std::size_t shift) {
  const std::size_t k = theta.size();
  double sum = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    sum += circular_component_distance(theta[(j + shift) % k], reference[j]);
  }
  return sum;
}

std::size_t best_cyclic_rotation(std::span<const double> theta,
                                 std::span<const double> reference) {
  if (theta.size() != reference.size()) {
    throw InputError("cyclic alignment needs configurations of equal size");
  }
  std::size_t best = 0;
  double best_d = rotated_distance(theta, reference, 0);
  for (std::size_t s = 1; s < theta.size(); ++s) {
    const double d = rotated_distance(theta, reference, s);
    if (d < best_d) {
      best_d = d;
      best = s;
    }
  }
  return best;
}

PosteriorSampleSet align_posterior_samples(const PosteriorSampleSet& samples) {
  PosteriorSampleSet out = samples;
  if (samples.topology != Topology::Closed) return out;
  std::map<std::size_t, std::size_t> reference_of_k;
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    auto& theta = out.samples[i].theta;
    auto [it, inserted] = reference_of_k.try_emplace(theta.size(), i);
    if (inserted) continue;
    const auto& ref = samples.samples[it->second].theta;
    const std::size_t shift = best_cyclic_rotation(theta, ref);
    std::rotate(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(shift), theta.end());
  }
  return out;
}

} // namespace landmark
