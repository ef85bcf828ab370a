#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "landmark/model.hpp"
#include "landmark/posterior.hpp"
#include "landmark/rjmcmc.hpp"
#include "landmark/sampler.hpp"

namespace landmark {

enum class RunMode { FixedK, Rjmcmc, DistanceCriterion, Summarize };

const char* to_string(RunMode mode);
RunMode parse_run_mode(const std::string& text);

/// Everything a run needs, serialized as one JSON document.
struct RunConfig {
  RunMode mode = RunMode::FixedK;
  Topology topology = Topology::Open;
  std::size_t k = 4;
  std::size_t k_lo = 1;
  std::size_t k_hi = 10;
  ModelSpec model;
  /// Iterations, burn-in, thinning, stay variance, move probabilities and
  /// k_max; the seed field is ignored in favor of `seed` below.
  RjmcmcConfig sampler;
  std::uint64_t seed = 1;
  std::vector<std::string> inputs;
  std::string output_dir = "out";
  /// samples.csv to read in summarize mode.
  std::string samples_path;

  /// Checks that the fields the mode needs are present and consistent.
  void validate() const;
  RwmConfig rwm() const;
  RjmcmcConfig rjmcmc() const;
  ModelSpec model_spec() const;

  friend bool operator==(const RunConfig&, const RunConfig&);
};

std::string serialize(const RunConfig& config);
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Two-column x,y CSV with an optional header row.
PlanarCurve read_curve_csv(const std::filesystem::path& path, Topology topology);
void write_curve_csv(const PlanarCurve& curve, const std::filesystem::path& path);

/// Reads, preprocesses and caches a sample; closed curves are start-aligned.
CurveSample load_curves(const std::vector<std::string>& paths, Topology topology,
                        std::size_t n_eval);

enum class SyntheticKind { Sine, ScaledSineFamily, HalfCircle, CutHalfCircle };

SyntheticKind parse_synthetic_kind(const std::string& text);
const char* to_string(SyntheticKind kind);

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::Sine;
  std::size_t n_points = 200;
  /// Amplitude of the single sine curve.
  double amplitude = 1.0;
  /// Number of curves m = 1..family_size in the scaled family.
  std::size_t family_size = 5;
  /// x position of the vertical cut of the cut half circle.
  double cut = 0.3;
};

/// Analytic point at parameter t. For the sine kinds t is the x coordinate
/// and m the amplitude; for the half circles t is the arc-length fraction
/// along the perimeter, starting at (-1, 0) along the base.
Point synthetic_point(const SyntheticSpec& spec, double t, double m = 1.0);

/// Raw (unscaled) synthetic curves sampled analytically.
std::vector<PlanarCurve> generate_synthetic(const SyntheticSpec& spec);

/// File names generate_synthetic's curves are written under.
std::vector<std::string> synthetic_file_names(const SyntheticSpec& spec);

void write_samples_csv(const PosteriorSampleSet& samples, const std::filesystem::path& path);
PosteriorSampleSet read_samples_csv(const std::filesystem::path& path, Topology topology);
void write_trace_csv(const PosteriorSampleSet& samples, const std::filesystem::path& path);
void write_density_csv(const Density& density, const std::filesystem::path& path);
void write_dk2_csv(const std::vector<DistanceCriterionPoint>& points,
                   const std::filesystem::path& path);

/// JSON summary of a sample set with the run configuration echoed.
/// Closed-curve samples are aligned before summarizing.
std::string summary_json(const PosteriorSampleSet& samples, const RunConfig& config);

/// Writes samples.csv, trace.csv, summary.json and density_<j>.csv.
/// Returns the paths written.
std::vector<std::filesystem::path> persist_results(const PosteriorSampleSet& samples,
                                                   const RunConfig& config,
                                                   const std::filesystem::path& out_dir);

/// Executes a full run described by the configuration.
void run_pipeline(const RunConfig& config);

/// %.17g formatting.
std::string format_double(double v);

} // namespace landmark
