#include "landmark/landmark_c.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>
#include <utility>

#include "landmark/alignment.hpp"
#include "landmark/error.hpp"
#include "landmark/io.hpp"

using namespace landmark;

struct lmk_sample {
  CurveSample sample;
};

struct lmk_result {
  PosteriorSampleSet samples;
  RunConfig config;
  std::string summary;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
lmk_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return LMK_OK;
  } catch (const InputError& e) {
    g_last_error = e.what();
    return LMK_ERR_INPUT;
  } catch (const RuntimeFailure& e) {
    g_last_error = e.what();
    return LMK_ERR_RUNTIME;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return LMK_ERR_RUNTIME;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LMK_ERR_RUNTIME;
  } catch (...) {
    g_last_error = "unknown error";
    return LMK_ERR_RUNTIME;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw InputError(what);
}

Topology topology_flag(int closed) { return closed ? Topology::Closed : Topology::Open; }

RunConfig config_or_default(const char* config_json) {
  if (config_json == nullptr || *config_json == '\0') return RunConfig{};
  return parse_run_config(config_json);
}

} // namespace

extern "C" {

const char* lmk_version(void) { return "1.0.0"; }

const char* lmk_last_error(void) { return g_last_error.c_str(); }

lmk_status lmk_config_normalize(const char* config_json, char* buf, size_t cap, size_t* needed) {
  return guarded([&] {
    require(config_json != nullptr, "config_json is null");
    const std::string text = serialize(parse_run_config(config_json));
    if (needed != nullptr) *needed = text.size() + 1;
    if (buf == nullptr || cap < text.size() + 1) {
      throw InputError("buffer too small for the configuration (" +
                       std::to_string(text.size() + 1) + " bytes needed)");
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
  });
}

lmk_status lmk_run_config(const char* config_json) {
  return guarded([&] {
    require(config_json != nullptr, "config_json is null");
    run_pipeline(parse_run_config(config_json));
  });
}

lmk_status lmk_generate(const char* kind, size_t n_points, double amplitude, size_t family_size,
                        double cut, const char* out_dir) {
  return guarded([&] {
    require(kind != nullptr && out_dir != nullptr, "kind and out_dir must not be null");
    SyntheticSpec spec;
    spec.kind = parse_synthetic_kind(kind);
    spec.n_points = n_points;
    spec.amplitude = amplitude;
    spec.family_size = family_size;
    spec.cut = cut;
    const auto curves = generate_synthetic(spec);
    const auto names = synthetic_file_names(spec);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw RuntimeFailure(std::string("cannot create ") + out_dir + ": " + ec.message());
    for (std::size_t i = 0; i < curves.size(); ++i) {
      write_curve_csv(curves[i], std::filesystem::path(out_dir) / names[i]);
    }
  });
}

lmk_status lmk_sample_load_csv(const char* const* paths, size_t n_paths, int closed,
                               size_t n_eval, lmk_sample** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = nullptr;
    require(paths != nullptr || n_paths == 0, "paths is null");
    std::vector<std::string> list;
    for (size_t i = 0; i < n_paths; ++i) {
      require(paths[i] != nullptr, "a path is null");
      list.emplace_back(paths[i]);
    }
    *out = new lmk_sample{load_curves(list, topology_flag(closed), n_eval)};
  });
}

lmk_status lmk_sample_from_points(const double* xy, const size_t* counts, size_t n_curves,
                                  int closed, size_t n_eval, lmk_sample** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = nullptr;
    require(xy != nullptr && counts != nullptr, "xy and counts must not be null");
    require(n_curves > 0, "at least one curve is needed");
    const Topology topo = topology_flag(closed);
    std::vector<PlanarCurve> curves;
    std::size_t offset = 0;
    for (size_t m = 0; m < n_curves; ++m) {
      std::vector<Point> pts(counts[m]);
      for (size_t i = 0; i < counts[m]; ++i) {
        pts[i] = {xy[2 * (offset + i)], xy[2 * (offset + i) + 1]};
      }
      offset += counts[m];
      curves.push_back(preprocess_curve(PlanarCurve(std::move(pts), topo), n_eval));
    }
    CurveSample sample(std::move(curves), n_eval);
    if (topo == Topology::Closed) sample = align_sample_starts(sample);
    *out = new lmk_sample{std::move(sample)};
  });
}

size_t lmk_sample_curve_count(const lmk_sample* sample) {
  return sample == nullptr ? 0 : sample->sample.size();
}

lmk_status lmk_sample_error_sq(const lmk_sample* sample, const double* theta, size_t k,
                               double* out) {
  return guarded([&] {
    require(sample != nullptr && out != nullptr, "sample and out must not be null");
    require(theta != nullptr || k == 0, "theta is null");
    LandmarkConfig cfg{{theta, theta + k}, sample->sample.topology()};
    require_valid(cfg);
    *out = total_error_sq(sample->sample, cfg);
  });
}

lmk_status lmk_sample_log_posterior(const lmk_sample* sample, const char* config_json,
                                    const double* theta, size_t k, int variable_k, double* out) {
  return guarded([&] {
    require(sample != nullptr && out != nullptr, "sample and out must not be null");
    require(theta != nullptr || k == 0, "theta is null");
    RunConfig config = config_or_default(config_json);
    config.topology = sample->sample.topology();
    ModelSpec spec = config.model_spec();
    spec.n_eval = sample->sample.grid().size();
    spec.validate();
    LandmarkConfig cfg{{theta, theta + k}, sample->sample.topology()};
    *out = log_posterior(sample->sample, cfg, spec, variable_k != 0);
  });
}

void lmk_sample_free(lmk_sample* sample) { delete sample; }

lmk_status lmk_run(const lmk_sample* sample, const char* config_json, lmk_result** out) {
  return guarded([&] {
    require(sample != nullptr && out != nullptr, "sample and out must not be null");
    *out = nullptr;
    RunConfig config = config_or_default(config_json);
    if (config.topology != sample->sample.topology()) {
      throw InputError(std::string("config topology is ") + to_string(config.topology) +
                       " but the sample is " + to_string(sample->sample.topology()));
    }
    if (config.model.n_eval != sample->sample.grid().size()) {
      throw InputError("config n_eval does not match the sample's evaluation grid");
    }
    ModelSpec spec = config.model_spec();
    spec.validate();
    PosteriorSampleSet samples;
    switch (config.mode) {
    case RunMode::FixedK:
      samples = run_chain(std::nullopt, config.k, sample->sample, spec, config.rwm());
      break;
    case RunMode::Rjmcmc:
      samples = run_rjmcmc(std::nullopt, sample->sample, spec, config.rjmcmc());
      break;
    default:
      throw InputError("in-memory runs support the fixed-k and rjmcmc modes only");
    }
    auto result = std::make_unique<lmk_result>();
    result->summary = summary_json(samples, config);
    result->samples = std::move(samples);
    result->config = std::move(config);
    *out = result.release();
  });
}

size_t lmk_result_count(const lmk_result* result) {
  return result == nullptr ? 0 : result->samples.size();
}

size_t lmk_result_k(const lmk_result* result, size_t index) {
  if (result == nullptr || index >= result->samples.size()) return 0;
  return result->samples.samples[index].k();
}

double lmk_result_log_post(const lmk_result* result, size_t index) {
  if (result == nullptr || index >= result->samples.size()) return 0.0;
  return result->samples.log_post[index];
}

double lmk_result_accept_rate(const lmk_result* result) {
  return result == nullptr ? 0.0 : result->samples.accept_rate;
}

lmk_status lmk_result_theta(const lmk_result* result, size_t index, double* out, size_t cap) {
  return guarded([&] {
    require(result != nullptr && out != nullptr, "result and out must not be null");
    if (index >= result->samples.size()) throw InputError("sample index out of range");
    const auto& theta = result->samples.samples[index].theta;
    if (cap < theta.size()) throw InputError("output buffer holds fewer than k values");
    std::copy(theta.begin(), theta.end(), out);
  });
}

const char* lmk_result_summary_json(const lmk_result* result) {
  return result == nullptr ? "" : result->summary.c_str();
}

lmk_status lmk_result_write(const lmk_result* result, const char* out_dir) {
  return guarded([&] {
    require(result != nullptr && out_dir != nullptr, "result and out_dir must not be null");
    persist_results(result->samples, result->config, out_dir);
  });
}

void lmk_result_free(lmk_result* result) { delete result; }

} // extern "C"
