#include "landmark/io.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "landmark/alignment.hpp"
#include "landmark/error.hpp"

namespace landmark {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::optional<double> parse_number(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size() || errno == ERANGE) return std::nullopt;
  return v;
}

std::string location(const fs::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw RuntimeFailure("cannot open " + path.string() + " for writing");
  return out;
}

void finish_output(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw RuntimeFailure("failed writing " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* to_string(LikelihoodKind kind) {
  return kind == LikelihoodKind::Srvf ? "srvf" : "constant";
}

LikelihoodKind parse_likelihood(const std::string& text) {
  if (text == "srvf") return LikelihoodKind::Srvf;
  if (text == "constant") return LikelihoodKind::Constant;
  throw InputError("unknown likelihood '" + text + "' (expected srvf or constant)");
}

const char* to_string(ErrorScale scale) {
  return scale == ErrorScale::GridWeighted ? "grid-weighted" : "euclidean";
}

ErrorScale parse_error_scale(const std::string& text) {
  if (text == "grid-weighted") return ErrorScale::GridWeighted;
  if (text == "euclidean") return ErrorScale::Euclidean;
  throw InputError("unknown error_scale '" + text + "' (expected grid-weighted or euclidean)");
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    const bool ok = std::any_of(known.begin(), known.end(),
                                [&](const char* k) { return item.key() == k; });
    if (!ok) throw InputError("unknown config key '" + where + item.key() + "'");
  }
}

template <typename T>
void read_field(const json& obj, const char* key, T& target, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    target = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError("config key '" + where + key + "' has the wrong type: " + e.what());
  }
}

std::size_t max_k(const PosteriorSampleSet& samples) {
  std::size_t k = 0;
  for (const auto& s : samples.samples) k = std::max(k, s.k());
  return k;
}

json numbers(const std::vector<double>& v) { return json(v); }

json summary_record(const PosteriorSummary& s) {
  json out;
  out["k"] = s.k;
  out["n_samples"] = s.n_samples;
  std::vector<double> mean, median, sd, lo, hi;
  for (const auto& c : s.components) {
    mean.push_back(c.mean);
    median.push_back(c.median);
    sd.push_back(c.sd);
    lo.push_back(c.ci_low);
    hi.push_back(c.ci_high);
  }
  out["mean"] = numbers(mean);
  out["median"] = numbers(median);
  out["sd"] = numbers(sd);
  out["ci_low"] = numbers(lo);
  out["ci_high"] = numbers(hi);
  out["map"] = numbers(s.map.theta);
  out["map_log_post"] = s.map_log_post;
  return out;
}

std::size_t modal_k(const PosteriorSampleSet& samples) {
  std::size_t best_k = 0;
  std::size_t best_count = 0;
  for (const auto& [k, count] : k_histogram(samples)) {
    if (count > best_count) {
      best_count = count;
      best_k = k;
    }
  }
  return best_k;
}

} // namespace

const char* to_string(RunMode mode) {
  switch (mode) {
  case RunMode::FixedK: return "fixed-k";
  case RunMode::Rjmcmc: return "rjmcmc";
  case RunMode::DistanceCriterion: return "distance-criterion";
  case RunMode::Summarize: return "summarize";
  }
  return "unknown";
}

RunMode parse_run_mode(const std::string& text) {
  for (RunMode m : {RunMode::FixedK, RunMode::Rjmcmc, RunMode::DistanceCriterion,
                    RunMode::Summarize}) {
    if (text == to_string(m)) return m;
  }
  throw InputError("unknown mode '" + text +
                   "' (expected fixed-k, rjmcmc, distance-criterion or summarize)");
}

void RunConfig::validate() const {
  model_spec().validate();
  switch (mode) {
  case RunMode::FixedK:
    if (k < min_landmarks(topology)) {
      throw InputError("k = " + std::to_string(k) + " is below the minimum for " +
                       to_string(topology) + " curves");
    }
    rwm().validate();
    break;
  case RunMode::Rjmcmc:
    rjmcmc().validate();
    break;
  case RunMode::DistanceCriterion:
    if (k_lo > k_hi) throw InputError("k_range is empty");
    if (k_lo < min_landmarks(topology)) throw InputError("k_range starts below the minimum k");
    rwm().validate();
    break;
  case RunMode::Summarize:
    if (samples_path.empty()) throw InputError("summarize mode needs samples_path");
    return;
  }
  if (inputs.empty()) throw InputError("no input curves given");
}

RwmConfig RunConfig::rwm() const {
  RwmConfig out;
  out.n_iter = sampler.n_iter;
  out.burn_in_frac = sampler.burn_in_frac;
  out.thin = sampler.thin;
  out.proposal_var = sampler.proposal_var;
  out.seed = seed;
  return out;
}

RjmcmcConfig RunConfig::rjmcmc() const {
  RjmcmcConfig out = sampler;
  out.seed = seed;
  return out;
}

ModelSpec RunConfig::model_spec() const {
  ModelSpec out = model;
  out.topology = topology;
  return out;
}

bool operator==(const RunConfig& x, const RunConfig& y) {
  const auto& mx = x.model;
  const auto& my = y.model;
  const auto& sx = x.sampler;
  const auto& sy = y.sampler;
  return x.mode == y.mode && x.topology == y.topology && x.k == y.k && x.k_lo == y.k_lo &&
         x.k_hi == y.k_hi && mx.a == my.a && mx.b == my.b && mx.alpha == my.alpha &&
         mx.lambda == my.lambda && mx.n_eval == my.n_eval && mx.likelihood == my.likelihood &&
         mx.sample_kappa == my.sample_kappa && mx.error_scale == my.error_scale &&
         sx.n_iter == sy.n_iter &&
         sx.burn_in_frac == sy.burn_in_frac && sx.thin == sy.thin &&
         sx.proposal_var == sy.proposal_var && sx.move_probs == sy.move_probs &&
         sx.k_max == sy.k_max && x.seed == y.seed && x.inputs == y.inputs &&
         x.output_dir == y.output_dir && x.samples_path == y.samples_path;
}

namespace {

json to_json(const RunConfig& c) {
  json j;
  j["mode"] = to_string(c.mode);
  j["topology"] = to_string(c.topology);
  j["k"] = c.k;
  j["k_range"] = {c.k_lo, c.k_hi};
  j["model"] = {{"a", c.model.a},
                {"b", c.model.b},
                {"alpha", c.model.alpha},
                {"lambda", c.model.lambda},
                {"n_eval", c.model.n_eval},
                {"likelihood", to_string(c.model.likelihood)},
                {"sample_kappa", c.model.sample_kappa},
                {"error_scale", to_string(c.model.error_scale)}};
  j["sampler"] = {{"n_iter", c.sampler.n_iter},
                  {"burn_in_frac", c.sampler.burn_in_frac},
                  {"thin", c.sampler.thin},
                  {"proposal_var", c.sampler.proposal_var},
                  {"move_probs", c.sampler.move_probs},
                  {"k_max", c.sampler.k_max}};
  j["seed"] = c.seed;
  j["inputs"] = c.inputs;
  j["output_dir"] = c.output_dir;
  j["samples_path"] = c.samples_path;
  return j;
}

} // namespace

std::string serialize(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

RunConfig parse_run_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("config must be a JSON object");
  reject_unknown_keys(j,
                      {"mode", "topology", "k", "k_range", "model", "sampler", "seed", "inputs",
                       "output_dir", "samples_path"},
                      "");
  RunConfig c;
  std::string text;
  if (j.contains("mode")) {
    read_field(j, "mode", text, "");
    c.mode = parse_run_mode(text);
  }
  if (j.contains("topology")) {
    read_field(j, "topology", text, "");
    c.topology = parse_topology(text);
  }
  read_field(j, "k", c.k, "");
  if (j.contains("k_range")) {
    std::vector<std::size_t> range;
    read_field(j, "k_range", range, "");
    if (range.size() != 2) throw InputError("k_range must be [k_lo, k_hi]");
    c.k_lo = range[0];
    c.k_hi = range[1];
  }
  if (j.contains("model")) {
    const json& m = j.at("model");
    if (!m.is_object()) throw InputError("config key 'model' must be an object");
    reject_unknown_keys(m, {"a", "b", "alpha", "lambda", "n_eval", "likelihood", "sample_kappa",
                         "error_scale"},
                        "model.");
    read_field(m, "a", c.model.a, "model.");
    read_field(m, "b", c.model.b, "model.");
    read_field(m, "alpha", c.model.alpha, "model.");
    read_field(m, "lambda", c.model.lambda, "model.");
    read_field(m, "n_eval", c.model.n_eval, "model.");
    read_field(m, "sample_kappa", c.model.sample_kappa, "model.");
    if (m.contains("likelihood")) {
      read_field(m, "likelihood", text, "model.");
      c.model.likelihood = parse_likelihood(text);
    }
    if (m.contains("error_scale")) {
      read_field(m, "error_scale", text, "model.");
      c.model.error_scale = parse_error_scale(text);
    }
  }
  if (j.contains("sampler")) {
    const json& s = j.at("sampler");
    if (!s.is_object()) throw InputError("config key 'sampler' must be an object");
    reject_unknown_keys(s, {"n_iter", "burn_in_frac", "thin", "proposal_var", "move_probs", "k_max"},
                        "sampler.");
    read_field(s, "n_iter", c.sampler.n_iter, "sampler.");
    read_field(s, "burn_in_frac", c.sampler.burn_in_frac, "sampler.");
    read_field(s, "thin", c.sampler.thin, "sampler.");
    read_field(s, "proposal_var", c.sampler.proposal_var, "sampler.");
    read_field(s, "k_max", c.sampler.k_max, "sampler.");
    if (s.contains("move_probs")) {
      std::vector<double> probs;
      read_field(s, "move_probs", probs, "sampler.");
      if (probs.size() != 3) throw InputError("sampler.move_probs must have three entries");
      std::copy(probs.begin(), probs.end(), c.sampler.move_probs.begin());
    }
  }
  read_field(j, "seed", c.seed, "");
  read_field(j, "inputs", c.inputs, "");
  read_field(j, "output_dir", c.output_dir, "");
  read_field(j, "samples_path", c.samples_path, "");
  c.model.topology = c.topology;
  c.sampler.seed = c.seed;
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  try {
    return parse_run_config(read_file(path));
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

PlanarCurve read_curve_csv(const fs::path& path, Topology topology) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open curve file " + path.string());
  std::vector<Point> pts;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto cells = split_cells(body);
    const bool first = !seen_content;
    seen_content = true;
    if (cells.size() != 2) {
      throw InputError(location(path, line_no) + ": expected 2 columns (x,y), found " +
                       std::to_string(cells.size()));
    }
    const auto x = parse_number(cells[0]);
    const auto y = parse_number(cells[1]);
    if (!x && !y && first) continue;
    if (!x || !y) {
      const std::string& bad = x ? cells[1] : cells[0];
      throw InputError(location(path, line_no) + ": non-numeric cell '" + bad + "'");
    }
    if (!std::isfinite(*x) || !std::isfinite(*y)) {
      throw InputError(location(path, line_no) + ": non-finite coordinate");
    }
    pts.push_back({*x, *y});
  }
  if (pts.size() < 3) {
    throw InputError(path.string() + ": a curve needs at least 3 points, found " +
                     std::to_string(pts.size()));
  }
  try {
    PlanarCurve curve(std::move(pts), topology);
    if (!(curve.length() > 0.0)) throw InputError("curve has zero length");
    return curve;
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

void write_curve_csv(const PlanarCurve& curve, const fs::path& path) {
  auto out = open_output(path);
  out << "x,y\n";
  for (const auto& p : curve.points()) out << format_double(p.x) << ',' << format_double(p.y) << '\n';
  finish_output(out, path);
}

CurveSample load_curves(const std::vector<std::string>& paths, Topology topology,
                        std::size_t n_eval) {
  if (paths.empty()) throw InputError("no curve files given");
  std::vector<PlanarCurve> curves;
  curves.reserve(paths.size());
  for (const auto& p : paths) {
    const auto raw = read_curve_csv(p, topology);
    try {
      curves.push_back(preprocess_curve(raw, n_eval));
    } catch (const InputError& e) {
      throw InputError(p + ": " + e.what());
    }
  }
  CurveSample sample(std::move(curves), n_eval);
  if (topology == Topology::Closed) return align_sample_starts(sample);
  return sample;
}

const char* to_string(SyntheticKind kind) {
  switch (kind) {
  case SyntheticKind::Sine: return "sine";
  case SyntheticKind::ScaledSineFamily: return "scaled-sine-family";
  case SyntheticKind::HalfCircle: return "half-circle";
  case SyntheticKind::CutHalfCircle: return "cut-half-circle";
  }
  return "unknown";
}

SyntheticKind parse_synthetic_kind(const std::string& text) {
  for (SyntheticKind k : {SyntheticKind::Sine, SyntheticKind::ScaledSineFamily,
                          SyntheticKind::HalfCircle, SyntheticKind::CutHalfCircle}) {
    if (text == to_string(k)) return k;
  }
  throw InputError("unknown synthetic curve '" + text +
                   "' (expected sine, scaled-sine-family, half-circle or cut-half-circle)");
}

Point synthetic_point(const SyntheticSpec& spec, double t, double m) {
  constexpr double pi = std::numbers::pi;
  switch (spec.kind) {
  case SyntheticKind::Sine:
  case SyntheticKind::ScaledSineFamily:
    return {t, m * std::sin(4.0 * pi * t)};
  case SyntheticKind::HalfCircle:
  case SyntheticKind::CutHalfCircle: {
    // Perimeter pieces: base from (-1,0) to (c,0), the vertical cut from
    // (c,0) up to the circle, then the arc back to (-1,0). The plain half
    // circle is the case c = 1 with an empty cut.
    const double c = spec.kind == SyntheticKind::HalfCircle ? 1.0 : spec.cut;
    const double h = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double phi0 = std::acos(c);
    const double base = 1.0 + c;
    const double arc = pi - phi0;
    const double total = base + h + arc;
    const double s = (t - std::floor(t)) * total;
    if (s < base) return {-1.0 + s, 0.0};
    if (s < base + h) return {c, s - base};
    const double phi = phi0 + (s - base - h);
    return {std::cos(phi), std::sin(phi)};
  }
  }
  return {};
}

std::vector<PlanarCurve> generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_points < 3) throw InputError("synthetic curves need at least 3 points");
  if (spec.kind == SyntheticKind::CutHalfCircle && !(spec.cut > -1.0 && spec.cut < 1.0)) {
    throw InputError("the cut must lie strictly inside (-1, 1)");
  }
  if (spec.kind == SyntheticKind::ScaledSineFamily && spec.family_size == 0) {
    throw InputError("the scaled family needs at least one curve");
  }
  const auto n = spec.n_points;
  std::vector<PlanarCurve> out;
  switch (spec.kind) {
  case SyntheticKind::Sine:
  case SyntheticKind::ScaledSineFamily: {
    const std::size_t count = spec.kind == SyntheticKind::Sine ? 1 : spec.family_size;
    for (std::size_t m = 1; m <= count; ++m) {
      const double amp =
          spec.kind == SyntheticKind::Sine ? spec.amplitude : static_cast<double>(m);
      std::vector<Point> pts(n);
      for (std::size_t j = 0; j < n; ++j) {
        pts[j] = synthetic_point(spec, static_cast<double>(j) / static_cast<double>(n - 1), amp);
      }
      out.emplace_back(std::move(pts), Topology::Open);
    }
    break;
  }
  case SyntheticKind::HalfCircle:
  case SyntheticKind::CutHalfCircle: {
    std::vector<Point> pts(n);
    for (std::size_t j = 0; j < n; ++j) {
      pts[j] = synthetic_point(spec, static_cast<double>(j) / static_cast<double>(n));
    }
    out.emplace_back(std::move(pts), Topology::Closed);
    break;
  }
  }
  return out;
}

std::vector<std::string> synthetic_file_names(const SyntheticSpec& spec) {
  switch (spec.kind) {
  case SyntheticKind::Sine: return {"sine.csv"};
  case SyntheticKind::ScaledSineFamily: {
    std::vector<std::string> names;
    for (std::size_t m = 1; m <= spec.family_size; ++m) {
      names.push_back("sine_m" + std::to_string(m) + ".csv");
    }
    return names;
  }
  case SyntheticKind::HalfCircle: return {"half_circle.csv"};
  case SyntheticKind::CutHalfCircle: return {"cut_half_circle.csv"};
  }
  return {};
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_samples_csv(const PosteriorSampleSet& samples, const fs::path& path) {
  const std::size_t width = max_k(samples);
  auto out = open_output(path);
  out << "iteration,k";
  for (std::size_t j = 1; j <= width; ++j) out << ",theta_" << j;
  out << ",log_post\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& theta = samples.samples[i].theta;
    out << (i < samples.iteration.size() ? samples.iteration[i] : i) << ',' << theta.size();
    for (std::size_t j = 0; j < width; ++j) {
      out << ',';
      if (j < theta.size()) out << format_double(theta[j]);
    }
    out << ',' << format_double(samples.log_post[i]) << '\n';
  }
  finish_output(out, path);
}

PosteriorSampleSet read_samples_csv(const fs::path& path, Topology topology) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open samples file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw InputError(path.string() + ": empty samples file");
  const auto header = split_cells(trim(line));
  if (header.size() < 3 || header.front() != "iteration" || header[1] != "k" ||
      header.back() != "log_post") {
    throw InputError(location(path, 1) + ": expected header iteration,k,theta_...,log_post");
  }
  const std::size_t width = header.size() - 3;
  PosteriorSampleSet out;
  out.topology = topology;
  std::size_t line_no = 1;
  std::size_t first_k = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto cells = split_cells(body);
    if (cells.size() != header.size()) {
      throw InputError(location(path, line_no) + ": expected " + std::to_string(header.size()) +
                       " columns, found " + std::to_string(cells.size()));
    }
    const auto iter = parse_number(cells[0]);
    const auto k = parse_number(cells[1]);
    const auto lp = parse_number(cells.back());
    if (!iter || !k || !lp || *k < 1.0 || *k > static_cast<double>(width)) {
      throw InputError(location(path, line_no) + ": malformed iteration, k or log_post");
    }
    const auto kk = static_cast<std::size_t>(*k);
    LandmarkConfig cfg{{}, topology};
    for (std::size_t j = 0; j < width; ++j) {
      const auto& cell = cells[2 + j];
      if (j < kk) {
        const auto v = parse_number(cell);
        if (!v) throw InputError(location(path, line_no) + ": non-numeric cell '" + cell + "'");
        cfg.theta.push_back(*v);
      } else if (!cell.empty()) {
        throw InputError(location(path, line_no) + ": value beyond column k");
      }
    }
    if (out.samples.empty()) first_k = kk;
    if (kk != first_k) out.variable_k = true;
    out.samples.push_back(std::move(cfg));
    out.iteration.push_back(static_cast<std::size_t>(*iter));
    out.log_post.push_back(*lp);
  }
  if (out.samples.empty()) throw InputError(path.string() + ": no samples");
  return out;
}

void write_trace_csv(const PosteriorSampleSet& samples, const fs::path& path) {
  auto out = open_output(path);
  out << "iteration,k,log_post\n";
  for (std::size_t t = 0; t < samples.trace.size(); ++t) {
    out << t + 1 << ',' << (t < samples.trace_k.size() ? samples.trace_k[t] : 0) << ','
        << format_double(samples.trace[t]) << '\n';
  }
  finish_output(out, path);
}

void write_density_csv(const Density& density, const fs::path& path) {
  auto out = open_output(path);
  out << "t,density\n";
  for (std::size_t g = 0; g < density.grid.size(); ++g) {
    out << format_double(density.grid[g]) << ',' << format_double(density.values[g]) << '\n';
  }
  finish_output(out, path);
}

void write_dk2_csv(const std::vector<DistanceCriterionPoint>& points, const fs::path& path) {
  auto out = open_output(path);
  out << "k,dk2,accept_rate\n";
  for (const auto& p : points) {
    out << p.k << ',' << format_double(p.dk2) << ',' << format_double(p.accept_rate) << '\n';
  }
  finish_output(out, path);
}

namespace {

// Summary input: closed-curve samples aligned, then the modal-k subset.
PosteriorSampleSet summary_subset(const PosteriorSampleSet& samples) {
  const auto aligned = align_posterior_samples(samples);
  if (!samples.variable_k) return aligned;
  return filter_k(aligned, modal_k(aligned));
}

} // namespace

std::string summary_json(const PosteriorSampleSet& samples, const RunConfig& config) {
  json j;
  j["config"] = to_json(config);
  j["seed"] = config.seed;
  j["n_samples"] = samples.size();
  j["accept_rate"] = samples.accept_rate;
  j["warnings"] = samples.warnings;
  const auto aligned = align_posterior_samples(samples);
  if (samples.variable_k) {
    json hist = json::array();
    double k_mean = 0.0;
    for (const auto& [k, count] : k_histogram(aligned)) {
      hist.push_back({{"k", k}, {"count", count}});
      k_mean += static_cast<double>(k * count);
    }
    j["k_histogram"] = hist;
    j["k_mean"] = k_mean / static_cast<double>(samples.size());
    j["k_mode"] = modal_k(aligned);
    json moves = json::object();
    for (const auto& [name, rate] : samples.move_accept_rates) moves[name] = rate;
    j["move_accept_rates"] = moves;
    json by_k = json::object();
    for (const auto& [k, count] : k_histogram(aligned)) {
      by_k[std::to_string(k)] = summary_record(summarize(filter_k(aligned, k)));
    }
    j["by_k"] = by_k;
  }
  j["summary"] = summary_record(summarize(summary_subset(samples)));
  return j.dump(2) + "\n";
}

std::vector<fs::path> persist_results(const PosteriorSampleSet& samples, const RunConfig& config,
                                      const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw RuntimeFailure("cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<fs::path> written;
  if (config.mode != RunMode::Summarize) {
    write_samples_csv(samples, out_dir / "samples.csv");
    written.push_back(out_dir / "samples.csv");
    write_trace_csv(samples, out_dir / "trace.csv");
    written.push_back(out_dir / "trace.csv");
  }
  const auto summary_path = out_dir / "summary.json";
  auto out = open_output(summary_path);
  out << summary_json(samples, config);
  finish_output(out, summary_path);
  written.push_back(summary_path);

  const auto subset = summary_subset(samples);
  if (subset.size() >= 50) {
    const std::size_t k = subset.samples.front().k();
    for (std::size_t j = 0; j < k; ++j) {
      const auto p = out_dir / ("density_" + std::to_string(j + 1) + ".csv");
      write_density_csv(marginal_density(subset, j), p);
      written.push_back(p);
    }
  }
  return written;
}

void run_pipeline(const RunConfig& config) {
  config.validate();
  const fs::path out_dir = config.output_dir;
  const ModelSpec spec = config.model_spec();
  switch (config.mode) {
  case RunMode::FixedK: {
    const auto sample = load_curves(config.inputs, config.topology, spec.n_eval);
    const auto chain = run_chain(std::nullopt, config.k, sample, spec, config.rwm());
    persist_results(chain, config, out_dir);
    break;
  }
  case RunMode::Rjmcmc: {
    const auto sample = load_curves(config.inputs, config.topology, spec.n_eval);
    const auto chain = run_rjmcmc(std::nullopt, sample, spec, config.rjmcmc());
    persist_results(chain, config, out_dir);
    break;
  }
  case RunMode::DistanceCriterion: {
    const auto sample = load_curves(config.inputs, config.topology, spec.n_eval);
    const auto points = distance_criterion(sample, config.k_lo, config.k_hi, spec, config.rwm());
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw RuntimeFailure("cannot create " + out_dir.string() + ": " + ec.message());
    write_dk2_csv(points, out_dir / "dk2.csv");
    json j;
    j["config"] = to_json(config);
    j["seed"] = config.seed;
    json table = json::array();
    for (const auto& p : points) {
      table.push_back({{"k", p.k}, {"dk2", p.dk2}, {"accept_rate", p.accept_rate}});
    }
    j["dk2"] = table;
    const auto path = out_dir / "summary.json";
    auto out = open_output(path);
    out << j.dump(2) << '\n';
    finish_output(out, path);
    break;
  }
  case RunMode::Summarize: {
    const auto samples = read_samples_csv(config.samples_path, config.topology);
    persist_results(samples, config, out_dir);
    break;
  }
  }
}

} // namespace landmark
