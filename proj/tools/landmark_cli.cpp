// Command-line driver over the landmark C API.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "landmark/landmark_c.h"

using nlohmann::json;

namespace {

constexpr int kExitInput = 1;

// Flag values that override the config file when given.
struct Overrides {
  std::string config_path;
  std::vector<std::string> inputs;
  std::optional<std::string> topology;
  std::optional<std::size_t> k;
  std::vector<std::size_t> k_range;
  std::optional<double> a, b, alpha, lambda;
  std::optional<std::size_t> n_eval;
  std::optional<std::string> likelihood;
  std::optional<std::string> error_scale;
  bool sample_kappa = false;
  std::optional<std::size_t> n_iter, thin, k_max;
  std::optional<double> burn_in_frac, proposal_var;
  std::vector<double> move_probs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  std::optional<std::string> samples_path;
  bool print_config = false;
};

int fail(lmk_status status) {
  std::cerr << "error: " << lmk_last_error() << '\n';
  return static_cast<int>(status);
}

std::optional<std::string> read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void add_run_options(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path, "JSON run configuration");
  cmd->add_option("-i,--input", o.inputs, "Curve CSV files (x,y per row)");
  cmd->add_option("--topology", o.topology, "open or closed");
  cmd->add_option("--a", o.a, "Gamma shape of the noise precision");
  cmd->add_option("--b", o.b, "Gamma rate of the noise precision");
  cmd->add_option("--alpha", o.alpha, "Dirichlet concentration of the spacings");
  cmd->add_option("--n-eval", o.n_eval, "Evaluation grid size N");
  cmd->add_option("--likelihood", o.likelihood, "srvf or constant");
  cmd->add_option("--error-scale", o.error_scale, "grid-weighted or euclidean");
  cmd->add_flag("--sample-kappa", o.sample_kappa, "Also draw the noise precision");
  cmd->add_option("--n-iter", o.n_iter, "Chain iterations");
  cmd->add_option("--burn-in", o.burn_in_frac, "Burn-in fraction");
  cmd->add_option("--thin", o.thin, "Thinning interval");
  cmd->add_option("--proposal-var", o.proposal_var, "Random-walk proposal variance");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("-o,--out", o.output_dir, "Output directory");
  cmd->add_flag("--print-config", o.print_config, "Print the effective configuration and exit");
}

// Merges the config file (if any) with the flag overrides for one mode.
std::optional<json> build_config(const Overrides& o, const std::string& mode) {
  json j = json::object();
  if (!o.config_path.empty()) {
    const auto text = read_text(o.config_path);
    if (!text) {
      std::cerr << "error: cannot read config " << o.config_path << '\n';
      return std::nullopt;
    }
    try {
      j = json::parse(*text);
    } catch (const json::parse_error& e) {
      std::cerr << "error: " << o.config_path << ": " << e.what() << '\n';
      return std::nullopt;
    }
    if (!j.is_object()) {
      std::cerr << "error: " << o.config_path << ": config must be a JSON object\n";
      return std::nullopt;
    }
  }
  j["mode"] = mode;
  if (!o.inputs.empty()) j["inputs"] = o.inputs;
  if (o.topology) j["topology"] = *o.topology;
  if (o.k) j["k"] = *o.k;
  if (!o.k_range.empty()) j["k_range"] = o.k_range;
  if (o.seed) j["seed"] = *o.seed;
  if (o.output_dir) j["output_dir"] = *o.output_dir;
  if (o.samples_path) j["samples_path"] = *o.samples_path;
  auto& model = j["model"];
  if (model.is_null()) model = json::object();
  if (o.a) model["a"] = *o.a;
  if (o.b) model["b"] = *o.b;
  if (o.alpha) model["alpha"] = *o.alpha;
  if (o.lambda) model["lambda"] = *o.lambda;
  if (o.n_eval) model["n_eval"] = *o.n_eval;
  if (o.likelihood) model["likelihood"] = *o.likelihood;
  if (o.error_scale) model["error_scale"] = *o.error_scale;
  if (o.sample_kappa) model["sample_kappa"] = true;
  auto& sampler = j["sampler"];
  if (sampler.is_null()) sampler = json::object();
  if (o.n_iter) sampler["n_iter"] = *o.n_iter;
  if (o.burn_in_frac) sampler["burn_in_frac"] = *o.burn_in_frac;
  if (o.thin) sampler["thin"] = *o.thin;
  if (o.proposal_var) sampler["proposal_var"] = *o.proposal_var;
  if (!o.move_probs.empty()) sampler["move_probs"] = o.move_probs;
  if (o.k_max) sampler["k_max"] = *o.k_max;
  return j;
}

int execute(const Overrides& o, const std::string& mode) {
  const auto config = build_config(o, mode);
  if (!config) return kExitInput;
  const std::string text = config->dump();
  if (o.print_config) {
    std::size_t needed = 0;
    lmk_status st = lmk_config_normalize(text.c_str(), nullptr, 0, &needed);
    if (needed == 0) return fail(st);
    std::string buf(needed, '\0');
    st = lmk_config_normalize(text.c_str(), buf.data(), buf.size(), &needed);
    if (st != LMK_OK) return fail(st);
    std::cout << buf.c_str();
    return 0;
  }
  const lmk_status st = lmk_run_config(text.c_str());
  if (st != LMK_OK) return fail(st);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian landmark inference on elastic curves"};
  app.set_version_flag("--version", std::string(lmk_version()));
  app.require_subcommand(1);

  Overrides fixed, rj, crit, summ;

  auto* run_fixed = app.add_subcommand("run-fixed", "Fixed-k random-walk Metropolis run");
  add_run_options(run_fixed, fixed);
  run_fixed->add_option("-k,--k", fixed.k, "Number of landmarks");

  auto* run_rj = app.add_subcommand("run-rjmcmc", "Reversible-jump run over the landmark count");
  add_run_options(run_rj, rj);
  run_rj->add_option("--lambda", rj.lambda, "Poisson rate of the landmark-count prior");
  run_rj->add_option("--move-probs", rj.move_probs, "Birth, death and stay probabilities")
      ->expected(3);
  run_rj->add_option("--k-max", rj.k_max, "Largest landmark count");

  auto* criterion = app.add_subcommand("criterion", "Average reconstruction error for a k range");
  add_run_options(criterion, crit);
  criterion->add_option("--k-range", crit.k_range, "Smallest and largest k")->expected(2);

  auto* summarize = app.add_subcommand("summarize", "Summaries and densities from samples.csv");
  summarize->add_option("-c,--config", summ.config_path, "JSON run configuration");
  summarize->add_option("-s,--samples", summ.samples_path, "samples.csv to summarize");
  summarize->add_option("--topology", summ.topology, "open or closed");
  summarize->add_option("-o,--out", summ.output_dir, "Output directory");
  summarize->add_flag("--print-config", summ.print_config,
                      "Print the effective configuration and exit");

  auto* generate = app.add_subcommand("generate", "Write synthetic curves as CSV");
  std::string kind = "sine";
  std::size_t n_points = 200;
  double amplitude = 1.0;
  std::size_t family_size = 5;
  double cut = 0.3;
  std::string gen_out = ".";
  generate->add_option("kind", kind, "sine, scaled-sine-family, half-circle or cut-half-circle")
      ->required();
  generate->add_option("-n,--n-points", n_points, "Points per curve");
  generate->add_option("--amplitude", amplitude, "Amplitude of the sine curve");
  generate->add_option("--family-size", family_size, "Curves in the scaled sine family");
  generate->add_option("--cut", cut, "x position of the cut");
  generate->add_option("-o,--out", gen_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  if (run_fixed->parsed()) return execute(fixed, "fixed-k");
  if (run_rj->parsed()) return execute(rj, "rjmcmc");
  if (criterion->parsed()) return execute(crit, "distance-criterion");
  if (summarize->parsed()) return execute(summ, "summarize");

  const lmk_status st =
      lmk_generate(kind.c_str(), n_points, amplitude, family_size, cut, gen_out.c_str());
  if (st != LMK_OK) return fail(st);
  std::cout << "wrote " << kind << " curves to " << gen_out << '\n';
  return 0;
}
