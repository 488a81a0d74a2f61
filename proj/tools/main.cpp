// Batch front door: config ingestion, subcommand dispatch, and result
// persistence under <out>/<subcommand>-<seed>/ with a run manifest.
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dickman/acceptance.hpp"
#include "dickman/classifier.hpp"
#include "dickman/errors.hpp"
#include "dickman/inversions.hpp"
#include "dickman/numerics.hpp"
#include "dickman/report.hpp"
#include "dickman/rng.hpp"
#include "dickman/sampler.hpp"
#include "dickman/schedules.hpp"
#include "dickman/simulator.hpp"
#include "dickman/smooth.hpp"
#include "dickman/version.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dickman;

namespace {

// Fail-closed schema helpers: every object is checked against its full key
// list, and required keys are named when missing.
void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object())
    throw domain_error(where + ": expected an object");
  std::string offenders;
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) {
        known = true;
        break;
      }
    if (!known) offenders += (offenders.empty() ? "" : ", ") + key;
  }
  if (!offenders.empty())
    throw domain_error(where + ": unknown key(s): " + offenders);
}

const json& require_key(const json& obj, const std::string& where,
                        const char* key) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw domain_error(where + ": missing required key \"" + key + "\"");
  return *it;
}

double as_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw domain_error(where + ": expected a number");
  return v.get<double>();
}

std::uint64_t as_count(const json& v, const std::string& where) {
  if (!v.is_number_unsigned())
    throw domain_error(where + ": expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> as_number_array(const json& v, const std::string& where) {
  if (!v.is_array()) throw domain_error(where + ": expected an array");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(as_number(e, where));
  return out;
}

MuSchedule parse_mu(const json& obj, const std::string& where) {
  check_keys(obj, where, {"c", "a"});
  return MuSchedule(as_number(require_key(obj, where, "c"), where + ".c"),
                    as_number_array(require_key(obj, where, "a"), where + ".a"));
}

PSchedule parse_p(const json& obj, const std::string& where) {
  check_keys(obj, where, {"c", "b"});
  return PSchedule(as_number(require_key(obj, where, "c"), where + ".c"),
                   as_number_array(require_key(obj, where, "b"), where + ".b"));
}

MixingLaw parse_mixing(const json& obj, const std::string& where) {
  const std::string kind =
      require_key(obj, where, "kind").get<std::string>();
  if (kind == "point_mass_one") {
    check_keys(obj, where, {"kind"});
    return MixingLaw::point_mass_one();
  }
  if (kind == "finite_discrete") {
    check_keys(obj, where, {"kind", "atoms", "weights"});
    return MixingLaw::finite_discrete(
        as_number_array(require_key(obj, where, "atoms"), where + ".atoms"),
        as_number_array(require_key(obj, where, "weights"),
                        where + ".weights"));
  }
  if (kind == "scheme_uniform") {
    check_keys(obj, where, {"kind", "width"});
    return MixingLaw::scheme_uniform(
        as_number(require_key(obj, where, "width"), where + ".width"));
  }
  throw domain_error(where + ": unknown mixing kind \"" + kind + "\"");
}

SubsetScheme parse_scheme(const json& obj, const std::string& where) {
  const std::string kind =
      require_key(obj, where, "kind").get<std::string>();
  if (kind == "top") {
    check_keys(obj, where, {"kind"});
    return SubsetScheme::top();
  }
  if (kind == "singleton") {
    check_keys(obj, where, {"kind"});
    return SubsetScheme::singleton();
  }
  if (kind == "full") {
    check_keys(obj, where, {"kind"});
    return SubsetScheme::full();
  }
  if (kind == "last_n") {
    check_keys(obj, where, {"kind", "n"});
    return SubsetScheme::last_n(as_count(require_key(obj, where, "n"),
                                         where + ".n"));
  }
  if (kind == "ratio") {
    check_keys(obj, where, {"kind", "ratios"});
    return SubsetScheme::ratio(
        as_number_array(require_key(obj, where, "ratios"), where + ".ratios"));
  }
  if (kind == "custom") {
    check_keys(obj, where, {"kind", "sets"});
    const json& sets = require_key(obj, where, "sets");
    if (!sets.is_array()) throw domain_error(where + ".sets: expected array");
    std::vector<std::vector<std::uint64_t>> parsed;
    for (const auto& s : sets) {
      if (!s.is_array()) throw domain_error(where + ".sets: expected arrays");
      std::vector<std::uint64_t> one;
      for (const auto& e : s) one.push_back(as_count(e, where + ".sets"));
      parsed.push_back(std::move(one));
    }
    return SubsetScheme::custom(std::move(parsed));
  }
  throw domain_error(where + ": unknown scheme kind \"" + kind + "\"");
}

SimModel parse_model(const json& obj, const std::string& where) {
  const std::string kind =
      require_key(obj, where, "kind").get<std::string>();
  if (kind == "deterministic") {
    check_keys(obj, where, {"kind", "mu", "p"});
    return SimModel::deterministic_x(
        parse_mu(require_key(obj, where, "mu"), where + ".mu"),
        parse_p(require_key(obj, where, "p"), where + ".p"));
  }
  if (kind == "subset") {
    check_keys(obj, where, {"kind", "scheme"});
    return SimModel::subset_uniform(
        parse_scheme(require_key(obj, where, "scheme"), where + ".scheme"));
  }
  if (kind == "truncated_poisson") {
    check_keys(obj, where, {"kind", "theta0"});
    return SimModel::truncated_poisson(
        as_number(require_key(obj, where, "theta0"), where + ".theta0"));
  }
  throw domain_error(where + ": unknown model kind \"" + kind + "\"");
}

json verdict_record(const LimitVerdict& v) {
  json rec;
  switch (v.kind()) {
    case LimitVerdict::Kind::dickman:
      rec["kind"] = "dickman";
      rec["theta"] = v.theta();
      rec["L"] = v.scale();
      rec["mixing"] = v.mixing().describe();
      break;
    case LimitVerdict::Kind::degenerate:
      rec["kind"] = "degenerate";
      rec["c"] = v.c();
      break;
    case LimitVerdict::Kind::invalid:
      rec["kind"] = "invalid";
      rec["reason"] = v.reason();
      break;
  }
  return rec;
}

std::string iso8601_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

struct RunContext {
  std::string subcommand;
  json config;  // resolved (defaults materialized)
  std::uint64_t seed = 1;
  unsigned threads = 1;
  fs::path dir;  // <out>/<subcommand>-<seed>
  std::vector<std::string> outputs;

  void write_file(const std::string& name, const std::string& bytes) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    f << bytes;
    outputs.push_back(name);
  }

  void write_manifest() {
    json m;
    m["tool"] = "dickman";
    m["version"] = kVersion;
    m["subcommand"] = subcommand;
    m["master_seed"] = seed;
    m["created"] = iso8601_now();
    m["config"] = config;
    m["outputs"] = outputs;
    std::ofstream f(dir / "manifest.json", std::ios::binary);
    f << m.dump(2) << "\n";
  }
};

void run_density(RunContext& ctx) {
  json& cfg = ctx.config;
  check_keys(cfg, "density config", {"theta", "x_max", "step", "tol"});
  const double theta = as_number(require_key(cfg, "density config", "theta"),
                                 "density config.theta");
  const double x_max = cfg.contains("x_max")
                           ? as_number(cfg["x_max"], "density config.x_max")
                           : 20.0;
  const double step = cfg.contains("step")
                          ? as_number(cfg["step"], "density config.step")
                          : 0.01;
  const double tol =
      cfg.contains("tol") ? as_number(cfg["tol"], "density config.tol") : 1e-10;
  if (!(step > 0)) throw domain_error("density config.step: must be > 0");
  cfg = {{"theta", theta}, {"x_max", x_max}, {"step", step}, {"tol", tol}};

  // the table builder requires x_max >= 2
  auto table = build_tables(DickmanParams(theta), std::max(x_max, 2.0), tol);
  std::string csv = "x,rho,p,F\n";
  for (std::uint64_t j = 1;; ++j) {
    const double x = static_cast<double>(j) * step;
    if (x > x_max + 1e-12) break;
    csv += format_double(x);
    csv += ',';
    csv += format_double(table.rho(x));
    csv += ',';
    csv += format_double(table.pdf(x));
    csv += ',';
    csv += format_double(table.cdf(x));
    csv += '\n';
  }
  ctx.write_file("density.csv", csv);
}

void run_sample(RunContext& ctx) {
  json& cfg = ctx.config;
  check_keys(cfg, "sample config", {"theta", "mixing", "count", "tol"});
  const double theta = as_number(require_key(cfg, "sample config", "theta"),
                                 "sample config.theta");
  const std::uint64_t count = as_count(
      require_key(cfg, "sample config", "count"), "sample config.count");
  const double tol =
      cfg.contains("tol") ? as_number(cfg["tol"], "sample config.tol") : 1e-8;
  json mixing_cfg = cfg.contains("mixing")
                        ? cfg["mixing"]
                        : json{{"kind", "point_mass_one"}};
  MixingLaw mixing = parse_mixing(mixing_cfg, "sample config.mixing");
  cfg = {{"theta", theta},
         {"mixing", mixing_cfg},
         {"count", count},
         {"tol", tol}};

  auto batch = sample_gd(DickmanParams(theta), mixing, tol,
                         RngStream(ctx.seed, 0), count);
  std::string csv = "index,value\n";
  for (std::size_t i = 0; i < batch.values.size(); ++i) {
    csv += std::to_string(i);
    csv += ',';
    csv += format_double(batch.values[i]);
    csv += '\n';
  }
  ctx.write_file("samples.csv", csv);
  json rec = {{"theta", batch.theta},
              {"mixing", batch.mixing.describe()},
              {"count", batch.values.size()},
              {"truncation_tol", batch.truncation_tol},
              {"bias_bound", batch.bias_bound}};
  ctx.write_file("batch.json", rec.dump(2) + "\n");
}

void run_classify(RunContext& ctx) {
  json& cfg = ctx.config;
  LimitVerdict verdict = LimitVerdict::invalid("unset");
  if (cfg.contains("scheme")) {
    check_keys(cfg, "classify config", {"scheme"});
    SubsetScheme scheme = parse_scheme(cfg["scheme"], "classify config.scheme");
    auto inputs = scheme_to_limit_inputs(scheme);
    verdict = classify_shuffle(inputs.mu, inputs.set_size, inputs.mixing);
  } else {
    check_keys(cfg, "classify config", {"mu", "p"});
    verdict = classify_theorem2(
        parse_mu(require_key(cfg, "classify config", "mu"),
                 "classify config.mu"),
        parse_p(require_key(cfg, "classify config", "p"),
                "classify config.p"));
  }
  json rec = verdict_record(verdict);
  ctx.write_file("verdict.json", rec.dump(2) + "\n");
  std::cout << rec.dump() << "\n";
}

void run_simulate(RunContext& ctx) {
  json& cfg = ctx.config;
  check_keys(cfg, "simulate config",
             {"model", "n_grid", "replicates", "sampler_tol",
              "reference_size"});
  SimModel model = parse_model(require_key(cfg, "simulate config", "model"),
                               "simulate config.model");
  const json& grid = require_key(cfg, "simulate config", "n_grid");
  if (!grid.is_array() || grid.empty())
    throw domain_error("simulate config.n_grid: expected a nonempty array");
  SimConfig sim(model);
  sim.n_grid.clear();
  for (const auto& e : grid)
    sim.n_grid.push_back(as_count(e, "simulate config.n_grid"));
  sim.replicates = as_count(require_key(cfg, "simulate config", "replicates"),
                            "simulate config.replicates");
  sim.sampler_tol =
      cfg.contains("sampler_tol")
          ? as_number(cfg["sampler_tol"], "simulate config.sampler_tol")
          : 1e-8;
  sim.reference_size =
      cfg.contains("reference_size")
          ? as_count(cfg["reference_size"], "simulate config.reference_size")
          : 1000000;
  sim.master_seed = ctx.seed;
  sim.workers = ctx.threads;
  cfg["sampler_tol"] = sim.sampler_tol;
  cfg["reference_size"] = sim.reference_size;

  auto result = simulate(sim);
  ctx.write_file("points.csv", sim_points_csv(result));
  ctx.write_file("samples.csv", sim_samples_csv(result));
  json rec = verdict_record(result.verdict);
  ctx.write_file("verdict.json", rec.dump(2) + "\n");
}

void run_inversions(RunContext& ctx) {
  json& cfg = ctx.config;
  check_keys(cfg, "inversions config", {"scheme", "n", "replicates"});
  SubsetScheme scheme = parse_scheme(
      require_key(cfg, "inversions config", "scheme"),
      "inversions config.scheme");
  const std::uint64_t n =
      as_count(require_key(cfg, "inversions config", "n"),
               "inversions config.n");
  const std::uint64_t reps =
      as_count(require_key(cfg, "inversions config", "replicates"),
               "inversions config.replicates");

  auto run = simulate_inversions(scheme, n, reps, RngStream(ctx.seed, 0),
                                 ctx.threads);
  ctx.write_file("inversions.csv", inversion_samples_csv(run));
  double observed = 0.0;
  for (auto v : run.samples) observed += static_cast<double>(v);
  observed /= run.samples.empty() ? 1.0 : run.samples.size();
  json rec = {{"n", run.n},
              {"replicates", run.samples.size()},
              {"mean_model", run.mean_model},
              {"mean_observed", observed}};
  ctx.write_file("run.json", rec.dump(2) + "\n");
}

void run_smooth(RunContext& ctx) {
  json& cfg = ctx.config;
  check_keys(cfg, "smooth config", {"n_limit", "s"});
  auto count = dickman_check(
      as_count(require_key(cfg, "smooth config", "n_limit"),
               "smooth config.n_limit"),
      as_number(require_key(cfg, "smooth config", "s"), "smooth config.s"));
  json rec = {{"n_limit", count.n_limit}, {"s", count.s},
              {"y", count.y},           {"psi", count.psi},
              {"ratio", count.ratio},   {"rho_s", count.rho_s},
              {"abs_error", count.abs_error}};
  ctx.write_file("smooth.json", rec.dump(2) + "\n");
  std::cout << rec.dump() << "\n";
}

// returns process exit code
int run_verify(RunContext& ctx, const std::string& self_path) {
  json& cfg = ctx.config;
  check_keys(cfg, "verify config", {});
  cfg = json::object();
  AcceptanceOptions opts;
  opts.workers = ctx.threads;
  opts.master_seed = ctx.seed;
  opts.cli_path = self_path;
  opts.scratch_dir = (ctx.dir / "scratch").string();
  std::ostringstream table;
  auto results = run_acceptance(opts, table);
  std::cout << table.str();
  ctx.write_file("criteria.txt", table.str());
  return all_passed(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized Dickman distributions: tables, samples, limits"};
  app.require_subcommand(1);

  std::string config_path, out_root;
  std::uint64_t seed = 1;
  bool seed_given = false;
  unsigned threads = 1;

  const char* env_out = std::getenv("DICKMAN_OUT");
  out_root = env_out ? env_out : ".";

  const std::pair<const char*, const char*> kSubcommands[] = {
      {"density", "tabulate x, rho, p, F for one theta"},
      {"sample", "draw a GD/GD^(X) batch via the fixed-point series"},
      {"classify", "limit verdict for a schedule pair or subset scheme"},
      {"simulate", "Monte Carlo W_n over an n-grid with distance tracking"},
      {"inversions", "insertion-shuffle inversion counts"},
      {"smooth", "smooth-number census against rho(s)"},
      {"verify", "run the release acceptance suite"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, desc] : kSubcommands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--config", config_path, "config or manifest JSON path");
    sub->add_option("--out", out_root, "output root directory");
    sub->add_option("--seed", seed, "master seed")
        ->each([&](const std::string&) { seed_given = true; });
    sub->add_option("--threads", threads, "worker count");
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);
  const std::string subcommand = app.get_subcommands().front()->get_name();

  try {
    json config = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path, std::ios::binary);
      if (!in)
        throw domain_error("cannot open config file: " + config_path);
      try {
        config = json::parse(in);
      } catch (const json::exception& e) {
        throw domain_error(std::string("config parse error: ") + e.what());
      }
    } else if (subcommand != "verify") {
      throw domain_error("--config is required for " + subcommand);
    }

    // A manifest from a previous run is accepted wherever a config is: the
    // embedded config (and seed, unless overridden) is what reruns.
    if (config.is_object() && config.contains("tool") &&
        config.contains("subcommand") && config.contains("config")) {
      check_keys(config, "manifest",
                 {"tool", "version", "subcommand", "master_seed", "created",
                  "config", "outputs"});
      if (config["subcommand"].get<std::string>() != subcommand)
        throw domain_error("manifest is for subcommand \"" +
                           config["subcommand"].get<std::string>() +
                           "\", not \"" + subcommand + "\"");
      if (!seed_given && config.contains("master_seed"))
        seed = config["master_seed"].get<std::uint64_t>();
      config = config["config"];
    }

    RunContext ctx;
    ctx.subcommand = subcommand;
    ctx.config = std::move(config);
    ctx.seed = seed;
    ctx.threads = threads;
    ctx.dir = fs::path(out_root) /
              (subcommand + "-" + std::to_string(seed));
    if (fs::exists(ctx.dir))
      throw domain_error("output directory exists (append-only): " +
                         ctx.dir.string());
    fs::create_directories(ctx.dir);

    int code = 0;
    if (subcommand == "density") run_density(ctx);
    else if (subcommand == "sample") run_sample(ctx);
    else if (subcommand == "classify") run_classify(ctx);
    else if (subcommand == "simulate") run_simulate(ctx);
    else if (subcommand == "inversions") run_inversions(ctx);
    else if (subcommand == "smooth") run_smooth(ctx);
    else code = run_verify(ctx, argv[0]);
    ctx.write_manifest();
    return code;
  } catch (const domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const capability_error& e) {
    std::cerr << "capability error: " << e.what() << "\n";
    return 3;
  } catch (const accuracy_error& e) {
    std::cerr << "accuracy error: " << e.what() << " (achieved "
              << e.achieved() << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
