// pmp-qoc: command-line front end over the C API.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "pmpqoc/pmpqoc.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFailure = 1, kValidation = 2, kNotConverged = 3, kUsage = 64 };

struct ScenarioDeleter {
  void operator()(pq_scenario* s) const { pq_scenario_free(s); }
};
struct ResultDeleter {
  void operator()(pq_result* r) const { pq_result_free(r); }
};
using ScenarioPtr = std::unique_ptr<pq_scenario, ScenarioDeleter>;
using ResultPtr = std::unique_ptr<pq_result, ResultDeleter>;

struct CliError {
  int code;
  std::string message;
};

int exit_code(pq_status s) {
  switch (s) {
    case PQ_OK: return kOk;
    case PQ_ERR_NOT_CONVERGED: return kNotConverged;
    case PQ_ERR_PARSE:
    case PQ_ERR_VALIDATION:
    case PQ_ERR_INVALID_ARGUMENT: return kValidation;
    default: return kFailure;
  }
}

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw CliError{kFailure, "cannot open " + tmp.string() + " for writing"};
    f << content;
    if (!f.flush()) throw CliError{kFailure, "write failed for " + tmp.string()};
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw CliError{kFailure, "cannot rename onto " + path.string() + ": " + ec.message()};
  }
}

// File path if it exists, otherwise a builtin name.
ScenarioPtr load(const std::string& spec) {
  pq_scenario* raw = nullptr;
  pq_status st;
  if (fs::exists(spec))
    st = pq_scenario_from_file(spec.c_str(), &raw);
  else
    st = pq_scenario_builtin(spec.c_str(), &raw);
  if (st != PQ_OK) throw CliError{exit_code(st), std::string(pq_status_string(st)) + ": " + pq_last_error()};
  return ScenarioPtr(raw);
}

// Table of doubles with a header row; returns rows x columns without the first (time) column.
std::vector<std::vector<double>> read_control_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw CliError{kValidation, "cannot read control CSV " + path};
  std::string line;
  std::getline(f, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool first = true;
    while (std::getline(ss, cell, ',')) {
      if (first) {
        first = false;
        continue;
      }
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw CliError{kValidation, "non-numeric cell '" + cell + "' in " + path};
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Transposes steps x channels rows into row-major channels x steps.
std::vector<double> channels_major(const std::vector<std::vector<double>>& rows, std::size_t& m, std::size_t& n) {
  n = rows.size();
  m = n ? rows.front().size() : 0;
  std::vector<double> out(m * n);
  for (std::size_t k = 0; k < n; ++k) {
    if (rows[k].size() != m) throw CliError{kValidation, "ragged control CSV"};
    for (std::size_t j = 0; j < m; ++j) out[j * n + k] = rows[k][j];
  }
  return out;
}

class Runner {
 public:
  Runner(std::string command, std::string out_dir, std::vector<std::string> argv)
      : command_(std::move(command)), out_(std::move(out_dir)), argv_(std::move(argv)),
        start_(std::chrono::steady_clock::now()) {}

  json& params() { return params_; }
  void set_scenario(std::string s) { scenario_ = std::move(s); }
  void set_seed(std::uint64_t s) { seed_ = s; }

  // Writes result.json, each table, and manifest.json; returns the exit code for status.
  int finish(pq_status status, const pq_result* result, const char* stem = "result") {
    std::error_code ec;
    fs::create_directories(out_, ec);
    if (ec) throw CliError{kFailure, "cannot create output directory " + out_ + ": " + ec.message()};
    if (result) {
      const std::string js = pq_result_json(result);
      write_atomic(fs::path(out_) / (std::string(stem) + ".json"), js + "\n");
      files_.push_back(std::string(stem) + ".json");
      for (std::size_t i = 0; i < pq_result_table_count(result); ++i) {
        const std::string name = std::string(pq_result_table_name(result, i)) + ".csv";
        write_atomic(fs::path(out_) / name, pq_result_table_csv(result, i));
        files_.push_back(name);
      }
      std::cout << js << "\n";
    }
    if (status != PQ_OK) std::cerr << "pmp-qoc: " << pq_status_string(status) << ": " << pq_last_error() << "\n";
    write_manifest(status);
    return exit_code(status);
  }

  void write_manifest(pq_status status) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json m;
    m["schema"] = "pmp-qoc/1";
    m["subcommand"] = command_;
    m["scenario"] = scenario_ ? json(*scenario_) : json(nullptr);
    m["parameters"] = params_;
    m["output_dir"] = out_;
    m["seed"] = seed_ ? json(*seed_) : json(nullptr);
    m["tool_version"] = pq_version();
    m["status"] = pq_status_string(status);
    m["argv"] = argv_;
    m["files"] = files_;
    m["wall_clock_seconds"] = secs;
    write_atomic(fs::path(out_) / "manifest.json", m.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::string out_;
  std::vector<std::string> argv_;
  std::chrono::steady_clock::time_point start_;
  json params_ = json::object();
  std::optional<std::string> scenario_;
  std::optional<std::uint64_t> seed_;
  std::vector<std::string> files_;
};

// Prints the existence verdict; true when the caller may proceed.
bool gate(Runner& run, pq_scenario* sc, bool force) {
  pq_result* raw = nullptr;
  const pq_status st = pq_exists(sc, &raw);
  ResultPtr r(raw);
  if (st != PQ_OK) throw CliError{exit_code(st), std::string("existence check failed: ") + pq_last_error()};
  const json j = json::parse(pq_result_json(r.get()));
  const std::string verdict = j["verdict"];
  std::cerr << "existence (Filippov): " << verdict << "\n";
  if (verdict == "exists" || force) return true;
  std::cerr << "pmp-qoc: existence of an optimal control cannot be concluded; extremals may exist without an "
               "optimum. Re-run with --force to proceed.\n";
  run.params()["gated"] = true;
  run.finish(PQ_OK, r.get(), "existence");
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Pontryagin-based quantum optimal control toolkit", "pmp-qoc"};
  app.set_version_flag("--version", std::string(pq_version()));
  app.require_subcommand(1);

  std::string out_dir = "pmp-qoc-out";
  std::string scenario;
  bool force = false;

  auto add_common = [&](CLI::App* sub, bool needs_scenario) {
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    if (needs_scenario) sub->add_option("--scenario", scenario, "Scenario JSON file or builtin name")->required();
  };

  auto* check = app.add_subcommand("check", "Lie-rank controllability test");
  add_common(check, true);
  std::string mode;
  int samples = 50;
  std::uint64_t check_seed = 20240917;
  check->add_option("--mode", mode, "drifted or driftless (default: from the drift)")
      ->check(CLI::IsMember({"drifted", "driftless"}));
  check->add_option("--samples", samples, "Rank samples")->capture_default_str();
  check->add_option("--seed", check_seed, "Sampling seed")->capture_default_str();

  auto* exists = app.add_subcommand("exists", "Filippov existence test");
  add_common(exists, true);

  auto* shoot = app.add_subcommand("shoot", "Multi-start indirect shooting");
  add_common(shoot, true);
  pq_shoot_options so;
  pq_shoot_options_init(&so);
  shoot->add_option("--starts", so.starts, "Number of starts")->capture_default_str();
  shoot->add_option("--seed", so.seed, "Master seed")->capture_default_str();
  shoot->add_option("--max-iter", so.max_iter, "Newton iterations per start")->capture_default_str();
  shoot->add_option("--tol", so.tol, "Residual tolerance")->capture_default_str();
  shoot->add_option("--radius", so.covector_radius, "Covector radius for fixed-time starts")->capture_default_str();
  shoot->add_option("--steps", so.steps, "Integration steps (0: scenario)")->capture_default_str();
  shoot->add_flag("--force", force, "Proceed when existence cannot be concluded");

  auto* grape = app.add_subcommand("grape", "Gradient pulse optimization");
  add_common(grape, true);
  pq_grape_options go;
  pq_grape_options_init(&go);
  std::string guess_csv;
  double guess_random = 0.0;
  std::uint64_t grape_seed = 1;
  grape->add_option("--max-iters", go.max_iters, "Iteration cap")->capture_default_str();
  grape->add_option("--eps0", go.eps0, "Initial step")->capture_default_str();
  auto* gv = grape->add_option("--guess-value", go.guess_value, "Constant guess")->capture_default_str();
  auto* gc = grape->add_option("--guess-csv", guess_csv, "Guess control CSV (t,u_1,...)")->check(CLI::ExistingFile);
  auto* gr = grape->add_option("--guess-random", guess_random, "Uniform random guess amplitude");
  gv->excludes(gc)->excludes(gr);
  gc->excludes(gr);
  grape->add_option("--seed", grape_seed, "Seed for --guess-random")->capture_default_str();
  grape->add_flag("--force", force, "Proceed when existence cannot be concluded");

  auto* synth = app.add_subcommand("synthesize", "Closed-form syntheses");
  add_common(synth, false);
  pq_synth_options sy;
  pq_synth_options_init(&sy);
  std::string problem;
  bool symmetric = false;
  synth->add_option("--problem", problem, "Problem")
      ->required()
      ->check(CLI::IsMember({"grushin", "spin-p1", "spin-p2", "warmup"}));
  synth->add_option("--delta", sy.delta, "Spin detuning, |delta| <= 1")->capture_default_str();
  synth->add_flag("--symmetric", symmetric, "Spin P1: start with the long bang");
  synth->add_option("--n1", sy.n1, "Grushin quantization n1")->capture_default_str();
  synth->add_option("--n2", sy.n2, "Grushin quantization n2")->capture_default_str();
  synth->add_option("--p-theta0", sy.p_theta0, "Grushin branch")->capture_default_str()->check(CLI::IsMember({-1, 1}));
  synth->add_option("--T", sy.T, "Warmup horizon")->capture_default_str();
  synth->add_option("--u-max", sy.u_max, "Warmup control bound")->capture_default_str();
  synth->add_option("--samples", sy.samples, "Trajectory samples")->capture_default_str();
  synth->add_option("--competitor-grid", sy.competitor_grid, "Spin competitor grid (0 disables)")->capture_default_str();

  auto* chat = app.add_subcommand("chattering", "Chattering distance sweep");
  add_common(chat, false);
  int max_switches = 256;
  double horizon = 1.0;
  chat->add_option("--max-switches", max_switches, "Largest switch count")->capture_default_str();
  chat->add_option("--horizon", horizon, "Final time")->capture_default_str();

  auto* prop = app.add_subcommand("propagate", "Forward propagation");
  add_common(prop, true);
  std::vector<double> constant;
  std::string control_csv;
  auto* pc = prop->add_option("--control", constant, "Constant control, one value per channel");
  auto* pcsv = prop->add_option("--control-csv", control_csv, "Control CSV (t,u_1,...)")->check(CLI::ExistingFile);
  pc->excludes(pcsv);

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
    std::cerr << app.help();
    return kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  Runner run(sub->get_name(), out_dir, args);
  try {
    ScenarioPtr sc;
    if (!scenario.empty()) {
      run.set_scenario(scenario);
      sc = load(scenario);
    }
    pq_result* raw = nullptr;
    pq_status st = PQ_OK;

    if (sub == check) {
      run.set_seed(check_seed);
      run.params() = {{"mode", mode.empty() ? json(nullptr) : json(mode)}, {"samples", samples}};
      st = pq_check(sc.get(), mode.empty() ? nullptr : mode.c_str(), samples, check_seed, &raw);
    } else if (sub == exists) {
      st = pq_exists(sc.get(), &raw);
    } else if (sub == shoot) {
      run.set_seed(so.seed);
      run.params() = {{"starts", so.starts}, {"max_iter", so.max_iter}, {"tol", so.tol},
                      {"radius", so.covector_radius}, {"steps", so.steps}, {"force", force}};
      if (!gate(run, sc.get(), force)) return kValidation;
      st = pq_shoot(sc.get(), &so, &raw);
    } else if (sub == grape) {
      run.params() = {{"max_iters", go.max_iters}, {"eps0", go.eps0}, {"force", force}};
      if (!gate(run, sc.get(), force)) return kValidation;
      std::vector<double> guess;
      std::size_t m = 0, n = 0;
      if (!guess_csv.empty()) {
        guess = channels_major(read_control_csv(guess_csv), m, n);
        run.params()["guess_csv"] = guess_csv;
      } else if (*gr) {
        run.set_seed(grape_seed);
        m = static_cast<std::size_t>(pq_scenario_channels(sc.get()));
        n = static_cast<std::size_t>(pq_scenario_steps(sc.get()));
        std::mt19937_64 rng(grape_seed);
        std::uniform_real_distribution<double> uni(-guess_random, guess_random);
        guess.resize(m * n);
        for (double& g : guess) g = uni(rng);
        run.params()["guess_random"] = guess_random;
      } else {
        run.params()["guess_value"] = go.guess_value;
      }
      if (!guess.empty()) {
        go.guess = guess.data();
        go.guess_rows = m;
        go.guess_cols = n;
      }
      st = pq_grape(sc.get(), &go, &raw);
    } else if (sub == synth) {
      sy.symmetric = symmetric ? 1 : 0;
      run.params() = {{"problem", problem}, {"delta", sy.delta}, {"symmetric", symmetric}, {"n1", sy.n1},
                      {"n2", sy.n2}, {"p_theta0", sy.p_theta0}, {"T", sy.T}, {"u_max", sy.u_max},
                      {"samples", sy.samples}, {"competitor_grid", sy.competitor_grid}};
      st = pq_synthesize(problem.c_str(), &sy, &raw);
    } else if (sub == chat) {
      run.params() = {{"max_switches", max_switches}, {"horizon", horizon}};
      st = pq_chattering(max_switches, horizon, &raw);
    } else if (sub == prop) {
      if (!control_csv.empty()) {
        std::size_t m = 0, n = 0;
        const auto u = channels_major(read_control_csv(control_csv), m, n);
        run.params()["control_csv"] = control_csv;
        st = pq_propagate(sc.get(), u.data(), m, n, nullptr, &raw);
      } else {
        if (!constant.empty() && constant.size() != static_cast<std::size_t>(pq_scenario_channels(sc.get())))
          throw CliError{kValidation, "--control needs one value per channel (" +
                                          std::to_string(pq_scenario_channels(sc.get())) + ")"};
        run.params()["control"] = constant;
        st = pq_propagate(sc.get(), nullptr, 0, 0, constant.empty() ? nullptr : constant.data(), &raw);
      }
    }
    ResultPtr result(raw);
    return run.finish(st, result.get());
  } catch (const CliError& e) {
    std::cerr << "pmp-qoc: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "pmp-qoc: " << e.what() << "\n";
    return kFailure;
  }
}
