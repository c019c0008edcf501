// casim command line: run, compare, train and eval over the shared library.
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "casim.h"

namespace {

constexpr size_t kErrCap = 1024;

struct ConfigDeleter {
  void operator()(casim_config* c) const { casim_config_free(c); }
};
struct ResultDeleter {
  void operator()(casim_result* r) const { casim_result_free(r); }
};
using ConfigPtr = std::unique_ptr<casim_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<casim_result, ResultDeleter>;

int exit_code_for(casim_status status) {
  switch (status) {
    case CASIM_OK: return 0;
    case CASIM_ERR_IO: return 1;
    case CASIM_ERR_VALIDATION: return 2;
    case CASIM_ERR_INVALID_ARGUMENT: return 2;
    case CASIM_ERR_INTERNAL: return 1;
  }
  return 1;
}

[[noreturn]] void die(casim_status status, const char* err) {
  std::fprintf(stderr, "casim: %s (%s)\n", err[0] ? err : "error",
               casim_status_name(status));
  std::exit(exit_code_for(status));
}

struct CommonArgs {
  std::string config_path;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> methods;
  std::vector<std::string> sets;
  std::string out_dir = ".";
};

void add_common_flags(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Config JSON file")->required();
  cmd->add_option("--seed", args.seeds, "Seed override (repeatable for compare)");
  cmd->add_option("--method", args.methods, "Method override (repeatable for compare)");
  cmd->add_option("--set", args.sets,
                  "Dotted-path config override, e.g. --set learning.alpha=0.2");
  cmd->add_option("--out", args.out_dir, "Output directory (default: .)");
}

ConfigPtr load_config(const CommonArgs& args, bool single_run) {
  char err[kErrCap] = "";
  casim_config* raw = nullptr;
  casim_status st = casim_config_load(args.config_path.c_str(), &raw, err, sizeof(err));
  if (st != CASIM_OK) die(st, err);
  ConfigPtr cfg(raw);

  for (const std::string& kv : args.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::fprintf(stderr, "casim: --set expects key=value, got '%s'\n", kv.c_str());
      std::exit(2);
    }
    st = casim_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str(),
                          err, sizeof(err));
    if (st != CASIM_OK) die(st, err);
  }

  if (single_run) {
    if (args.seeds.size() > 1 || args.methods.size() > 1) {
      std::fprintf(stderr, "casim: this command accepts at most one --seed and --method\n");
      std::exit(2);
    }
    if (!args.seeds.empty()) {
      st = casim_config_set(cfg.get(), "seed", std::to_string(args.seeds[0]).c_str(), err,
                            sizeof(err));
      if (st != CASIM_OK) die(st, err);
    }
    if (!args.methods.empty()) {
      st = casim_config_set(cfg.get(), "method", args.methods[0].c_str(), err, sizeof(err));
      if (st != CASIM_OK) die(st, err);
    }
  }
  return cfg;
}

void write_run_outputs(const casim_result* result, const std::string& out_dir) {
  char err[kErrCap] = "";
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::fprintf(stderr, "casim: cannot create directory %s\n", out_dir.c_str());
    std::exit(1);
  }
  const std::filesystem::path dir(out_dir);
  casim_status st =
      casim_result_write_metrics_csv(result, (dir / "metrics.csv").c_str(), err, sizeof(err));
  if (st == CASIM_OK)
    st = casim_result_write_epochs_csv(result, (dir / "epochs.csv").c_str(), err, sizeof(err));
  if (st == CASIM_OK)
    st = casim_result_write_summary_json(result, (dir / "summary.json").c_str(), err,
                                         sizeof(err));
  if (st != CASIM_OK) die(st, err);
}

int threads_from_env() {
  const char* env = std::getenv("CA_SIM_THREADS");
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long value = std::strtol(env, &end, 10);
  if (!end || *end != '\0' || value < 1) {
    std::fprintf(stderr, "casim: CA_SIM_THREADS must be a positive integer, got '%s'\n", env);
    std::exit(2);
  }
  return static_cast<int>(value);
}

int cmd_run(const CommonArgs& args) {
  ConfigPtr cfg = load_config(args, true);
  char err[kErrCap] = "";
  casim_result* raw = nullptr;
  const casim_status st = casim_run(cfg.get(), &raw, err, sizeof(err));
  if (st != CASIM_OK) die(st, err);
  ResultPtr result(raw);
  write_run_outputs(result.get(), args.out_dir);
  return 0;
}

int cmd_compare(const CommonArgs& args) {
  ConfigPtr cfg = load_config(args, false);
  std::vector<const char*> methods;
  methods.reserve(args.methods.size());
  for (const std::string& m : args.methods) methods.push_back(m.c_str());

  char err[kErrCap] = "";
  const casim_status st = casim_compare(
      cfg.get(), methods.empty() ? nullptr : methods.data(), methods.size(),
      args.seeds.empty() ? nullptr : args.seeds.data(), args.seeds.size(),
      args.out_dir.c_str(), threads_from_env(), err, sizeof(err));
  if (st != CASIM_OK) die(st, err);
  return 0;
}

int cmd_train(const CommonArgs& args) {
  ConfigPtr cfg = load_config(args, true);
  char err[kErrCap] = "";
  casim_result* raw = nullptr;
  casim_status st = casim_run(cfg.get(), &raw, err, sizeof(err));
  if (st != CASIM_OK) die(st, err);
  ResultPtr result(raw);
  write_run_outputs(result.get(), args.out_dir);
  const std::filesystem::path tables = std::filesystem::path(args.out_dir) / "qtables";
  st = casim_result_write_qtables(result.get(), tables.c_str(), err, sizeof(err));
  if (st != CASIM_OK) die(st, err);
  return 0;
}

int cmd_eval(const CommonArgs& args, const std::string& qtable_dir) {
  ConfigPtr cfg = load_config(args, true);
  char err[kErrCap] = "";
  casim_result* raw = nullptr;
  casim_status st = casim_eval(cfg.get(), qtable_dir.c_str(), &raw, err, sizeof(err));
  if (st != CASIM_OK) die(st, err);
  ResultPtr result(raw);
  write_run_outputs(result.get(), args.out_dir);
  const std::filesystem::path tables = std::filesystem::path(args.out_dir) / "qtables";
  st = casim_result_write_qtables(result.get(), tables.c_str(), err, sizeof(err));
  if (st != CASIM_OK) die(st, err);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("casim ") + casim_version() +
               " - carrier aggregation simulator with learned SCC activation"};
  app.require_subcommand(1);

  CommonArgs run_args, compare_args, train_args, eval_args;
  std::string qtable_dir;

  CLI::App* run = app.add_subcommand("run", "Run one simulation");
  add_common_flags(run, run_args);

  CLI::App* compare = app.add_subcommand("compare", "Run methods x seeds and aggregate");
  add_common_flags(compare, compare_args);

  CLI::App* train = app.add_subcommand("train", "Run a learning method and dump Q-tables");
  add_common_flags(train, train_args);

  CLI::App* eval = app.add_subcommand("eval", "Replay trained Q-tables frozen");
  add_common_flags(eval, eval_args);
  eval->add_option("--qtables", qtable_dir, "Directory with trained Q-table CSVs")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (run->parsed()) return cmd_run(run_args);
  if (compare->parsed()) return cmd_compare(compare_args);
  if (train->parsed()) return cmd_train(train_args);
  if (eval->parsed()) return cmd_eval(eval_args, qtable_dir);
  return 2;
}
