#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "textio.hpp"

namespace fs = std::filesystem;

namespace {

constexpr const char* kTinyAllCc =
    R"({"schema_version": 1, "n_ues": 2, "total_slots": 200, "method": "ALL_CC"})";
constexpr const char* kTinyQl =
    R"({"schema_version": 1, "n_ues": 2, "total_slots": 400, "method": "QL_PARTIAL"})";

struct CliOutcome {
  int exit_code = -1;
  std::string out;
  std::string err;
};

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream stream(path);
  stream << text;
}

CliOutcome run_cli(const std::string& args, const fs::path& scratch,
                   const std::string& env_prefix = "") {
  const fs::path out_file = scratch / "stdout.txt";
  const fs::path err_file = scratch / "stderr.txt";
  const std::string command = env_prefix + "\"" + CASIM_CLI_PATH + "\" " + args + " > \"" +
                              out_file.string() + "\" 2> \"" + err_file.string() + "\"";
  const int raw = std::system(command.c_str());
  CliOutcome outcome;
  outcome.exit_code = (raw != -1 && WIFEXITED(raw)) ? WEXITSTATUS(raw) : -1;
  outcome.out = casim::read_text_file(out_file.string());
  outcome.err = casim::read_text_file(err_file.string());
  return outcome;
}

}  // namespace

TEST_CASE("help lists the subcommands") {
  const fs::path dir = fresh_dir("casim_cli_help");
  const CliOutcome help = run_cli("--help", dir);
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("run") != std::string::npos);
  CHECK(help.out.find("compare") != std::string::npos);
  CHECK(help.out.find("train") != std::string::npos);
  CHECK(help.out.find("eval") != std::string::npos);

  const CliOutcome bare = run_cli("", dir);
  CHECK(bare.exit_code == 2);
  fs::remove_all(dir);
}

TEST_CASE("run produces the output files") {
  const fs::path dir = fresh_dir("casim_cli_run");
  write_file(dir / "cfg.json", kTinyAllCc);
  const CliOutcome r = run_cli(
      "run --config \"" + (dir / "cfg.json").string() + "\" --out \"" +
          (dir / "out").string() + "\"",
      dir);
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "out" / "metrics.csv"));
  CHECK(fs::exists(dir / "out" / "epochs.csv"));
  REQUIRE(fs::exists(dir / "out" / "summary.json"));
  const auto summary =
      nlohmann::json::parse(casim::read_text_file((dir / "out" / "summary.json").string()));
  CHECK(summary.at("run").at("method") == "ALL_CC");
  fs::remove_all(dir);
}

TEST_CASE("validation failures exit 2 and name the key") {
  const fs::path dir = fresh_dir("casim_cli_invalid");
  write_file(dir / "cfg.json", R"({"schema_version": 1, "n_ccs": 0})");
  const CliOutcome r =
      run_cli("run --config \"" + (dir / "cfg.json").string() + "\"", dir);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("n_ccs") != std::string::npos);
  CHECK(r.err.find("CASIM_ERR_VALIDATION") != std::string::npos);

  write_file(dir / "broken.json", "{not json");
  const CliOutcome b =
      run_cli("run --config \"" + (dir / "broken.json").string() + "\"", dir);
  CHECK(b.exit_code == 2);
  fs::remove_all(dir);
}

TEST_CASE("a missing config file exits 1") {
  const fs::path dir = fresh_dir("casim_cli_missing");
  const CliOutcome r = run_cli("run --config \"" + (dir / "nope.json").string() + "\"", dir);
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("CASIM_ERR_IO") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("set overrides reach the run and bad ones fail fast") {
  const fs::path dir = fresh_dir("casim_cli_set");
  write_file(dir / "cfg.json", kTinyAllCc);
  const std::string base = "run --config \"" + (dir / "cfg.json").string() + "\"";

  const CliOutcome ok = run_cli(
      base + " --set method=SINGLE_CC --out \"" + (dir / "out").string() + "\"", dir);
  CHECK(ok.exit_code == 0);
  const auto summary =
      nlohmann::json::parse(casim::read_text_file((dir / "out" / "summary.json").string()));
  CHECK(summary.at("run").at("method") == "SINGLE_CC");
  CHECK(summary.at("run").at("active_ccs") == 1.0);

  const CliOutcome unknown = run_cli(base + " --set bogus=1", dir);
  CHECK(unknown.exit_code == 2);
  CHECK(unknown.err.find("bogus") != std::string::npos);

  const CliOutcome malformed = run_cli(base + " --set n_ues", dir);
  CHECK(malformed.exit_code == 2);
  CHECK(malformed.err.find("key=value") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("equal seeds give byte-identical outputs") {
  const fs::path dir = fresh_dir("casim_cli_seeds");
  write_file(dir / "cfg.json", kTinyQl);
  const std::string base = "run --config \"" + (dir / "cfg.json").string() + "\" --seed 7";
  CHECK(run_cli(base + " --out \"" + (dir / "a").string() + "\"", dir).exit_code == 0);
  CHECK(run_cli(base + " --out \"" + (dir / "b").string() + "\"", dir).exit_code == 0);
  CHECK(casim::read_text_file((dir / "a" / "metrics.csv").string()) ==
        casim::read_text_file((dir / "b" / "metrics.csv").string()));
  CHECK(casim::read_text_file((dir / "a" / "epochs.csv").string()) ==
        casim::read_text_file((dir / "b" / "epochs.csv").string()));

  const CliOutcome two = run_cli(
      "run --config \"" + (dir / "cfg.json").string() + "\" --seed 1 --seed 2", dir);
  CHECK(two.exit_code == 2);
  fs::remove_all(dir);
}

TEST_CASE("compare aggregates methods by seed") {
  const fs::path dir = fresh_dir("casim_cli_compare");
  write_file(dir / "cfg.json", kTinyAllCc);
  const CliOutcome r = run_cli("compare --config \"" + (dir / "cfg.json").string() +
                                   "\" --method SINGLE_CC --method ALL_CC --seed 1 --seed 2"
                                   " --out \"" +
                                   (dir / "cmp").string() + "\"",
                               dir);
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(dir / "cmp" / "aggregate.csv"));
  CHECK(fs::exists(dir / "cmp" / "summary.json"));
  CHECK(fs::exists(dir / "cmp" / "SINGLE_CC_seed1.metrics.csv"));
  CHECK(fs::exists(dir / "cmp" / "ALL_CC_seed2.epochs.csv"));
  const std::string aggregate =
      casim::read_text_file((dir / "cmp" / "aggregate.csv").string());
  CHECK(aggregate.find("SINGLE_CC,active_ccs_ftp,1,0\n") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("the thread count env var never changes the bytes") {
  const fs::path dir = fresh_dir("casim_cli_threads");
  write_file(dir / "cfg.json", kTinyQl);
  const std::string base = "compare --config \"" + (dir / "cfg.json").string() +
                           "\" --method QL_PARTIAL --method REACTIVE --seed 1 --seed 2";
  CHECK(run_cli(base + " --out \"" + (dir / "serial").string() + "\"", dir,
                "CA_SIM_THREADS=1 ")
            .exit_code == 0);
  CHECK(run_cli(base + " --out \"" + (dir / "parallel").string() + "\"", dir,
                "CA_SIM_THREADS=4 ")
            .exit_code == 0);
  for (const char* name : {"aggregate.csv", "summary.json", "QL_PARTIAL_seed1.metrics.csv",
                           "QL_PARTIAL_seed2.epochs.csv", "REACTIVE_seed1.metrics.csv"})
    CHECK(casim::read_text_file((dir / "serial" / name).string()) ==
          casim::read_text_file((dir / "parallel" / name).string()));

  const CliOutcome bad = run_cli(base + " --out \"" + (dir / "bad").string() + "\"", dir,
                                 "CA_SIM_THREADS=abc ");
  CHECK(bad.exit_code == 2);
  fs::remove_all(dir);
}

TEST_CASE("train dumps tables and eval replays them unchanged") {
  const fs::path dir = fresh_dir("casim_cli_train_eval");
  write_file(dir / "cfg.json", kTinyQl);
  const std::string cfg_arg = "--config \"" + (dir / "cfg.json").string() + "\"";

  const CliOutcome train =
      run_cli("train " + cfg_arg + " --out \"" + (dir / "train").string() + "\"", dir);
  CHECK(train.exit_code == 0);
  REQUIRE(fs::exists(dir / "train" / "qtables" / "ue0.csv"));
  REQUIRE(fs::exists(dir / "train" / "qtables" / "ue1.csv"));

  const CliOutcome eval = run_cli("eval " + cfg_arg + " --qtables \"" +
                                      (dir / "train" / "qtables").string() + "\" --out \"" +
                                      (dir / "eval").string() + "\"",
                                  dir);
  CHECK(eval.exit_code == 0);
  CHECK(fs::exists(dir / "eval" / "summary.json"));
  for (const char* name : {"ue0.csv", "ue1.csv"})
    CHECK(casim::read_text_file((dir / "eval" / "qtables" / name).string()) ==
          casim::read_text_file((dir / "train" / "qtables" / name).string()));

  const CliOutcome no_tables = run_cli("eval " + cfg_arg + " --qtables \"" +
                                           (dir / "empty").string() + "\"",
                                       dir);
  CHECK(no_tables.exit_code == 2);

  const CliOutcome missing_flag = run_cli("eval " + cfg_arg, dir);
  CHECK(missing_flag.exit_code == 2);
  fs::remove_all(dir);
}

TEST_CASE("training a baseline method has no tables to dump") {
  const fs::path dir = fresh_dir("casim_cli_train_baseline");
  write_file(dir / "cfg.json", kTinyAllCc);
  const CliOutcome r = run_cli("train --config \"" + (dir / "cfg.json").string() +
                                   "\" --out \"" + (dir / "out").string() + "\"",
                               dir);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("CASIM_ERR_VALIDATION") != std::string::npos);
  fs::remove_all(dir);
}
