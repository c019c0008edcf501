#include "experiment.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "errors.hpp"
#include "report.hpp"
#include "textio.hpp"

namespace casim {

namespace {

struct MetricColumn {
  const char* name;
  double (*get)(const RunSummary&);
};

constexpr MetricColumn kAggregateColumns[] = {
    {"throughput_ftp_bps", [](const RunSummary& s) { return s.throughput_bps[0]; }},
    {"throughput_cbr_bps", [](const RunSummary& s) { return s.throughput_bps[1]; }},
    {"active_ccs_ftp", [](const RunSummary& s) { return s.active_ccs[0]; }},
    {"active_ccs_cbr", [](const RunSummary& s) { return s.active_ccs[1]; }},
    {"energy_total", [](const RunSummary& s) { return s.energy_total; }},
    {"convergence_slot",
     [](const RunSummary& s) { return static_cast<double>(s.convergence_slot); }},
};

struct MeanCi {
  double mean = 0.0;
  double ci95 = 0.0;
};

MeanCi mean_ci(const std::vector<double>& xs) {
  MeanCi out;
  const auto n = static_cast<double>(xs.size());
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= n;
  if (xs.size() < 2) return out;
  double ss = 0.0;
  for (double x : xs) ss += (x - out.mean) * (x - out.mean);
  out.ci95 = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return out;
}

void validate_spec(const CompareSpec& spec, const std::vector<Method>& methods,
                   const std::vector<std::uint64_t>& seeds) {
  if (spec.max_threads < 0) throw ConfigError("config error: max_threads: must be >= 0");
  for (std::size_t i = 0; i < methods.size(); ++i)
    for (std::size_t j = i + 1; j < methods.size(); ++j)
      if (methods[i] == methods[j])
        throw ConfigError(std::string("config error: methods: duplicate ") +
                          method_name(methods[i]));
  for (std::size_t i = 0; i < seeds.size(); ++i)
    for (std::size_t j = i + 1; j < seeds.size(); ++j)
      if (seeds[i] == seeds[j])
        throw ConfigError("config error: seeds: duplicate " + std::to_string(seeds[i]));
}

CompareResult run_jobs(const CompareSpec& spec, const std::filesystem::path* out_dir) {
  CompareResult result;
  result.methods = spec.methods;
  if (result.methods.empty())
    for (int m = 0; m < kNumMethods; ++m) result.methods.push_back(static_cast<Method>(m));
  result.seeds = spec.seeds;
  if (result.seeds.empty()) result.seeds.push_back(spec.base.seed);
  validate_spec(spec, result.methods, result.seeds);

  const std::size_t n_jobs = result.methods.size() * result.seeds.size();
  result.summaries.resize(n_jobs);

  unsigned threads = spec.max_threads > 0 ? static_cast<unsigned>(spec.max_threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_jobs));

  std::atomic<std::size_t> next_job{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const std::size_t job = next_job.fetch_add(1);
      if (job >= n_jobs) return;
      try {
        SimConfig cfg = spec.base;
        cfg.method = result.methods[job / result.seeds.size()];
        cfg.seed = result.seeds[job % result.seeds.size()];
        RunResult run = run_simulation(cfg);
        if (out_dir) {
          const std::string stem = std::string(method_name(cfg.method)) + "_seed" +
                                   std::to_string(cfg.seed);
          atomic_write_file(*out_dir / (stem + ".metrics.csv"), metrics_csv(run.log));
          atomic_write_file(*out_dir / (stem + ".epochs.csv"), epochs_csv(run.log));
        }
        result.summaries[job] = run.summary;
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next_job.store(n_jobs);  // stop handing out work
        return;
      }
    }
  };

  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return result;
}

}  // namespace

CompareResult run_compare(const CompareSpec& spec) { return run_jobs(spec, nullptr); }

CompareResult run_compare_to_dir(const CompareSpec& spec,
                                 const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create directory: " + out_dir.string());
  CompareResult result = run_jobs(spec, &out_dir);
  atomic_write_file(out_dir / "aggregate.csv", aggregate_csv(result));
  atomic_write_file(out_dir / "summary.json", compare_summary_json(result).dump(2) + "\n");
  return result;
}

std::string aggregate_csv(const CompareResult& result) {
  std::string out = "method,metric,mean,ci95\n";
  for (std::size_t m = 0; m < result.methods.size(); ++m) {
    for (const MetricColumn& col : kAggregateColumns) {
      std::vector<double> xs;
      xs.reserve(result.seeds.size());
      for (std::size_t s = 0; s < result.seeds.size(); ++s)
        xs.push_back(col.get(result.at(m, s)));
      const MeanCi stats = mean_ci(xs);
      out += method_name(result.methods[m]);
      out += ',';
      out += col.name;
      out += ',';
      out += format_g10(stats.mean);
      out += ',';
      out += format_g10(stats.ci95);
      out += '\n';
    }
  }
  return out;
}

nlohmann::json compare_summary_json(const CompareResult& result) {
  nlohmann::json methods = nlohmann::json::object();
  for (std::size_t m = 0; m < result.methods.size(); ++m) {
    nlohmann::json runs = nlohmann::json::array();
    nlohmann::json per_seed_convergence = nlohmann::json::array();
    for (std::size_t s = 0; s < result.seeds.size(); ++s) {
      runs.push_back(run_summary_json(result.at(m, s)));
      per_seed_convergence.push_back(result.at(m, s).convergence_slot);
    }
    nlohmann::json mean = nlohmann::json::object();
    nlohmann::json ci95 = nlohmann::json::object();
    for (const MetricColumn& col : kAggregateColumns) {
      std::vector<double> xs;
      for (std::size_t s = 0; s < result.seeds.size(); ++s)
        xs.push_back(col.get(result.at(m, s)));
      const MeanCi stats = mean_ci(xs);
      mean[col.name] = stats.mean;
      ci95[col.name] = stats.ci95;
    }
    methods[method_name(result.methods[m])] = {
        {"runs", runs},
        {"mean", mean},
        {"ci95", ci95},
        {"convergence_slot_per_seed", per_seed_convergence}};
  }
  return nlohmann::json{{"schema_version", 1},
                        {"seeds", result.seeds},
                        {"methods", methods}};
}

}  // namespace casim
