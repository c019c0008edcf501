// Method x seed comparison runs with deterministic aggregation.
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "config.hpp"
#include "sim.hpp"

namespace casim {

struct CompareSpec {
  SimConfig base;
  std::vector<Method> methods;       // empty = all five
  std::vector<std::uint64_t> seeds;  // empty = base.seed only
  int max_threads = 0;               // 0 = hardware concurrency
};

struct CompareResult {
  std::vector<Method> methods;
  std::vector<std::uint64_t> seeds;
  // Method-major, seed-minor; summaries[m * seeds.size() + s].
  std::vector<RunSummary> summaries;

  const RunSummary& at(std::size_t method_idx, std::size_t seed_idx) const {
    return summaries[method_idx * seeds.size() + seed_idx];
  }
};

// Runs the Cartesian product, replications in parallel. The result and any
// files written are independent of the thread count.
CompareResult run_compare(const CompareSpec& spec);

// run_compare plus per-run metrics/epoch files, aggregate.csv and
// summary.json under out_dir.
CompareResult run_compare_to_dir(const CompareSpec& spec, const std::filesystem::path& out_dir);

// method,metric,mean,ci95 — normal-approximation half widths over seeds.
std::string aggregate_csv(const CompareResult& result);

nlohmann::json compare_summary_json(const CompareResult& result);

}  // namespace casim
