// CSV and JSON renderings of run results, plus Q-table persistence.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "sim.hpp"

namespace casim {

// slot,class,sum_throughput_bps,mean_active_ccs,energy_cum — one row per slot
// and class.
std::string metrics_csv(const MetricsLog& log);

// epoch,ue_id,state_index,action_mask,reward,epsilon.
std::string epochs_csv(const MetricsLog& log);

// state_index,action_mask,value,visits — every entry, ascending.
std::string qtable_csv(const QTable& table);

QTable parse_qtable_csv(const std::string& text, int n_states, int n_actions);

nlohmann::json run_summary_json(const RunSummary& summary);

// Writes metrics.csv, epochs.csv and summary.json into dir.
void write_run_files(const RunResult& result, const std::filesystem::path& dir);

// Writes one ue<N>.csv (or shared.csv) per table into dir.
void write_qtable_files(const RunResult& result, const std::filesystem::path& dir);

// Loads the tables written by write_qtable_files for this config.
std::vector<QTable> load_qtable_files(const SimConfig& cfg, const std::filesystem::path& dir);

}  // namespace casim
