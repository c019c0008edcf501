#include "report.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "errors.hpp"
#include "textio.hpp"

namespace casim {

namespace {

std::filesystem::path qtable_file_name(const SimConfig& cfg, std::size_t index) {
  if (cfg.learning.shared_table) return "shared.csv";
  return "ue" + std::to_string(index) + ".csv";
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory: " + dir.string());
}

}  // namespace

std::string metrics_csv(const MetricsLog& log) {
  std::string out = "slot,class,sum_throughput_bps,mean_active_ccs,energy_cum\n";
  char head[64];
  for (std::size_t t = 0; t < log.served_bits.size(); ++t) {
    for (int cls = 0; cls < kNumClasses; ++cls) {
      std::snprintf(head, sizeof(head), "%zu,%s,", t,
                    traffic_class_name(static_cast<TrafficClass>(cls)));
      out += head;
      out += format_g10(static_cast<double>(log.served_bits[t][cls]) / log.slot_duration_s);
      out += ',';
      out += format_g10(log.mean_active_ccs[t][cls]);
      out += ',';
      out += format_g10(log.energy_cum[t][cls]);
      out += '\n';
    }
  }
  return out;
}

std::string epochs_csv(const MetricsLog& log) {
  std::string out = "epoch,ue_id,state_index,action_mask,reward,epsilon\n";
  char head[96];
  for (const EpochRecord& r : log.epochs) {
    std::snprintf(head, sizeof(head), "%" PRId64 ",%d,%d,%u,", r.epoch, r.ue_id,
                  r.state_index, r.action);
    out += head;
    out += format_g10(r.reward);
    out += ',';
    out += format_g10(r.epsilon);
    out += '\n';
  }
  return out;
}

std::string qtable_csv(const QTable& table) {
  std::string out = "state_index,action_mask,value,visits\n";
  char head[64];
  for (int s = 0; s < table.n_states(); ++s) {
    for (int a = 0; a < table.n_actions(); ++a) {
      const auto mask = static_cast<ActionMask>(a);
      std::snprintf(head, sizeof(head), "%d,%d,", s, a);
      out += head;
      out += format_g17(table.value(s, mask));
      out += ',';
      out += std::to_string(table.visits(s, mask));
      out += '\n';
    }
  }
  return out;
}

QTable parse_qtable_csv(const std::string& text, int n_states, int n_actions) {
  QTable table(n_states, n_actions);
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "state_index,action_mask,value,visits")
    throw ConfigError("config error: qtables: missing or wrong CSV header");
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int state = 0, action = 0;
    double value = 0.0;
    long long visits = 0;
    if (std::sscanf(line.c_str(), "%d,%d,%lf,%lld", &state, &action, &value, &visits) != 4)
      throw ConfigError("config error: qtables: malformed row '" + line + "'");
    if (state < 0 || state >= n_states || action < 0 || action >= n_actions || visits < 0)
      throw ConfigError("config error: qtables: entry out of range in row '" + line + "'");
    table.set_entry(state, static_cast<ActionMask>(action), value, visits);
    ++row;
  }
  if (row != static_cast<std::size_t>(n_states) * static_cast<std::size_t>(n_actions))
    throw ConfigError("config error: qtables: expected " +
                      std::to_string(n_states * n_actions) + " rows, got " +
                      std::to_string(row));
  return table;
}

nlohmann::json run_summary_json(const RunSummary& s) {
  return nlohmann::json{
      {"method", method_name(s.method)},
      {"seed", s.seed},
      {"throughput_ftp_bps", s.throughput_bps[0]},
      {"throughput_cbr_bps", s.throughput_bps[1]},
      {"active_ccs_ftp", s.active_ccs[0]},
      {"active_ccs_cbr", s.active_ccs[1]},
      {"active_ccs", s.active_ccs_all},
      {"active_ccs_after_delay", s.active_ccs_after_delay},
      {"energy_total", s.energy_total},
      {"convergence_slot", s.convergence_slot},
      {"final_window_mean_reward", s.final_window_mean_reward}};
}

void write_run_files(const RunResult& result, const std::filesystem::path& dir) {
  ensure_dir(dir);
  atomic_write_file(dir / "metrics.csv", metrics_csv(result.log));
  atomic_write_file(dir / "epochs.csv", epochs_csv(result.log));
  nlohmann::json summary{{"schema_version", 1}, {"run", run_summary_json(result.summary)}};
  atomic_write_file(dir / "summary.json", summary.dump(2) + "\n");
}

void write_qtable_files(const RunResult& result, const std::filesystem::path& dir) {
  ensure_dir(dir);
  for (std::size_t i = 0; i < result.qtables.size(); ++i)
    atomic_write_file(dir / qtable_file_name(result.config, i), qtable_csv(result.qtables[i]));
}

std::vector<QTable> load_qtable_files(const SimConfig& cfg, const std::filesystem::path& dir) {
  const std::size_t count = cfg.learning.shared_table ? 1 : static_cast<std::size_t>(cfg.n_ues);
  const DiscretizationConfig disc = cfg.effective_discretization();
  std::vector<QTable> tables;
  tables.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::filesystem::path path = dir / qtable_file_name(cfg, i);
    if (!std::filesystem::exists(path))
      throw ConfigError("config error: qtables: missing table file " + path.string());
    tables.push_back(parse_qtable_csv(read_text_file(path), disc.n_states(), cfg.n_actions()));
  }
  return tables;
}

}  // namespace casim
