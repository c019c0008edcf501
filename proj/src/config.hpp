// Run configuration: JSON schema, validation and dotted-path overrides.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "agents.hpp"
#include "observation.hpp"
#include "radio.hpp"
#include "traffic.hpp"

namespace casim {

enum class Method { kAllCc = 0, kSingleCc, kReactive, kQlFull, kQlPartial };

inline constexpr int kNumMethods = 5;

const char* method_name(Method m);
std::optional<Method> method_from_name(std::string_view name);
bool method_is_learning(Method m);

struct ConvergenceConfig {
  int window_epochs = 20;
  double band = 0.1;
};

struct SimConfig {
  std::uint64_t seed = 1;
  Method method = Method::kQlPartial;
  int n_ues = 10;
  double ftp_fraction = 0.3;
  int n_ccs = 3;
  double cc_bandwidth_hz = 5e6;
  CellConfig cell;
  FtpParams ftp;
  CbrParams cbr;
  double slot_duration_s = 0.001;
  int decision_period_slots = 10;
  int activation_delay_slots = 10;
  std::int64_t total_slots = 20000;
  LearningParams learning;
  RewardParams reward_params;
  EstimatorConfig estimator;
  std::optional<DiscretizationConfig> discretization;  // absent = derived
  double energy_per_cc_slot = 1.0;
  ConvergenceConfig convergence;

  int n_scc() const { return n_ccs - 1; }
  int n_actions() const { return 1 << n_scc(); }
  int n_ftp_ues() const;
  std::int64_t n_epochs() const { return total_slots / decision_period_slots; }

  // Configured edges, or defaults placed around the declared traffic scale.
  DiscretizationConfig effective_discretization() const;
};

// Parses and fully validates; throws ConfigError naming the offending key.
SimConfig config_from_json(const nlohmann::json& doc);

nlohmann::json config_to_json(const SimConfig& cfg);

// Reads the file (IoError) and parses the document (ConfigError).
SimConfig load_config_file(const std::string& path);

nlohmann::json parse_config_text(const std::string& text);

// Applies one `--set key=value` style override to a raw document; key is a
// dotted path, value is parsed as JSON when possible and as a string
// otherwise.
void apply_override(nlohmann::json& doc, const std::string& key, const std::string& value);

}  // namespace casim
