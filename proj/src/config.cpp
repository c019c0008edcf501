#include "config.hpp"

#include <cmath>
#include <initializer_list>
#include <string>

#include "errors.hpp"
#include "textio.hpp"

namespace casim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& why) {
  throw ConfigError("config error: " + key + ": " + why);
}

void require_known_keys(const json& obj, const std::string& path,
                        std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known) fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
  }
}

const json* field(const json& obj, const std::string& path, const char* key,
                  std::string& key_path) {
  key_path = path.empty() ? key : path + "." + key;
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void read_double(const json& obj, const std::string& path, const char* key, double& out) {
  std::string kp;
  if (const json* v = field(obj, path, key, kp)) {
    if (!v->is_number()) fail(kp, "expected a number");
    out = v->get<double>();
  }
}

void read_int(const json& obj, const std::string& path, const char* key, auto& out) {
  std::string kp;
  if (const json* v = field(obj, path, key, kp)) {
    if (v->is_number_integer()) {
      out = static_cast<std::remove_reference_t<decltype(out)>>(v->get<std::int64_t>());
      return;
    }
    if (v->is_number_float()) {
      const double d = v->get<double>();
      if (d == std::floor(d)) {
        out = static_cast<std::remove_reference_t<decltype(out)>>(d);
        return;
      }
    }
    fail(kp, "expected an integer");
  }
}

void read_bool(const json& obj, const std::string& path, const char* key, bool& out) {
  std::string kp;
  if (const json* v = field(obj, path, key, kp)) {
    if (!v->is_boolean()) fail(kp, "expected a boolean");
    out = v->get<bool>();
  }
}

std::vector<double> read_edge_list(const json& v, const std::string& kp) {
  if (!v.is_array()) fail(kp, "expected an array of numbers");
  std::vector<double> edges;
  for (const auto& e : v) {
    if (!e.is_number()) fail(kp, "expected an array of numbers");
    edges.push_back(e.get<double>());
  }
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (!(edges[i] > edges[i - 1])) fail(kp, "edges must be strictly increasing");
  return edges;
}

}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::kAllCc: return "ALL_CC";
    case Method::kSingleCc: return "SINGLE_CC";
    case Method::kReactive: return "REACTIVE";
    case Method::kQlFull: return "QL_FULL";
    case Method::kQlPartial: return "QL_PARTIAL";
  }
  return "?";
}

std::optional<Method> method_from_name(std::string_view name) {
  for (int i = 0; i < kNumMethods; ++i) {
    const auto m = static_cast<Method>(i);
    if (name == method_name(m)) return m;
  }
  return std::nullopt;
}

bool method_is_learning(Method m) {
  return m == Method::kQlFull || m == Method::kQlPartial;
}

int SimConfig::n_ftp_ues() const {
  return static_cast<int>(std::lround(ftp_fraction * n_ues));
}

DiscretizationConfig SimConfig::effective_discretization() const {
  if (discretization) return *discretization;
  // Edges bracket the declared FTP scale: the low edge separates chatty CBR
  // style traffic from file bursts, the high edge flags starvation/overload.
  const double m = ftp.mean_interarrival_slots;
  const double f = static_cast<double>(ftp.file_size_bits);
  const double rate_bps = f / (m * slot_duration_s);
  DiscretizationConfig d;
  d.interarrival_edges = {0.75 * m, 3.0 * m};
  d.size_edges = {f * 2.0 / 3.0, f * 4.0};
  d.throughput_edges = {0.25 * rate_bps, 2.0 * rate_bps};
  return d;
}

SimConfig config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("config error: document must be a JSON object");
  require_known_keys(doc, "",
                     {"schema_version", "seed", "method", "n_ues", "ftp_fraction", "n_ccs",
                      "cc_bandwidth_hz", "cell", "traffic", "slot_duration_s",
                      "decision_period_slots", "activation_delay_slots", "total_slots",
                      "learning", "reward", "estimator", "discretization",
                      "energy_per_cc_slot", "convergence"});

  if (!doc.contains("schema_version")) fail("schema_version", "missing required key");
  int schema_version = -1;
  read_int(doc, "", "schema_version", schema_version);
  if (schema_version != 1) fail("schema_version", "unsupported version (expected 1)");

  SimConfig cfg;
  read_int(doc, "", "seed", cfg.seed);
  if (doc.contains("method")) {
    const json& m = doc["method"];
    if (!m.is_string()) fail("method", "expected a string");
    if (auto parsed = method_from_name(m.get<std::string>()))
      cfg.method = *parsed;
    else
      fail("method", "unknown method '" + m.get<std::string>() +
                         "' (ALL_CC, SINGLE_CC, REACTIVE, QL_FULL, QL_PARTIAL)");
  }
  read_int(doc, "", "n_ues", cfg.n_ues);
  read_double(doc, "", "ftp_fraction", cfg.ftp_fraction);
  read_int(doc, "", "n_ccs", cfg.n_ccs);
  read_double(doc, "", "cc_bandwidth_hz", cfg.cc_bandwidth_hz);
  read_double(doc, "", "slot_duration_s", cfg.slot_duration_s);
  read_int(doc, "", "decision_period_slots", cfg.decision_period_slots);
  read_int(doc, "", "activation_delay_slots", cfg.activation_delay_slots);
  read_int(doc, "", "total_slots", cfg.total_slots);
  read_double(doc, "", "energy_per_cc_slot", cfg.energy_per_cc_slot);

  if (doc.contains("cell")) {
    const json& c = doc["cell"];
    if (!c.is_object()) fail("cell", "expected an object");
    require_known_keys(c, "cell",
                       {"radius_m", "tx_power_dbm", "noise_power_dbm", "path_loss_exponent",
                        "path_loss_ref_db", "ref_distance_m"});
    read_double(c, "cell", "radius_m", cfg.cell.radius_m);
    read_double(c, "cell", "tx_power_dbm", cfg.cell.tx_power_dbm);
    read_double(c, "cell", "noise_power_dbm", cfg.cell.noise_power_dbm);
    read_double(c, "cell", "path_loss_exponent", cfg.cell.path_loss_exponent);
    read_double(c, "cell", "path_loss_ref_db", cfg.cell.path_loss_ref_db);
    read_double(c, "cell", "ref_distance_m", cfg.cell.ref_distance_m);
  }

  if (doc.contains("traffic")) {
    const json& t = doc["traffic"];
    if (!t.is_object()) fail("traffic", "expected an object");
    require_known_keys(t, "traffic", {"ftp", "cbr"});
    if (t.contains("ftp")) {
      const json& f = t["ftp"];
      if (!f.is_object()) fail("traffic.ftp", "expected an object");
      require_known_keys(f, "traffic.ftp", {"mean_interarrival_slots", "file_size_bits"});
      read_double(f, "traffic.ftp", "mean_interarrival_slots", cfg.ftp.mean_interarrival_slots);
      read_int(f, "traffic.ftp", "file_size_bits", cfg.ftp.file_size_bits);
    }
    if (t.contains("cbr")) {
      const json& c = t["cbr"];
      if (!c.is_object()) fail("traffic.cbr", "expected an object");
      require_known_keys(c, "traffic.cbr",
                         {"bits_per_slot", "on_period_slots", "off_period_slots"});
      read_int(c, "traffic.cbr", "bits_per_slot", cfg.cbr.bits_per_slot);
      read_int(c, "traffic.cbr", "on_period_slots", cfg.cbr.on_period_slots);
      read_int(c, "traffic.cbr", "off_period_slots", cfg.cbr.off_period_slots);
    }
  }

  if (doc.contains("learning")) {
    const json& l = doc["learning"];
    if (!l.is_object()) fail("learning", "expected an object");
    require_known_keys(l, "learning",
                       {"alpha", "gamma", "epsilon0", "epsilon_decay", "epsilon_min",
                        "shared_table"});
    read_double(l, "learning", "alpha", cfg.learning.alpha);
    read_double(l, "learning", "gamma", cfg.learning.gamma);
    read_double(l, "learning", "epsilon0", cfg.learning.epsilon0);
    read_double(l, "learning", "epsilon_decay", cfg.learning.epsilon_decay);
    read_double(l, "learning", "epsilon_min", cfg.learning.epsilon_min);
    read_bool(l, "learning", "shared_table", cfg.learning.shared_table);
  }

  if (doc.contains("reward")) {
    const json& r = doc["reward"];
    if (!r.is_object()) fail("reward", "expected an object");
    require_known_keys(r, "reward",
                       {"credit_per_useful_scc", "penalty_per_wasted_scc",
                        "utilization_threshold"});
    read_double(r, "reward", "credit_per_useful_scc", cfg.reward_params.credit_per_useful_scc);
    read_double(r, "reward", "penalty_per_wasted_scc",
                cfg.reward_params.penalty_per_wasted_scc);
    read_double(r, "reward", "utilization_threshold",
                cfg.reward_params.utilization_threshold);
  }

  if (doc.contains("estimator")) {
    const json& e = doc["estimator"];
    if (!e.is_object()) fail("estimator", "expected an object");
    require_known_keys(e, "estimator", {"beta_arrival", "beta_throughput"});
    read_double(e, "estimator", "beta_arrival", cfg.estimator.beta_arrival);
    read_double(e, "estimator", "beta_throughput", cfg.estimator.beta_throughput);
  }

  if (doc.contains("discretization")) {
    const json& d = doc["discretization"];
    if (!d.is_object()) fail("discretization", "expected an object");
    require_known_keys(d, "discretization",
                       {"interarrival_edges", "size_edges", "throughput_edges"});
    DiscretizationConfig dc;
    if (d.contains("interarrival_edges"))
      dc.interarrival_edges = read_edge_list(d["interarrival_edges"],
                                             "discretization.interarrival_edges");
    if (d.contains("size_edges"))
      dc.size_edges = read_edge_list(d["size_edges"], "discretization.size_edges");
    if (d.contains("throughput_edges"))
      dc.throughput_edges = read_edge_list(d["throughput_edges"],
                                           "discretization.throughput_edges");
    cfg.discretization = std::move(dc);
  }

  if (doc.contains("convergence")) {
    const json& c = doc["convergence"];
    if (!c.is_object()) fail("convergence", "expected an object");
    require_known_keys(c, "convergence", {"window_epochs", "band"});
    read_int(c, "convergence", "window_epochs", cfg.convergence.window_epochs);
    read_double(c, "convergence", "band", cfg.convergence.band);
  }

  // Range checks.
  if (cfg.n_ues < 1) fail("n_ues", "must be >= 1");
  if (cfg.ftp_fraction < 0.0 || cfg.ftp_fraction > 1.0) fail("ftp_fraction", "must be in [0, 1]");
  if (cfg.n_ccs < 1 || cfg.n_ccs > 16) fail("n_ccs", "must be in [1, 16]");
  if (!(cfg.cc_bandwidth_hz > 0.0)) fail("cc_bandwidth_hz", "must be > 0");
  if (!(cfg.cell.ref_distance_m > 0.0)) fail("cell.ref_distance_m", "must be > 0");
  if (!(cfg.cell.radius_m >= cfg.cell.ref_distance_m))
    fail("cell.radius_m", "must be >= cell.ref_distance_m");
  if (!(cfg.cell.path_loss_exponent > 0.0)) fail("cell.path_loss_exponent", "must be > 0");
  if (!(cfg.ftp.mean_interarrival_slots >= 1.0))
    fail("traffic.ftp.mean_interarrival_slots", "must be >= 1");
  if (cfg.ftp.file_size_bits < 1) fail("traffic.ftp.file_size_bits", "must be >= 1");
  if (cfg.cbr.bits_per_slot < 0) fail("traffic.cbr.bits_per_slot", "must be >= 0");
  if (cfg.cbr.on_period_slots < 1) fail("traffic.cbr.on_period_slots", "must be >= 1");
  if (cfg.cbr.off_period_slots < 0) fail("traffic.cbr.off_period_slots", "must be >= 0");
  if (!(cfg.slot_duration_s > 0.0)) fail("slot_duration_s", "must be > 0");
  if (cfg.decision_period_slots < 1) fail("decision_period_slots", "must be >= 1");
  if (cfg.activation_delay_slots < 0) fail("activation_delay_slots", "must be >= 0");
  if (cfg.total_slots < 1) fail("total_slots", "must be >= 1");
  if (cfg.total_slots % cfg.decision_period_slots != 0)
    fail("total_slots", "must be divisible by decision_period_slots");
  if (!(cfg.learning.alpha > 0.0) || cfg.learning.alpha > 1.0)
    fail("learning.alpha", "must be in (0, 1]");
  if (cfg.learning.gamma < 0.0 || cfg.learning.gamma >= 1.0)
    fail("learning.gamma", "must be in [0, 1)");
  if (cfg.learning.epsilon0 < 0.0 || cfg.learning.epsilon0 > 1.0)
    fail("learning.epsilon0", "must be in [0, 1]");
  if (!(cfg.learning.epsilon_decay > 0.0) || cfg.learning.epsilon_decay > 1.0)
    fail("learning.epsilon_decay", "must be in (0, 1]");
  if (cfg.learning.epsilon_min < 0.0 || cfg.learning.epsilon_min > cfg.learning.epsilon0)
    fail("learning.epsilon_min", "must be in [0, epsilon0]");
  if (!(cfg.reward_params.credit_per_useful_scc > 0.0))
    fail("reward.credit_per_useful_scc", "must be > 0");
  if (!(cfg.reward_params.penalty_per_wasted_scc > 0.0))
    fail("reward.penalty_per_wasted_scc", "must be > 0");
  if (cfg.reward_params.utilization_threshold < 0.0 ||
      cfg.reward_params.utilization_threshold > 1.0)
    fail("reward.utilization_threshold", "must be in [0, 1]");
  if (!(cfg.estimator.beta_arrival > 0.0) || cfg.estimator.beta_arrival > 1.0)
    fail("estimator.beta_arrival", "must be in (0, 1]");
  if (!(cfg.estimator.beta_throughput > 0.0) || cfg.estimator.beta_throughput > 1.0)
    fail("estimator.beta_throughput", "must be in (0, 1]");
  if (!(cfg.energy_per_cc_slot >= 0.0)) fail("energy_per_cc_slot", "must be >= 0");
  if (cfg.convergence.window_epochs < 1) fail("convergence.window_epochs", "must be >= 1");
  if (cfg.convergence.window_epochs > cfg.n_epochs())
    fail("convergence.window_epochs", "must be <= total_slots / decision_period_slots");
  if (cfg.convergence.band < 0.0) fail("convergence.band", "must be >= 0");

  return cfg;
}

nlohmann::json config_to_json(const SimConfig& cfg) {
  const DiscretizationConfig d = cfg.effective_discretization();
  return json{
      {"schema_version", 1},
      {"seed", cfg.seed},
      {"method", method_name(cfg.method)},
      {"n_ues", cfg.n_ues},
      {"ftp_fraction", cfg.ftp_fraction},
      {"n_ccs", cfg.n_ccs},
      {"cc_bandwidth_hz", cfg.cc_bandwidth_hz},
      {"cell",
       {{"radius_m", cfg.cell.radius_m},
        {"tx_power_dbm", cfg.cell.tx_power_dbm},
        {"noise_power_dbm", cfg.cell.noise_power_dbm},
        {"path_loss_exponent", cfg.cell.path_loss_exponent},
        {"path_loss_ref_db", cfg.cell.path_loss_ref_db},
        {"ref_distance_m", cfg.cell.ref_distance_m}}},
      {"traffic",
       {{"ftp",
         {{"mean_interarrival_slots", cfg.ftp.mean_interarrival_slots},
          {"file_size_bits", cfg.ftp.file_size_bits}}},
        {"cbr",
         {{"bits_per_slot", cfg.cbr.bits_per_slot},
          {"on_period_slots", cfg.cbr.on_period_slots},
          {"off_period_slots", cfg.cbr.off_period_slots}}}}},
      {"slot_duration_s", cfg.slot_duration_s},
      {"decision_period_slots", cfg.decision_period_slots},
      {"activation_delay_slots", cfg.activation_delay_slots},
      {"total_slots", cfg.total_slots},
      {"learning",
       {{"alpha", cfg.learning.alpha},
        {"gamma", cfg.learning.gamma},
        {"epsilon0", cfg.learning.epsilon0},
        {"epsilon_decay", cfg.learning.epsilon_decay},
        {"epsilon_min", cfg.learning.epsilon_min},
        {"shared_table", cfg.learning.shared_table}}},
      {"reward",
       {{"credit_per_useful_scc", cfg.reward_params.credit_per_useful_scc},
        {"penalty_per_wasted_scc", cfg.reward_params.penalty_per_wasted_scc},
        {"utilization_threshold", cfg.reward_params.utilization_threshold}}},
      {"estimator",
       {{"beta_arrival", cfg.estimator.beta_arrival},
        {"beta_throughput", cfg.estimator.beta_throughput}}},
      {"discretization",
       {{"interarrival_edges", d.interarrival_edges},
        {"size_edges", d.size_edges},
        {"throughput_edges", d.throughput_edges}}},
      {"energy_per_cc_slot", cfg.energy_per_cc_slot},
      {"convergence",
       {{"window_epochs", cfg.convergence.window_epochs},
        {"band", cfg.convergence.band}}}};
}

nlohmann::json parse_config_text(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config error: document is not valid JSON");
  return doc;
}

SimConfig load_config_file(const std::string& path) {
  return config_from_json(parse_config_text(read_text_file(path)));
}

void apply_override(nlohmann::json& doc, const std::string& key, const std::string& value) {
  if (key.empty()) throw ConfigError("config error: empty override key");
  std::string pointer = "/";
  for (char c : key) pointer += (c == '.') ? '/' : c;
  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;  // plain strings stay strings
  try {
    doc[nlohmann::json::json_pointer(pointer)] = parsed;
  } catch (const json::exception&) {
    throw ConfigError("config error: cannot apply override key '" + key + "'");
  }
}

}  // namespace casim
