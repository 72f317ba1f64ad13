#include "wingsense/config.hpp"

#include "wingsense/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace wingsense {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
}

template <class T>
void get(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

const char* sta_kind_name(StaKind k) { return k == StaKind::Kernel ? "kernel" : "identity"; }
const char* activation_name(Activation a) { return a == Activation::Sigmoid ? "sigmoid" : "linear"; }

json to_json(const ExperimentConfig& c) {
  json j;
  const PlateParams& p = c.plate;
  j["plate"] = {{"span", p.span},
                {"chord", p.chord},
                {"thickness", p.thickness},
                {"elastic_modulus", p.elastic_modulus},
                {"poisson_ratio", p.poisson_ratio},
                {"areal_density", p.areal_density},
                {"quality_factor", p.quality_factor},
                {"twist_coupling", p.twist_coupling},
                {"centrifugal", p.centrifugal}};
  j["plate"]["damping_coefficient"] = p.damping_coefficient ? json(*p.damping_coefficient) : json(nullptr);
  j["flap"] = {{"amplitude", c.flap.amplitude},
               {"base_frequency", c.flap.base_frequency},
               {"harmonic_ratio", c.flap.harmonic_ratio}};
  j["rotation_rate"] = c.rotation_rate;
  j["simulation"] = {{"t_start_ms", c.simulation.t_start_ms},
                     {"t_end_ms", c.simulation.t_end_ms},
                     {"rtol", c.simulation.rtol},
                     {"atol", c.simulation.atol},
                     {"discard_ms", c.discard_ms}};
  const DisturbanceGrid& d = c.disturbance;
  j["disturbance"] = {{"n_components", d.n_components},
                      {"freq_low_hz", d.freq_low_hz},
                      {"freq_high_hz", d.freq_high_hz},
                      {"flap_levels", d.flap_levels},
                      {"rotation_levels", d.rotation_levels},
                      {"shared_between_classes", d.shared_between_classes}};
  j["cell"] = {{"flap_std", c.cell.flap_std}, {"rotation_std", c.cell.rotation_std}};
  const EncoderSpec& e = c.encoder;
  j["encoder"] = {{"sta_kind", sta_kind_name(e.sta_kind)},
                  {"sta_frequency", e.sta.frequency},
                  {"sta_delay", e.sta.delay},
                  {"sta_width", e.sta.width},
                  {"sta_window", e.sta.window},
                  {"activation", activation_name(e.activation)},
                  {"nla_slope", e.nla.slope},
                  {"nla_half_max", e.nla.half_max}};
  j["encoder_grids"] = {{"sta_frequency", c.encoder_grids.sta_frequency},
                        {"sta_width", c.encoder_grids.sta_width},
                        {"nla_slope", c.encoder_grids.nla_slope},
                        {"nla_half_max", c.encoder_grids.nla_half_max}};
  j["classify"] = {{"train_fraction", c.train_fraction}, {"ridge", c.lda.ridge}};
  const SparseOptions& s = c.sparse;
  j["sspoc"] = {{"svd_rank", c.svd_rank},
                {"alpha", s.net.alpha},
                {"tolerance", s.net.tol},
                {"max_sweeps", s.net.max_sweeps},
                {"residual_fraction", s.residual_fraction},
                {"lambda_high", s.lambda_high},
                {"lambda_low", s.lambda_low},
                {"lambda_steps", s.lambda_steps}};
  j["q_list"] = c.q_list;
  j["n_trials"] = c.n_trials;
  j["random_draws"] = c.random_draws;
  j["heatmap_q"] = c.heatmap_q;
  j["master_seed"] = c.master_seed;
  j["output_dir"] = c.output_dir;
  j["threads"] = c.threads;
  return j;
}

ExperimentConfig from_json(const json& j) {
  ExperimentConfig c;
  check_keys(j,
             {"plate", "flap", "rotation_rate", "simulation", "disturbance", "cell", "encoder", "encoder_grids",
              "classify", "sspoc", "q_list", "n_trials", "random_draws", "heatmap_q", "master_seed", "output_dir",
              "threads"},
             "config");
  if (j.contains("plate")) {
    const json& p = j["plate"];
    check_keys(p,
               {"span", "chord", "thickness", "elastic_modulus", "poisson_ratio", "areal_density",
                "damping_coefficient", "quality_factor", "twist_coupling", "centrifugal"},
               "plate");
    get(p, "span", c.plate.span);
    get(p, "chord", c.plate.chord);
    get(p, "thickness", c.plate.thickness);
    get(p, "elastic_modulus", c.plate.elastic_modulus);
    get(p, "poisson_ratio", c.plate.poisson_ratio);
    get(p, "areal_density", c.plate.areal_density);
    get(p, "quality_factor", c.plate.quality_factor);
    get(p, "twist_coupling", c.plate.twist_coupling);
    get(p, "centrifugal", c.plate.centrifugal);
    if (p.contains("damping_coefficient") && !p["damping_coefficient"].is_null())
      c.plate.damping_coefficient = p["damping_coefficient"].get<double>();
  }
  if (j.contains("flap")) {
    const json& f = j["flap"];
    check_keys(f, {"amplitude", "base_frequency", "harmonic_ratio"}, "flap");
    get(f, "amplitude", c.flap.amplitude);
    get(f, "base_frequency", c.flap.base_frequency);
    get(f, "harmonic_ratio", c.flap.harmonic_ratio);
  }
  get(j, "rotation_rate", c.rotation_rate);
  if (j.contains("simulation")) {
    const json& s = j["simulation"];
    check_keys(s, {"t_start_ms", "t_end_ms", "rtol", "atol", "discard_ms"}, "simulation");
    get(s, "t_start_ms", c.simulation.t_start_ms);
    get(s, "t_end_ms", c.simulation.t_end_ms);
    get(s, "rtol", c.simulation.rtol);
    get(s, "atol", c.simulation.atol);
    get(s, "discard_ms", c.discard_ms);
  }
  if (j.contains("disturbance")) {
    const json& d = j["disturbance"];
    check_keys(d,
               {"n_components", "freq_low_hz", "freq_high_hz", "flap_levels", "rotation_levels",
                "shared_between_classes"},
               "disturbance");
    get(d, "n_components", c.disturbance.n_components);
    get(d, "freq_low_hz", c.disturbance.freq_low_hz);
    get(d, "freq_high_hz", c.disturbance.freq_high_hz);
    get(d, "flap_levels", c.disturbance.flap_levels);
    get(d, "rotation_levels", c.disturbance.rotation_levels);
    get(d, "shared_between_classes", c.disturbance.shared_between_classes);
  }
  if (j.contains("cell")) {
    const json& s = j["cell"];
    check_keys(s, {"flap_std", "rotation_std"}, "cell");
    get(s, "flap_std", c.cell.flap_std);
    get(s, "rotation_std", c.cell.rotation_std);
  }
  if (j.contains("encoder")) {
    const json& e = j["encoder"];
    check_keys(e,
               {"sta_kind", "sta_frequency", "sta_delay", "sta_width", "sta_window", "activation", "nla_slope",
                "nla_half_max"},
               "encoder");
    if (e.contains("sta_kind")) {
      const auto k = e["sta_kind"].get<std::string>();
      if (k != "kernel" && k != "identity") throw ConfigError("encoder.sta_kind must be kernel or identity");
      c.encoder.sta_kind = k == "kernel" ? StaKind::Kernel : StaKind::Identity;
    }
    if (e.contains("activation")) {
      const auto a = e["activation"].get<std::string>();
      if (a != "sigmoid" && a != "linear") throw ConfigError("encoder.activation must be sigmoid or linear");
      c.encoder.activation = a == "sigmoid" ? Activation::Sigmoid : Activation::Linear;
    }
    get(e, "sta_frequency", c.encoder.sta.frequency);
    get(e, "sta_delay", c.encoder.sta.delay);
    get(e, "sta_width", c.encoder.sta.width);
    get(e, "sta_window", c.encoder.sta.window);
    get(e, "nla_slope", c.encoder.nla.slope);
    get(e, "nla_half_max", c.encoder.nla.half_max);
  }
  if (j.contains("encoder_grids")) {
    const json& g = j["encoder_grids"];
    check_keys(g, {"sta_frequency", "sta_width", "nla_slope", "nla_half_max"}, "encoder_grids");
    get(g, "sta_frequency", c.encoder_grids.sta_frequency);
    get(g, "sta_width", c.encoder_grids.sta_width);
    get(g, "nla_slope", c.encoder_grids.nla_slope);
    get(g, "nla_half_max", c.encoder_grids.nla_half_max);
  }
  if (j.contains("classify")) {
    const json& s = j["classify"];
    check_keys(s, {"train_fraction", "ridge"}, "classify");
    get(s, "train_fraction", c.train_fraction);
    get(s, "ridge", c.lda.ridge);
  }
  if (j.contains("sspoc")) {
    const json& s = j["sspoc"];
    check_keys(s,
               {"svd_rank", "alpha", "tolerance", "max_sweeps", "residual_fraction", "lambda_high", "lambda_low",
                "lambda_steps"},
               "sspoc");
    get(s, "svd_rank", c.svd_rank);
    get(s, "alpha", c.sparse.net.alpha);
    get(s, "tolerance", c.sparse.net.tol);
    get(s, "max_sweeps", c.sparse.net.max_sweeps);
    get(s, "residual_fraction", c.sparse.residual_fraction);
    get(s, "lambda_high", c.sparse.lambda_high);
    get(s, "lambda_low", c.sparse.lambda_low);
    get(s, "lambda_steps", c.sparse.lambda_steps);
  }
  get(j, "q_list", c.q_list);
  get(j, "n_trials", c.n_trials);
  get(j, "random_draws", c.random_draws);
  get(j, "heatmap_q", c.heatmap_q);
  get(j, "master_seed", c.master_seed);
  get(j, "output_dir", c.output_dir);
  get(j, "threads", c.threads);
  return c;
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    plate.validate();
    flap.validate();
    encoder.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  auto positive_all = [](const std::vector<double>& v) {
    for (double x : v)
      if (!(x >= 0.0) || !std::isfinite(x)) return false;
    return true;
  };
  if (disturbance.flap_levels.empty() || disturbance.rotation_levels.empty())
    throw ConfigError("disturbance level grids must be non-empty");
  if (!positive_all(disturbance.flap_levels) || !positive_all(disturbance.rotation_levels))
    throw ConfigError("disturbance levels must be finite and non-negative");
  if (disturbance.n_components < 1) throw ConfigError("disturbance.n_components must be >= 1");
  if (!(disturbance.freq_low_hz > 0.0 && disturbance.freq_high_hz >= disturbance.freq_low_hz))
    throw ConfigError("disturbance frequency band is invalid");
  if (!(cell.flap_std >= 0.0) || !(cell.rotation_std >= 0.0)) throw ConfigError("cell disturbance levels must be >= 0");
  if (encoder_grids.sta_frequency.empty() || encoder_grids.sta_width.empty() || encoder_grids.nla_slope.empty() ||
      encoder_grids.nla_half_max.empty())
    throw ConfigError("encoder grids must be non-empty");
  for (double b : encoder_grids.sta_width)
    if (!(b > 0.0)) throw ConfigError("encoder_grids.sta_width entries must be > 0");
  if (!(simulation.t_end_ms > simulation.t_start_ms) || !(simulation.t_start_ms >= 0.0))
    throw ConfigError("simulation time span is invalid");
  if (!(discard_ms >= simulation.t_start_ms && discard_ms < simulation.t_end_ms))
    throw ConfigError("simulation.discard_ms must lie inside the simulated span");
  if (!(simulation.rtol > 0.0) || !(simulation.atol > 0.0)) throw ConfigError("simulation tolerances must be > 0");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("classify.train_fraction must lie in (0, 1)");
  if (!(lda.ridge >= 0.0)) throw ConfigError("classify.ridge must be >= 0");
  if (svd_rank < 1) throw ConfigError("sspoc.svd_rank must be >= 1");
  if (!(sparse.net.alpha >= 0.0 && sparse.net.alpha <= 1.0)) throw ConfigError("sspoc.alpha must lie in [0, 1]");
  if (!(sparse.residual_fraction > 0.0)) throw ConfigError("sspoc.residual_fraction must be > 0");
  if (!(sparse.lambda_low > 0.0 && sparse.lambda_high >= sparse.lambda_low) || sparse.lambda_steps < 1)
    throw ConfigError("sspoc lambda grid is invalid");
  if (sparse.net.max_sweeps < 1 || !(sparse.net.tol > 0.0)) throw ConfigError("sspoc solver limits are invalid");
  if (q_list.empty()) throw ConfigError("q_list must be non-empty");
  const int n_sensors = SensorGrid::for_plate(plate).size();
  for (int q : q_list)
    if (q < 1 || q > n_sensors) throw ConfigError("q_list entries must lie in [1, " + std::to_string(n_sensors) + "]");
  if (std::find(q_list.begin(), q_list.end(), heatmap_q) == q_list.end())
    throw ConfigError("heatmap_q must be one of the q_list entries");
  if (n_trials < 1) throw ConfigError("n_trials must be >= 1");
  if (random_draws < 1) throw ConfigError("random_draws must be >= 1");
  if (threads < 0) throw ConfigError("threads must be >= 0");
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig c;
  try {
    c = from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config has a value of the wrong type: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const ExperimentConfig& cfg) { return to_json(cfg).dump(2); }

std::string config_hash(const ExperimentConfig& cfg) {
  json j = to_json(cfg);
  // Output location does not change any result.
  j.erase("output_dir");
  j.erase("threads");
  const std::string text = j.dump();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace wingsense
