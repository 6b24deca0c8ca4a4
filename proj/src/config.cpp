#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pfdr/harness.hpp"

namespace pfdr {

using nlohmann::json;

std::string AlgorithmChoice::id() const {
  switch (kind) {
    case AlgorithmKind::theorem_combined: return "theorem_combined";
    case AlgorithmKind::oracle_base: return "oracle_base";
    case AlgorithmKind::single_base: return "single_base:" + std::to_string(s_hat);
  }
  return "?";
}

AlgorithmChoice AlgorithmChoice::parse(std::string_view id) {
  if (id == "theorem_combined") return {AlgorithmKind::theorem_combined, 0};
  if (id == "oracle_base") return {AlgorithmKind::oracle_base, 0};
  constexpr std::string_view prefix = "single_base:";
  if (id.substr(0, prefix.size()) == prefix && id.size() > prefix.size()) {
    const std::string digits(id.substr(prefix.size()));
    if (digits.find_first_not_of("0123456789") == std::string::npos && digits.size() <= 19) {
      return {AlgorithmKind::single_base, std::stoull(digits)};
    }
  }
  throw ConfigError("algorithm", "unknown algorithm '" + std::string(id) +
                                     "' (expected theorem_combined, oracle_base or single_base:<S_hat>)");
}

void RunConfig::validate() const {
  try {
    environment.validate();
  } catch (const ContractError& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    throw ConfigError("environment." + msg.substr(0, colon), msg.substr(colon + 2));
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon", "must be positive");
  if (!(G > 0.0) || !std::isfinite(G)) throw ConfigError("G", "must be positive");
  if (G < environment.G) {
    throw ConfigError("G", "learner Lipschitz bound is smaller than environment.G");
  }
  if (!(eta_c > 0.0) || !std::isfinite(eta_c)) throw ConfigError("eta_c", "must be positive");
  if (v_min_override && (!(*v_min_override > 0.0) || !std::isfinite(*v_min_override))) {
    throw ConfigError("v_min_override", "must be positive when set");
  }
  if (seeds.empty()) throw ConfigError("seeds", "must be nonempty");
}

AlgorithmParams RunConfig::algorithm_params() const {
  AlgorithmParams p;
  p.horizon = environment.T;
  p.dim = environment.d;
  p.epsilon = epsilon;
  p.lipschitz = G;
  p.eta_c = eta_c;
  p.v_min = v_min_override;
  return p;
}

namespace {

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.contains(key)) {
      throw ConfigError(where.empty() ? key : where + "." + key, "unknown field");
    }
  }
}

std::uint64_t get_uint(const json& v, const std::string& field) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(field, "expected a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

double get_real(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  return v.get<double>();
}

std::string get_string(const json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field, "expected a string");
  return v.get<std::string>();
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", std::string("malformed JSON: ") + e.what());
  }
}

template <class Fn>
auto with_field(const std::string& field, Fn&& fn) {
  try {
    return fn();
  } catch (const ContractError& e) {
    throw ConfigError(field, e.what());
  }
}

EnvironmentSpec parse_environment(const json& j) {
  if (!j.is_object()) throw ConfigError("environment", "expected an object");
  reject_unknown(j, "environment",
                 {"T", "d", "G", "M", "S", "switch_placement", "loss_model", "noise_sigma", "seed"});
  EnvironmentSpec spec;
  if (j.contains("T")) spec.T = get_uint(j["T"], "environment.T");
  if (j.contains("d")) spec.d = get_uint(j["d"], "environment.d");
  if (j.contains("G")) spec.G = get_real(j["G"], "environment.G");
  if (j.contains("M")) spec.M = get_real(j["M"], "environment.M");
  if (j.contains("S")) spec.S = get_uint(j["S"], "environment.S");
  if (j.contains("switch_placement")) {
    const auto s = get_string(j["switch_placement"], "environment.switch_placement");
    spec.switch_placement = with_field("environment.switch_placement", [&] { return parse_switch_placement(s); });
  }
  if (j.contains("loss_model")) {
    const auto s = get_string(j["loss_model"], "environment.loss_model");
    spec.loss_model = with_field("environment.loss_model", [&] { return parse_loss_model(s); });
  }
  if (j.contains("noise_sigma")) spec.noise_sigma = get_real(j["noise_sigma"], "environment.noise_sigma");
  if (j.contains("seed")) spec.seed = get_uint(j["seed"], "environment.seed");
  return spec;
}

AlgorithmChoice parse_algorithm(const json& j, const json* s_hat) {
  const auto id = get_string(j, "algorithm");
  if (id == "single_base") {
    if (s_hat == nullptr) throw ConfigError("S_hat", "required when algorithm is single_base");
    return {AlgorithmKind::single_base, get_uint(*s_hat, "S_hat")};
  }
  return AlgorithmChoice::parse(id);
}

RunConfig parse_run_object(const json& j, bool allow_sweep) {
  if (!j.is_object()) throw ConfigError("<document>", "expected a JSON object");
  if (allow_sweep) {
    reject_unknown(j, "", {"environment", "algorithm", "S_hat", "epsilon", "G", "eta_c", "v_min_override",
                           "seeds", "output_path", "sweep"});
  } else {
    reject_unknown(j, "", {"environment", "algorithm", "S_hat", "epsilon", "G", "eta_c", "v_min_override",
                           "seeds", "output_path"});
  }
  RunConfig cfg;
  if (j.contains("environment")) cfg.environment = parse_environment(j["environment"]);
  if (j.contains("algorithm")) {
    cfg.algorithm = parse_algorithm(j["algorithm"], j.contains("S_hat") ? &j["S_hat"] : nullptr);
  }
  if (j.contains("epsilon")) cfg.epsilon = get_real(j["epsilon"], "epsilon");
  cfg.G = j.contains("G") ? get_real(j["G"], "G") : cfg.environment.G;
  if (j.contains("eta_c")) cfg.eta_c = get_real(j["eta_c"], "eta_c");
  if (j.contains("v_min_override") && !j["v_min_override"].is_null()) {
    cfg.v_min_override = get_real(j["v_min_override"], "v_min_override");
  }
  if (j.contains("seeds")) {
    if (!j["seeds"].is_array()) throw ConfigError("seeds", "expected an array of integers");
    cfg.seeds.clear();
    for (std::size_t i = 0; i < j["seeds"].size(); ++i) {
      cfg.seeds.push_back(get_uint(j["seeds"][i], "seeds[" + std::to_string(i) + "]"));
    }
  }
  if (j.contains("output_path")) cfg.output_path = get_string(j["output_path"], "output_path");
  return cfg;
}

json environment_json(const EnvironmentSpec& e) {
  return json{{"T", e.T},
              {"d", e.d},
              {"G", e.G},
              {"M", e.M},
              {"S", e.S},
              {"switch_placement", std::string(to_string(e.switch_placement))},
              {"loss_model", std::string(to_string(e.loss_model))},
              {"noise_sigma", e.noise_sigma},
              {"seed", e.seed}};
}

json run_json(const RunConfig& c) {
  json j{{"environment", environment_json(c.environment)},
         {"algorithm", c.algorithm.id()},
         {"epsilon", c.epsilon},
         {"G", c.G},
         {"eta_c", c.eta_c},
         {"v_min_override", c.v_min_override ? json(*c.v_min_override) : json(nullptr)},
         {"seeds", c.seeds},
         {"output_path", c.output_path}};
  return j;
}

template <class T, class Fn>
std::vector<T> parse_list(const json& sweep, const char* key, Fn&& one) {
  std::vector<T> out;
  if (!sweep.contains(key)) return out;
  const std::string field = std::string("sweep.") + key;
  if (!sweep[key].is_array() || sweep[key].empty()) throw ConfigError(field, "expected a nonempty array");
  for (std::size_t i = 0; i < sweep[key].size(); ++i) {
    out.push_back(one(sweep[key][i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text) {
  RunConfig cfg = parse_run_object(parse_json(json_text), false);
  cfg.validate();
  return cfg;
}

SweepConfig parse_sweep_config(std::string_view json_text) {
  const json j = parse_json(json_text);
  SweepConfig sweep;
  sweep.base = parse_run_object(j, true);
  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    if (!s.is_object()) throw ConfigError("sweep", "expected an object");
    reject_unknown(s, "sweep", {"T", "S", "d", "loss_model", "algorithm"});
    sweep.T = parse_list<std::uint64_t>(s, "T", get_uint);
    sweep.S = parse_list<std::uint64_t>(s, "S", get_uint);
    sweep.d = parse_list<std::size_t>(s, "d", get_uint);
    sweep.loss_model = parse_list<LossModel>(s, "loss_model", [](const json& v, const std::string& f) {
      const auto name = get_string(v, f);
      return with_field(f, [&] { return parse_loss_model(name); });
    });
    sweep.algorithm = parse_list<AlgorithmChoice>(s, "algorithm", [](const json& v, const std::string& f) {
      const auto name = get_string(v, f);
      try {
        return AlgorithmChoice::parse(name);
      } catch (const ConfigError& e) {
        throw ConfigError(f, e.what());
      }
    });
  }
  // Validate every cell so errors surface before any run starts.
  for (const auto& cell : sweep.cells()) cell.validate();
  return sweep;
}

std::vector<RunConfig> SweepConfig::cells() const {
  const auto Ts = T.empty() ? std::vector<std::uint64_t>{base.environment.T} : T;
  const auto Ss = S.empty() ? std::vector<std::uint64_t>{base.environment.S} : S;
  const auto ds = d.empty() ? std::vector<std::size_t>{base.environment.d} : d;
  const auto losses = loss_model.empty() ? std::vector<LossModel>{base.environment.loss_model} : loss_model;
  const auto algos = algorithm.empty() ? std::vector<AlgorithmChoice>{base.algorithm} : algorithm;
  std::vector<RunConfig> out;
  for (auto t : Ts) {
    for (auto s : Ss) {
      for (auto dim : ds) {
        for (auto loss : losses) {
          for (const auto& algo : algos) {
            RunConfig c = base;
            c.environment.T = t;
            c.environment.S = s;
            c.environment.d = dim;
            c.environment.loss_model = loss;
            c.algorithm = algo;
            out.push_back(std::move(c));
          }
        }
      }
    }
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string to_json(const RunConfig& config) { return run_json(config).dump(2); }

std::string to_json(const SweepConfig& config) {
  json j = run_json(config.base);
  json s = json::object();
  if (!config.T.empty()) s["T"] = config.T;
  if (!config.S.empty()) s["S"] = config.S;
  if (!config.d.empty()) s["d"] = config.d;
  if (!config.loss_model.empty()) {
    json arr = json::array();
    for (auto m : config.loss_model) arr.push_back(std::string(to_string(m)));
    s["loss_model"] = arr;
  }
  if (!config.algorithm.empty()) {
    json arr = json::array();
    for (const auto& a : config.algorithm) arr.push_back(a.id());
    s["algorithm"] = arr;
  }
  j["sweep"] = s;
  return j.dump(2);
}

std::uint64_t config_hash(const RunConfig& config) {
  // FNV-1a over the canonical dump; seeds and output path excluded so every
  // run of one cell shares a hash.
  json j = run_json(config);
  j.erase("seeds");
  j.erase("output_path");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : j.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace pfdr
