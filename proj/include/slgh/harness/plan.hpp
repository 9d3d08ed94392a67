#ifndef SLGH_HARNESS_PLAN_HPP
#define SLGH_HARNESS_PLAN_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "slgh/objectives.hpp"
#include "slgh/optimizers.hpp"

namespace slgh::harness {

/// Plan loading failure. The message starts with the offending field path,
/// e.g. "runs[1].t_rule.gamma: gamma must lie in (0,1)".
class LoadError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A registered objective plus optional noise / error wrappers.
struct ObjectiveRef {
  std::string name;
  int dim = 2;
  std::optional<double> noise_sigma;
  std::optional<ErrorScheme> error;
};

inline Objective build_objective(const ObjectiveRef& ref) {
  Objective obj = make_objective(ref.name, ref.dim);
  if (ref.noise_sigma) obj = make_stochastic_objective(obj, *ref.noise_sigma);
  if (ref.error) obj = make_errored_objective(obj, *ref.error);
  return obj;
}

struct PlannedRun {
  std::string id;
  ObjectiveRef objective;
  RunConfig config;  // seed is overwritten per job
  std::vector<std::uint64_t> seeds;
  std::optional<double> threshold;
};

struct ExperimentPlan {
  std::vector<PlannedRun> runs;
  std::string output_dir;
  int parallelism = 1;
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
  throw LoadError(path + ": " + msg);
}

inline void reject_unknown(const json& obj, const std::string& path,
                           std::initializer_list<const char*> allowed) {
  for (const auto& [key, _] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      fail(path + "." + key, "unknown field");
    }
  }
}

inline double get_number(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) fail(path + "." + key, "missing required field");
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

inline std::optional<double> opt_number(const json& obj, const std::string& key,
                                        const std::string& path) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  return get_number(obj, key, path);
}

inline long long get_integer(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) fail(path + "." + key, "missing required field");
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<long long>();
}

inline std::string get_string(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) fail(path + "." + key, "missing required field");
  const auto& v = obj.at(key);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

inline bool valid_id(const std::string& id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

inline TUpdateRule parse_t_rule(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  reject_unknown(j, path, {"kind", "gamma", "eta", "eps_prime"});
  const std::string kind = get_string(j, "kind", path);
  const double gamma = get_number(j, "gamma", path);
  if (!(gamma > 0.0 && gamma < 1.0)) fail(path + ".gamma", "gamma must lie in (0,1)");
  const double eps_prime = opt_number(j, "eps_prime", path).value_or(1e-8);
  if (!(eps_prime > 0.0)) fail(path + ".eps_prime", "eps_prime must be > 0");
  if (kind == "fixed_ratio") {
    if (j.contains("eta")) fail(path + ".eta", "eta only applies to kind \"derivative\"");
    return FixedRatio{gamma, eps_prime};
  }
  if (kind == "derivative") {
    const double eta = get_number(j, "eta", path);
    if (!(eta > 0.0)) fail(path + ".eta", "eta must be > 0");
    return DerivativeClamp{eta, gamma, eps_prime};
  }
  fail(path + ".kind", "expected \"fixed_ratio\" or \"derivative\", got \"" + kind + "\"");
}

inline ErrorScheme parse_error(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  reject_unknown(j, path, {"scheme", "nu", "omega", "delta"});
  const std::string scheme = get_string(j, "scheme", path);
  const double nu = get_number(j, "nu", path);
  if (!(nu >= 0.0)) fail(path + ".nu", "nu must be >= 0");
  if (scheme == "sinusoidal") return SinusoidalRipple{nu, get_number(j, "omega", path)};
  if (scheme == "hashed_grid") {
    const double delta = get_number(j, "delta", path);
    if (!(delta > 0.0)) fail(path + ".delta", "delta must be > 0");
    return HashedGrid{nu, delta};
  }
  fail(path + ".scheme", "expected \"sinusoidal\" or \"hashed_grid\", got \"" + scheme + "\"");
}

inline PlannedRun parse_run(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  reject_unknown(j, path,
                 {"id", "objective", "dim", "algorithm", "oracle_order", "x0", "t1", "T", "beta",
                  "t_rule", "minibatch", "fixed_t", "nu", "inner_stop", "seeds", "stochastic",
                  "noise_sigma", "error", "l1", "threshold"});
  PlannedRun run;
  run.id = get_string(j, "id", path);
  if (!valid_id(run.id)) fail(path + ".id", "ids may only contain [A-Za-z0-9_.-]");

  RunConfig& cfg = run.config;
  const std::string algo = get_string(j, "algorithm", path);
  const auto parsed = parse_algorithm(algo);
  if (!parsed) fail(path + ".algorithm", "unknown algorithm \"" + algo + "\"");
  cfg.algorithm = *parsed;
  cfg.oracle_order = natural_order(cfg.algorithm);
  if (j.contains("oracle_order")) {
    const std::string order = get_string(j, "oracle_order", path);
    if (order == "first") {
      cfg.oracle_order = OracleOrder::First;
    } else if (order == "zeroth") {
      cfg.oracle_order = OracleOrder::Zeroth;
    } else {
      fail(path + ".oracle_order", "expected \"first\" or \"zeroth\"");
    }
    if (cfg.algorithm != Algorithm::GRADOPT && cfg.oracle_order != natural_order(cfg.algorithm)) {
      fail(path + ".oracle_order", "conflicts with algorithm " + algo);
    }
  }

  // Objective and wrappers.
  run.objective.name = get_string(j, "objective", path);
  const auto names = registered_objectives();
  if (std::find(names.begin(), names.end(), run.objective.name) == names.end()) {
    fail(path + ".objective", "unknown objective \"" + run.objective.name + "\"");
  }

  if (!j.contains("x0") || !j.at("x0").is_array() || j.at("x0").empty()) {
    fail(path + ".x0", "expected a non-empty array of numbers");
  }
  const auto& x0 = j.at("x0");
  cfg.x0.resize(static_cast<Eigen::Index>(x0.size()));
  for (std::size_t i = 0; i < x0.size(); ++i) {
    if (!x0[i].is_number()) fail(path + ".x0[" + std::to_string(i) + "]", "expected a number");
    cfg.x0[static_cast<Eigen::Index>(i)] = x0[i].get<double>();
  }
  run.objective.dim = static_cast<int>(j.contains("dim") ? get_integer(j, "dim", path) : x0.size());
  if (run.objective.dim != static_cast<int>(x0.size())) {
    fail(path + ".x0", "length does not match dim");
  }
  if (run.objective.name != "quadratic" && run.objective.dim != 2) {
    fail(path + ".x0", "objective \"" + run.objective.name + "\" is two-dimensional");
  }
  run.objective.noise_sigma = opt_number(j, "noise_sigma", path);
  if (run.objective.noise_sigma && !(*run.objective.noise_sigma >= 0.0)) {
    fail(path + ".noise_sigma", "noise_sigma must be >= 0");
  }
  if (j.contains("error")) run.objective.error = parse_error(j.at("error"), path + ".error");

  if (j.contains("stochastic")) {
    if (!j.at("stochastic").is_boolean()) fail(path + ".stochastic", "expected a boolean");
    cfg.stochastic = j.at("stochastic").get<bool>();
  } else {
    cfg.stochastic = run.objective.noise_sigma.has_value() && cfg.algorithm != Algorithm::GD &&
                     cfg.algorithm != Algorithm::ZOGD;
  }
  if (cfg.stochastic && !run.objective.noise_sigma) {
    fail(path + ".stochastic", "stochastic runs need noise_sigma");
  }
  if (cfg.algorithm == Algorithm::SGD && !run.objective.noise_sigma) {
    fail(path + ".noise_sigma", "SGD needs a stochastic objective (set noise_sigma)");
  }

  const long long T = get_integer(j, "T", path);
  if (T <= 0) fail(path + ".T", "T must be a positive integer");
  cfg.iterations = static_cast<int>(T);

  if (cfg.algorithm == Algorithm::ZOSLGH_ERR) {
    cfg.beta = opt_number(j, "beta", path).value_or(1.0);  // replaced by the step schedule
  } else {
    cfg.beta = get_number(j, "beta", path);
  }
  if (!(cfg.beta > 0.0)) fail(path + ".beta", "beta must be > 0");

  const bool homotopy = cfg.algorithm == Algorithm::SLGH || cfg.algorithm == Algorithm::ZOSLGH ||
                        cfg.algorithm == Algorithm::ZOSLGH_ERR ||
                        cfg.algorithm == Algorithm::GRADOPT;
  if (homotopy) {
    cfg.t1 = get_number(j, "t1", path);
    if (!(cfg.t1 >= 0.0)) fail(path + ".t1", "t1 must be >= 0");
    if (cfg.algorithm != Algorithm::SLGH && !(cfg.t1 > 0.0)) fail(path + ".t1", "t1 must be > 0");
    if (!j.contains("t_rule")) fail(path + ".t_rule", "missing required field");
    cfg.t_rule = parse_t_rule(j.at("t_rule"), path + ".t_rule");
    if (cfg.algorithm == Algorithm::GRADOPT && uses_derivative(cfg.t_rule)) {
      fail(path + ".t_rule.kind", "GRADOPT takes a fixed_ratio decrease factor");
    }
  } else if (j.contains("t_rule")) {
    fail(path + ".t_rule", "not used by " + algo);
  }

  if (j.contains("minibatch")) {
    const long long m = get_integer(j, "minibatch", path);
    if (m <= 0) fail(path + ".minibatch", "minibatch must be a positive integer");
    cfg.minibatch = static_cast<std::size_t>(m);
  }

  cfg.fixed_t = opt_number(j, "fixed_t", path);
  const bool fixed_t_required = cfg.algorithm == Algorithm::ZOGD || cfg.algorithm == Algorithm::ZOSGD;
  if (fixed_t_required && !(cfg.fixed_t && *cfg.fixed_t > 0.0)) {
    fail(path + ".fixed_t", std::string(algo) + " needs fixed_t > 0");
  }

  cfg.nu = opt_number(j, "nu", path);
  if (cfg.nu && !(*cfg.nu >= 0.0)) fail(path + ".nu", "nu must be >= 0");
  if (cfg.algorithm == Algorithm::ZOSLGH_ERR) {
    if (!cfg.nu && run.objective.error) cfg.nu = error_level(*run.objective.error);
    if (!cfg.nu) fail(path + ".nu", "ZOSLGH_ERR needs nu (or an error block)");
  }
  cfg.l1 = opt_number(j, "l1", path);
  if (cfg.l1 && !(*cfg.l1 > 0.0)) fail(path + ".l1", "l1 must be > 0");

  if (j.contains("inner_stop")) {
    const auto& is = j.at("inner_stop");
    const std::string ip = path + ".inner_stop";
    if (!is.is_object()) fail(ip, "expected an object");
    reject_unknown(is, ip, {"n0", "eps0"});
    InnerStop stop;
    const long long n0 = get_integer(is, "n0", ip);
    if (n0 <= 0) fail(ip + ".n0", "n0 must be a positive integer");
    stop.n0 = static_cast<int>(n0);
    stop.eps0 = get_number(is, "eps0", ip);
    if (!(stop.eps0 >= 0.0)) fail(ip + ".eps0", "eps0 must be >= 0");
    cfg.inner_stop = stop;
  }
  if (cfg.algorithm == Algorithm::GRADOPT && !cfg.inner_stop) {
    fail(path + ".inner_stop", "GRADOPT needs inner_stop {n0, eps0}");
  }

  if (j.contains("seeds")) {
    const auto& s = j.at("seeds");
    if (!s.is_array() || s.empty()) fail(path + ".seeds", "expected a non-empty array of integers");
    std::set<std::uint64_t> seen;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!s[i].is_number_unsigned() && !(s[i].is_number_integer() && s[i].get<long long>() >= 0)) {
        fail(path + ".seeds[" + std::to_string(i) + "]", "expected a non-negative integer");
      }
      const auto seed = s[i].get<std::uint64_t>();
      if (!seen.insert(seed).second) fail(path + ".seeds[" + std::to_string(i) + "]", "duplicate seed");
      run.seeds.push_back(seed);
    }
  } else {
    run.seeds = {0};
  }
  run.threshold = opt_number(j, "threshold", path);

  // Capability checks against the built objective.
  try {
    const Objective obj = build_objective(run.objective);
    if (cfg.algorithm == Algorithm::ZOSLGH_ERR && !cfg.l1 && !obj.grad_lipschitz_l1) {
      fail(path + ".l1", "objective \"" + run.objective.name + "\" has no L1 metadata; set l1");
    }
    bool first_order = cfg.oracle_order == OracleOrder::First;
    if (first_order && cfg.algorithm != Algorithm::SGD) {
      const bool ok = cfg.stochastic
                          ? (obj.stochastic && (obj.stochastic->smoothed || obj.stochastic->gradient))
                          : (obj.smoothed || obj.has_gradient());
      if (!ok) fail(path + ".objective", "first-order algorithm needs gradients; \"" + obj.name + "\" has none");
    }
  } catch (const ArgumentError& e) {
    fail(path + ".objective", e.what());
  }
  return run;
}

}  // namespace detail

/// Parses and validates a plan (JSON text). Defaults: minibatch 1,
/// eps_prime 1e-8, seeds [0], parallelism 1.
inline ExperimentPlan parse_plan(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw LoadError(std::string("parse error: ") + e.what());
  }
  if (!j.is_object()) detail::fail("plan", "expected a JSON object");
  detail::reject_unknown(j, "plan", {"runs", "parallelism", "output_dir"});
  ExperimentPlan plan;
  if (!j.contains("runs") || !j.at("runs").is_array()) detail::fail("runs", "expected an array");
  std::set<std::string> ids;
  const auto& runs = j.at("runs");
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string path = "runs[" + std::to_string(i) + "]";
    PlannedRun run = detail::parse_run(runs[i], path);
    if (!ids.insert(run.id).second) detail::fail(path + ".id", "duplicate run id \"" + run.id + "\"");
    plan.runs.push_back(std::move(run));
  }
  if (j.contains("parallelism")) {
    const long long p = detail::get_integer(j, "parallelism", "plan");
    if (p <= 0) detail::fail("plan.parallelism", "parallelism must be a positive integer");
    plan.parallelism = static_cast<int>(p);
  }
  if (j.contains("output_dir")) plan.output_dir = detail::get_string(j, "output_dir", "plan");
  return plan;
}

inline ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path + ": cannot open plan file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_plan(ss.str());
  } catch (const LoadError& e) {
    throw LoadError(path + ": " + e.what());
  }
}

/// Preset name -> file name under the tables directory.
inline const std::map<std::string, std::string>& preset_files() {
  static const std::map<std::string, std::string> files{
      {"table3", "ackley_table3.json"},
      {"table4", "rosenbrock_table4.json"},
      {"table5", "himmelblau_table5.json"},
      {"table6", "toy_table6.json"},
      {"error-demo", "error_demo.json"},
  };
  return files;
}

}  // namespace slgh::harness

#endif  // SLGH_HARNESS_PLAN_HPP
