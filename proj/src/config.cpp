#include "relsub/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "relsub/errors.hpp"

namespace relsub {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  std::size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

class Kv {
 public:
  explicit Kv(const std::map<std::string, std::string>& kv) : kv_(kv) {}

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& dflt) {
    used_.insert(key);
    auto it = kv_.find(key);
    return it == kv_.end() ? dflt : it->second;
  }

  std::string require(const std::string& key) {
    used_.insert(key);
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("missing config key: " + key);
    return it->second;
  }

  double num(const std::string& key, double dflt) {
    return has(key) ? to_num(key, require(key)) : (used_.insert(key), dflt);
  }

  double require_num(const std::string& key) { return to_num(key, require(key)); }

  std::uint64_t u64(const std::string& key, std::uint64_t dflt) {
    if (!has(key)) {
      used_.insert(key);
      return dflt;
    }
    try {
      return std::stoull(require(key));
    } catch (...) {
      throw ConfigError("bad integer for key " + key);
    }
  }

  bool flag(const std::string& key, bool dflt) {
    std::string v = str(key, dflt ? "1" : "0");
    if (v == "1" || v == "true") return true;
    if (v == "0" || v == "false") return false;
    throw ConfigError("bad boolean for key " + key);
  }

  void reject_unknown() const {
    for (const auto& [k, _] : kv_)
      if (!used_.count(k)) throw ConfigError("unknown config key: " + k);
  }

 private:
  static double to_num(const std::string& key, const std::string& v) {
    try {
      std::size_t used = 0;
      double x = std::stod(v, &used);
      if (used != v.size()) throw ConfigError("bad number for key " + key);
      return x;
    } catch (const ConfigError&) {
      throw;
    } catch (...) {
      throw ConfigError("bad number for key " + key);
    }
  }

  const std::map<std::string, std::string>& kv_;
  std::set<std::string> used_;
};

GenConfig gen_from(Kv& kv) {
  GenConfig g;
  g.model = ModelKind::parse(kv.require("model"), kv.num("pi_g", 0.054));
  g.true_params = parse_params(g.model, kv.require("theta"));
  g.n = static_cast<std::size_t>(kv.u64("n", 0));
  g.trunc_a = kv.num("trunc_a", 0.0);
  g.trunc_b = kv.require_num("trunc_b");
  g.seed = kv.u64("seed", 0);
  g.fixed_n0 = static_cast<std::size_t>(kv.u64("fixed_n0", 0));
  const std::string mode = kv.str("truncation_mode", "conditional");
  if (mode == "conditional")
    g.truncation_mode = TruncationMode::Conditional;
  else if (mode == "independent")
    g.truncation_mode = TruncationMode::Independent;
  else
    throw ConfigError("truncation_mode must be conditional or independent");

  if (kv.has("target_alpha")) {
    const double target = kv.require_num("target_alpha");
    kv.num("censor_c", 0.0);  // ignored when calibrating
    kv.num("censor_d", 0.0);
    auto window = calibrate_alpha(g.model, g.true_params, target, {g.trunc_a, g.trunc_b});
    g.censor_c = window.first;
    g.censor_d = window.second;
  } else {
    g.censor_c = kv.require_num("censor_c");
    g.censor_d = kv.require_num("censor_d");
  }
  return g;
}

}  // namespace

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + " is not key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key on line " + std::to_string(line_no));
    if (!kv.emplace(key, value).second)
      throw ConfigError("duplicate config key: " + key);
  }
  return kv;
}

ParamVector parse_params(ModelKind model, const std::string& comma_list) {
  std::vector<double> vals;
  std::stringstream ss(comma_list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stod(trim(item)));
    } catch (...) {
      throw ConfigError("bad parameter value: " + item);
    }
  }
  Vec v(static_cast<Eigen::Index>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) v[static_cast<Eigen::Index>(i)] = vals[i];
  return ParamVector(model, v);
}

GenConfig gen_config_from_kv(const std::map<std::string, std::string>& kv) {
  Kv k(kv);
  GenConfig g = gen_from(k);
  k.reject_unknown();
  g.validate();
  return g;
}

GenConfig gen_config_from_file(const std::string& path) {
  return gen_config_from_kv(parse_kv_file(path));
}

SimConfig sim_config_from_kv(const std::map<std::string, std::string>& kv) {
  Kv k(kv);
  SimConfig cfg;
  cfg.model = ModelKind::parse(k.require("model"), k.num("pi_g", 0.054));
  cfg.time_scale = k.num("time_scale", 1.0);
  cfg.m = static_cast<std::size_t>(k.u64("m", 1));
  cfg.seed = k.u64("seed", 0);
  cfg.ci_level = k.num("ci_level", 0.95);
  cfg.fix_dataset = k.flag("fix_dataset", false);
  cfg.reference = parse_reference(k.str("reference", "full_mle"));
  const std::string workers = k.str("workers", "auto");
  cfg.workers = workers == "auto" ? 0 : static_cast<int>(std::stoll(workers));

  if (k.has("data")) {
    cfg.data_path = k.require("data");
    k.str("theta", "");  // tolerated for true-theta-free runs
  } else {
    cfg.gen = gen_from(k);
    cfg.gen->seed = cfg.seed;
  }

  OptimizerConfig opt;
  opt.max_iters = static_cast<int>(k.u64("max_iters", 100));
  opt.grad_tol = k.num("grad_tol", 1e-8);

  const std::size_t r = static_cast<std::size_t>(k.u64("r", 1000));
  const std::size_t r0 = static_cast<std::size_t>(k.u64("r0", 400));
  const double xi = k.num("xi", 0.1);
  const double xi_c = k.num("xi_c", 0.1);

  std::stringstream ss(k.str("estimators", "full"));
  std::string item;
  while (std::getline(ss, item, ',')) {
    EstimatorSpec spec;
    spec.method = parse_method(trim(item));
    spec.r = r;
    spec.r0 = r0;
    spec.xi = spec.method == Method::Rdcs ? xi_c : xi;
    spec.optimizer = opt;
    cfg.estimators.push_back(spec);
  }

  k.reject_unknown();
  cfg.validate();
  return cfg;
}

SimConfig sim_config_from_file(const std::string& path) {
  return sim_config_from_kv(parse_kv_file(path));
}

}  // namespace relsub
