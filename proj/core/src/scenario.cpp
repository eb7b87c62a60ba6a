#include "intercept/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "intercept/error.hpp"

namespace intercept {

const char* to_string(Law law) {
  switch (law) {
    case Law::dgl1: return "dgl1";
    case Law::dglc: return "dglc";
    case Law::tv_dglcc: return "tv-dglcc";
  }
  return "unknown";
}

const char* to_string(EstimatorKind e) {
  return e == EstimatorKind::truth ? "truth" : "filter";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& v) {
  // strtod rather than a stream so that "inf" round-trips.
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0' || std::isnan(x)) {
    throw ConfigError("bad number for '" + key + "': " + v);
  }
  return x;
}

std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << x;
  return os.str();
}

struct Field {
  const char* key;
  std::function<void(ScenarioConfig&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

template <class Access>
Field number(const char* key, Access acc) {
  return {key,
          [key, acc](ScenarioConfig& c, const std::string& v) { acc(c) = parse_double(key, v); },
          [acc](const ScenarioConfig& c) { return fmt(acc(const_cast<ScenarioConfig&>(c))); }};
}

template <class Access>
Field flag(const char* key, Access acc) {
  return {key,
          [key, acc](ScenarioConfig& c, const std::string& v) {
            const auto l = lower(v);
            if (l == "true" || l == "1") {
              acc(c) = true;
            } else if (l == "false" || l == "0") {
              acc(c) = false;
            } else {
              throw ConfigError(std::string(key) + " must be true or false");
            }
          },
          [acc](const ScenarioConfig& c) {
            return std::string(acc(const_cast<ScenarioConfig&>(c)) ? "true" : "false");
          }};
}

#define INTERCEPT_FIELD(name, expr) \
  number(name, [](ScenarioConfig& c) -> double& { return expr; })
#define INTERCEPT_FLAG(name, expr) \
  flag(name, [](ScenarioConfig& c) -> bool& { return expr; })

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"law", [](ScenarioConfig& c, const std::string& v) { c.law = parse_law(v); },
                 [](const ScenarioConfig& c) { return std::string(to_string(c.law)); }});
    f.push_back({"estimator",
                 [](ScenarioConfig& c, const std::string& v) { c.estimator = parse_estimator(v); },
                 [](const ScenarioConfig& c) { return std::string(to_string(c.estimator)); }});
    f.push_back(INTERCEPT_FIELD("t_sw", c.t_sw));
    f.push_back({"seed",
                 [](ScenarioConfig& c, const std::string& v) {
                   std::size_t pos = 0;
                   try {
                     c.seed = std::stoull(v, &pos);
                   } catch (const std::exception&) {
                     pos = 0;
                   }
                   if (pos != v.size() || v.empty() || v[0] == '-') {
                     throw ConfigError("bad seed: " + v);
                   }
                 },
                 [](const ScenarioConfig& c) { return std::to_string(c.seed); }});
    f.push_back(INTERCEPT_FIELD("V_P", c.vehicle.V_P));
    f.push_back(INTERCEPT_FIELD("V_E", c.vehicle.V_E));
    f.push_back(INTERCEPT_FIELD("tau_P", c.vehicle.tau_P));
    f.push_back(INTERCEPT_FIELD("tau_E", c.vehicle.tau_E));
    f.push_back(INTERCEPT_FIELD("a_P_max", c.vehicle.a_P_max));
    f.push_back(INTERCEPT_FIELD("a_E_max", c.vehicle.a_E_max));
    f.push_back(INTERCEPT_FIELD("f", c.vehicle.f));
    f.push_back(INTERCEPT_FIELD("rho0", c.rho0));
    f.push_back(INTERCEPT_FIELD("lambda0", c.lambda0));
    f.push_back(INTERCEPT_FIELD("gamma_E0", c.gamma_E0));
    f.push_back(INTERCEPT_FIELD("a_E0", c.a_E0));
    f.push_back(INTERCEPT_FIELD("evader_cmd_before", c.evader_cmd_before));
    f.push_back(INTERCEPT_FIELD("evader_cmd_after", c.evader_cmd_after));
    f.push_back(INTERCEPT_FIELD("sigma_lambda", c.sigma_lambda));
    f.push_back({"noise",
                 [](ScenarioConfig& c, const std::string& v) {
                   const auto l = lower(v);
                   if (l == "gaussian") {
                     c.noise = estimation::LikelihoodKind::gaussian;
                   } else if (l == "laplace") {
                     c.noise = estimation::LikelihoodKind::laplace;
                   } else {
                     throw ConfigError("noise must be gaussian or laplace, got " + v);
                   }
                 },
                 [](const ScenarioConfig& c) {
                   return std::string(c.noise == estimation::LikelihoodKind::laplace ? "laplace"
                                                                                     : "gaussian");
                 }});
    f.push_back({"particles_per_mode",
                 [](ScenarioConfig& c, const std::string& v) {
                   const double x = parse_double("particles_per_mode", v);
                   if (x != std::floor(x) || x < 1 || x > 1e7) {
                     throw ConfigError("particles_per_mode must be a positive integer");
                   }
                   c.particles_per_mode = static_cast<int>(x);
                 },
                 [](const ScenarioConfig& c) { return std::to_string(c.particles_per_mode); }});
    f.push_back(INTERCEPT_FIELD("p_switch", c.p_switch));
    f.push_back(INTERCEPT_FIELD("sigma_gamma_E", c.sigma_gamma_E));
    f.push_back(INTERCEPT_FIELD("sigma_a_E", c.sigma_a_E));
    f.push_back(INTERCEPT_FIELD("theta0_lo", c.theta0_lo));
    f.push_back(INTERCEPT_FIELD("theta0_hi", c.theta0_hi));
    f.push_back(INTERCEPT_FIELD("theta1_lo", c.theta1_lo));
    f.push_back(INTERCEPT_FIELD("theta1_hi", c.theta1_hi));
    f.push_back(INTERCEPT_FIELD("radar_dx", c.radar_dx));
    f.push_back(INTERCEPT_FIELD("radar_dy", c.radar_dy));
    f.push_back(INTERCEPT_FIELD("radar_sigma_rho", c.radar_sigma_rho));
    f.push_back(INTERCEPT_FIELD("radar_sigma_lambda", c.radar_sigma_lambda));
    f.push_back(INTERCEPT_FIELD("radar_sigma_gamma", c.radar_sigma_gamma));
    f.push_back(INTERCEPT_FIELD("radar_sigma_a", c.radar_sigma_a));
    f.push_back(INTERCEPT_FIELD("W_thres", c.W_thres));
    f.push_back(INTERCEPT_FIELD("p_thres", c.p_thres));
    f.push_back(INTERCEPT_FLAG("greedy", c.greedy));
    f.push_back(INTERCEPT_FLAG("causal_complement", c.causal_complement));
    f.push_back(INTERCEPT_FIELD("ema_alpha", c.ema_alpha));
    f.push_back(INTERCEPT_FIELD("stale_horizon", c.stale_horizon));
    f.push_back(INTERCEPT_FIELD("k_xi", c.k_xi));
    f.push_back(INTERCEPT_FIELD("C", c.C));
    f.push_back(INTERCEPT_FIELD("dglc_delta", c.dglc_delta));
    f.push_back(INTERCEPT_FIELD("k_chatter", c.k_chatter));
    f.push_back(INTERCEPT_FIELD("truth_dt", c.truth_dt));
    f.push_back(INTERCEPT_FIELD("t_max", c.t_max));
    f.push_back({"smoother_lag",
                 [](ScenarioConfig& c, const std::string& v) {
                   const double x = parse_double("smoother_lag", v);
                   if (x != std::floor(x) || x < 0 || x > 1e6) {
                     throw ConfigError("smoother_lag must be a non-negative integer");
                   }
                   c.smoother_lag = static_cast<int>(x);
                 },
                 [](const ScenarioConfig& c) { return std::to_string(c.smoother_lag); }});
    return f;
  }();
  return table;
}

#undef INTERCEPT_FIELD

}  // namespace

Law parse_law(std::string_view s) {
  const auto l = lower(s);
  if (l == "dgl1") return Law::dgl1;
  if (l == "dglc") return Law::dglc;
  if (l == "tv-dglcc" || l == "tv_dglcc" || l == "dglcc") return Law::tv_dglcc;
  throw ConfigError("unknown guidance law: " + std::string(s));
}

EstimatorKind parse_estimator(std::string_view s) {
  const auto l = lower(s);
  if (l == "filter") return EstimatorKind::filter;
  if (l == "truth") return EstimatorKind::truth;
  throw ConfigError("unknown estimator: " + std::string(s));
}

void ScenarioConfig::validate() const {
  vehicle.validate();
  if (!(rho0 > 0.0)) throw ConfigError("rho0 must be positive");
  if (!(t_sw >= 0.0)) throw ConfigError("t_sw must be non-negative");
  if (std::abs(evader_cmd_before) > 1.0 || std::abs(evader_cmd_after) > 1.0) {
    throw ConfigError("evader commands are normalized to [-1, 1]");
  }
  if (!(sigma_lambda >= 0.0)) throw ConfigError("sigma_lambda must be non-negative");
  if (!(p_switch >= 0.0 && p_switch <= 1.0)) throw ConfigError("p_switch must lie in [0, 1]");
  if (!(theta0_lo <= theta0_hi && theta1_lo <= theta1_hi && theta0_lo >= 0.0 &&
        theta1_lo >= 0.0)) {
    throw ConfigError("sojourn-time init ranges must be ordered and non-negative");
  }
  if (!(W_thres > 0.0 && W_thres < 1.0)) throw ConfigError("W_thres must lie in (0, 1)");
  if (!(p_thres > 0.0 && p_thres <= 1.0)) throw ConfigError("p_thres must lie in (0, 1]");
  if (!(ema_alpha > 0.0 && ema_alpha <= 1.0)) throw ConfigError("ema_alpha must lie in (0, 1]");
  if (!(stale_horizon > 0.0)) throw ConfigError("stale_horizon must be positive");
  if (!(k_xi > 0.0)) throw ConfigError("k_xi must be positive");
  if (!(C >= 0.0 && C <= 1.0)) throw ConfigError("C must lie in [0, 1]");
  if (!(dglc_delta >= 0.0)) throw ConfigError("dglc_delta must be non-negative");
  if (!(k_chatter > 0.0 && k_chatter <= 1.0)) throw ConfigError("k_chatter must lie in (0, 1]");
  if (!(truth_dt > 0.0 && truth_dt <= vehicle.dt_meas())) {
    throw ConfigError("truth_dt must be positive and no larger than the measurement period");
  }
  const double ratio = vehicle.dt_meas() / truth_dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw ConfigError("measurement period must be a multiple of truth_dt");
  }
  if (!(t_max > 0.0)) throw ConfigError("t_max must be positive");
  if (smoother_lag < 0) throw ConfigError("smoother_lag must be non-negative");
  if (estimator == EstimatorKind::filter) {
    filter_config().validate();
    if (!(sigma_lambda > 0.0)) throw ConfigError("the filter needs sigma_lambda > 0");
  }
}

estimation::FilterConfig ScenarioConfig::filter_config() const {
  estimation::FilterConfig f;
  f.particles_per_mode = particles_per_mode;
  f.mode_commands = {evader_cmd_before, evader_cmd_after};
  f.sigma_gamma_E = sigma_gamma_E;
  f.sigma_a_E = sigma_a_E;
  f.sigma_lambda = sigma_lambda;
  f.likelihood = noise;
  f.theta_init = {{theta0_lo, theta0_hi}, {theta1_lo, theta1_hi}};
  return f;
}

delay::DelayEstimatorConfig ScenarioConfig::delay_config() const {
  delay::DelayEstimatorConfig d;
  d.W_thres = W_thres;
  d.p_thres = p_thres;
  d.ema_alpha = ema_alpha;
  d.greedy = greedy;
  d.causal_complement = causal_complement;
  d.stale_horizon = stale_horizon;
  d.analytic.k_xi = k_xi;
  d.analytic.sigma_lambda = sigma_lambda;
  d.analytic.tau_E = vehicle.tau_E;
  d.analytic.delta_a = std::abs(evader_cmd_after - evader_cmd_before) * vehicle.a_E_max;
  d.analytic.f = vehicle.f;
  return d;
}

std::array<double, 16> ScenarioConfig::radar_covariance() const {
  std::array<double, 16> c{};
  c[0] = radar_sigma_rho * radar_sigma_rho;
  c[5] = radar_sigma_lambda * radar_sigma_lambda;
  c[10] = radar_sigma_gamma * radar_sigma_gamma;
  c[15] = radar_sigma_a * radar_sigma_a;
  return c;
}

dynamics::EngagementState ScenarioConfig::initial_state() const {
  dynamics::EngagementState s;
  s.rho = rho0;
  s.lambda = lambda0;
  s.gamma_E = gamma_E0;
  s.a_E = a_E0;
  s.theta = 0.0;
  s.gamma_P = lambda0;
  s.a_P = 0.0;
  s.t = 0.0;
  return s;
}

ScenarioConfig load_config(std::istream& in, ScenarioConfig cfg) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(),
                                 [&](const Field& f) { return key == f.key; });
    if (it == table.end()) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    it->set(cfg, value);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return load_config(in, std::move(base));
}

void save_config(std::ostream& out, const ScenarioConfig& cfg) {
  for (const auto& f : fields()) out << f.key << " = " << f.get(cfg) << '\n';
}

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  for (const auto& f : fields()) {
    if (f.get(a) != f.get(b)) return false;
  }
  return true;
}

}  // namespace intercept
