#include "rdode/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rdode {

using nlohmann::json;

namespace {

// Wraps one JSON object, hands out typed members and remembers which keys
// were consumed so leftovers can be reported.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
    return v.get<double>();
  }

  std::optional<double> opt_number(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return number(key, 0.0);
  }

  std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
      throw ConfigError(where(key) + ": expected a nonnegative integer");
    }
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(where(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
    return v.get<std::string>();
  }

  template <class T>
  std::vector<T> list(const std::string& key, std::vector<T> fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_array()) throw ConfigError(where(key) + ": expected an array");
    std::vector<T> out;
    for (const json& e : v) {
      if (!e.is_number()) throw ConfigError(where(key) + ": expected numbers");
      if constexpr (std::is_integral_v<T>) {
        if (!e.is_number_integer() || e.get<long long>() < 0) {
          throw ConfigError(where(key) + ": expected nonnegative integers");
        }
      }
      out.push_back(e.get<T>());
    }
    return out;
  }

  std::optional<Section> child(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return Section(j_.at(key), where(key));
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(where(key) + ": unknown key");
    }
  }

 private:
  std::string where(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Kinetics parse_kinetics(Section s) {
  const std::string family = s.string("family", "identity");
  Kinetics k;
  if (family == "identity") {
    k = Kinetics::identity();
  } else if (family == "saturating") {
    k = Kinetics::saturating();
  } else if (family == "power") {
    const double q = s.number("q", 1.0);
    try {
      k = Kinetics::power(q);
    } catch (const ConstraintViolation& e) {
      throw ConfigError(std::string("kinetics.") + e.what());
    }
  } else {
    throw ConfigError("kinetics.family: expected identity, power or saturating");
  }
  s.finish();
  return k;
}

json emit_opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

void validate_config(const ExperimentConfig& c) {
  try {
    validate_params(c.params.d, c.params.D, c.params.p, c.params.a, c.params.b, c.params.kappa);
    Grid1D(c.grid.L, c.grid.ncells);
    validate_control(c.control);
  } catch (const ConstraintViolation& e) {
    throw ConfigError(e.what());
  }
  if (const auto* th = std::get_if<TheoremScenario>(&c.scenario)) {
    if (th->eps && !(*th->eps > 0.0)) throw ConfigError("scenario.eps: must be positive");
    if (!(th->u0_multiple > 0.0)) throw ConfigError("scenario.u0_multiple: must be positive");
    if (th->u0_absolute && !(*th->u0_absolute > 0.0)) {
      throw ConfigError("scenario.u0_absolute: must be positive");
    }
    if (th->v0_bar && !(*th->v0_bar > 0.0)) throw ConfigError("scenario.v0_bar: must be positive");
  } else {
    const auto& cu = std::get<CustomScenario>(c.scenario);
    if (cu.u_profile != "zero" && cu.u_profile != "constant" && cu.u_profile != "gaussian") {
      throw ConfigError("scenario.u_profile: expected zero, constant or gaussian");
    }
    if (!(cu.u_value >= 0.0)) throw ConfigError("scenario.u_value: must be nonnegative");
    if (!(cu.u_width > 0.0)) throw ConfigError("scenario.u_width: must be positive");
    if (!(cu.v_value >= 0.0)) throw ConfigError("scenario.v_value: must be nonnegative");
  }
  if (c.estimator.samples == 0) throw ConfigError("estimator.samples: must be positive");
  if (c.estimator.cq && !(*c.estimator.cq > 0.0)) throw ConfigError("estimator.cq: must be positive");
  if (c.dichotomy.d && !(*c.dichotomy.d > 0.0)) throw ConfigError("dichotomy.d: must be positive");
  for (std::size_t n : c.converge.levels) {
    if (n == 0 || n % 2 != 0) throw ConfigError("converge.levels: entries must be even and positive");
  }
  for (double t : c.outputs.snapshot_times) {
    if (!(t >= 0.0)) throw ConfigError("outputs.snapshot_times: entries must be nonnegative");
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }

  ExperimentConfig c;
  Section top(root, "");

  if (auto s = top.child("params")) {
    Params& p = c.params;
    p.d = s->number("d", p.d);
    p.D = s->number("D", p.D);
    p.p = s->number("p", p.p);
    p.a = s->number("a", p.a);
    p.b = s->number("b", p.b);
    p.kappa = s->number("kappa", p.kappa);
    s->finish();
  }
  if (auto s = top.child("kinetics")) c.kinetics = parse_kinetics(*s);
  if (auto s = top.child("grid")) {
    c.grid.L = s->number("L", c.grid.L);
    c.grid.ncells = s->unsigned_int("ncells", c.grid.ncells);
    s->finish();
  }
  if (auto s = top.child("scenario")) {
    const std::string kind = s->string("kind", "theorem_data");
    if (kind == "theorem_data") {
      TheoremScenario th;
      th.alpha = s->number("alpha", th.alpha);
      th.eps = s->opt_number("eps");
      th.u0_multiple = s->number("u0_multiple", th.u0_multiple);
      th.u0_absolute = s->opt_number("u0_absolute");
      th.v0_bar = s->opt_number("v0_bar");
      c.scenario = th;
    } else if (kind == "custom") {
      CustomScenario cu;
      cu.u_profile = s->string("u_profile", cu.u_profile);
      cu.u_value = s->number("u_value", cu.u_value);
      cu.u_width = s->number("u_width", cu.u_width);
      cu.v_value = s->number("v_value", cu.v_value);
      c.scenario = cu;
    } else {
      throw ConfigError("scenario.kind: expected theorem_data or custom");
    }
    s->finish();
  }
  if (auto s = top.child("control")) {
    StepControl& k = c.control;
    k.dt_init = s->number("dt_init", k.dt_init);
    k.dt_min = s->number("dt_min", k.dt_min);
    k.dt_max = s->number("dt_max", k.dt_max);
    k.safety = s->number("safety", k.safety);
    k.blowup_threshold = s->number("blowup_threshold", k.blowup_threshold);
    k.t_end = s->number("t_end", k.t_end);
    s->finish();
  }
  if (auto s = top.child("estimator")) {
    c.estimator.samples = s->unsigned_int("samples", c.estimator.samples);
    c.estimator.seed = s->unsigned_int("seed", c.estimator.seed);
    c.estimator.cq = s->opt_number("cq");
    s->finish();
  }
  if (auto s = top.child("dichotomy")) {
    c.dichotomy.d = s->opt_number("d");
    s->finish();
  }
  if (auto s = top.child("converge")) {
    c.converge.levels = s->list<std::size_t>("levels", c.converge.levels);
    s->finish();
  }
  if (auto s = top.child("sweep")) {
    c.sweep.u0_multiples = s->list<double>("u0_multiples", c.sweep.u0_multiples);
    c.sweep.eps = s->list<double>("eps", c.sweep.eps);
    c.sweep.alpha = s->list<double>("alpha", c.sweep.alpha);
    c.sweep.p = s->list<double>("p", c.sweep.p);
    s->finish();
  }
  if (auto s = top.child("outputs")) {
    OutputsConfig& o = c.outputs;
    o.trace_path = s->string("trace_path", o.trace_path);
    o.summary_path = s->string("summary_path", o.summary_path);
    o.snapshot_times = s->list<double>("snapshot_times", o.snapshot_times);
    o.snapshot_prefix = s->string("snapshot_prefix", o.snapshot_prefix);
    if (s->has("plot_path")) o.plot_path = s->string("plot_path", "");
    o.plot_log_u = s->boolean("plot_log_u", o.plot_log_u);
    s->finish();
  }
  top.finish();
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const ExperimentConfig& c) {
  json j;
  j["params"] = {{"d", c.params.d}, {"D", c.params.D},         {"p", c.params.p},
                 {"a", c.params.a}, {"b", c.params.b},         {"kappa", c.params.kappa}};
  j["kinetics"] = {{"family", c.kinetics.name()}};
  if (const auto* pk = std::get_if<PowerKinetics>(&c.kinetics.family())) {
    j["kinetics"]["q"] = pk->q;
  }
  j["grid"] = {{"L", c.grid.L}, {"ncells", c.grid.ncells}};
  if (const auto* th = std::get_if<TheoremScenario>(&c.scenario)) {
    j["scenario"] = {{"kind", "theorem_data"},
                     {"alpha", th->alpha},
                     {"eps", emit_opt(th->eps)},
                     {"u0_multiple", th->u0_multiple},
                     {"u0_absolute", emit_opt(th->u0_absolute)},
                     {"v0_bar", emit_opt(th->v0_bar)}};
  } else {
    const auto& cu = std::get<CustomScenario>(c.scenario);
    j["scenario"] = {{"kind", "custom"},
                     {"u_profile", cu.u_profile},
                     {"u_value", cu.u_value},
                     {"u_width", cu.u_width},
                     {"v_value", cu.v_value}};
  }
  const StepControl& k = c.control;
  j["control"] = {{"dt_init", k.dt_init},
                  {"dt_min", k.dt_min},
                  {"dt_max", k.dt_max},
                  {"safety", k.safety},
                  {"blowup_threshold", k.blowup_threshold},
                  {"t_end", k.t_end}};
  j["estimator"] = {{"samples", c.estimator.samples},
                    {"seed", c.estimator.seed},
                    {"cq", emit_opt(c.estimator.cq)}};
  j["dichotomy"] = {{"d", emit_opt(c.dichotomy.d)}};
  j["converge"] = {{"levels", c.converge.levels}};
  j["sweep"] = {{"u0_multiples", c.sweep.u0_multiples},
                {"eps", c.sweep.eps},
                {"alpha", c.sweep.alpha},
                {"p", c.sweep.p}};
  const OutputsConfig& o = c.outputs;
  j["outputs"] = {{"trace_path", o.trace_path},
                  {"summary_path", o.summary_path},
                  {"snapshot_times", o.snapshot_times},
                  {"snapshot_prefix", o.snapshot_prefix},
                  {"plot_path", o.plot_path ? json(*o.plot_path) : json(nullptr)},
                  {"plot_log_u", o.plot_log_u}};
  return j.dump(2);
}

}  // namespace rdode
