#include "chasym/config.hpp"

#include <fstream>
#include <sstream>

namespace chasym {

ObjectReader::ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
  if (!j_.is_object()) throw ValidationError(where_ + ": expected an object");
}

const json& ObjectReader::raw(const std::string& key) {
  if (!has(key)) throw ValidationError(where(key) + ": required field missing");
  seen_.insert(key);
  return j_.at(key);
}

template <>
double ObjectReader::get<double>(const std::string& key) {
  const auto& v = raw(key);
  if (!v.is_number()) throw ValidationError(where(key) + ": expected a number");
  return v.get<double>();
}

template <>
int ObjectReader::get<int>(const std::string& key) {
  const auto& v = raw(key);
  if (!v.is_number_integer()) throw ValidationError(where(key) + ": expected an integer");
  return v.get<int>();
}

template <>
std::uint64_t ObjectReader::get<std::uint64_t>(const std::string& key) {
  const auto& v = raw(key);
  if (!v.is_number_unsigned()) throw ValidationError(where(key) + ": expected a non-negative integer");
  return v.get<std::uint64_t>();
}

template <>
bool ObjectReader::get<bool>(const std::string& key) {
  const auto& v = raw(key);
  if (!v.is_boolean()) throw ValidationError(where(key) + ": expected true or false");
  return v.get<bool>();
}

template <>
std::string ObjectReader::get<std::string>(const std::string& key) {
  const auto& v = raw(key);
  if (!v.is_string()) throw ValidationError(where(key) + ": expected a string");
  return v.get<std::string>();
}

template <>
std::vector<double> ObjectReader::get<std::vector<double>>(const std::string& key) {
  const auto& v = raw(key);
  if (!v.is_array()) throw ValidationError(where(key) + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ValidationError(where(key) + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

template <>
std::vector<int> ObjectReader::get<std::vector<int>>(const std::string& key) {
  const auto& v = raw(key);
  if (!v.is_array()) throw ValidationError(where(key) + ": expected an array of integers");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw ValidationError(where(key) + ": expected an array of integers");
    out.push_back(x.get<int>());
  }
  return out;
}

void ObjectReader::finish() const {
  for (auto it = j_.begin(); it != j_.end(); ++it) {
    if (!seen_.count(it.key())) throw ValidationError(where(it.key()) + ": unknown field");
  }
}

namespace {

std::vector<double> parse_times(const json& j, double lo, double hi, const std::string& where) {
  if (j.is_array()) {
    const json holder{{"t", j}};
    ObjectReader wrap(holder, where);
    return wrap.get<std::vector<double>>("t");
  }
  ObjectReader r(j, where);
  const int count = r.get<int>("count");
  const std::string spacing = r.get<std::string>("spacing", "log");
  const double from = r.get<double>("from", lo);
  const double to = r.get<double>("to", hi);
  r.finish();
  if (count < 2) throw ValidationError(where + ".count: need at least 2 times");
  if (spacing == "log") return log_times(from, to, count);
  if (spacing != "linear") throw ValidationError(where + ".spacing: expected 'log' or 'linear'");
  std::vector<double> t(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) t[static_cast<size_t>(i)] = from + (to - from) * i / (count - 1);
  t.back() = to;
  return t;
}

MultiIndex parse_alpha(const json& j, int d, const std::string& where) {
  const json holder{{"alpha", j}};
  ObjectReader wrap(holder, where);
  auto orders = wrap.get<std::vector<int>>("alpha");
  if (static_cast<int>(orders.size()) != d) {
    throw ValidationError(where + ": multi-index has " + std::to_string(orders.size()) + " entries, d = " +
                          std::to_string(d));
  }
  return MultiIndex(orders);
}

}  // namespace

Rational parse_rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (!j.is_string()) throw ValidationError(where + ": expected an integer or a string 'p/q'");
  const auto s = j.get<std::string>();
  const auto slash = s.find('/');
  try {
    std::size_t used = 0;
    if (slash == std::string::npos) {
      const auto v = std::stoll(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return Rational(v);
    }
    const auto num = std::stoll(s.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument(s);
    const auto rest = s.substr(slash + 1);
    const auto den = std::stoll(rest, &used);
    if (used != rest.size() || den == 0) throw std::invalid_argument(s);
    return Rational(num, den);
  } catch (const std::logic_error&) {
    throw ValidationError(where + ": cannot parse rational '" + s + "'");
  }
}

Header parse_header(ObjectReader& r) {
  Header h;
  h.schema_version = r.get<int>("schema_version");
  if (h.schema_version != kSchemaVersion) {
    throw ValidationError("schema_version " + std::to_string(h.schema_version) + " is not supported (expected " +
                          std::to_string(kSchemaVersion) + ")");
  }
  h.output_dir = r.get<std::string>("output_dir", "");
  h.seed = r.get<std::uint64_t>("seed", 0);
  return h;
}

SpecConfig parse_spec(const json& j, const std::string& where) {
  ObjectReader r(j, where);
  SpecConfig s;
  s.n = r.get<int>("n");
  s.d = r.get<int>("d");
  if (s.n < 1) throw ValidationError(where + ".n: must be positive");
  if (s.d < 1 || s.d > 3) throw ValidationError(where + ".d: must be 1, 2 or 3");
  const auto& nl = r.raw("nonlinearity");
  if (nl.is_string()) {
    s.label = nl.get<std::string>();
    if (s.label == "cahn_hilliard") {
      if (s.n != 2) throw ValidationError(where + ": cahn_hilliard requires n = 2");
      s.model = NonlinearModel::cahn_hilliard();
    } else if (s.label != "none") {
      throw ValidationError(where + ".nonlinearity: expected 'cahn_hilliard', 'none' or an object");
    }
  } else {
    s.label = "custom";
    ObjectReader m(nl, where + ".nonlinearity");
    if (m.has("conservative")) {
      const auto& arr = m.raw("conservative");
      if (!arr.is_array()) throw ValidationError(m.where("conservative") + ": expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        ObjectReader t(arr[i], m.where("conservative") + "[" + std::to_string(i) + "]");
        ConservativeTerm c{t.get<double>("coefficient"), t.get<int>("power")};
        t.finish();
        if (c.power < 1) throw ValidationError(t.where("power") + ": must be >= 1");
        s.model.conservative.push_back(c);
      }
    }
    if (m.has("monomials")) {
      const auto& arr = m.raw("monomials");
      if (!arr.is_array()) throw ValidationError(m.where("monomials") + ": expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string w = m.where("monomials") + "[" + std::to_string(i) + "]";
        ObjectReader t(arr[i], w);
        NonlinearTerm term;
        term.coefficient = t.get<double>("coefficient");
        const auto& fs = t.raw("factors");
        if (!fs.is_array()) throw ValidationError(w + ".factors: expected an array");
        for (std::size_t k = 0; k < fs.size(); ++k) {
          const std::string fw = w + ".factors[" + std::to_string(k) + "]";
          ObjectReader f(fs[k], fw);
          Factor fac{parse_alpha(f.raw("alpha"), s.d, fw + ".alpha"), f.get<int>("power")};
          f.finish();
          term.factors.push_back(fac);
        }
        t.finish();
        validate_term(term, s.n, s.d);
        s.model.monomials.push_back(term);
      }
    }
    m.finish();
  }
  r.finish();
  s.pde().validate();
  return s;
}

ScalingFrame parse_frame(const json& j, int n, int d, const std::string& where) {
  ObjectReader r(j, where);
  ScalingFrame f = ScalingFrame::diffusive(n, d);
  if (r.has("n") && r.get<int>("n") != n) throw ValidationError(where + ".n: does not match the equation");
  if (r.has("d") && r.get<int>("d") != d) throw ValidationError(where + ".d: does not match the equation");
  if (r.has("beta")) f.beta = parse_rational(r.raw("beta"), where + ".beta");
  r.finish();
  return f;
}

Grid parse_grid(const json& j, int d, const std::string& where) {
  ObjectReader r(j, where);
  Grid g{d, r.get<int>("N"), r.get<double>("L")};
  r.finish();
  g.validate();
  return g;
}

Perturbation parse_perturbation(const json& j, const std::string& where) {
  ObjectReader r(j, where);
  Perturbation p;
  p.kind = r.get<std::string>("kind");
  if (p.kind == "custom") {
    p.samples = r.get<std::vector<double>>("samples");
  } else {
    p.amplitude = r.get<double>("amplitude");
    p.width = r.get<double>("width");
    p.center = r.get<std::vector<double>>("center", {});
    p.axis = r.get<int>("axis", 0);
  }
  r.finish();
  return p;
}

IntegratorConfig parse_integrator(const json& j, const std::string& where) {
  ObjectReader r(j, where);
  IntegratorConfig c;
  c.t_start = r.get<double>("t_start", 1.0);
  c.t_end = r.get<double>("t_end");
  c.step.dt = r.get<double>("dt", 1e-3);
  c.step.dt_min = r.get<double>("dt_min", 1e-12);
  c.step.dt_max = r.get<double>("dt_max", 1e300);
  c.step.tol = r.get<double>("tol", 1e-9);
  c.step.safety = r.get<double>("cfl_safety", 0.9);
  c.step.adaptive = r.get<bool>("adaptive", true);
  c.dealias = parse_dealias(r.get<std::string>("dealias", "2/3"));
  if (r.has("record")) c.record_times = parse_times(r.raw("record"), c.t_start, c.t_end, r.where("record"));
  if (r.has("snapshots")) c.snapshot_times = parse_times(r.raw("snapshots"), c.t_start, c.t_end, r.where("snapshots"));
  c.edge_tol = r.get<double>("edge_tol", 1e-8);
  c.blowup = r.get<double>("blowup", 1e3);
  c.box_margin = r.get<double>("box_margin", 4.0);
  c.enforce_box = r.get<bool>("enforce_box", true);
  r.finish();
  c.validate();
  return c;
}

ScaledConfig parse_scaled_integrator(const json& j, const std::string& where) {
  ObjectReader r(j, where);
  ScaledConfig c;
  c.tau_end = r.get<double>("tau_end");
  c.step.dt = r.get<double>("dt", 1e-3);
  c.step.dt_min = r.get<double>("dt_min", 1e-12);
  c.step.dt_max = r.get<double>("dt_max", 1e300);
  c.step.tol = r.get<double>("tol", 1e-9);
  c.step.safety = r.get<double>("cfl_safety", 0.9);
  c.step.adaptive = r.get<bool>("adaptive", true);
  c.dealias = parse_dealias(r.get<std::string>("dealias", "2/3"));
  if (r.has("record")) c.record_times = parse_times(r.raw("record"), 0.0, c.tau_end, r.where("record"));
  if (r.has("snapshots")) c.snapshot_times = parse_times(r.raw("snapshots"), 0.0, c.tau_end, r.where("snapshots"));
  c.edge_tol = r.get<double>("edge_tol", 1e-8);
  c.blowup = r.get<double>("blowup", 1e3);
  r.finish();
  c.validate();
  return c;
}

ClassifyConfig parse_classify(const json& j) {
  ObjectReader r(j, "config");
  ClassifyConfig c;
  c.header = parse_header(r);
  c.spec = parse_spec(r.raw("spec"));
  r.finish();
  return c;
}

SpectrumConfig parse_spectrum(const json& j, const std::string& mode) {
  ObjectReader r(j, "config");
  SpectrumConfig c;
  c.header = parse_header(r);
  {
    ObjectReader f(r.raw("frame"), "frame");
    const int n = f.get<int>("n");
    const int d = f.get<int>("d");
    if (n < 1) throw ValidationError("frame.n: must be positive");
    if (d < 1 || d > 3) throw ValidationError("frame.d: must be 1, 2 or 3");
    c.frame = ScalingFrame::diffusive(n, d);
    if (f.has("beta")) c.frame.beta = parse_rational(f.raw("beta"), "frame.beta");
    f.finish();
  }
  if (mode == "eig") {
    c.j_max = r.get<int>("j_max", 6);
    if (c.j_max < 0) throw ValidationError("config.j_max: must be non-negative");
  } else if (mode == "profile") {
    c.grid = parse_grid(r.raw("grid"), c.frame.d);
    c.tolerance = r.get<double>("tolerance", 1e-8);
  } else if (mode == "kernel" || mode == "decay-fit") {
    c.tau = r.get<double>("tau", 1.0);
    c.z_min = r.get<double>("z_min", mode == "kernel" ? 0.0 : 0.0);
    c.z_max = r.get<double>("z_max");
    c.points = r.get<int>("points", mode == "kernel" ? 201 : 1600);
    if (!(c.tau > 0.0)) throw ValidationError("config.tau: must be positive");
    if (!(c.z_max > c.z_min)) throw ValidationError("config: need z_max > z_min");
    if (c.points < 2) throw ValidationError("config.points: need at least 2");
    if (mode == "decay-fit" && c.frame.d != 1) throw ValidationError("decay-fit is implemented for d = 1");
  } else {
    throw ValidationError("unknown spectrum mode '" + mode + "'");
  }
  r.finish();
  return c;
}

SimulateConfig parse_simulate(const json& j) {
  ObjectReader r(j, "config");
  SimulateConfig c;
  c.header = parse_header(r);
  c.spec = parse_spec(r.raw("spec"));
  c.grid = parse_grid(r.raw("grid"), c.spec.d);
  c.initial = parse_perturbation(r.raw("initial"));
  c.integrator = parse_integrator(r.raw("integrator"));
  r.finish();
  return c;
}

ScaledRunConfig parse_scaled(const json& j) {
  ObjectReader r(j, "config");
  ScaledRunConfig c;
  c.header = parse_header(r);
  c.spec = parse_spec(r.raw("spec"));
  c.frame = r.has("frame") ? parse_frame(r.raw("frame"), c.spec.n, c.spec.d) : ScalingFrame::diffusive(c.spec.n, c.spec.d);
  c.grid = parse_grid(r.raw("grid"), c.spec.d);
  c.initial = parse_perturbation(r.raw("initial"));
  c.integrator = parse_scaled_integrator(r.raw("integrator"));
  r.finish();
  return c;
}

AnalyzeConfig parse_analyze(const json& j) {
  ObjectReader r(j, "config");
  AnalyzeConfig c;
  parse_header(r);
  c.norm = r.get<std::string>("norm", "sup");
  c.reference = r.get<std::string>("reference", "auto");
  if (c.reference != "auto" && c.reference != "profile" && c.reference != "first_moment") {
    throw ValidationError("config.reference: expected auto, profile or first_moment");
  }
  c.axis = r.get<int>("axis", 0);
  if (r.has("window")) {
    auto w = r.get<std::vector<double>>("window");
    if (w.size() != 2 || !(w[1] > w[0])) throw ValidationError("config.window: expected [t_min, t_max]");
    c.window = std::pair{w[0], w[1]};
  }
  if (r.has("amplitude")) c.amplitude = r.get<double>("amplitude");
  c.fit_time = r.get<double>("fit_time", 1e3);
  if (r.has("xi_grid")) {
    ObjectReader g(r.raw("xi_grid"), "xi_grid");
    Grid grid{g.get<int>("d"), g.get<int>("N"), g.get<double>("L")};
    g.finish();
    grid.validate();
    c.xi_grid = grid;
  }
  c.noise_floor = r.get<double>("noise_floor", 1e-11);
  c.slope_tolerance = r.get<double>("slope_tolerance", 0.1);
  r.finish();
  return c;
}

json spec_json(const SpecConfig& s) {
  json j = {{"n", s.n}, {"d", s.d}};
  if (s.label == "cahn_hilliard" || s.label == "none") {
    j["nonlinearity"] = s.label;
    return j;
  }
  json cons = json::array();
  for (const auto& c : s.model.conservative) cons.push_back({{"coefficient", c.coefficient}, {"power", c.power}});
  json mono = json::array();
  for (const auto& t : s.model.monomials) {
    json fs = json::array();
    for (const auto& f : t.factors) fs.push_back({{"alpha", f.alpha.orders()}, {"power", f.power}});
    mono.push_back({{"coefficient", t.coefficient}, {"factors", fs}});
  }
  j["nonlinearity"] = {{"conservative", cons}, {"monomials", mono}};
  return j;
}

json frame_json(const ScalingFrame& f) { return {{"n", f.n}, {"d", f.d}, {"beta", to_string(f.beta)}}; }

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace chasym
