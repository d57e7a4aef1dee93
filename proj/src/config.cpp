#include "galerkin/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "galerkin/exponents.hpp"

namespace galerkin {

using nlohmann::json;

namespace {

std::string escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~')
      out += "~0";
    else if (c == '/')
      out += "~1";
    else
      out += c;
  }
  return out;
}

std::string type_name(const json& j) { return j.type_name(); }

// Object reader that remembers which keys were consumed so that leftovers
// can be reported as unknown.
class Reader {
 public:
  Reader(const json& j, std::string ptr) : j_(j), ptr_(std::move(ptr)) {
    if (!j_.is_object()) throw SchemaError(where(), "expected an object, got " + type_name(j_));
  }

  std::string where() const { return ptr_.empty() ? "/" : ptr_; }
  std::string at(const std::string& key) const { return ptr_ + "/" + escape(key); }
  bool has(const std::string& key) const { return j_.contains(key); }

  const json& get(const std::string& key) {
    if (!j_.contains(key)) throw SchemaError(at(key), "missing required key");
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number()) throw SchemaError(at(key), "expected a number, got " + type_name(v));
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ValueError(at(key), "non-finite number");
    return x;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  long integer(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number_integer()) throw SchemaError(at(key), "expected an integer, got " + type_name(v));
    return v.get<long>();
  }
  long integer(const std::string& key, long fallback) { return has(key) ? integer(key) : fallback; }

  std::string string(const std::string& key) {
    const json& v = get(key);
    if (!v.is_string()) throw SchemaError(at(key), "expected a string, got " + type_name(v));
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : fallback;
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = get(key);
    if (!v.is_boolean()) throw SchemaError(at(key), "expected a boolean, got " + type_name(v));
    return v.get<bool>();
  }

  /// "11/5", "2.5" or a JSON number.
  Rational rational(const std::string& key) {
    const json& v = get(key);
    if (v.is_string()) {
      try {
        return parse_rational(v.get<std::string>());
      } catch (const ConfigError& e) {
        throw SchemaError(at(key), e.what());
      }
    }
    if (!v.is_number()) throw SchemaError(at(key), "expected a rational string or number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ValueError(at(key), "non-finite number");
    return rational_from_double(x);
  }

  std::vector<double> numbers(const std::string& key) {
    const json& v = get(key);
    if (!v.is_array()) throw SchemaError(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string p = at(key) + "/" + std::to_string(i);
      if (!v[i].is_number()) throw SchemaError(p, "expected a number, got " + type_name(v[i]));
      const double x = v[i].get<double>();
      if (!std::isfinite(x)) throw ValueError(p, "non-finite number");
      out.push_back(x);
    }
    return out;
  }

  Reader child(const std::string& key) { return Reader(get(key), at(key)); }

  void finish() const {
    for (const auto& item : j_.items())
      if (!seen_.count(item.key())) throw SchemaError(at(item.key()), "unknown key");
  }

 private:
  const json& j_;
  std::string ptr_;
  std::set<std::string> seen_;
};

template <class E>
E pick(const std::string& ptr, const std::string& value,
       std::initializer_list<std::pair<const char*, E>> options) {
  std::string names;
  for (const auto& [name, e] : options) {
    if (value == name) return e;
    names += names.empty() ? name : std::string(", ") + name;
  }
  throw SchemaError(ptr, "unsupported value '" + value + "' (expected one of " + names + ")");
}

TimeProfile read_profile(const json& j, const std::string& ptr) {
  if (j.is_number()) {
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw ValueError(ptr, "non-finite number");
    return TimeProfile::constant_of(x);
  }
  Reader r(j, ptr);
  TimeProfile p;
  using K = TimeProfile::Kind;
  p.kind = pick<K>(r.at("kind"), r.string("kind", "constant"),
                   {{"constant", K::constant}, {"exp", K::exp}, {"sine", K::sine}, {"step", K::step}});
  p.value = r.number("value", 0.0);
  p.amplitude = r.number("amplitude", 0.0);
  p.rate = r.number("rate", 0.0);
  p.omega = r.number("omega", 0.0);
  p.t0 = r.number("t0", 0.0);
  r.finish();
  return p;
}

TimeProfile read_profile(Reader& r, const std::string& key, TimeProfile fallback = {}) {
  if (!r.has(key)) return fallback;
  return read_profile(r.get(key), r.at(key));
}

json write_profile(const TimeProfile& p) {
  using K = TimeProfile::Kind;
  if (p.kind == K::constant) return p.value;
  json j{{"kind", to_string(p.kind)}};
  switch (p.kind) {
    case K::exp:
      j["amplitude"] = p.amplitude;
      j["rate"] = p.rate;
      break;
    case K::sine:
      j["value"] = p.value;
      j["amplitude"] = p.amplitude;
      j["omega"] = p.omega;
      break;
    case K::step:
      j["value"] = p.value;
      j["amplitude"] = p.amplitude;
      j["t0"] = p.t0;
      break;
    case K::constant:
      break;
  }
  return j;
}

void require_nonnegative(const TimeProfile& p, double T, const std::string& ptr) {
  if (p.min_on(T) < 0.0) throw ValueError(ptr, "profile must be nonnegative on [0, T]");
}

void add_warnings(RunConfig& rc) {
  const auto& pr = rc.problem;
  const bool torus = pr.space.kind == SpaceKind::torus_divfree;
  const auto rep = exponent_report(pr.space.dim, pr.op.p);
  if (!torus && !rep.scalar_admissible)
    rc.warnings.push_back("p = " + to_string(pr.op.p) + " is not above 2d/(d+2)");
  if (torus && pr.op.convection && !rep.fluid_admissible)
    rc.warnings.push_back("p = " + to_string(pr.op.p) + " is below 11/5");
  if (pr.op.g) {
    const Rational r = pr.op.g->growth_exponent();
    if (r > rep.r0)
      rc.warnings.push_back("Nemytskii growth r = " + to_string(r) + " exceeds r0 = " + to_string(rep.r0));
  }
}

}  // namespace

std::vector<double> RunConfig::check_times() const {
  if (!check.t_samples.empty()) return check.t_samples;
  return {0.0, 0.5 * problem.T, problem.T};
}

RunConfig parse_config(const json& doc) {
  RunConfig rc;
  ProblemConfig& pr = rc.problem;
  Reader top(doc, "");
  pr.name = top.string("name", "");

  {
    Reader s = top.child("space");
    pr.space.kind = pick<SpaceKind>(s.at("kind"), s.string("kind"),
                                    {{"dirichlet-sine", SpaceKind::dirichlet_sine},
                                     {"torus-divfree", SpaceKind::torus_divfree}});
    const long d = s.integer("d");
    if (pr.space.kind == SpaceKind::dirichlet_sine && d != 1 && d != 2)
      throw SchemaError(s.at("d"), "dirichlet-sine supports d in {1, 2}, got " + std::to_string(d));
    if (pr.space.kind == SpaceKind::torus_divfree && d != 2)
      throw SchemaError(s.at("d"), "torus-divfree supports d = 2 only, got " + std::to_string(d));
    pr.space.dim = static_cast<int>(d);
    pr.space.smoothness = s.number("smoothness", 2.0);
    if (pr.space.smoothness < 0.0) throw ValueError(s.at("smoothness"), "must be >= 0");
    const long qo = s.integer("quad_order", 0);
    if (qo < 0) throw ValueError(s.at("quad_order"), "must be >= 0 (0 selects the default)");
    pr.space.quad_order = static_cast<int>(qo);
    s.finish();
  }

  {
    Reader t = top.child("time");
    pr.T = t.number("T");
    if (!(pr.T > 0.0)) throw ValueError(t.at("T"), "T must be > 0");
    const long n = t.integer("nsteps");
    if (n < 0) throw ValueError(t.at("nsteps"), "nsteps must be >= 0");
    pr.nsteps = static_cast<int>(n);
    t.finish();
  }

  {
    Reader o = top.child("operator");
    pr.op.p = o.rational("p");
    if (pr.op.p <= 1) throw ValueError(o.at("p"), "p must be > 1, got " + to_string(pr.op.p));
    pr.op.delta = o.number("delta", 0.0);
    if (pr.op.delta < 0.0) throw ValueError(o.at("delta"), "delta must be >= 0");
    pr.op.convection = o.boolean("convection", false);
    if (pr.op.convection && pr.space.kind != SpaceKind::torus_divfree)
      throw ValueError(o.at("convection"), "convection needs a torus-divfree space");
    if (o.has("g") && !o.get("g").is_null()) {
      if (pr.space.kind != SpaceKind::dirichlet_sine)
        throw ValueError(o.at("g"), "the Nemytskii term needs a dirichlet-sine space");
      Reader g = o.child("g");
      NemytskiiSpec spec;
      using K = NemytskiiSpec::Kind;
      spec.kind = pick<K>(g.at("kind"), g.string("kind"),
                          {{"power", K::power}, {"saturating", K::saturating}, {"sum", K::sum}});
      spec.a = g.number("a", 0.0);
      spec.r = g.has("r") ? g.rational("r") : Rational(2);
      if (spec.r < 1) throw ValueError(g.at("r"), "r must be >= 1");
      spec.c = g.number("c", 0.0);
      spec.c7 = read_profile(g, "c7");
      g.finish();
      pr.op.g = spec;
    }
    if (o.has("constants")) {
      Reader c = o.child("constants");
      auto& dc = pr.op.constants;
      dc.c1 = c.number("c1", 1.0);
      if (!(dc.c1 > 0.0)) throw ValueError(c.at("c1"), "c1 must be > 0");
      dc.C2 = read_profile(c, "C2");
      require_nonnegative(dc.C2, pr.T, c.at("C2"));
      dc.c3 = c.number("c3", 1.0);
      if (!(dc.c3 > 0.0)) throw ValueError(c.at("c3"), "c3 must be > 0");
      dc.c4 = c.number("c4", 0.0);
      if (dc.c4 < 0.0) throw ValueError(c.at("c4"), "c4 must be >= 0");
      dc.q = c.number("q", 0.0);
      if (dc.q < 0.0) throw ValueError(c.at("q"), "q must be >= 0");
      dc.C5 = read_profile(c, "C5");
      require_nonnegative(dc.C5, pr.T, c.at("C5"));
      c.finish();
    }
    o.finish();
  }

  if (top.has("forcing")) {
    Reader f = top.child("forcing");
    using K = ForcingSpec::Kind;
    pr.f.kind = pick<K>(f.at("kind"), f.string("kind"),
                        {{"zero", K::zero}, {"separable", K::separable}, {"mode", K::mode}});
    pr.f.time = read_profile(f, "time", TimeProfile::constant_of(1.0));
    const std::string def_shape = pr.space.kind == SpaceKind::dirichlet_sine ? "bump" : "taylor-green";
    pr.f.shape = f.string("shape", def_shape);
    if (pr.f.shape != "bump" && pr.f.shape != "taylor-green")
      throw SchemaError(f.at("shape"), "unsupported shape '" + pr.f.shape + "'");
    if (pr.f.shape != def_shape)
      throw ValueError(f.at("shape"), "shape '" + pr.f.shape + "' does not live on this space");
    const long m = f.integer("mode", 1);
    if (m < 1) throw ValueError(f.at("mode"), "mode is 1-based");
    pr.f.mode = static_cast<std::size_t>(m);
    f.finish();
  } else {
    pr.f.shape = pr.space.kind == SpaceKind::dirichlet_sine ? "bump" : "taylor-green";
  }

  {
    Reader u = top.child("u0");
    using K = InitialSpec::Kind;
    pr.u0.kind = pick<K>(u.at("kind"), u.string("kind"),
                         {{"zero", K::zero},
                          {"mode", K::mode},
                          {"coeffs", K::coeffs},
                          {"parabola", K::parabola},
                          {"bump", K::bump},
                          {"taylor-green", K::taylor_green}});
    const long m = u.integer("mode", 1);
    if (m < 1) throw ValueError(u.at("mode"), "mode is 1-based");
    pr.u0.mode = static_cast<std::size_t>(m);
    pr.u0.amplitude = u.number("amplitude", 1.0);
    if (u.has("coeffs")) pr.u0.coeffs = u.numbers("coeffs");
    const bool sine = pr.space.kind == SpaceKind::dirichlet_sine;
    if ((pr.u0.kind == K::parabola || pr.u0.kind == K::bump) && !sine)
      throw ValueError(u.at("kind"), "profile needs a dirichlet-sine space");
    if (pr.u0.kind == K::taylor_green && sine)
      throw ValueError(u.at("kind"), "profile needs a torus-divfree space");
    u.finish();
  }

  if (top.has("newton")) {
    Reader n = top.child("newton");
    pr.newton_tol = n.number("tol", pr.newton_tol);
    if (!(pr.newton_tol > 0.0)) throw ValueError(n.at("tol"), "tol must be > 0");
    const long it = n.integer("maxit", pr.newton_maxit);
    if (it < 1) throw ValueError(n.at("maxit"), "maxit must be >= 1");
    pr.newton_maxit = static_cast<int>(it);
    n.finish();
  }

  if (top.has("check")) {
    Reader c = top.child("check");
    auto& cs = rc.check;
    const long lvl = c.integer("level", cs.level);
    if (lvl < 1) throw ValueError(c.at("level"), "level must be >= 1");
    cs.level = static_cast<int>(lvl);
    if (c.has("t_samples")) {
      cs.t_samples = c.numbers("t_samples");
      for (double t : cs.t_samples)
        if (t < 0.0 || t > pr.T) throw ValueError(c.at("t_samples"), "times must lie in [0, T]");
    }
    const long fs = c.integer("field_samples", static_cast<long>(cs.field_samples));
    const long ps = c.integer("pair_samples", static_cast<long>(cs.pair_samples));
    if (fs < 1) throw ValueError(c.at("field_samples"), "must be >= 1");
    if (ps < 1) throw ValueError(c.at("pair_samples"), "must be >= 1");
    cs.field_samples = static_cast<std::size_t>(fs);
    cs.pair_samples = static_cast<std::size_t>(ps);
    cs.tolerance = c.number("tolerance", cs.tolerance);
    if (!(cs.tolerance >= 0.0)) throw ValueError(c.at("tolerance"), "must be >= 0");
    cs.fit = c.boolean("fit", cs.fit);
    c.finish();
  }
  top.finish();
  add_warnings(rc);
  return rc;
}

RunConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

json to_json(const RunConfig& rc) {
  const auto& pr = rc.problem;
  json j;
  j["name"] = pr.name;
  j["space"] = {{"kind", to_string(pr.space.kind)},
                {"d", pr.space.dim},
                {"smoothness", pr.space.smoothness},
                {"quad_order", pr.space.quad_order}};
  j["time"] = {{"T", pr.T}, {"nsteps", pr.nsteps}};
  json op{{"p", to_string(pr.op.p)}, {"delta", pr.op.delta}, {"convection", pr.op.convection}};
  if (pr.op.g) {
    const auto& g = *pr.op.g;
    op["g"] = {{"kind", to_string(g.kind)},
               {"a", g.a},
               {"r", to_string(g.r)},
               {"c", g.c},
               {"c7", write_profile(g.c7)}};
  } else {
    op["g"] = nullptr;
  }
  const auto& c = pr.op.constants;
  op["constants"] = {{"c1", c.c1}, {"C2", write_profile(c.C2)}, {"c3", c.c3},
                     {"c4", c.c4}, {"q", c.q},                  {"C5", write_profile(c.C5)}};
  j["operator"] = op;
  j["forcing"] = {{"kind", to_string(pr.f.kind)},
                  {"time", write_profile(pr.f.time)},
                  {"shape", pr.f.shape},
                  {"mode", pr.f.mode}};
  j["u0"] = {{"kind", to_string(pr.u0.kind)},
             {"mode", pr.u0.mode},
             {"amplitude", pr.u0.amplitude},
             {"coeffs", pr.u0.coeffs}};
  j["newton"] = {{"tol", pr.newton_tol}, {"maxit", pr.newton_maxit}};
  const auto& cs = rc.check;
  j["check"] = {{"level", cs.level},
                {"t_samples", cs.t_samples},
                {"field_samples", cs.field_samples},
                {"pair_samples", cs.pair_samples},
                {"tolerance", cs.tolerance},
                {"fit", cs.fit}};
  return j;
}

std::string serialize_config(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

std::string config_digest(const RunConfig& config) {
  const std::string canon = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canon) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> builtin_names() { return {"heat", "scalar", "fluid"}; }

RunConfig builtin_config(const std::string& name) {
  RunConfig rc;
  auto& pr = rc.problem;
  pr.name = name;
  if (name == "heat") {
    pr.space = {SpaceKind::dirichlet_sine, 1};
    pr.op.p = 2;
    pr.f.shape = "bump";
    pr.u0.kind = InitialSpec::Kind::mode;
    pr.T = 0.1;
    pr.nsteps = 10;
  } else if (name == "scalar") {
    // p-Laplace plus g = s^3 on the unit square
    pr.space = {SpaceKind::dirichlet_sine, 2};
    pr.op.p = 3;
    NemytskiiSpec g;
    g.a = 1.0;
    g.r = 4;
    pr.op.g = g;
    pr.op.constants.c4 = 4.0;
    pr.op.constants.q = 1.0;
    pr.f.kind = ForcingSpec::Kind::separable;
    pr.f.shape = "bump";
    pr.f.time = TimeProfile::constant_of(5.0);
    pr.u0.kind = InitialSpec::Kind::parabola;
    pr.u0.amplitude = 16.0;
    pr.T = 0.1;
    pr.nsteps = 20;
  } else if (name == "fluid") {
    // p-Laplace plus divergence-free convection on the torus
    pr.space = {SpaceKind::torus_divfree, 2};
    pr.op.p = Rational(5, 2);
    pr.op.convection = true;
    pr.op.constants.c4 = 1.0;
    pr.op.constants.q = 0.5;
    pr.f.kind = ForcingSpec::Kind::separable;
    pr.f.shape = "taylor-green";
    pr.f.time = TimeProfile::constant_of(1.0);
    pr.u0.kind = InitialSpec::Kind::taylor_green;
    pr.T = 0.1;
    pr.nsteps = 20;
  } else {
    throw ConfigError("unknown built-in problem '" + name + "'");
  }
  add_warnings(rc);
  return rc;
}

}  // namespace galerkin
