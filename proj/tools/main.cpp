#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "rsplit/verify.hpp"

using namespace rsplit;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json read_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw UsageError("config file '" + path + "' must hold an object");
    return j;
  } catch (const json::exception& e) {
    throw UsageError("config file '" + path + "': " + e.what());
  }
}

void apply_params(const json& j, ScenarioParams& p) {
  if (!j.contains("scenario")) return;
  const json& s = j.at("scenario");
  auto get = [&](const char* k, double& v) {
    if (s.contains(k)) v = s.at(k).get<double>();
  };
  get("omega", p.omega);
  get("L", p.L);
  get("c0", p.c0);
  get("Z0", p.Z0);
  get("Q", p.Q);
  get("R1", p.R1);
  get("R2", p.R2);
  get("R", p.R);
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw UsageError("cannot write '" + path + "'");
    }
  }
  std::ostream& operator()() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

struct Common {
  std::string config, out;
  std::uint64_t seed = 1;
  int points = 100;
};

// ---- verify -------------------------------------------------------------------------

struct VerifyArgs {
  Common c;
  std::vector<std::string> suites;
  double tol = 0;
  std::string format = "json";
  bool no_timing = false, serial = false;
};

int cmd_verify(const VerifyArgs& a, const CLI::App& sub) {
  VerifyConfig cfg;
  const json j = read_config(a.c.config);
  try {
    if (j.contains("suites")) cfg.suites = j.at("suites").get<std::vector<std::string>>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("points")) cfg.points = j.at("points").get<int>();
    if (j.contains("tol")) cfg.tol = j.at("tol").get<double>();
    if (j.contains("tolerances")) cfg.suite_tol = j.at("tolerances").get<std::map<std::string, double>>();
    apply_params(j, cfg.params);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  std::string out = j.value("out", std::string{});
  if (sub.count("--suite")) cfg.suites = a.suites;
  if (sub.count("--seed")) cfg.seed = a.c.seed;
  if (sub.count("--points")) cfg.points = a.c.points;
  if (sub.count("--tol")) cfg.tol = a.tol;
  if (sub.count("--out")) out = a.c.out;
  cfg.parallel = !a.serial;
  for (const auto& s : cfg.suites)
    if (!is_suite(s)) {
      std::string valid;
      for (const auto& n : suite_names()) valid += "\n  " + n;
      throw UsageError(fmt::format("unknown suite '{}'; valid suites:{}", s, valid));
    }
  if (cfg.points < 1) throw UsageError("--points must be at least 1");
  if (cfg.tol && !(*cfg.tol > 0)) throw UsageError("--tol must be positive");
  for (const auto& [k, v] : cfg.suite_tol)
    if (!is_suite(k) || !(v > 0)) throw UsageError(fmt::format("invalid tolerance entry '{}': {}", k, v));

  const Report r = run_verify(cfg);
  Output o(out);
  o() << (a.format == "text" ? r.to_text() : r.to_json(cfg, !a.no_timing));
  if (!out.empty()) std::cerr << (r.pass() ? "PASS" : "FAIL") << " (" << r.records.size() << " checks)\n";
  return r.pass() ? 0 : 1;
}

// ---- scenario -----------------------------------------------------------------------

struct ScenarioArgs {
  Common c;
  std::string name, order = "exact";
  ScenarioParams p;
  int rows = 41;
};

struct Verdicts {
  bool ok = true;
  void add(const std::string& what, double residual, double tol) {
    const bool pass = std::isfinite(residual) && residual <= tol;
    ok = ok && pass;
    std::cerr << fmt::format("{}  {:<40} {:.3e} (tol {:.0e})\n", pass ? "PASS" : "FAIL", what, residual, tol);
  }
};

template <Kind K>
double rel_at(const Field<K>& a, const Field<K>& b, const Point& p) {
  const auto x = a.value(p), y = b.value(p);
  double d = 0;
  for (int q = 0; q < x.size(); ++q) d = std::max(d, std::abs(x.c[q] - y.c[q]));
  const double s = max_abs(y);
  return s > 0 ? d / s : d;
}

int scenario_rotating_csv(const ScenarioArgs& a, std::ostream& out) {
  const Scenario sc = scenario_rotating(a.p);
  const FormField Om = sc.splitting().Omega();
  const FormField& want = sc.oracle.at("Omega");
  const double rmax = 0.95 * a.p.c0 / a.p.omega;
  Verdicts v;
  double worst = 0;
  out << "r,Omega_rphi_derived,Omega_rphi_oracle,abs_delta\n";
  for (int i = 0; i < a.rows; ++i) {
    const double r = rmax * (i + 1) / a.rows;
    const Point p{0.0, r, 0.0, 0.0};
    const double x = Om.value(p).at_mask(0b011), y = want.value(p).at_mask(0b011);
    worst = std::max(worst, std::abs(x - y) / std::max(std::abs(y), 1e-300));
    out << fmt::format("{:.6g},{:.17g},{:.17g},{:.3e}\n", r, x, y, std::abs(x - y));
  }
  v.add("curvature along the radial line (relative)", worst, 1e-11);
  const auto ps = sc.sample(a.c.points, a.c.seed * 1024);
  double n = 0, d = 0, e = 0;
  const Kinematics k = kinematics(sc.observer);
  for (const auto& p : ps) {
    n = std::max(n, rel_at(sc.observer.N(), sc.oracle.at("N"), p));
    d = std::max(d, rel_at(k.delta, sc.oracle.at("delta"), p));
    e = std::max(e, rel_at(k.eta, sc.oracle.at("eta"), p));
  }
  v.add("lapse at sampled points", n, 1e-11);
  v.add("acceleration at sampled points", d, 1e-11);
  v.add("vorticity at sampled points", e, 1e-11);
  return v.ok ? 0 : 1;
}

int scenario_schiff_csv(const ScenarioArgs& a, std::ostream& out) {
  const SchiffSolution sol = scenario_schiff_solution(a.p);
  const ReducedEm* f = a.order == "zeroth" ? &sol.zeroth : a.order == "first" ? &sol.first : &sol.exact;
  Verdicts v;
  // ray at 45 degrees from the axis in the meridian plane
  const double th = std::numbers::pi / 4;
  out << "s,r,z,e_r,e_z,d_r,d_z,b_r,b_z,h_r,h_z\n";
  for (int i = 0; i < a.rows; ++i) {
    const double s = a.p.R * (i + 0.5) / a.rows;
    const Point y{0.0, s * std::sin(th), s * std::cos(th), 0.0};
    if (!sol.smooth_at(y)) continue;
    const auto e = f->e.value(y), d = f->d.value(y), b = f->b.value(y), h = f->h.value(y);
    out << fmt::format("{:.6g},{:.6g},{:.6g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g}\n", s, y[1],
                       y[2], e.c[0], e.c[1], d.c[0], d.c[1], b.c[0], b.c[1], h.c[0], h.c[1]);
  }
  const auto ys = sol.sample(a.c.points, a.c.seed * 1024);
  double outside = 0, inside_b = 0;
  int n_out = 0;
  for (const auto& y : ys) {
    const double s = std::hypot(y[1], y[2]);
    double m = 0;
    for (const FormField* g : {&f->e, &f->d, &f->b, &f->h}) m = std::max(m, max_abs(g->value(y)));
    if (s > a.p.R2) {
      outside = std::max(outside, m);
      ++n_out;
    } else if (s > a.p.R1) {
      inside_b = std::max(inside_b, max_abs(f->b.value(y)));
    }
  }
  if (n_out == 0) outside = std::numeric_limits<double>::infinity();
  v.add(fmt::format("fields outside the outer sphere ({} pts)", n_out), outside, 0.0);
  std::cerr << fmt::format("      max |b| between the spheres: {:.3e}\n", inside_b);
  if (a.order == "exact") {
    double r = 0;
    for (const auto& res : reduced_maxwell_residuals(sol.axial, sol.exact))
      for (const auto& y : ys) r = std::max(r, max_abs(res.value.value(y)));
    v.add("reduced Maxwell equations", r, 1e-9);
    const auto [d, b] = reduced_constitutive(sol.axial, sol.exact, a.p.Z0);
    double c = 0;
    for (const auto& y : ys)
      c = std::max({c, max_abs(d.value(y) - sol.exact.d.value(y)), max_abs(b.value(y) - sol.exact.b.value(y))});
    v.add("reduced constitutive relations", c, 1e-10);
  }
  return v.ok ? 0 : 1;
}

int scenario_natural_csv(const ScenarioArgs& a, std::ostream& out) {
  const Scenario sc = scenario_schiff_natural(a.p);
  const Observer& o = sc.observer;
  const SplitEmFields f = split_em(sc.splitting(), *sc.fields);
  const SchiffStarFields st = schiff_star_fields(o, f, sc.params.Z0);
  const FormField jj = f.j + st.j_S;
  const double xmax = 0.95 * a.p.c0 / a.p.omega;
  Verdicts v;
  out << "x,N,N_oracle,xi,xi_oracle,nu_y,rho_S,abs_j_plus_jS\n";
  for (int i = 0; i < a.rows; ++i) {
    const double x = xmax * (i + 1) / a.rows;
    const Point p{0.0, x, 0.0, 0.1};
    out << fmt::format("{:.6g},{:.17g},{:.17g},{:.17g},{:.17g},{:.10g},{:.3e},{:.3e}\n", x, o.N().value(p).c[0],
                       sc.oracle.at("N").value(p).c[0], o.xi().value(p).c[0], sc.oracle.at("xi").value(p).c[0],
                       o.shift_form().value(p).at_mask(0b010), st.rho_S.value(p).c[0], max_abs(jj.value(p)));
  }
  const auto ps = sc.sample(a.c.points, a.c.seed * 1024);
  double rs = 0, js = 0, xi = 0;
  for (const auto& p : ps) {
    rs = std::max(rs, max_abs(st.rho_S.value(p)));
    js = std::max(js, max_abs(jj.value(p)));
    xi = std::max(xi, rel_at(o.xi(), sc.oracle.at("xi"), p));
  }
  v.add("Schiff charge density", rs, 1e-9);
  v.add("convection plus Schiff current", js, 1e-9);
  v.add("lapse ratio against 1/gamma", xi, 1e-12);
  return v.ok ? 0 : 1;
}

int scenario_minkowski_csv(const ScenarioArgs& a, std::ostream& out) {
  const Scenario sc = scenario_minkowski_rest(a.p.L);
  const auto ps = sc.sample(a.c.points, a.c.seed * 1024);
  const ClassFlags cf = classify_connection(sc.splitting(), ps);
  const MetricFlags mf = classify_metric(sc.observer, ps);
  out << "flag,value\n";
  for (const auto& [k, b] : std::vector<std::pair<const char*, bool>>{{"flat", cf.flat},
                                                                       {"principal", cf.principal},
                                                                       {"holonomic", cf.holonomic},
                                                                       {"natural", cf.natural},
                                                                       {"regular", mf.regular},
                                                                       {"metric", mf.metric},
                                                                       {"standard", mf.standard},
                                                                       {"stationary", mf.stationary}})
    out << k << ',' << (b ? "true" : "false") << '\n';
  Verdicts v;
  const bool all = cf.flat && cf.principal && cf.natural && mf.regular && mf.metric && mf.standard && mf.stationary;
  v.add("all classification flags set", all ? 0.0 : 1.0, 0.5);
  const Kinematics k = kinematics(sc.observer);
  double m = 0;
  for (const auto& p : ps) m = std::max({m, max_abs(k.delta.value(p)), max_abs(k.eta.value(p))});
  v.add("inertial observer", m, 1e-14);
  return v.ok ? 0 : 1;
}

int cmd_scenario(ScenarioArgs a, const CLI::App& sub) {
  const json j = read_config(a.c.config);
  ScenarioParams p;
  try {
    apply_params(j, p);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  for (const auto& [flag, field] : std::vector<std::pair<const char*, double ScenarioParams::*>>{
           {"--omega", &ScenarioParams::omega}, {"--L", &ScenarioParams::L},   {"--c0", &ScenarioParams::c0},
           {"--Z0", &ScenarioParams::Z0},       {"--Q", &ScenarioParams::Q},   {"--R1", &ScenarioParams::R1},
           {"--R2", &ScenarioParams::R2},       {"--R", &ScenarioParams::R}})
    if (sub.count(flag)) p.*field = a.p.*field;
  a.p = p;
  if (!sub.count("--seed") && j.contains("seed")) a.c.seed = j.at("seed").get<std::uint64_t>();
  if (!sub.count("--points") && j.contains("points")) a.c.points = j.at("points").get<int>();
  if (a.c.points < 1 || a.rows < 1) throw UsageError("--points and --rows must be at least 1");
  if (a.name == "schiff" || a.name == "schiff_natural")
    if (!(a.p.omega * a.p.R < a.p.c0))
      throw UsageError(fmt::format("invalid parameters: omega*R = {} must be below c0 = {}", a.p.omega * a.p.R, a.p.c0));
  Output o(sub.count("--out") ? a.c.out : j.value("out", std::string{}));
  try {
    if (a.name == "rotating") return scenario_rotating_csv(a, o());
    if (a.name == "schiff") return scenario_schiff_csv(a, o());
    if (a.name == "schiff_natural") return scenario_natural_csv(a, o());
    return scenario_minkowski_csv(a, o());
  } catch (const ScenarioError& e) {
    throw UsageError(std::string("invalid parameters: ") + e.what());
  }
}

// ---- dims ---------------------------------------------------------------------------

int cmd_dims(std::uint64_t seed) {
  bool ok = true;
  for (const DimsRecord& r : dims_audit(seed)) {
    std::string d = r.terms.empty() ? "-" : r.terms.front().str();
    if (d.empty()) d = "1";
    std::cout << fmt::format("{:<44} {:<24} {}\n", r.id, d, r.pass ? "PASS" : "FAIL");
    ok = ok && r.pass;
  }
  const bool inj = dims_injection_detected();
  std::cout << fmt::format("{:<44} {:<24} {}\n", "injected-mismatch-detected", "-", inj ? "PASS" : "FAIL");
  return ok && inj ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relativistic splitting structures: identity and scenario verification"};
  app.require_subcommand(1);

  VerifyArgs va;
  CLI::App* verify = app.add_subcommand("verify", "Run identity suites and print a structured report");
  verify->add_option("--suite", va.suites, "Suite to run (repeatable; default all)");
  verify->add_option("--seed", va.c.seed, "Random seed");
  verify->add_option("--points", va.c.points, "Sample points per check");
  verify->add_option("--tol", va.tol, "Override every tolerance");
  verify->add_option("--out", va.c.out, "Write the report to this file");
  verify->add_option("--config", va.c.config, "JSON config file; flags override its values");
  verify->add_option("--format", va.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  verify->add_flag("--no-timing", va.no_timing, "Omit wall-clock fields from the report");
  verify->add_flag("--serial", va.serial, "Run suites one after another");

  ScenarioArgs sa;
  CLI::App* scen = app.add_subcommand("scenario", "Derived-vs-closed-form tables for a scenario");
  scen->add_option("name", sa.name, "rotating | schiff | schiff_natural | minkowski")
      ->required()
      ->check(CLI::IsMember({"rotating", "schiff", "schiff_natural", "minkowski"}));
  scen->add_option("--omega", sa.p.omega);
  scen->add_option("--L", sa.p.L);
  scen->add_option("--c0", sa.p.c0);
  scen->add_option("--Z0", sa.p.Z0);
  scen->add_option("--Q", sa.p.Q);
  scen->add_option("--R1", sa.p.R1);
  scen->add_option("--R2", sa.p.R2);
  scen->add_option("--R", sa.p.R);
  scen->add_option("--order", sa.order, "Perturbation order of the sphere solution")
      ->check(CLI::IsMember({"zeroth", "first", "exact"}));
  scen->add_option("--rows", sa.rows, "Rows of the profile table");
  scen->add_option("--seed", sa.c.seed);
  scen->add_option("--points", sa.c.points, "Sample points for the summary checks");
  scen->add_option("--out", sa.c.out, "Write the table to this file");
  scen->add_option("--config", sa.c.config, "JSON config file with a \"scenario\" object");

  std::uint64_t dims_seed = 1;
  CLI::App* dims = app.add_subcommand("dims", "Dimensional audit");
  CLI::App* dims_check = dims->add_subcommand("check", "One line per audited equation");
  dims_check->add_option("--seed", dims_seed);
  dims->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    if (*verify) return cmd_verify(va, *verify);
    if (*scen) return cmd_scenario(sa, *scen);
    if (*dims_check) return cmd_dims(dims_seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
