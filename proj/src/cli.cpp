#include "rsband/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "rsband/braid.hpp"
#include "rsband/design.hpp"
#include "rsband/error.hpp"
#include "rsband/io.hpp"
#include "rsband/obc.hpp"
#include "rsband/riemann.hpp"

namespace fs = std::filesystem;

namespace rsband {

namespace {

constexpr std::array<std::pair<Command, const char*>, 9> kCommands{{
    {Command::branch_points, "branch-points"},
    {Command::monodromy, "monodromy"},
    {Command::obc, "obc"},
    {Command::braid, "braid"},
    {Command::winding, "winding"},
    {Command::design, "design"},
    {Command::realize, "realize"},
    {Command::validate, "validate"},
    {Command::report, "report"},
}};

struct Check {
  std::string name;
  bool passed;
  bool hard;  // soft checks only fail the run under --strict
};

struct Session {
  const RunConfig& cfg;
  Json results = Json::object();
  std::vector<Check> checks;
  std::map<std::string, std::string> files;  // name -> content, written at the end

  explicit Session(const RunConfig& c) : cfg(c) {}

  void check(std::string name, bool passed, bool hard = true) { checks.push_back({std::move(name), passed, hard}); }
};

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw model_error("OutputNotWritable", "cannot write " + tmp.string());
    out << content;
    if (!out) throw model_error("OutputNotWritable", "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

ParsedModel require_model(const RunConfig& cfg) {
  if (cfg.model_path.empty()) throw model_error("MissingInput", "--model is required for this command");
  return load_model(cfg.model_path);
}

Var parse_plane(const std::string& s) {
  if (s == "omega" || s == "w") return Var::omega;
  if (s == "z") return Var::z;
  throw model_error("ModelInvalid", "plane must be omega or z");
}

const char* kind_name(PointKind k) { return k == PointKind::branch ? "branch" : "pole"; }

Json points_json(const std::vector<BranchPoint>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) {
    Json e = to_json(p.location);
    e["kind"] = kind_name(p.kind);
    out.push_back(e);
  }
  return out;
}

Json perm_json(const Permutation& p) {
  return Json{{"one_line", p.one_line()}, {"cycles", p.cycle_notation()}, {"cycle_type", p.cycle_type()}};
}

// A base point in the requested plane that is not close to any special point.
Complex default_base(const BiPoly& f, Var plane) {
  const auto pts = special_points(f, plane);
  double spread = 1.0;
  for (const auto& p : pts) spread = std::max(spread, std::abs(p.location));
  for (int k = 0; k < 64; ++k) {
    const Complex c = std::polar(0.05 * spread * (1 + k % 8), 0.7 + 0.9 * k);
    const bool clear = std::all_of(pts.begin(), pts.end(), [&](const BranchPoint& p) {
      return std::abs(p.location - c) > 0.02 * spread;
    });
    if (clear) return c;
  }
  return Complex(0.31, 0.17) * spread;
}

Json monodromy_section(Session& s, const BiPoly& f, Var plane, Complex base) {
  const MonodromyRep rep = monodromy(f, base, plane);
  const auto cons = check_consistency(rep);
  const bool connected = check_connectedness(rep);
  Json entries = Json::array();
  for (const auto& e : rep.entries) {
    Json j{{"label", e.label}, {"location", to_json(e.point.location)}, {"kind", kind_name(e.point.kind)}};
    j["permutation"] = perm_json(e.perm);
    entries.push_back(j);
  }
  Json out{{"plane", to_string(plane)},
           {"requested_base", to_json(rep.requested_base)},
           {"base", to_json(rep.base)},
           {"fiber", to_json(rep.fiber)},
           {"entries", entries},
           {"infinity", perm_json(rep.infinity_perm)},
           {"consistent", cons.consistent},
           {"connected", connected}};
  const std::string tag = std::string("monodromy_") + to_string(plane);
  s.check(tag + "_consistent", cons.consistent);
  s.check(tag + "_connected", connected);
  s.check(tag + "_base_unperturbed", rep.base == rep.requested_base, false);
  if (cons.consistent && connected) {
    const HurwitzReport h = riemann_hurwitz(rep);
    out["degree"] = h.degree;
    out["simple_branch_count"] = h.simple_branch_count;
    out["genus"] = h.genus;
  }
  return out;
}

Json branch_points_section(const BiPoly& f) {
  Json out;
  for (Var v : {Var::omega, Var::z}) {
    out[to_string(v)] = Json{{"branch_points", points_json(branch_points(f, v))}, {"poles", points_json(poles(f, v))}};
  }
  return out;
}

void cmd_branch_points(Session& s) {
  const auto m = require_model(s.cfg);
  s.results["model"] = Json{{"r", m.f.degree(Var::omega)}, {"u", m.f.degree(Var::z)}};
  s.results["branch_points"] = branch_points_section(m.f);
  s.files["branch_points.json"] = s.results["branch_points"].dump(2) + "\n";
}

void cmd_monodromy(Session& s) {
  const auto m = require_model(s.cfg);
  const Var plane = parse_plane(s.cfg.plane);
  const Json j = monodromy_section(s, m.f, plane, s.cfg.base);
  s.results["monodromy"] = j;
  s.files["monodromy.json"] = j.dump(2) + "\n";
}

std::string arcs_csv(const std::vector<SpectralArc>& arcs) {
  std::ostringstream os;
  os << "arc_id,re_omega,im_omega,mu\n";
  for (std::size_t a = 0; a < arcs.size(); ++a)
    for (const auto& w : arcs[a].samples) os << a << ',' << fmt(w.real()) << ',' << fmt(w.imag()) << ',' << arcs[a].mu << '\n';
  return os.str();
}

Json obc_section(Session& s, const ParsedModel& m) {
  const GbzProblem prob{m.f, s.cfg.mu};
  const auto arcs = obc_arcs(prob, s.cfg.theta_grid);
  const auto bps = obc_branch_points(prob);

  Json arcs_json = Json::array();
  bool all_branch = true;
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    Json ends = Json::array();
    for (const auto& e : arcs[a].ends) {
      const char* kind = e.kind == EndpointKind::branch_point ? "branch_point"
                         : e.kind == EndpointKind::junction   ? "junction"
                                                              : "open";
      Json j{{"kind", kind}, {"location", to_json(e.location)}};
      if (e.kind == EndpointKind::branch_point) j["branch_index"] = e.branch_index;
      if (e.kind == EndpointKind::open) all_branch = false;
      ends.push_back(j);
    }
    arcs_json.push_back(Json{{"id", a}, {"samples", arcs[a].samples.size()}, {"endpoints", ends}});
  }
  s.check("obc_arcs_nonempty", !arcs.empty(), false);
  s.check("obc_no_open_endpoints", all_branch, false);

  Json out{{"mu", s.cfg.mu}, {"theta_grid", s.cfg.theta_grid}, {"branch_points", points_json(bps)}, {"arcs", arcs_json}};

  // Cut consistency for every arc whose two ends are both branch points.
  try {
    const MonodromyRep rep = monodromy(m.f, s.cfg.base, Var::omega);
    double scale = 1.0;
    for (const auto& b : bps) scale = std::max(scale, std::abs(b.location));
    Json verdicts = Json::array();
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      const auto& e = arcs[a].ends;
      if (e[0].kind != EndpointKind::branch_point || e[1].kind != EndpointKind::branch_point) continue;
      const int i = rep.find(e[0].location, 1e-6 * scale);
      const int j = rep.find(e[1].location, 1e-6 * scale);
      if (i < 0 || j < 0) continue;
      const bool ok = cut_consistency(rep, {{i, j}}).front();
      verdicts.push_back(Json{{"arc", a}, {"labels", {rep.entries[i].label, rep.entries[j].label}}, {"identity", ok}});
      s.check("cut_consistency_arc_" + std::to_string(a), ok);
    }
    out["cut_consistency"] = verdicts;
  } catch (const Error& e) {
    out["cut_consistency"] = Json{{"unavailable", e.name()}};
    s.check("cut_consistency_available", false, false);
  }

  if (m.hamiltonian) {
    const ObcValidation v = validate_obc(arcs, *m.hamiltonian, s.cfg.chain_cells, s.cfg.mu);
    out["finite_chain"] = Json{{"cells", s.cfg.chain_cells},
                               {"max_distance", v.max_distance},
                               {"outliers_excluded", v.outliers_excluded},
                               {"largest_distances", std::vector<double>(v.distances.begin(),
                                                                         v.distances.begin() + std::min<std::size_t>(
                                                                                                   v.distances.size(), 4))}};
    s.check("finite_chain_within_0.1", v.max_distance < 0.1, false);
  }
  s.files["arcs.csv"] = arcs_csv(arcs);
  return out;
}

void cmd_obc(Session& s) {
  const auto m = require_model(s.cfg);
  s.results["obc"] = obc_section(s, m);
  s.files["obc.json"] = s.results["obc"].dump(2) + "\n";
}

LoopSpec loop_from(const RunConfig& cfg) {
  if (!(cfg.loop[2] > 0.0)) throw model_error("InvalidLoop", "loop radius must be positive");
  return LoopSpec::circle({cfg.loop[0], cfg.loop[1]}, cfg.loop[2], LoopSpec::Orientation::ccw, cfg.loop_samples);
}

Json loop_json(const RunConfig& cfg) {
  return Json{{"center", to_json(Complex(cfg.loop[0], cfg.loop[1]))}, {"radius", cfg.loop[2]}, {"orientation", "ccw"}};
}

Json winding_section(const BiPoly& f, const LoopSpec& loop) {
  const auto verts = loop.vertices();
  Json out{{"winding", discriminant_winding(f, loop)}};
  out["leading_winding"] = winding_number(f.leading(Var::omega), verts);
  return out;
}

Json braid_section(Session& s, const BiPoly& f) {
  const LoopSpec loop = loop_from(s.cfg);
  const BraidResult b = braid_on_loop(f, loop);
  const Json w = winding_section(f, loop);
  const int cn = crossing_number(b.word);
  Json out{{"loop", loop_json(s.cfg)},
           {"strands", b.word.strands()},
           {"word", b.word.to_string()},
           {"reduced", b.word.reduced().to_string()},
           {"cyclically_reduced", b.word.cyclically_reduced().to_string()},
           {"crossing_number", cn},
           {"permutation", perm_json(perm_image(b.word))},
           {"winding", w["winding"]}};
  s.check("crossing_equals_winding", cn == w["winding"].get<int>());
  std::ostringstream csv;
  csv << "t,strand,re_omega,im_omega\n";
  for (const auto& row : b.trace)
    csv << fmt(row.t) << ',' << row.strand << ',' << fmt(row.omega.real()) << ',' << fmt(row.omega.imag()) << '\n';
  s.files["strands.csv"] = csv.str();
  return out;
}

void cmd_braid(Session& s) {
  const auto m = require_model(s.cfg);
  s.results["braid"] = braid_section(s, m.f);
  s.files["braid.json"] = s.results["braid"].dump(2) + "\n";
}

void cmd_winding(Session& s) {
  const auto m = require_model(s.cfg);
  Json w = winding_section(m.f, loop_from(s.cfg));
  w["loop"] = loop_json(s.cfg);
  s.results["winding"] = w;
  s.files["winding.json"] = w.dump(2) + "\n";
}

void cmd_design(Session& s) {
  if (s.cfg.targets_path.empty()) throw model_error("MissingInput", "--targets is required for design");
  const DesignTarget target = parse_targets(read_json(s.cfg.targets_path));
  DesignOptions opts;
  opts.target_tol = s.cfg.tol;
  const DesignResult r = solve_coefficients(target, s.cfg.restarts, s.cfg.seed, opts);
  Json sols = Json::array();
  for (const auto& x : r.solutions) {
    Json j = serialize(x.coeffs);
    j["residual"] = x.residual;
    j["target_error"] = x.target_error;
    sols.push_back(j);
  }
  int converged = 0;
  for (const auto& d : r.restarts) converged += d.converged ? 1 : 0;
  s.results["design"] = Json{{"restarts", s.cfg.restarts},
                             {"seed", s.cfg.seed},
                             {"converged_restarts", converged},
                             {"solutions", r.solutions.size()},
                             {"from_symmetry", r.from_symmetry}};
  s.files["solutions.json"] = Json{{"targets", to_json(target.targets)}, {"anchor", to_json(target.anchor)},
                                   {"solutions", sols}}
                                  .dump(2) +
                              "\n";
}

void cmd_realize(Session& s) {
  if (s.cfg.coeffs_path.empty()) throw model_error("MissingInput", "--coeffs is required for realize");
  const TwoBandCoefficients c = parse_coefficients(read_json(s.cfg.coeffs_path));
  const auto models = realize_two_band(c);
  const BiPoly target = c.to_bipoly();
  Json list = Json::array();
  double worst = 0.0;
  for (const auto& nn : models) {
    const BlochHamiltonian h = nn.to_hamiltonian();
    const BiPoly f = char_poly(h);
    double err = 0.0;
    const int rows = std::max(f.omega_degree(), target.omega_degree()) + 1;
    const int cols = std::max(f.z_degree(), target.z_degree()) + 1;
    for (int i = 0; i < rows; ++i)
      for (int k = 0; k < cols; ++k) err = std::max(err, std::abs(f.coeff(i, k) - target.coeff(i, k)));
    worst = std::max(worst, err);
    list.push_back(serialize(h));
  }
  s.check("realization_round_trip", worst < 1e-10);
  s.results["realize"] = Json{{"count", models.size()}, {"max_coefficient_error", worst}};
  s.files["hamiltonians.json"] = list.dump(2) + "\n";
}

void cmd_validate(Session& s) {
  const auto m = require_model(s.cfg);
  Json out;
  out["monodromy_omega"] = monodromy_section(s, m.f, Var::omega, s.cfg.base);
  out["monodromy_z"] = monodromy_section(s, m.f, Var::z, default_base(m.f, Var::z));
  if (out["monodromy_omega"].contains("genus") && out["monodromy_z"].contains("genus"))
    s.check("genus_agrees", out["monodromy_omega"]["genus"] == out["monodromy_z"]["genus"]);
  if (m.hamiltonian && m.f.degree(Var::z) >= 2) {
    const GbzProblem prob{m.f, s.cfg.mu};
    const auto arcs = obc_arcs(prob, s.cfg.theta_grid);
    const ObcValidation v = validate_obc(arcs, *m.hamiltonian, s.cfg.chain_cells, s.cfg.mu);
    out["finite_chain"] = Json{{"cells", s.cfg.chain_cells}, {"max_distance", v.max_distance}};
    s.check("finite_chain_within_0.1", v.max_distance < 0.1, false);
  }
  s.results["validate"] = out;
}

// Runs one report section; a library error there is recorded instead of
// aborting the whole report (e.g. a projection that is not generic).
template <class F>
Json guarded(Session& s, const std::string& name, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    s.check(name + "_available", false, false);
    return Json{{"error", Json{{"name", e.name()}, {"message", e.what()}}}};
  }
}

void cmd_report(Session& s) {
  const auto m = require_model(s.cfg);
  const BiPoly& f = m.f;
  Json out;
  out["model"] = Json{{"r", f.degree(Var::omega)}, {"u", f.degree(Var::z)}, {"z_shift", f.z_shift()}};
  for (Var v : {Var::omega, Var::z}) {
    const std::string plane = to_string(v);
    out["branch_points_" + plane] = guarded(s, "branch_points_" + plane, [&] {
      return Json{{"branch_points", points_json(branch_points(f, v))}, {"poles", points_json(poles(f, v))}};
    });
  }
  out["monodromy_omega"] = guarded(s, "monodromy_omega", [&] { return monodromy_section(s, f, Var::omega, s.cfg.base); });
  out["monodromy_z"] =
      guarded(s, "monodromy_z", [&] { return monodromy_section(s, f, Var::z, default_base(f, Var::z)); });
  if (out["monodromy_omega"].contains("genus") && out["monodromy_z"].contains("genus"))
    s.check("genus_agrees", out["monodromy_omega"]["genus"] == out["monodromy_z"]["genus"]);
  out["braid"] = braid_section(s, f);
  if (f.degree(Var::omega) >= 2 && !f.leading(Var::omega).is_zero() && f.leading(Var::omega).degree() >= 1) {
    out["pole_braid"] = guarded(s, "pole_braid", [&] {
      const auto z_points = special_points(f, Var::z);
      double inner = std::numeric_limits<double>::infinity();
      for (const auto& p : z_points)
        if (p.kind == PointKind::branch) inner = std::min(inner, std::abs(p.location));
      const double radius = std::isfinite(inner) ? 0.5 * inner : 1.0;
      const BraidWord w = pole_braid(f, radius);
      return Json{{"radius", radius}, {"word", w.to_string()}, {"crossing_number", crossing_number(w)}};
    });
  }
  s.results["report"] = out;
  s.files["report.json"] = out.dump(2) + "\n";
}

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::model: return exit_model;
    case ErrorKind::numerical: return exit_numerical;
    case ErrorKind::consistency: return exit_consistency;
  }
  return exit_numerical;
}

Json config_json(const RunConfig& c) {
  return Json{{"model", c.model_path},   {"targets", c.targets_path},   {"coeffs", c.coeffs_path},
              {"mu", c.mu},              {"loop", c.loop},              {"loop_samples", c.loop_samples},
              {"theta_grid", c.theta_grid}, {"restarts", c.restarts},  {"seed", c.seed},
              {"tol", c.tol},            {"strict", c.strict},          {"base", to_json(c.base)},
              {"plane", c.plane},        {"chain_cells", c.chain_cells}};
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  for (const auto& [c, n] : kCommands)
    if (name == n) return c;
  return std::nullopt;
}

const char* to_string(Command c) {
  for (const auto& [k, n] : kCommands)
    if (k == c) return n;
  return "?";
}

int run(const RunConfig& cfg) {
  Session s{cfg};
  Json summary{{"command", to_string(cfg.command)}, {"config", config_json(cfg)}};
  int code = exit_ok;
  try {
    if (cfg.tol <= 0.0) throw model_error("ModelInvalid", "--tol must be positive");
    switch (cfg.command) {
      case Command::branch_points: cmd_branch_points(s); break;
      case Command::monodromy: cmd_monodromy(s); break;
      case Command::obc: cmd_obc(s); break;
      case Command::braid: cmd_braid(s); break;
      case Command::winding: cmd_winding(s); break;
      case Command::design: cmd_design(s); break;
      case Command::realize: cmd_realize(s); break;
      case Command::validate: cmd_validate(s); break;
      case Command::report: cmd_report(s); break;
    }
    for (const auto& c : s.checks)
      if (!c.passed && (c.hard || cfg.strict)) code = exit_consistency;
  } catch (const Error& e) {
    code = exit_for(e.kind());
    summary["error"] = Json{{"name", e.name()}, {"message", e.what()}};
  } catch (const std::invalid_argument& e) {
    code = exit_model;
    summary["error"] = Json{{"name", "InvalidArgument"}, {"message", e.what()}};
  } catch (const std::exception& e) {
    code = exit_numerical;
    summary["error"] = Json{{"name", "InternalError"}, {"message", e.what()}};
  }

  Json checks = Json::array();
  for (const auto& c : s.checks) checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"hard", c.hard}});
  summary["status"] = code == exit_ok ? "ok" : "error";
  summary["exit_code"] = code;
  summary["results"] = s.results;
  summary["checks"] = checks;
  Json files = Json::array();
  if (code == exit_ok || code == exit_consistency)
    for (const auto& [name, _] : s.files) files.push_back(name);
  summary["files"] = files;

  try {
    fs::create_directories(cfg.output_dir);
    if (code == exit_ok || code == exit_consistency)
      for (const auto& [name, content] : s.files) write_atomic(fs::path(cfg.output_dir) / name, content);
    write_atomic(fs::path(cfg.output_dir) / "summary.json", summary.dump(2) + "\n");
  } catch (const std::exception&) {
    return exit_model;
  }
  return code;
}

}  // namespace rsband
