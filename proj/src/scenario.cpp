#include "membrane/scenario.hpp"

#include "membrane/flow.hpp"
#include "membrane/fuzzy.hpp"
#include "membrane/nahm.hpp"
#include "membrane/solutions.hpp"
#include "membrane/susy.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

namespace membrane {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

double to_num(const std::string& raw, const std::string& ctx) {
  try {
    std::size_t pos = 0;
    double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(ctx + ": bad number '" + raw + "'");
  }
}

long to_int(const std::string& raw, const std::string& ctx) {
  try {
    std::size_t pos = 0;
    long v = std::stol(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError(ctx + ": bad integer '" + raw + "'");
  }
}

// Typed access to scenario keys. Every supported key is read by its runner
// up front (defaults included), so finish() can flag misspelled leftovers.
class Params {
 public:
  explicit Params(const Scenario& sc) : sc_(sc) { used_.insert("kind"); }

  bool has(const std::string& k) const {
    used_.insert(k);
    return sc_.kv.count(k) > 0;
  }
  std::string str(const std::string& k, const std::string& def) const {
    used_.insert(k);
    auto it = sc_.kv.find(k);
    return it == sc_.kv.end() ? def : it->second;
  }
  std::string req(const std::string& k) const {
    used_.insert(k);
    auto it = sc_.kv.find(k);
    if (it == sc_.kv.end()) throw ConfigError(ctx(k) + ": required");
    return it->second;
  }
  double num(const std::string& k, double def) const {
    used_.insert(k);
    auto it = sc_.kv.find(k);
    return it == sc_.kv.end() ? def : to_num(it->second, ctx(k));
  }
  long integer(const std::string& k, long def) const {
    used_.insert(k);
    auto it = sc_.kv.find(k);
    return it == sc_.kv.end() ? def : to_int(it->second, ctx(k));
  }
  std::pair<int, int> grid2(const std::string& k, int a, int b) const {
    used_.insert(k);
    auto it = sc_.kv.find(k);
    if (it == sc_.kv.end()) return {a, b};
    auto parts = split(it->second, 'x');
    if (parts.size() != 2) throw ConfigError(ctx(k) + ": expected N1xN2");
    int n1 = static_cast<int>(to_int(parts[0], ctx(k)));
    int n2 = static_cast<int>(to_int(parts[1], ctx(k)));
    if (n1 < 2 || n2 < 2) throw ConfigError(ctx(k) + ": grid too small");
    return {n1, n2};
  }
  std::vector<double> list(const std::string& k) const {
    std::vector<double> out;
    for (const auto& part : split(req(k), ',')) out.push_back(to_num(part, ctx(k)));
    return out;
  }
  std::vector<long> int_list(const std::string& k) const {
    std::vector<long> out;
    for (const auto& part : split(req(k), ',')) out.push_back(to_int(part, ctx(k)));
    return out;
  }
  void finish() const {
    for (const auto& [k, v] : sc_.kv)
      if (!used_.count(k)) throw ConfigError("scenario '" + sc_.name + "': unknown key '" + k + "'");
  }

 private:
  std::string ctx(const std::string& k) const {
    return "scenario '" + sc_.name + "', key '" + k + "'";
  }
  const Scenario& sc_;
  mutable std::set<std::string> used_;
};

std::string write_report(const fs::path& dir, const json& rep) {
  fs::create_directories(dir);
  fs::path p = dir / "report.json";
  std::ofstream out(p, std::ios::binary);
  out << rep.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return p.string();
}

void write_csv(const fs::path& p, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << '\n';
  char buf[40];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

json metric(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double config_max_abs(const FieldConfiguration& cfg) {
  double m = 0.0;
  for (const auto& f : cfg.x) m = std::max(m, f.v.abs().maxCoeff());
  return m;
}

std::shared_ptr<const SurfaceGrid> make_grid(const std::string& topo, int n1, int n2,
                                             const std::string& name) {
  if (topo == "sphere") return SurfaceGrid::sphere(n1, n2);
  if (topo == "torus") return SurfaceGrid::torus(n1, n2);
  throw ConfigError("scenario '" + name + "': unknown topology '" + topo + "'");
}

// ---------------------------------------------------------------- verify ---

ScenarioOutcome run_verify_algebra(const Scenario& sc, const fs::path& dir, bool dry) {
  Params p(sc);
  p.finish();
  if (dry) return {sc.name, 0, {}};

  json rep;
  rep["schema"] = 1;
  rep["kind"] = "verify-algebra";
  rep["name"] = sc.name;

  IdentityReport idr = verify_identity_suite();
  json checks = json::array();
  bool ok = idr.all_pass;
  for (const auto& c : idr.checks)
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"violation", c.violation}});
  rep["identities"] = checks;

  bool clifford = true;
  try {
    build_beta_matrices();
  } catch (const std::exception&) {
    clifford = false;
  }
  rep["clifford_exact"] = clifford;
  ok = ok && clifford;

  int dim = 0;
  try {
    dim = static_cast<int>(g2_algebra_basis().size());
  } catch (const std::exception&) {
    dim = -1;
  }
  rep["stabilizer_dimension"] = dim;
  ok = ok && dim == 14;

  rep["pass"] = ok;
  return {sc.name, ok ? 0 : 1, write_report(dir, rep)};
}

// ------------------------------------------------------------------ flow ---

ScenarioOutcome run_flow(const Scenario& sc, const fs::path& dir, bool dry) {
  Params p(sc);
  int dim = static_cast<int>(p.integer("dim", 3));
  std::string topo = p.str("topology", "sphere");
  auto [n1, n2] = p.grid2("grid", 32, 32);
  double dt = p.num("dt", 1e-3);
  long steps = p.integer("steps", 400);
  long rec = p.integer("record_every", std::max<long>(1, steps / 50));
  std::string preset = p.str("preset", "collapse");
  double r0 = p.num("r0", 1.0);
  int lmax = static_cast<int>(p.integer("lmax", 2));
  double amplitude = p.num("amplitude", 1.0);
  auto seed = static_cast<std::uint64_t>(p.integer("seed", 1));
  double blowup = p.num("blowup_threshold", 1e8);
  double tol_gauss = p.num("tol_gauss", 1e-8);
  double tol_eom = p.num("tol_eom", 1e-8);
  double tol_charge = p.num("tol_charge", 1e-6);
  double tol_radius = p.num("tol_radius", 1e-6);
  double tol_conservation = p.num("tol_conservation", 1e-8);
  bool write_state = p.integer("write_state", 1) != 0;
  bool has_w1 = p.has("wind1"), has_w2 = p.has("wind2");

  if (dim != 3 && dim != 7)
    throw ConfigError("scenario '" + sc.name + "': dim must be 3 or 7");
  if (dt <= 0 || steps < 0 || rec < 1)
    throw ConfigError("scenario '" + sc.name + "': need dt > 0, steps >= 0, record_every >= 1");
  auto g = make_grid(topo, n1, n2, sc.name);

  FieldConfiguration cfg = FieldConfiguration::zero(g, dim);
  if (preset == "collapse") {
    if (dim != 3 || g->topology != Topology::sphere)
      throw ConfigError("scenario '" + sc.name + "': preset collapse needs dim = 3 on the sphere");
    auto coords = sphere_coordinates(g);
    for (int i = 0; i < 3; ++i) cfg.x[i].v = r0 * coords[i].v;
  } else if (preset == "random") {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < dim; ++i) cfg.x[i] = random_band_limited(g, lmax, rng, amplitude);
    if (has_w1 || has_w2) {
      if (g->topology != Topology::torus)
        throw ConfigError("scenario '" + sc.name + "': winding needs the torus");
      auto fill = [&](const char* key, bool given) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(dim);
        if (given) {
          auto v = p.list(key);
          if (static_cast<int>(v.size()) != dim)
            throw ConfigError("scenario '" + sc.name + "': " + key + " needs " +
                              std::to_string(dim) + " entries");
          for (int i = 0; i < dim; ++i) w[i] = v[i];
        }
        return w;
      };
      cfg.has_winding = true;
      cfg.wind1 = fill("wind1", has_w1);
      cfg.wind2 = fill("wind2", has_w2);
    }
  } else {
    throw ConfigError("scenario '" + sc.name + "': unknown preset '" + preset + "'");
  }
  p.finish();
  if (dry) return {sc.name, 0, {}};

  bool with_charges = !cfg.has_winding;
  NullVectorPair pair = make_null_pair(dim, seed + 1);

  std::vector<std::string> header = {"step", "t", "max_abs", "gauss",
                                     "eom",  "kinetic", "potential"};
  if (with_charges)
    for (int n = 1; n <= 3; ++n) {
      header.push_back("q" + std::to_string(n) + "_re");
      header.push_back("q" + std::to_string(n) + "_im");
    }

  std::vector<std::vector<double>> rows;
  double gauss_max = 0.0, eom_max = 0.0;
  std::array<double, 3> charge_drift{};
  std::array<std::complex<double>, 3> q0{};
  bool have_q0 = false;
  // every power of u.X is conserved in three components; the transport
  // relation only protects the linear charge in seven
  const int conserved_charges = dim == 3 ? 3 : 1;

  auto record = [&](const FlowState& st) {
    FieldConfiguration xdot = selfdual_rhs(st.cfg);
    double ga = gauss_residual(st.cfg, xdot);
    double eo = eom_residual(st.cfg, xdot);
    auto [kin, pot] = bogomolny_pair(st.cfg, xdot);
    gauss_max = std::max(gauss_max, ga);
    eom_max = std::max(eom_max, eo);
    std::vector<double> row = {static_cast<double>(st.step), st.t,
                               config_max_abs(st.cfg), ga, eo, kin, pot};
    if (with_charges) {
      for (int n = 1; n <= 3; ++n) {
        std::complex<double> q = conserved_charge(st.cfg, pair, n);
        if (have_q0)
          charge_drift[n - 1] = std::max(charge_drift[n - 1], std::abs(q - q0[n - 1]));
        else
          q0[n - 1] = q;
        row.push_back(q.real());
        row.push_back(q.imag());
      }
      have_q0 = true;
    }
    rows.push_back(std::move(row));
  };

  FlowState st;
  st.cfg = cfg;
  record(st);
  FlowOptions opt;
  opt.dt = dt;
  opt.blowup_threshold = blowup;
  while (st.step < steps && !st.blown_up) {
    opt.steps = std::min(rec, steps - st.step);
    st = evolve(st, opt);
    if (!st.blown_up) record(st);
  }

  write_csv(dir / "series.csv", header, rows);

  json rep;
  rep["schema"] = 1;
  rep["kind"] = "flow";
  rep["name"] = sc.name;
  rep["params"] = {{"dim", dim},       {"topology", topo}, {"grid", {n1, n2}},
                   {"dt", dt},         {"steps", steps},   {"record_every", rec},
                   {"preset", preset}, {"seed", seed}};
  if (preset == "collapse") rep["params"]["r0"] = r0;
  if (preset == "random") {
    rep["params"]["lmax"] = lmax;
    rep["params"]["amplitude"] = amplitude;
  }

  json metrics, checks, tols;
  bool pass = true;
  rep["blown_up"] = st.blown_up;
  if (!st.blown_up) {
    FieldConfiguration xdot = selfdual_rhs(st.cfg);
    metrics["max_abs_final"] = metric(config_max_abs(st.cfg));
    metrics["gauss_max"] = metric(gauss_max);
    metrics["eom_max"] = metric(eom_max);
    checks["gauss"] = gauss_max <= tol_gauss;
    checks["eom"] = eom_max <= tol_eom;
    tols["gauss"] = tol_gauss;
    tols["eom"] = tol_eom;
    if (with_charges) {
      json drifts = json::array();
      double gated = 0.0;
      for (int n = 0; n < 3; ++n) {
        drifts.push_back(metric(charge_drift[n]));
        if (n < conserved_charges) gated = std::max(gated, charge_drift[n]);
      }
      metrics["charge_drift"] = drifts;
      metrics["conserved_charges"] = conserved_charges;
      checks["charges"] = gated <= tol_charge;
      tols["charges"] = tol_charge;
    }
    if (dim == 7) {
      double cons = conservation_relation_residual(st.cfg, xdot, pair);
      metrics["conservation_residual"] = metric(cons);
      checks["conservation"] = cons <= tol_conservation;
      tols["conservation"] = tol_conservation;
    }
    if (preset == "collapse") {
      Eigen::ArrayXXd r2 = Eigen::ArrayXXd::Zero(g->n1, g->n2);
      for (const auto& f : st.cfg.x) r2 += f.v.square();
      double r_num = std::sqrt(r2.maxCoeff());
      double r_exact = r0 / (1.0 - r0 * st.t);
      double rel = std::abs(r_num - r_exact) / std::abs(r_exact);
      metrics["radius_rel_error"] = metric(rel);
      checks["radius"] = rel <= tol_radius;
      tols["radius"] = tol_radius;
    }
    for (const auto& [k, v] : checks.items()) pass = pass && v.get<bool>();
    if (write_state) {
      fs::create_directories(dir);
      write_snapshot((dir / "state.snap").string(), Snapshot{st.cfg, xdot, st.t});
    }
  } else {
    metrics["stopped_at_step"] = st.step;
    metrics["stopped_at_t"] = st.t;
    pass = false;
  }
  rep["metrics"] = metrics;
  rep["tolerances"] = tols;
  rep["checks"] = checks;
  rep["pass"] = pass;
  int code = st.blown_up ? 3 : (pass ? 0 : 1);
  return {sc.name, code, write_report(dir, rep)};
}

// ------------------------------------------------------------------ nahm ---

ScenarioOutcome run_nahm(const Scenario& sc, const fs::path& dir, bool dry) {
  Params p(sc);
  std::string mode = p.str("mode", "matrix");
  std::string init = p.str("init", "identity");
  double c = p.num("c", 1.0);
  double amplitude = p.num("amplitude", 0.5);
  auto seed = static_cast<std::uint64_t>(p.integer("seed", 1));
  double dt = p.num("dt", 1e-3);
  long steps = p.integer("steps", 500);
  long rec = p.integer("record_every", std::max<long>(1, steps / 50));
  double blowup = p.num("blowup_threshold", 1e8);
  double tol_pole = p.num("tol_pole", 1e-8);
  double tol_offdiag = p.num("tol_offdiag", 1e-12);
  double tol_ansatz = p.num("tol_ansatz", 1e-10);
  bool has_values = p.has("values");
  std::vector<double> values;
  if (has_values) values = p.list("values");
  p.finish();

  if (mode != "matrix" && mode != "diagonal")
    throw ConfigError("scenario '" + sc.name + "': mode is matrix or diagonal");
  if (dt <= 0 || steps < 0 || rec < 1)
    throw ConfigError("scenario '" + sc.name + "': need dt > 0, steps >= 0, record_every >= 1");

  Matrix7d z0 = Matrix7d::Zero();
  Vector7d r0 = Vector7d::Zero();
  if (init == "identity") {
    z0 = c * Matrix7d::Identity();
    r0 = c * Vector7d::Ones();
  } else if (init == "diagonal") {
    if (!has_values || values.size() != 7)
      throw ConfigError("scenario '" + sc.name + "': init diagonal needs values = v1,...,v7");
    for (int i = 0; i < 7; ++i) {
      z0(i, i) = values[i];
      r0[i] = values[i];
    }
  } else if (init == "random") {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) z0(i, j) = amplitude * standard_normal(rng);
    r0 = z0.diagonal();
  } else {
    throw ConfigError("scenario '" + sc.name + "': unknown init '" + init + "'");
  }
  if (dry) return {sc.name, 0, {}};

  std::vector<std::string> header = {"step", "t", "max_abs"};
  if (mode == "matrix") header.push_back("ansatz");
  for (int i = 1; i <= 7; ++i) header.push_back("r" + std::to_string(i));
  std::vector<std::vector<double>> rows;

  auto record_matrix = [&](const FactorizedState& st) {
    std::vector<double> row = {static_cast<double>(st.step), st.t,
                               st.z.cwiseAbs().maxCoeff(), ansatz_residual(st.z)};
    for (int i = 0; i < 7; ++i) row.push_back(st.z(i, i));
    rows.push_back(std::move(row));
  };
  auto record_diag = [&](const DiagonalState& st) {
    std::vector<double> row = {static_cast<double>(st.step), st.t,
                               st.r.cwiseAbs().maxCoeff()};
    for (int i = 0; i < 7; ++i) row.push_back(st.r[i]);
    rows.push_back(std::move(row));
  };

  bool blown = false;
  double t_final = 0.0;
  Matrix7d z_final = Matrix7d::Zero();
  Vector7d r_final = Vector7d::Zero();
  if (mode == "matrix") {
    FactorizedState st;
    st.z = z0;
    record_matrix(st);
    while (st.step < steps && !st.blown_up) {
      st = evolve_factorized(st, dt, std::min(rec, steps - st.step), blowup);
      if (!st.blown_up) record_matrix(st);
    }
    blown = st.blown_up;
    t_final = st.t;
    z_final = st.z;
    r_final = st.z.diagonal();
  } else {
    DiagonalState st;
    st.r = r0;
    record_diag(st);
    while (st.step < steps && !st.blown_up) {
      st = evolve_diagonal(st, dt, std::min(rec, steps - st.step), blowup);
      if (!st.blown_up) record_diag(st);
    }
    blown = st.blown_up;
    t_final = st.t;
    r_final = st.r;
    for (int i = 0; i < 7; ++i) z_final(i, i) = st.r[i];
  }

  write_csv(dir / "series.csv", header, rows);

  json rep;
  rep["schema"] = 1;
  rep["kind"] = "nahm";
  rep["name"] = sc.name;
  rep["params"] = {{"mode", mode}, {"init", init},   {"dt", dt},
                   {"steps", steps}, {"record_every", rec}};
  if (init == "identity") rep["params"]["c"] = c;
  if (init == "random") {
    rep["params"]["amplitude"] = amplitude;
    rep["params"]["seed"] = seed;
  }
  rep["blown_up"] = blown;

  json metrics, checks, tols;
  bool pass = !blown;
  if (!blown) {
    json diag = json::array();
    for (int i = 0; i < 7; ++i) diag.push_back(r_final[i]);
    metrics["t_final"] = t_final;
    metrics["diagonal_final"] = diag;
    if (mode == "matrix") {
      double off = 0.0;
      for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j)
          if (i != j) off = std::max(off, std::abs(z_final(i, j)));
      metrics["offdiag_max"] = metric(off);
      metrics["ansatz_residual"] = metric(ansatz_residual(z_final));
      if (init != "random") {
        checks["offdiag"] = off <= tol_offdiag;
        tols["offdiag"] = tol_offdiag;
      }
    }
    if (init == "identity") {
      double want = c / (1.0 - c * t_final);
      double rel = 0.0;
      for (int i = 0; i < 7; ++i)
        rel = std::max(rel, std::abs(r_final[i] - want) / std::abs(want));
      metrics["pole_rel_error"] = metric(rel);
      checks["pole"] = rel <= tol_pole;
      tols["pole"] = tol_pole;
      if (mode == "matrix") {
        checks["ansatz"] = metrics["ansatz_residual"].get<double>() <= tol_ansatz;
        tols["ansatz"] = tol_ansatz;
      }
    }
    for (const auto& [k, v] : checks.items()) pass = pass && v.get<bool>();
  }
  rep["metrics"] = metrics;
  rep["tolerances"] = tols;
  rep["checks"] = checks;
  rep["pass"] = pass;
  int code = blown ? 3 : (pass ? 0 : 1);
  return {sc.name, code, write_report(dir, rep)};
}

// ------------------------------------------------------------- solutions ---

ScenarioOutcome run_solutions(const Scenario& sc, const fs::path& dir, bool dry) {
  Params p(sc);
  std::string name = p.str("name", "collapse-3d");
  double t = p.num("time", 0.0);
  double tol = p.num("tol", 1e-9);
  double r0 = p.num("r0", 1.0);
  double kappa = p.num("kappa", 1.0);
  double t0 = p.num("t0", 1.0);
  bool has_a = p.has("a"), has_b = p.has("b");
  std::string modes = p.str("modes", "0:1:1:0");

  json rep;
  rep["schema"] = 1;
  rep["kind"] = "solutions";
  rep["name"] = sc.name;
  rep["solution"] = name;

  Snapshot snap;
  json metrics, checks;
  double pde = -1.0;
  if (name == "collapse-3d") {
    auto [n1, n2] = p.grid2("grid", 32, 32);
    p.finish();
    if (r0 * t >= 1.0)
      throw ConfigError("scenario '" + sc.name + "': time is past the singularity");
    if (dry) return {sc.name, 0, {}};
    auto g = SurfaceGrid::sphere(n1, n2);
    snap = collapsing_sphere_eval(r0, g, t);
    rep["params"] = {{"grid", {n1, n2}}, {"time", t}, {"r0", r0}};
  } else if (name == "toda-sphere") {
    auto [n1, n2] = p.grid2("grid", 32, 32);
    p.finish();
    if (t >= t0)
      throw ConfigError("scenario '" + sc.name + "': time is past the singularity");
    if (dry) return {sc.name, 0, {}};
    auto g = SurfaceGrid::sphere(n1, n2);
    TodaSolution s{kappa, t0};
    snap = toda_eval(s, g, t);
    pde = toda_pde_residual(s, g, t);
    rep["params"] = {{"grid", {n1, n2}}, {"time", t}, {"kappa", kappa}, {"t0", t0}};
  } else if (name == "string-7d") {
    auto [n1, n2] = p.grid2("grid", 32, 32);
    StringSolution s;
    s.b[2] = 1;
    auto fill7 = [&](const char* key) {
      auto v = p.int_list(key);
      if (v.size() != 7)
        throw ConfigError("scenario '" + sc.name + "': " + key + " needs 7 integers");
      Eigen::Matrix<long, 7, 1> out;
      for (int i = 0; i < 7; ++i) out[i] = v[i];
      return out;
    };
    if (has_a) s.a = fill7("a");
    if (has_b) s.b = fill7("b");
    if (s.b.cwiseAbs().maxCoeff() == 0)
      throw ConfigError("scenario '" + sc.name + "': b must be nonzero");
    for (const auto& part : split(modes, ';')) {
      auto f = split(part, ':');
      if (f.size() != 4)
        throw ConfigError("scenario '" + sc.name + "': modes entries are plane:k:re:im");
      long plane = to_int(f[0], sc.name + " modes");
      if (plane < 0 || plane > 2)
        throw ConfigError("scenario '" + sc.name + "': plane index is 0, 1, or 2");
      long k = to_int(f[1], sc.name + " modes");
      double re = to_num(f[2], sc.name + " modes");
      double im = to_num(f[3], sc.name + " modes");
      s.profiles[plane].modes.push_back({static_cast<int>(k), {re, im}});
    }
    p.finish();
    if (dry) return {sc.name, 0, {}};
    auto g = SurfaceGrid::torus(n1, n2);
    snap = string_solution_eval(s, g, t);
    json ja = json::array(), jb = json::array();
    for (int i = 0; i < 7; ++i) {
      ja.push_back(s.a[i]);
      jb.push_back(s.b[i]);
    }
    rep["params"] = {{"grid", {n1, n2}}, {"time", t}, {"a", ja}, {"b", jb}, {"modes", modes}};
  } else {
    throw ConfigError("scenario '" + sc.name + "': unknown solution '" + name + "'");
  }

  double sd = selfduality_residual(snap.x, snap.xdot);
  double ga = gauss_residual(snap.x, snap.xdot);
  metrics["selfduality_residual"] = metric(sd);
  metrics["gauss_residual"] = metric(ga);
  checks["selfduality"] = sd <= tol;
  checks["gauss"] = ga <= tol;
  if (pde >= 0.0) {
    metrics["pde_residual"] = metric(pde);
    checks["pde"] = pde <= tol;
  }
  fs::create_directories(dir);
  write_snapshot((dir / "state.snap").string(), snap);

  bool pass = true;
  for (const auto& [k, v] : checks.items()) pass = pass && v.get<bool>();
  rep["metrics"] = metrics;
  rep["tolerances"] = {{"residual", tol}};
  rep["checks"] = checks;
  rep["pass"] = pass;
  return {sc.name, pass ? 0 : 1, write_report(dir, rep)};
}

// ------------------------------------------------------------------ susy ---

ScenarioOutcome run_susy(const Scenario& sc, const fs::path& dir, bool dry) {
  Params p(sc);
  std::string state = p.str("state", "");
  std::string preset = p.str("preset", "collapse-3d");
  auto [n1, n2] = p.grid2("grid", 16, 16);
  double t = p.num("time", 0.0);
  double r0 = p.num("r0", 1.0);
  int lmax = static_cast<int>(p.integer("lmax", 2));
  double amplitude = p.num("amplitude", 1.0);
  auto seed = static_cast<std::uint64_t>(p.integer("seed", 1));
  double tol = p.num("tol", 1e-8);
  std::string sector_s = p.str("sector", "both");
  bool has_expect = p.has("expect");
  long expect = p.integer("expect", -1);
  p.finish();

  SusySector sector;
  if (sector_s == "both") sector = SusySector::both;
  else if (sector_s == "plus") sector = SusySector::plus;
  else if (sector_s == "minus") sector = SusySector::minus;
  else throw ConfigError("scenario '" + sc.name + "': sector is both, plus, or minus");
  if (state.empty() && preset != "collapse-3d" && preset != "random-7d" && preset != "noise-7d")
    throw ConfigError("scenario '" + sc.name + "': unknown preset '" + preset + "'");
  if (state.empty() && preset == "collapse-3d" && r0 * t >= 1.0)
    throw ConfigError("scenario '" + sc.name + "': time is past the singularity");
  if (dry) return {sc.name, 0, {}};

  Snapshot snap;
  if (!state.empty()) {
    snap = read_snapshot(state);
  } else if (preset == "collapse-3d") {
    snap = collapsing_sphere_eval(r0, SurfaceGrid::sphere(n1, n2), t);
  } else if (preset == "random-7d" || preset == "noise-7d") {
    auto g = SurfaceGrid::sphere(n1, n2);
    std::mt19937_64 rng(seed);
    snap.x = FieldConfiguration::zero(g, 7);
    for (int i = 0; i < 7; ++i) snap.x.x[i] = random_band_limited(g, lmax, rng, amplitude);
    if (preset == "random-7d") {
      snap.xdot = selfdual_rhs(snap.x);
    } else {
      snap.xdot = FieldConfiguration::zero(g, 7);
      for (int i = 0; i < 7; ++i)
        snap.xdot.x[i] = random_band_limited(g, lmax, rng, amplitude);
    }
  }

  SusyOperator op = build_susy_operator(snap);
  SusyReport r = count_preserved_susy(op, tol, sector);

  json rep;
  rep["schema"] = 1;
  rep["kind"] = "susy";
  rep["name"] = sc.name;
  rep["params"] = state.empty()
                      ? json{{"preset", preset}, {"grid", {n1, n2}}, {"time", t}, {"seed", seed}}
                      : json{{"state", state}};
  rep["convention"] = r.convention;
  rep["sector"] = sector_s;
  rep["tol"] = r.tol;
  json sp = json::array(), sm = json::array();
  for (double v : r.svals_plus) sp.push_back(v);
  for (double v : r.svals_minus) sm.push_back(v);
  rep["kernel_plus"] = r.kernel_plus;
  rep["kernel_minus"] = r.kernel_minus;
  rep["kernel_dim"] = r.kernel_dim;
  rep["singular_values_plus"] = sp;
  rep["singular_values_minus"] = sm;
  bool pass = !has_expect || r.kernel_dim == expect;
  if (has_expect) rep["expect"] = expect;
  rep["pass"] = pass;
  return {sc.name, pass ? 0 : 1, write_report(dir, rep)};
}

// ----------------------------------------------------------- convergence ---

ScenarioOutcome run_convergence(const Scenario& sc, const fs::path& dir, bool dry) {
  Params p(sc);
  std::string study = p.str("study", "all");
  auto seed = static_cast<std::uint64_t>(p.integer("seed", 1));
  p.finish();
  bool do_fuzzy = study == "all" || study == "fuzzy";
  bool do_rk4 = study == "all" || study == "rk4";
  bool do_bracket = study == "all" || study == "bracket";
  if (!do_fuzzy && !do_rk4 && !do_bracket)
    throw ConfigError("scenario '" + sc.name + "': study is fuzzy, rk4, bracket, or all");
  if (dry) return {sc.name, 0, {}};

  json rep;
  rep["schema"] = 1;
  rep["kind"] = "convergence";
  rep["name"] = sc.name;
  json studies;
  bool pass = true;

  if (do_fuzzy) {
    auto g = SurfaceGrid::sphere(24, 24);
    std::mt19937_64 rng(seed);
    SurfaceField f = random_band_limited(g, 2, rng);
    SurfaceField h = random_band_limited(g, 2, rng);
    std::vector<int> sizes = {4, 8, 16, 32};
    json devs = json::array();
    bool decreasing = true;
    double prev = 0.0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      double d = correspondence_deviation(f, h, sizes[i]);
      devs.push_back(d);
      if (i > 0 && d >= prev) decreasing = false;
      prev = d;
    }
    auto coords = sphere_coordinates(g);
    double exact = 0.0;
    for (int n : {2, 3, 5, 9})
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
          exact = std::max(exact, correspondence_deviation(coords[i], coords[j], n));
    bool ok = decreasing && exact <= 1e-12;
    studies["fuzzy"] = {{"sizes", sizes},
                        {"deviations", devs},
                        {"strictly_decreasing", decreasing},
                        {"degree_one_max", exact},
                        {"pass", ok}};
    pass = pass && ok;
  }

  if (do_rk4) {
    // Coarse grid on purpose: the collapse amplifies high-degree roundoff
    // exponentially toward the singularity, and on fine grids that floor
    // swamps the dt^4 term this study is after.
    auto g = SurfaceGrid::sphere(8, 8);
    double r0 = 2.0;
    double t_end = 0.2;
    std::vector<double> dts = {4e-3, 2e-3, 1e-3};
    std::vector<double> errs;
    for (double dt : dts) {
      FlowState st;
      st.cfg = collapsing_sphere_eval(r0, g, 0.0).x;
      FlowOptions opt;
      opt.dt = dt;
      opt.steps = std::lround(t_end / dt);
      st = evolve(st, opt);
      Snapshot exact = collapsing_sphere_eval(r0, g, t_end);
      double e = 0.0;
      for (int i = 0; i < 3; ++i)
        e = std::max(e, (st.cfg.x[i].v - exact.x.x[i].v).abs().maxCoeff());
      errs.push_back(e);
    }
    json ratios = json::array();
    bool ok = true;
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
      double r = errs[i] / errs[i + 1];
      ratios.push_back(r);
      if (r < 13.0 || r > 19.0) ok = false;
    }
    studies["rk4"] = {{"dt", dts}, {"errors", errs}, {"ratios", ratios}, {"pass", ok}};
    pass = pass && ok;
  }

  if (do_bracket) {
    json sphere_e = json::array(), torus_e = json::array();
    bool ok = true;
    std::vector<int> sph_sizes = {8, 16, 24};
    double prev = 0.0;
    for (std::size_t idx = 0; idx < sph_sizes.size(); ++idx) {
      int n = sph_sizes[idx];
      auto g = SurfaceGrid::sphere(n, n);
      SurfaceField f(g), h(g), want(g);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double x = g->nodes1[i], ph = g->nodes2[j];
          double sn = std::sqrt(1.0 - x * x);
          f.v(i, j) = 1.0 / (2.0 - x);
          h.v(i, j) = sn * std::sin(ph);
          want.v(i, j) = -sn * std::cos(ph) / ((2.0 - x) * (2.0 - x));
        }
      double e = (poisson_bracket(f, h).v - want.v).abs().maxCoeff();
      sphere_e.push_back(e);
      if (idx > 0 && e >= prev) ok = false;
      prev = e;
    }
    std::vector<int> tor_sizes = {8, 16, 32};
    prev = 0.0;
    for (std::size_t idx = 0; idx < tor_sizes.size(); ++idx) {
      int n = tor_sizes[idx];
      auto g = SurfaceGrid::torus(n, n);
      SurfaceField f(g), h(g), want(g);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s1 = g->nodes1[i], s2 = g->nodes2[j];
          f.v(i, j) = std::exp(2.0 * std::cos(s1));
          h.v(i, j) = std::sin(s2);
          want.v(i, j) = 2.0 * std::sin(s1) * std::cos(s2) * std::exp(2.0 * std::cos(s1));
        }
      double e = (poisson_bracket(f, h).v - want.v).abs().maxCoeff();
      torus_e.push_back(e);
      if (idx > 0 && e >= prev) ok = false;
      prev = e;
    }
    studies["bracket"] = {{"sphere_sizes", sph_sizes},
                          {"sphere_errors", sphere_e},
                          {"torus_sizes", tor_sizes},
                          {"torus_errors", torus_e},
                          {"pass", ok}};
    pass = pass && ok;
  }

  rep["studies"] = studies;
  rep["pass"] = pass;
  return {sc.name, pass ? 0 : 1, write_report(dir, rep)};
}

}  // namespace

std::vector<Scenario> parse_config_text(const std::string& text) {
  std::vector<Scenario> out;
  Scenario cur;
  cur.name = "main";
  auto flush = [&]() {
    if (cur.kv.empty()) return;
    if (!cur.kv.count("kind"))
      throw ConfigError("scenario '" + cur.name + "': missing 'kind'");
    out.push_back(cur);
  };
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string at = "line " + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(at + ": unterminated section header");
      flush();
      cur = Scenario{};
      cur.name = trim(line.substr(1, line.size() - 2));
      if (cur.name.empty()) throw ConfigError(at + ": empty section name");
    } else {
      auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError(at + ": expected key = value");
      std::string k = trim(line.substr(0, eq));
      std::string v = trim(line.substr(eq + 1));
      if (k.empty()) throw ConfigError(at + ": empty key");
      if (cur.kv.count(k)) throw ConfigError(at + ": duplicate key '" + k + "'");
      cur.kv[k] = v;
    }
  }
  flush();
  if (out.empty()) throw ConfigError("config defines no scenarios");
  std::set<std::string> seen;
  for (const auto& s : out) {
    for (char c : s.name)
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.')
        throw ConfigError("scenario name '" + s.name + "' has characters outside [A-Za-z0-9._-]");
    if (!seen.insert(s.name).second)
      throw ConfigError("duplicate scenario name '" + s.name + "'");
  }
  return out;
}

std::vector<Scenario> parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

namespace {

ScenarioOutcome dispatch_scenario(const Scenario& sc, const fs::path& dir, bool dry) {
  auto it = sc.kv.find("kind");
  if (it == sc.kv.end())
    throw ConfigError("scenario '" + sc.name + "': missing 'kind'");
  const std::string& kind = it->second;
  if (kind == "verify-algebra") return run_verify_algebra(sc, dir, dry);
  if (kind == "flow") return run_flow(sc, dir, dry);
  if (kind == "nahm") return run_nahm(sc, dir, dry);
  if (kind == "solutions") return run_solutions(sc, dir, dry);
  if (kind == "susy") return run_susy(sc, dir, dry);
  if (kind == "convergence") return run_convergence(sc, dir, dry);
  throw ConfigError("scenario '" + sc.name + "': unknown kind '" + kind + "'");
}

}  // namespace

void validate_scenario(const Scenario& sc) { dispatch_scenario(sc, {}, true); }

ScenarioOutcome run_scenario(const Scenario& sc, const std::string& outdir) {
  // Output directories appear only when something gets written, so a config
  // rejection leaves no trace on disk.
  fs::path dir = fs::path(outdir) / sc.name;
  try {
    return dispatch_scenario(sc, dir, false);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    // numerical or I/O trouble inside the run: leave a report and code 3
    json rep;
    rep["schema"] = 1;
    rep["kind"] = sc.kv.count("kind") ? sc.kv.at("kind") : "";
    rep["name"] = sc.name;
    rep["error"] = e.what();
    rep["pass"] = false;
    return {sc.name, 3, write_report(dir, rep)};
  }
}

int run_config(const std::string& path, const std::string& outdir, int jobs) {
  auto scenarios = parse_config_file(path);
  // Schema-check the whole file before running anything: a typo in the last
  // section must not leave artifacts from the first.
  for (const auto& sc : scenarios) validate_scenario(sc);
  fs::create_directories(outdir);
  std::vector<ScenarioOutcome> res(scenarios.size());
  int nthreads = std::clamp<int>(jobs, 1, 16);
  if (nthreads <= 1 || scenarios.size() <= 1) {
    for (std::size_t i = 0; i < scenarios.size(); ++i)
      res[i] = run_scenario(scenarios[i], outdir);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errs(scenarios.size());
    auto work = [&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= scenarios.size()) return;
        try {
          res[i] = run_scenario(scenarios[i], outdir);
        } catch (...) {
          errs[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    std::size_t count = std::min<std::size_t>(nthreads, scenarios.size());
    for (std::size_t k = 0; k < count; ++k) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    for (auto& e : errs)
      if (e) std::rethrow_exception(e);
  }

  json summary;
  summary["schema"] = 1;
  summary["results"] = json::array();
  int worst = 0;
  int passed = 0;
  for (const auto& r : res) {
    summary["results"].push_back({{"name", r.name}, {"code", r.code}, {"pass", r.code == 0}});
    worst = std::max(worst, r.code);
    if (r.code == 0) ++passed;
  }
  {
    std::ofstream out(fs::path(outdir) / "summary.json", std::ios::binary);
    out << summary.dump(2) << '\n';
  }
  for (const auto& r : res)
    std::cout << r.name << ": "
              << (r.code == 0 ? "pass" : r.code == 3 ? "numerical abort" : "FAIL") << "\n";
  std::cout << passed << "/" << res.size() << " scenarios passed\n";
  return worst;
}

}  // namespace membrane
