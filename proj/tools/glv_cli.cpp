#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "glv/glsolver.hpp"
#include "glv/version.hpp"

using namespace glv;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string preset = "sphere4";
  std::string mesh;
  std::string out = "glv_out";
  double major = 1.0, minor = 0.45;
  int n_major = 96, n_minor = 48;
  int genus2_n = 8;

  std::vector<int> vertices;
  std::vector<int> faces;
  std::vector<std::string> points;  ///< "face:b0:b1:b2"
  std::vector<int> d;
  std::vector<double> phi;
  std::vector<int> lattice;  ///< Integer vector selecting Phi on the lattice.

  std::vector<double> eps{0.2, 0.1, 0.05};
  std::vector<double> radii;
  std::vector<double> t;
  std::vector<unsigned> seeds{1};
  unsigned seed = 1;
  int source = 0;
  int max_moves = 2000;
  bool refine = true;
  double tolerance = 1e-6;
  int max_ncg = 4000;
  bool field_csv = false;
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t x) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << x;
  return s.str();
}

std::string timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

SurfaceMesh load(const RunConfig& c) {
  if (!c.mesh.empty()) {
    if (!fs::exists(c.mesh)) throw ConfigError("mesh: file not found: " + c.mesh);
    return load_mesh(c.mesh);
  }
  const std::string& p = c.preset;
  auto number = [&](std::size_t from) {
    try {
      std::size_t used = 0;
      int n = std::stoi(p.substr(from), &used);
      if (used != p.size() - from) throw std::invalid_argument(p);
      return n;
    } catch (const std::exception&) {
      throw ConfigError("preset: cannot parse '" + p + "'");
    }
  };
  if (p.rfind("sphere", 0) == 0) {
    int level = number(6);
    if (level < 0 || level > 7) throw ConfigError("preset: icosphere level must be in [0, 7]");
    return make_icosphere(level);
  }
  if (p.rfind("torus", 0) == 0) {
    int n = number(5);
    if (n < 3 || n > 1024) throw ConfigError("preset: flat torus size must be in [3, 1024]");
    return make_flat_torus(n, 1.0 / n);
  }
  if (p == "revolution") {
    if (!(c.minor > 0.0 && c.minor < c.major)) throw ConfigError("minor: must lie in (0, major)");
    if (c.n_major < 3 || c.n_minor < 3) throw ConfigError("n-major, n-minor: must be at least 3");
    return make_revolution_torus(c.major, c.minor, c.n_major, c.n_minor);
  }
  if (p == "genus2") {
    if (c.genus2_n < 3) throw ConfigError("genus2-n: must be at least 3");
    return make_genus2(c.genus2_n);
  }
  throw ConfigError("preset: unknown preset '" + p + "' (sphereN, torusN, revolution, genus2)");
}

std::vector<SurfacePoint> points(const RunConfig& c, const SurfaceMesh& m) {
  std::vector<SurfacePoint> a;
  for (int v : c.vertices) {
    if (v < 0 || v >= m.num_vertices()) throw ConfigError("vertices: id " + std::to_string(v) + " out of range");
    a.push_back(m.vertex_point(v));
  }
  for (int f : c.faces) {
    if (f < 0 || f >= m.num_faces()) throw ConfigError("faces: id " + std::to_string(f) + " out of range");
    a.push_back(SurfacePoint::centroid(f));
  }
  for (const auto& s : c.points) {
    std::vector<double> x;
    std::stringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ':')) {
      try {
        x.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ConfigError("points: cannot parse '" + s + "'");
      }
    }
    if (x.size() != 4) throw ConfigError("points: expected face:b0:b1:b2, got '" + s + "'");
    int f = static_cast<int>(x[0]);
    if (f < 0 || f >= m.num_faces()) throw ConfigError("points: face " + std::to_string(f) + " out of range");
    Eigen::Vector3d b(x[1], x[2], x[3]);
    if ((b.array() < 0.0).any() || std::abs(b.sum() - 1.0) > 1e-9)
      throw ConfigError("points: barycentric coordinates must be non-negative and sum to 1");
    a.push_back({f, b});
  }
  return a;
}

VortexConfiguration configuration(const RunConfig& c, const SurfaceMesh& m, const CanonicalSolver* cs) {
  VortexConfiguration cfg;
  cfg.a = points(c, m);
  cfg.d = c.d;
  if (cfg.a.size() != cfg.d.size()) throw ConfigError("d: one index per vortex point is required");
  if (!c.phi.empty() && !c.lattice.empty()) throw ConfigError("phi, lattice: give at most one");
  if (!c.phi.empty()) {
    cfg.phi = Eigen::Map<const Eigen::VectorXd>(c.phi.data(), static_cast<Eigen::Index>(c.phi.size()));
  } else if (m.genus() > 0) {
    if (!cs) throw ConfigError("phi: required for genus > 0");
    Eigen::VectorXi k = Eigen::VectorXi::Zero(2 * m.genus());
    if (!c.lattice.empty()) {
      if (static_cast<int>(c.lattice.size()) != 2 * m.genus()) throw ConfigError("lattice: expected 2g integers");
      for (int i = 0; i < k.size(); ++i) k[i] = c.lattice[i];
    }
    cfg.phi = cs->lattice(cfg.a, cfg.d).point(k);
  }
  if (static_cast<int>(cfg.phi.size()) != 2 * m.genus()) throw ConfigError("phi: expected 2g components");
  return cfg;
}

json point_json(const SurfaceMesh& m, const SurfacePoint& p) {
  json j{{"face", p.face}, {"bary", {p.bary[0], p.bary[1], p.bary[2]}}};
  if (m.has_positions()) {
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    for (int i = 0; i < 3; ++i) x += p.bary[i] * m.position(m.face(p.face)[i]);
    j["position"] = {x[0], x[1], x[2]};
  }
  return j;
}

json vector_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json config_json(const SurfaceMesh& m, const VortexConfiguration& cfg) {
  json a = json::array();
  for (const auto& p : cfg.a) a.push_back(point_json(m, p));
  return {{"a", a}, {"d", cfg.d}, {"phi", vector_json(cfg.phi)}};
}

json vortices_json(const SurfaceMesh& m, const std::vector<DetectedVortex>& v) {
  json out = json::array();
  for (const auto& x : v) {
    json j = point_json(m, x.point);
    j["degree"] = x.degree;
    j["faces"] = x.faces.size();
    out.push_back(j);
  }
  return out;
}

struct Output {
  fs::path dir;
  std::string command;
  std::string hash;

  std::ofstream open(const std::string& name) const {
    fs::create_directories(dir);
    std::ofstream f(dir / name);
    if (!f) throw ConfigError("out: cannot write " + (dir / name).string());
    return f;
  }
  void emit(json body) const {
    body["command"] = command;
    body["version"] = kVersion;
    body["config_hash"] = hash;
    body["timestamp"] = timestamp();
    auto f = open(command + ".json");
    f << body.dump(2) << '\n';
    std::cout << body.dump(2) << '\n';
  }
};

json mesh_json(const SurfaceMesh& m) {
  double curvature = 0.0;
  for (int f = 0; f < m.num_faces(); ++f) curvature += m.face_curvature(f);
  return {{"vertices", m.num_vertices()},
          {"edges", m.num_edges()},
          {"faces", m.num_faces()},
          {"euler_characteristic", m.euler_characteristic()},
          {"genus", m.genus()},
          {"total_curvature", curvature},
          {"area", m.total_area()},
          {"mean_edge_length", m.mean_edge_length()},
          {"nonpositive_cotan_edges", m.nonpositive_cotan_edges().size()}};
}

void run_mesh_info(const RunConfig& c, const Output& out) {
  auto m = load(c);
  out.emit({{"mesh", mesh_json(m)}});
}

void run_greens(const RunConfig& c, const Output& out) {
  auto m = load(c);
  auto a = points(c, m);
  if (a.empty()) {
    if (c.source < 0 || c.source >= m.num_vertices()) throw ConfigError("source: vertex id out of range");
    a.push_back(m.vertex_point(c.source));
  }
  GreenOperator green(m);
  json rows = json::array();
  for (std::size_t k = 0; k < a.size(); ++k) {
    auto data = green.regular_diagonal_data(a[k]);
    rows.push_back({{"point", point_json(m, a[k])},
                    {"H", data.extrapolated},
                    {"ring_radius", data.radius},
                    {"ring_average", data.average}});
  }
  auto f = out.open("greens.csv");
  write_vertex_csv(f, green.green(a[0]), "G");
  out.emit({{"mesh", mesh_json(m)}, {"sources", rows}, {"csv", "greens.csv"}});
}

void run_psi(const RunConfig& c, const Output& out) {
  auto m = load(c);
  auto a = points(c, m);
  if (a.size() != c.d.size()) throw ConfigError("d: one index per vortex point is required");
  auto p = psi(m, a, c.d);
  auto f = out.open("psi.csv");
  write_vertex_csv(f, p.psi, "psi");
  out.emit({{"residual", p.residual}, {"csv", "psi.csv"}});
}

void run_zeta(const RunConfig& c, const Output& out) {
  auto m = load(c);
  CanonicalSolver cs(m);
  auto a = points(c, m);
  if (a.size() != c.d.size()) throw ConfigError("d: one index per vortex point is required");
  auto z = cs.zeta(a, c.d);
  auto lat = cs.lattice(a, c.d);
  out.emit({{"zeta", vector_json(z.zeta)},
            {"reroute_defect", z.reroute_defect},
            {"rerouted_loops", z.rerouted_loops},
            {"periods", [&] {
               json rows = json::array();
               for (int i = 0; i < lat.alpha.rows(); ++i) rows.push_back(vector_json(lat.alpha.row(i).transpose()));
               return rows;
             }()}});
}

void run_canonical(const RunConfig& c, const Output& out) {
  auto m = load(c);
  CanonicalSolver cs(m);
  auto cfg = configuration(c, m, &cs);
  auto j = cs.jstar(cfg);
  auto rec = cs.reconstruct(j, cfg.a);
  auto z = cs.zeta(cfg.a, cfg.d);
  double codiff = apply_codifferential(m, j).values.cwiseAbs().maxCoeff();
  auto v = detect_vortices(rec.u);
  if (c.field_csv) {
    auto f = out.open("canonical_field.csv");
    write_field_csv(f, rec.u);
  }
  out.emit({{"config", config_json(m, cfg)},
            {"zeta", vector_json(z.zeta)},
            {"phi", vector_json(cs.flux(rec.u))},
            {"residuals", {{"codifferential", codiff}, {"period_defect", rec.period_defect},
                           {"lattice", m.genus() > 0 ? cs.lattice(cfg.a, cfg.d).residual(cfg.phi) : 0.0}}},
            {"vortices", vortices_json(m, v)}});
}

void run_renorm(const RunConfig& c, const Output& out) {
  auto m = load(c);
  RenormalizedEnergy ctx(m);
  auto cfg = configuration(c, m, &ctx.canonical());
  auto radii = c.radii.empty() ? ctx.default_radii(cfg) : c.radii;
  auto r = ctx.evaluate(cfg, radii);
  auto f = out.open("renorm_sweep.csv");
  write_sweep_csv(f, r);
  out.emit({{"config", config_json(m, cfg)},
            {"W_formula", r.W_formula},
            {"W_limit", r.W_limit},
            {"relative_gap", std::abs(r.W_formula - r.W_limit) / std::max(1.0, std::abs(r.W_formula))},
            {"terms", {{"interaction", r.terms.interaction}, {"self", r.terms.self}, {"psi0_linear", r.terms.psi0_linear},
                       {"flux", r.terms.flux}, {"curvature", r.terms.curvature}}},
            {"H", r.H},
            {"fit", {{"slope", r.slope}, {"core", r.core}, {"residual", r.fit_residual}, {"monotone", r.monotone}}},
            {"csv", "renorm_sweep.csv"}});
}

void run_minimize_w(const RunConfig& c, const Output& out) {
  auto m = load(c);
  RenormalizedEnergy ctx(m);
  std::vector<int> start = c.vertices;
  if (start.empty()) start = random_start(ctx, static_cast<int>(c.d.size()), c.seed, 0.5);
  if (start.size() != c.d.size()) throw ConfigError("vertices: one start vertex per index is required");
  for (int v : start)
    if (v < 0 || v >= m.num_vertices()) throw ConfigError("vertices: id out of range");
  Eigen::VectorXd phi;
  if (!c.phi.empty()) phi = Eigen::Map<const Eigen::VectorXd>(c.phi.data(), static_cast<Eigen::Index>(c.phi.size()));
  MinimizeWOptions opt;
  opt.max_moves = c.max_moves;
  opt.refine = c.refine;
  auto res = minimize_W(ctx, c.d, start, phi, opt);
  auto f = out.open("minimize_w_log.csv");
  f.precision(17);
  f << "step,vortex,from,to,W\n";
  for (const auto& s : res.log) f << s.step << ',' << s.vortex << ',' << s.from << ',' << s.to << ',' << s.W << '\n';
  json body{{"config", config_json(m, res.config)},
            {"W", res.W},
            {"converged", res.converged},
            {"collapse", res.collapse},
            {"status", res.status},
            {"evaluations", res.evaluations},
            {"start", start},
            {"csv", "minimize_w_log.csv"}};
  if (res.config.size() > 1) body["min_separation"] = min_separation(ctx.geodesics(), res.config.a);
  out.emit(body);
}

void run_gamma(const RunConfig& c, const Output& out) {
  auto g = c.t.empty() ? gamma_F() : gamma_F(PotentialF{}, c.t);
  auto f = out.open("gamma_f.csv");
  write_gamma_csv(f, g);
  out.emit({{"gamma_F", g.value},
            {"t", g.t},
            {"g", g.g},
            {"differences", g.differences},
            {"grid_change", g.grid_change},
            {"cauchy", g.cauchy},
            {"csv", "gamma_f.csv"}});
}

MinimizeOptions minimize_options(const RunConfig& c) {
  if (!(c.tolerance > 0.0)) throw ConfigError("tolerance: must be positive");
  MinimizeOptions o;
  o.tolerance = c.tolerance;
  o.max_ncg = c.max_ncg;
  return o;
}

void check_eps(const std::vector<double>& eps) {
  if (eps.empty()) throw ConfigError("eps: at least one value is required");
  for (double e : eps)
    if (!(e > 0.0)) throw ConfigError("eps: values must be positive");
}

void run_minimize(const RunConfig& c, const Output& out) {
  auto m = load(c);
  check_eps(c.eps);
  auto frame = build_frame(m);
  auto basis = harmonic_basis(m, homology_basis(m));
  auto st = minimize_E(frame, c.eps.front(), c.seed, PotentialF{}, minimize_options(c));
  auto v = detect_vortices(st.iterate);
  int sum = 0;
  for (const auto& x : v) sum += x.degree;
  {
    auto f = out.open("energy_history.csv");
    f.precision(17);
    f << "iteration,energy\n";
    for (std::size_t i = 0; i < st.energy_history.size(); ++i) f << i << ',' << st.energy_history[i] << '\n';
  }
  if (c.field_csv) {
    auto f = out.open("minimizer_field.csv");
    write_field_csv(f, st.iterate);
  }
  out.emit({{"eps", st.eps},
            {"seed", st.seed},
            {"energy", st.energy()},
            {"gradient_norm", st.gradient_norm},
            {"converged", st.converged},
            {"status", st.status},
            {"ncg_iterations", st.ncg_iterations},
            {"newton_iterations", st.newton_iterations},
            {"vortices", vortices_json(m, v)},
            {"degree_sum", sum},
            {"phi", vector_json(flux(st.iterate, basis))},
            {"csv", "energy_history.csv"}});
  if (!st.converged) throw NumericalError("glsolver: " + st.status);
}

void run_recovery(const RunConfig& c, const Output& out) {
  auto m = load(c);
  check_eps(c.eps);
  RenormalizedEnergy ctx(m);
  auto cfg = configuration(c, m, &ctx.canonical());
  json rows = json::array();
  double W = ctx.formula(cfg).W_formula;
  double gamma = gamma_F().value;
  auto f = out.open("recovery.csv");
  f.precision(12);
  f << "eps,rho,energy,reduced,gap\n";
  for (double e : c.eps) {
    auto rec = recovery_sequence(ctx, cfg, e);
    GLEnergy E(ctx.canonical().frame(), PotentialF{}, e);
    double energy = E.evaluate(rec.u.z);
    const int n = static_cast<int>(cfg.d.size());
    double reduced = energy - n * kPi * std::abs(std::log(e));
    double bound = 0.0;
    double vd = cfg.size() ? field_vorticity_distance(ctx.geodesics(), rec.u, cfg, 0.5 * e, &bound) : 0.0;
    rows.push_back({{"eps", e}, {"rho", rec.rho}, {"energy", energy}, {"reduced", reduced},
                    {"gap", reduced - W - n * gamma}, {"vorticity_distance", vd}, {"vorticity_distance_bound", bound},
                    {"warnings", rec.warnings}});
    f << e << ',' << rec.rho << ',' << energy << ',' << reduced << ',' << reduced - W - n * gamma << '\n';
    if (c.field_csv) {
      std::ostringstream name;
      name << "recovery_field_" << e << ".csv";
      auto g = out.open(name.str());
      write_field_csv(g, rec.u);
    }
  }
  out.emit({{"config", config_json(m, cfg)}, {"W", W}, {"gamma_F", gamma}, {"rows", rows}, {"csv", "recovery.csv"}});
}

void run_expansion(const RunConfig& c, const Output& out) {
  auto m = load(c);
  check_eps(c.eps);
  if (c.seeds.empty()) throw ConfigError("seeds: at least one seed is required");
  RenormalizedEnergy ctx(m);
  ExpansionOptions opt;
  opt.minimize = minimize_options(c);
  auto rec = expansion_experiment(ctx, c.eps, c.seeds, opt);
  json rows = json::array();
  for (const auto& r : rec.rows)
    rows.push_back({{"eps", r.eps},
                    {"energy", r.energy},
                    {"reduced", r.reduced},
                    {"n", r.n},
                    {"degree_sum", r.degree_sum},
                    {"unit_degrees", r.unit_degrees},
                    {"vortices", vortices_json(m, r.vortices)},
                    {"phi_measured", vector_json(r.phi_measured)},
                    {"phi_projected", vector_json(r.phi_projected)},
                    {"W", r.W},
                    {"defect", r.defect},
                    {"vorticity_distance", r.vorticity_distance},
                    {"gradient_norm", r.gradient_norm},
                    {"converged", r.converged},
                    {"seed", r.seed},
                    {"status", r.status}});
  auto f = out.open("expansion.csv");
  write_expansion_csv(f, rec);
  out.emit({{"rows", rows},
            {"gamma_F", rec.gamma},
            {"fit", {{"N", rec.N}, {"C", rec.C}}},
            {"euler_characteristic", m.euler_characteristic()},
            {"defect_decreasing", rec.defect_decreasing},
            {"liminf_holds", rec.liminf_holds},
            {"liminf_tolerance", rec.liminf_tolerance},
            {"note", rec.note},
            {"csv", "expansion.csv"}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ginzburg-Landau vortices on closed surfaces"};
  app.set_config("--config", "", "INI file with one section per subcommand");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  RunConfig c;

  auto mesh_opts = [&](CLI::App* s) {
    s->add_option("--preset", c.preset, "sphereN, torusN, revolution or genus2")->capture_default_str();
    s->add_option("--mesh", c.mesh, "Mesh file (.off, .obj or intrinsic)");
    s->add_option("--out", c.out, "Output directory")->capture_default_str();
    s->add_option("--major", c.major, "Torus of revolution: major radius")->capture_default_str();
    s->add_option("--minor", c.minor, "Torus of revolution: minor radius")->capture_default_str();
    s->add_option("--n-major", c.n_major)->capture_default_str();
    s->add_option("--n-minor", c.n_minor)->capture_default_str();
    s->add_option("--genus2-n", c.genus2_n)->capture_default_str();
  };
  auto vortex_opts = [&](CLI::App* s) {
    s->add_option("--vertices", c.vertices, "Vortex points at vertices")->delimiter(',');
    s->add_option("--faces", c.faces, "Vortex points at face centroids")->delimiter(',');
    s->add_option("--points", c.points, "Vortex points as face:b0:b1:b2")->delimiter(',');
    s->add_option("--d", c.d, "Indices")->delimiter(',');
  };
  auto flux_opts = [&](CLI::App* s) {
    s->add_option("--phi", c.phi, "Flux vector")->delimiter(',');
    s->add_option("--lattice", c.lattice, "Integer lattice coordinates of Phi")->delimiter(',');
  };
  auto solver_opts = [&](CLI::App* s) {
    s->add_option("--eps", c.eps, "Epsilon values")->delimiter(',')->capture_default_str();
    s->add_option("--tolerance", c.tolerance, "Stationarity tolerance")->capture_default_str();
    s->add_option("--max-ncg", c.max_ncg)->capture_default_str();
    s->add_flag("--field-csv", c.field_csv, "Write vertex field snapshots");
  };

  std::vector<std::pair<CLI::App*, void (*)(const RunConfig&, const Output&)>> commands;
  auto add = [&](const char* name, const char* help, void (*fn)(const RunConfig&, const Output&)) {
    auto* s = app.add_subcommand(name, help);
    mesh_opts(s);
    commands.emplace_back(s, fn);
    return s;
  };
  add("mesh-info", "Mesh statistics and topology", run_mesh_info);
  auto* greens = add("greens", "Green's function column and H(y, y)", run_greens);
  vortex_opts(greens);
  greens->add_option("--source", c.source, "Source vertex when no points are given")->capture_default_str();
  vortex_opts(add("psi", "Vortex potential psi", run_psi));
  vortex_opts(add("zeta", "Holonomy constants and periods", run_zeta));
  auto* canon = add("canonical", "Canonical harmonic field", run_canonical);
  vortex_opts(canon);
  flux_opts(canon);
  canon->add_flag("--field-csv", c.field_csv, "Write the field as vertex CSV");
  auto* renorm = add("renorm-energy", "Renormalized energy, formula and limit", run_renorm);
  vortex_opts(renorm);
  flux_opts(renorm);
  renorm->add_option("--radii", c.radii, "Ball radii (decreasing)")->delimiter(',');
  auto* mw = add("minimize-w", "Minimize the renormalized energy over vertex positions", run_minimize_w);
  mw->add_option("--vertices", c.vertices, "Start vertices")->delimiter(',');
  mw->add_option("--d", c.d, "Indices")->delimiter(',')->required();
  mw->add_option("--phi", c.phi, "Start flux vector")->delimiter(',');
  mw->add_option("--seed", c.seed, "Seed for random starts")->capture_default_str();
  mw->add_option("--max-moves", c.max_moves)->capture_default_str();
  mw->add_option("--refine", c.refine, "Sub-vertex refinement")->capture_default_str();
  auto* gamma = add("gamma-f", "Core constant gamma_F", run_gamma);
  gamma->add_option("--t", c.t, "Decreasing t-sequence")->delimiter(',');
  auto* mini = add("minimize", "Minimize E_eps from a seeded random start", run_minimize);
  solver_opts(mini);
  mini->add_option("--seed", c.seed)->capture_default_str();
  auto* rec = add("recovery", "Recovery sequence for a vortex configuration", run_recovery);
  vortex_opts(rec);
  flux_opts(rec);
  solver_opts(rec);
  auto* exp = add("expansion", "Energy expansion experiment over an eps sweep", run_expansion);
  solver_opts(exp);
  exp->add_option("--seeds", c.seeds)->delimiter(',')->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (auto& [sub, fn] : commands) {
    if (!sub->parsed()) continue;
    Output out{c.out, sub->get_name(), hex(fnv1a(app.config_to_str(true, false)))};
    try {
      fn(c, out);
      return 0;
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return 2;
    } catch (const MeshError& e) {
      std::cerr << "mesh error [" << sub->get_name() << "]: " << e.what() << '\n';
      return 2;
    } catch (const NumericalError& e) {
      std::cerr << "numerical failure [" << sub->get_name() << "]: " << e.what() << '\n';
      return 3;
    } catch (const std::exception& e) {
      std::cerr << "numerical failure [" << sub->get_name() << "]: " << e.what() << '\n';
      return 3;
    }
  }
  return 2;
}
