#include <doctest.h>

#include <cmath>
#include <sstream>

#include "glv/glsolver.hpp"

using namespace glv;

namespace {

int antipode(const SurfaceMesh& m, int v) {
  for (int u = 0; u < m.num_vertices(); ++u)
    if ((m.position(u) + m.position(v)).norm() < 1e-9) return u;
  return -1;
}

VortexConfiguration antipodal_pair(const SurfaceMesh& m) {
  int v = 3, w = antipode(m, 3);
  return {{SurfacePoint::centroid(m.outgoing(v)[0] / 3), SurfacePoint::centroid(m.outgoing(w)[0] / 3)}, {1, 1}, {}};
}

Eigen::Vector3d embed(const SurfaceMesh& m, const SurfacePoint& p) {
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  for (int i = 0; i < 3; ++i) x += p.bary[i] * m.position(m.face(p.face)[i]);
  return x;
}

}  // namespace

TEST_CASE("parallel and serial energy kernels agree") {
  auto m = make_icosphere(3);
  auto fr = build_frame(m);
  GLEnergy E(fr, PotentialF{}, 0.3);
  auto u = random_field(fr, 7, 5);
  u.z *= 0.8;
  Eigen::VectorXcd g1, g2;
  double e1 = E.evaluate(u.z, &g1), e2 = E.evaluate_serial(u.z, &g2);
  CHECK(e1 == doctest::Approx(e2).epsilon(1e-12));
  CHECK((g1 - g2).norm() <= 1e-12 * g1.norm());
  CHECK(e1 == doctest::Approx(gl_energy(u, PotentialF{}, 0.3)).epsilon(1e-12));

  // Gradient and Hessian against central differences.
  Eigen::VectorXcd d = Eigen::VectorXcd::Random(u.size());
  const double t = 1e-6;
  double fd = (E.evaluate(u.z + t * d) - E.evaluate(u.z - t * d)) / (2.0 * t);
  CHECK(fd == doctest::Approx(g1.dot(d).real()).epsilon(1e-6));
  Eigen::VectorXcd gp, gm;
  E.evaluate(u.z + t * d, &gp);
  E.evaluate(u.z - t * d, &gm);
  Eigen::VectorXcd hd = (gp - gm) / (2.0 * t);
  Eigen::VectorXd dr(2 * u.size());
  for (int v = 0; v < u.size(); ++v) {
    dr[2 * v] = d[v].real();
    dr[2 * v + 1] = d[v].imag();
  }
  Eigen::VectorXd Hd = E.hessian(u.z) * dr;
  double err = 0.0;
  for (int v = 0; v < u.size(); ++v) err += std::norm(Complex(Hd[2 * v], Hd[2 * v + 1]) - hd[v]);
  CHECK(std::sqrt(err) <= 1e-6 * hd.norm());
}

TEST_CASE("constant field on the flat torus is the global minimizer") {
  auto m = make_flat_torus(16, 1.0 / 16);
  auto fr = build_frame(m);
  auto st = minimize_E(TangentVectorField::constant(fr), 0.2);
  CHECK(st.converged);
  CHECK(st.energy() == 0.0);
  CHECK(st.ncg_iterations == 0);
  CHECK(st.newton_iterations == 0);
  CHECK(detect_vortices(st.iterate).empty());
  auto basis = harmonic_basis(m, homology_basis(m));
  CHECK(flux(st.iterate, basis).norm() < 1e-12);
  CHECK_THROWS_AS(minimize_E(TangentVectorField::constant(fr), 0.5 / 16), NumericalError);
}

TEST_CASE("flux of canonical fields reproduces the lattice vector") {
  auto m = make_flat_torus(16, 1.0 / 16);
  CanonicalSolver cs(m);
  auto lat = cs.lattice({}, {});
  VortexConfiguration cfg{{}, {}, lat.point(Eigen::Vector2i(1, -1))};
  auto u = cs.reconstruct(cs.jstar(cfg), {}).u;
  CHECK((flux(u, cs.basis()) - cfg.phi).norm() <= 1e-6);
}

TEST_CASE("minimizer on the sphere has two positive vortices") {
  auto m = make_icosphere(4);
  auto fr = build_frame(m);
  auto st = minimize_E(fr, 0.2, 1);
  CHECK(st.converged);
  CHECK(st.seed == 1u);
  for (std::size_t i = 1; i < st.energy_history.size(); ++i)
    CHECK(st.energy_history[i] <= st.energy_history[i - 1] + 1e-12 * (1.0 + std::abs(st.energy_history[i - 1])));
  auto v = detect_vortices(st.iterate);
  REQUIRE(v.size() == 2);
  CHECK(v[0].degree == 1);
  CHECK(v[1].degree == 1);
  // Deterministic given the seed.
  CHECK(minimize_E(fr, 0.2, 1).energy() == st.energy());

  // Vorticity mass near each detected vortex.
  GeodesicSolver geo(m);
  auto omega = vorticity(st.iterate);
  for (const auto& x : v) {
    auto df = geo.distance_field(x.point, 0.6);
    double mass = 0.0;
    for (int f = 0; f < m.num_faces(); ++f) {
      const auto& t = m.face(f);
      if (df.vertex[t[0]] + df.vertex[t[1]] + df.vertex[t[2]] < 1.8) mass += omega[f];
    }
    CHECK(mass == doctest::Approx(kTwoPi).epsilon(0.15));
  }
}

TEST_CASE("minimization is invariant under a global phase") {
  auto m = make_icosphere(3);
  auto fr = build_frame(m);
  auto u = random_field(fr, 4);
  auto a = minimize_E(u, 0.3);
  u.z *= std::polar(1.0, 0.7);
  auto b = minimize_E(u, 0.3);
  CHECK(a.converged);
  CHECK(b.converged);
  CHECK(std::abs(a.energy() - b.energy()) <= 1e-9);
  MinimizeOptions serial;
  serial.parallel = false;
  u.z *= std::polar(1.0, -0.7);
  CHECK(minimize_E(u, 0.3, PotentialF{}, serial).energy() == doctest::Approx(a.energy()).epsilon(1e-10));
}

TEST_CASE("vortex detection on canonical fields") {
  auto m = make_icosphere(4);
  CanonicalSolver cs(m);
  auto cfg = antipodal_pair(m);
  auto u = cs.reconstruct(cs.jstar(cfg), cfg.a).u;
  auto v = detect_vortices(u);
  REQUIRE(v.size() == 2);
  const double h = m.mean_edge_length();
  for (const auto& x : v) {
    CHECK(x.degree == 1);
    double best = 1e9;
    for (const auto& a : cfg.a) best = std::min(best, (embed(m, x.point) - embed(m, a)).norm());
    CHECK(best <= 2.0 * h);
  }
}

TEST_CASE("recovery sequence") {
  SUBCASE("flat torus without vortices is the canonical field") {
    auto m = make_flat_torus(32, 1.0 / 32);
    RenormalizedEnergy ctx(m);
    auto lat = ctx.canonical().lattice({}, {});
    VortexConfiguration cfg{{}, {}, lat.point(Eigen::Vector2i(1, 0))};
    auto rec = recovery_sequence(ctx, cfg, 0.1);
    GLEnergy E(ctx.canonical().frame(), PotentialF{}, 0.1);
    double e = E.evaluate(rec.u.z);
    CHECK(e == doctest::Approx(0.5 * cfg.phi.squaredNorm()).epsilon(0.01));
    for (int v = 0; v < rec.u.size(); ++v) CHECK(std::abs(std::abs(rec.u.z[v]) - 1.0) < 1e-12);
  }
  SUBCASE("antipodal pair on the sphere") {
    auto m = make_icosphere(4);
    RenormalizedEnergy ctx(m);
    auto cfg = antipodal_pair(m);
    auto rec = recovery_sequence(ctx, cfg, 0.2);
    CHECK(rec.rho >= 5.0 * ctx.h());
    CHECK(rec.profile.f.back() == 1.0);
    GLEnergy E(ctx.canonical().frame(), PotentialF{}, 0.2);
    double e_rec = E.evaluate(rec.u.z);
    auto st = minimize_E(rec.u, 0.2);
    CHECK(st.converged);
    CHECK(st.energy() <= e_rec + 1e-6);
    auto v = detect_vortices(rec.u);
    CHECK(v.size() == 2);
    // Modulus is continuous across the interface.
    auto df = ctx.geodesics().distance_field(cfg.a[0]);
    double jump = 0.0;
    for (int x = 0; x < m.num_vertices(); ++x)
      if (std::abs(df.vertex[x] - rec.rho) < ctx.h()) jump = std::max(jump, std::abs(std::abs(rec.u.z[x]) - 1.0));
    CHECK(jump < 0.02);

    VortexConfiguration bad = cfg;
    bad.d = {2, 0};
    CHECK_THROWS_AS(recovery_sequence(ctx, bad, 0.2), NumericalError);
    CHECK_THROWS_WITH_AS(recovery_sequence(ctx, cfg, 0.5 * ctx.h()), doctest::Contains("too small"), NumericalError);
  }
}

TEST_CASE("expansion experiment on the flat torus") {
  auto m = make_flat_torus(16, 1.0 / 16);
  RenormalizedEnergy ctx(m);
  auto rec = expansion_experiment(ctx, {0.1, 0.2}, {1, 2});
  REQUIRE(rec.rows.size() == 2);
  CHECK(rec.rows[0].eps == 0.2);
  for (const auto& r : rec.rows) {
    CHECK(r.converged);
    CHECK(r.n == 0);
    CHECK(r.degree_sum == 0);
    CHECK(r.W == doctest::Approx(0.5 * r.phi_projected.squaredNorm()).epsilon(1e-12));
    CHECK((r.phi_measured - r.phi_projected).norm() <= 0.1 * kTwoPi);
    CHECK(std::abs(r.defect) < 0.05);
  }
  CHECK(rec.gamma == doctest::Approx(1.19658).epsilon(1e-3));
  CHECK(rec.defect_decreasing);
  CHECK(rec.liminf_holds);
  std::ostringstream csv;
  write_expansion_csv(csv, rec);
  CHECK(csv.str().rfind("eps,energy,reduced,n,W,defect,vorticity_distance\n", 0) == 0);
}
