#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "glv/potential.hpp"

using namespace glv;

namespace {

SurfacePoint random_point(const SurfaceMesh& m, std::mt19937& rng) {
  std::uniform_int_distribution<int> face(0, m.num_faces() - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double a = u(rng), b = u(rng);
  if (a + b > 1.0) {
    a = 1.0 - a;
    b = 1.0 - b;
  }
  return {face(rng), Eigen::Vector3d(1.0 - a - b, a, b)};
}

int antipode(const SurfaceMesh& m, int v) {
  for (int u = 0; u < m.num_vertices(); ++u)
    if ((m.position(u) + m.position(v)).norm() < 1e-9) return u;
  return -1;
}

double sphere_green(double d) { return -(std::log(std::sin(0.5 * d)) + 0.5) / kTwoPi; }

}  // namespace

TEST_CASE("Green symmetry and normalization") {
  auto m = make_icosphere(3);
  GreenOperator G(m);
  std::mt19937 rng(2);
  for (int i = 0; i < 50; ++i) {
    auto x = random_point(m, rng), y = random_point(m, rng);
    CHECK(std::abs(G.value(x, y) - G.value(y, x)) <= 1e-8);
  }
  auto g = G.green(random_point(m, rng));
  CHECK(std::abs(integrate(m, g)) <= 1e-10);
}

TEST_CASE("sphere Green function against oracles") {
  auto m = make_icosphere(3);
  GreenOperator G(m);
  int v = 5, w = antipode(m, 5);
  REQUIRE(w >= 0);
  // Dense oracle for the same discrete problem.
  Eigen::MatrixXd L = Eigen::MatrixXd(cotan_laplacian(m));
  Eigen::VectorXd mass(m.num_vertices());
  for (int u = 0; u < m.num_vertices(); ++u) mass[u] = m.dual_area(u);
  Eigen::MatrixXd A = L + mass * mass.transpose();
  Eigen::VectorXd rhs = -mass / m.total_area();
  rhs[v] += 1.0;
  Eigen::VectorXd x = A.ldlt().solve(rhs);
  x.array() -= mass.dot(x) / m.total_area();
  CHECK(std::abs(x[w] - G.column(v)[w]) < 1e-6);
  // Continuum value at the antipode, -1 / (4 pi).
  CHECK(G.column(v)[w] == doctest::Approx(-1.0 / (4.0 * kPi)).epsilon(0.02));
  CHECK(sphere_green(kPi) == doctest::Approx(-1.0 / (4.0 * kPi)));
}

TEST_CASE("logarithmic singularity") {
  auto m = make_icosphere(4);
  GreenOperator G(m);
  const double h = G.h();
  auto y = SurfacePoint::centroid(100);
  auto field = G.geodesics().distance_field(y, 11.0 * h);
  auto g = G.green(y);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int v = 0; v < m.num_vertices(); ++v) {
    double d = field.vertex[v];
    if (d < 3.0 * h || d > 10.0 * h) continue;
    double lx = -std::log(d) / kTwoPi;
    sx += lx;
    sy += g[v];
    sxx += lx * lx;
    sxy += lx * g[v];
    ++n;
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("regular part on the sphere") {
  auto m = make_icosphere(4);
  GreenOperator G(m);
  std::mt19937 rng(4);
  const double exact = (std::log(2.0) - 0.5) / kTwoPi;
  std::vector<double> vals;
  for (int i = 0; i < 5; ++i) vals.push_back(G.regular_diagonal(random_point(m, rng)));
  double mean = 0.0;
  for (double v : vals) mean += v / vals.size();
  for (double v : vals) CHECK(std::abs(v - mean) <= 0.02 * std::abs(mean));
  CHECK(mean == doctest::Approx(exact).epsilon(0.05));
  auto hp = G.regular_part(m.vertex_point(0), 10.0 * G.h());
  CHECK(hp[0] == doctest::Approx(G.regular_diagonal(m.vertex_point(0))));
}

TEST_CASE("flat torus regular part is translation invariant") {
  auto m = make_flat_torus(48, 1.0 / 48);
  GreenOperator G(m);
  double a = G.regular_diagonal(m.vertex_point(0));
  double b = G.regular_diagonal(m.vertex_point(48 * 17 + 29));
  CHECK(std::abs(a - b) < 1e-3);
}

TEST_CASE("curvature potential") {
  auto sphere = make_icosphere(3);
  auto c = psi0(sphere);
  CHECK(c.psi0.values.cwiseAbs().maxCoeff() < 1e-2);
  CHECK(c.residual < 1e-9);
  CHECK(std::abs(integrate(sphere, c.psi0)) < 1e-12);

  auto torus = make_flat_torus(8);
  auto t = psi0(torus);
  CHECK(t.psi0.values.cwiseAbs().maxCoeff() == 0.0);
  CHECK(curvature_dirichlet(torus, t) == 0.0);

  auto rev = make_revolution_torus(2.0, 0.7, 32, 12);
  auto r = psi0(rev);
  CHECK(r.residual < 1e-9);
  CHECK(curvature_dirichlet(rev, r) > 0.0);
}

TEST_CASE("vortex potential decomposition") {
  auto m = make_icosphere(3);
  LaplaceSolver solver(m);
  GreenOperator G(m);
  int v = 9, w = antipode(m, 9);
  std::vector<SurfacePoint> a{m.vertex_point(v), m.vertex_point(w)};
  auto p = psi(m, solver, a, {1, 1});
  CHECK(p.residual < 1e-9);
  auto c = psi0(m, solver);
  Eigen::VectorXd expect = kTwoPi * (G.column(v) + G.column(w)) + c.psi0.values;
  CHECK((p.psi.values - expect).cwiseAbs().maxCoeff() < 1e-8);
  CHECK_THROWS_WITH_AS(psi(m, solver, a, {1, 2}), doctest::Contains("Poincare-Hopf violation"), NumericalError);
}
