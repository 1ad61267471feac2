#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "glv/exterior.hpp"

using namespace glv;

TEST_CASE("d1 d0 vanishes exactly") {
  for (const auto& m : {make_icosphere(2), make_flat_torus(6), make_genus2(5)}) {
    SparseMatrix dd = d1(m) * d0(m);
    double worst = 0.0;
    for (int k = 0; k < dd.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(dd, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    CHECK(worst == 0.0);
    Cochain0 c(Eigen::VectorXd::Constant(m.num_vertices(), 2.5));
    CHECK(apply_d0(m, c).values.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("constant forms on the flat torus") {
  const int n = 8;
  auto m = make_flat_torus(n);
  auto [dx, dy] = flat_torus_coordinate_forms(m, n);
  Cochain1 a(0.3 * dx + 1.7 * dy);
  CHECK(apply_d1(m, a).values.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(apply_codifferential(m, a).values.cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("hodge stars") {
  auto m = make_icosphere(3);
  CHECK(Eigen::VectorXd(SparseMatrix(hodge0(m)).diagonal()).sum() == doctest::Approx(m.total_area()).epsilon(1e-12));
  CHECK(Eigen::VectorXd(SparseMatrix(hodge2(m)).diagonal()).minCoeff() > 0.0);
}

TEST_CASE("codifferential is the adjoint of d0") {
  auto m = make_icosphere(2);
  SparseMatrix ds = codifferential1(m);
  SparseMatrix h0 = hodge0(m), h1 = hodge1(m), dd = d0(m);
  std::mt19937 rng(11);
  std::normal_distribution<double> g;
  for (int i = 0; i < 20; ++i) {
    Eigen::VectorXd a(m.num_edges()), z(m.num_vertices());
    for (auto& x : a) x = g(rng);
    for (auto& x : z) x = g(rng);
    double lhs = (ds * a).dot(h0 * z);
    double rhs = a.dot(h1 * (dd * z));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    // Matrix-free version agrees.
    Eigen::VectorXd mf = apply_codifferential(m, Cochain1(a)).values;
    CHECK((mf - ds * a).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + mf.cwiseAbs().maxCoeff()));
    // d* d f = M^{-1} L f.
    Eigen::VectorXd lf = cotan_laplacian(m) * z;
    Eigen::VectorXd dsd = ds * (dd * z);
    for (int v = 0; v < m.num_vertices(); ++v) CHECK(std::abs(dsd[v] - lf[v] / m.dual_area(v)) < 1e-9);
  }
}

TEST_CASE("Poisson solve") {
  auto m = make_flat_torus(12, 0.25);
  LaplaceSolver solver(m);
  auto zero = solve_poisson2(solver, DualCochain2::zero(m));
  CHECK(zero.values.cwiseAbs().maxCoeff() == 0.0);

  DualCochain2 rhs = DualCochain2::zero(m);
  rhs[5] = 1.0;
  rhs[77] = -1.0;
  auto psi = solve_poisson2(solver, rhs);
  // Dense oracle: L + (1 1^T) is nonsingular; then project to zero lumped mean.
  Eigen::MatrixXd L = Eigen::MatrixXd(cotan_laplacian(m));
  Eigen::MatrixXd A = L + Eigen::MatrixXd::Ones(m.num_vertices(), m.num_vertices());
  Eigen::VectorXd x = A.ldlt().solve(rhs.values);
  double mean = 0.0;
  for (int v = 0; v < m.num_vertices(); ++v) mean += m.dual_area(v) * x[v];
  x.array() -= mean / m.total_area();
  CHECK((x - psi.values).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(std::abs(integrate(m, psi)) < 1e-12);
  CHECK((L * psi.values - rhs.values).norm() <= 1e-9 * rhs.values.norm());

  rhs[3] = 0.5;
  CHECK_THROWS_AS(solve_poisson2(solver, rhs), NumericalError);
}

TEST_CASE("barycentric Dirac keeps its weight") {
  auto m = make_icosphere(1);
  SurfacePoint p{4, Eigen::Vector3d(0.2, 0.3, 0.5)};
  auto d = dirac(m, p, 2.0);
  CHECK(d.values.sum() == doctest::Approx(2.0));
}

TEST_CASE("curvature as forms") {
  auto m = make_icosphere(3);
  CHECK(gaussian_curvature(m).values.sum() == doctest::Approx(4.0 * kPi).epsilon(1e-12));
  CHECK(face_curvature(m).values.sum() == doctest::Approx(4.0 * kPi).epsilon(1e-12));
}
