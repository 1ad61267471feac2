#include <doctest.h>

#include <cmath>
#include <random>

#include "glv/connection.hpp"

using namespace glv;

namespace {

double holonomy_error(const FrameField& frame) {
  const auto& m = frame.mesh();
  double worst = 0.0;
  for (int f = 0; f < m.num_faces(); ++f)
    worst = std::max(worst, std::abs(wrap_angle(frame.holonomy(f) - m.face_curvature(f))));
  return worst;
}

}  // namespace

TEST_CASE("holonomy equals face curvature") {
  for (const auto& m : {make_icosphere(3), make_flat_torus(8), make_revolution_torus(2.0, 0.6, 30, 12),
                        make_genus2(5)}) {
    auto frame = build_frame(m);
    CHECK(holonomy_error(frame) < 1e-12);
    int total = 0;
    for (int f = 0; f < m.num_faces(); ++f) total += frame.frame_index(f);
    CHECK(total == m.euler_characteristic());
  }
}

TEST_CASE("flat torus aligned frames have zero connection") {
  auto m = make_flat_torus(7);
  auto frame = build_frame(m);
  CHECK(frame.connection().values.cwiseAbs().maxCoeff() < 1e-12);
  auto u = TangentVectorField::constant(frame);
  PotentialF F;
  CHECK(gl_energy(u, F, 0.1) == 0.0);
  CHECK(j_form(u).values.cwiseAbs().maxCoeff() == 0.0);
  auto zero = TangentVectorField::constant(frame, 0.0);
  CHECK(gl_energy(zero, F, 0.1) == doctest::Approx(m.total_area() / (4.0 * 0.01)));
}

TEST_CASE("random frames change A only by an exact form") {
  auto m = make_icosphere(2);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::vector<double> off(m.num_vertices());
  for (auto& x : off) x = u(rng);
  auto f0 = build_frame(m), f1 = build_frame(m, off);
  CHECK(holonomy_error(f1) < 1e-12);
  for (int f = 0; f < m.num_faces(); ++f) CHECK(std::abs(wrap_angle(f0.holonomy(f) - f1.holonomy(f))) < 1e-12);

  // A unit field expressed in both frames has the same energy and current.
  TangentVectorField a = TangentVectorField::constant(f0);
  for (int v = 0; v < m.num_vertices(); ++v) a.z[v] = std::polar(1.0, u(rng));
  TangentVectorField b = a;
  b.frame = &f1;
  for (int v = 0; v < m.num_vertices(); ++v) b.z[v] = a.z[v] * std::polar(1.0, -off[v]);
  CHECK(std::abs(dirichlet_energy(a) - dirichlet_energy(b)) < 1e-10);
  CHECK((j_form(a).values - j_form(b).values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("phase invariance of j") {
  auto m = make_icosphere(2);
  auto frame = build_frame(m);
  std::mt19937 rng(8);
  std::normal_distribution<double> g;
  TangentVectorField u = TangentVectorField::constant(frame);
  for (int v = 0; v < m.num_vertices(); ++v) u.z[v] = Complex(g(rng), g(rng));
  TangentVectorField w = u;
  w.z *= std::polar(1.0, 0.73);
  CHECK((j_form(u).values - j_form(w).values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("linear phase on the flat torus") {
  const int n = 16;
  auto m = make_flat_torus(n, 1.0 / n);
  auto frame = build_frame(m);
  auto [dx, dy] = flat_torus_coordinate_forms(m, n, 1.0 / n);
  TangentVectorField u = TangentVectorField::constant(frame);
  for (int v = 0; v < m.num_vertices(); ++v) {
    double x = (v % n) / double(n), y = (v / n) / double(n);
    u.z[v] = std::polar(1.0, kTwoPi * (x + 2.0 * y));
  }
  Eigen::VectorXd expected = kTwoPi * (dx + 2.0 * dy);
  CHECK((j_form(u).values - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sphere constant field energy") {
  auto m = make_icosphere(3);
  auto frame = build_frame(m);
  auto u = TangentVectorField::constant(frame);
  double direct = 0.0;
  for (int e = 0; e < m.num_edges(); ++e)
    direct += 0.5 * m.cotan_weight(e) * std::norm(1.0 - std::polar(1.0, -frame.connection()[e]));
  CHECK(dirichlet_energy(u) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(dirichlet_energy(u) > 0.0);
  double per_face = 0.0;
  for (double x : dirichlet_energy_per_face(u)) per_face += x;
  CHECK(per_face == doctest::Approx(dirichlet_energy(u)).epsilon(1e-12));
}

TEST_CASE("potential contract") {
  PotentialF F;
  CHECK(F.validate());
  PotentialF bad;
  bad.value = [](double s) { return 1.0 - s; };
  CHECK_FALSE(bad.validate());
  auto m = make_flat_torus(4);
  auto frame = build_frame(m);
  CHECK_THROWS_AS(potential_energy(TangentVectorField::constant(frame), F, 0.0), NumericalError);
}
