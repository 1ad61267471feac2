#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "glv/profile.hpp"

using namespace glv;

namespace {

// Euler-Lagrange shooting for F(s) = (1 - s)^2: f'' + f'/r - f/r^2 + f (1 - f^2) / t^2 = 0.
struct Shot {
  std::vector<double> r, f, df;
};

Shot shoot(double c, double t, int steps) {
  const double r0 = 1e-4 * t;
  auto rhs = [t](double r, double f, double g) {
    return std::array<double, 2>{g, -g / r + f / (r * r) - f * (1.0 - f * f) / (t * t)};
  };
  Shot s;
  double f = c * r0, g = c, r = r0;
  const double dr = (1.0 - r0) / steps;
  s.r.push_back(r);
  s.f.push_back(f);
  s.df.push_back(g);
  for (int i = 0; i < steps; ++i) {
    auto k1 = rhs(r, f, g);
    auto k2 = rhs(r + dr / 2, f + dr / 2 * k1[0], g + dr / 2 * k1[1]);
    auto k3 = rhs(r + dr / 2, f + dr / 2 * k2[0], g + dr / 2 * k2[1]);
    auto k4 = rhs(r + dr, f + dr * k3[0], g + dr * k3[1]);
    f += dr / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]);
    g += dr / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]);
    r += dr;
    s.r.push_back(r);
    s.f.push_back(f);
    s.df.push_back(g);
    if (std::abs(f) > 10.0) break;
  }
  return s;
}

double shooting_energy(double t) {
  const int steps = 40000;
  double lo = 0.0, hi = 10.0 / t;
  Shot s;
  for (int it = 0; it < 200; ++it) {
    double c = 0.5 * (lo + hi);
    s = shoot(c, t, steps);
    bool over = s.f.size() < static_cast<std::size_t>(steps + 1) || s.f.back() > 1.0;
    (over ? hi : lo) = c;
  }
  s = shoot(0.5 * (lo + hi), t, steps);
  // Simpson on the uniform part plus the inner disc (f = c r there).
  double e = 0.0;
  const double dr = s.r[1] - s.r[0];
  for (std::size_t i = 0; i < s.r.size(); ++i) {
    double r = s.r[i], f = s.f[i], g = s.df[i];
    double v = (g * g + f * f / (r * r) + (1.0 - f * f) * (1.0 - f * f) / (2.0 * t * t)) * r;
    double w = (i == 0 || i + 1 == s.r.size()) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    e += w * v;
  }
  e *= dr / 3.0;
  double c = 0.5 * (lo + hi);
  e += c * c * s.r[0] * s.r[0];
  return kPi * e;
}

}  // namespace

TEST_CASE("radial problem scaling identity") {
  CHECK(std::abs(I_F(2.0, 0.2) - I_F(1.0, 0.1)) <= 1e-8);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> R(0.2, 5.0), t(0.002, 0.5);
  for (int i = 0; i < 10; ++i) {
    double r = R(rng), x = t(rng);
    CHECK(std::abs(I_F(r, x * r) - I_F(1.0, x)) <= 1e-8);
  }
}

TEST_CASE("radial profile shape") {
  for (double t : {0.9, 0.3, 1e-2, 1e-3}) {
    auto res = I_F(t);
    const auto& p = res.profile;
    CHECK(p.f.front() == 0.0);
    CHECK(p.f.back() == 1.0);
    CHECK(std::isfinite(res.value));
    for (std::size_t i = 1; i < p.f.size(); ++i) {
      CHECK(p.f[i] >= 0.0);
      CHECK(p.f[i] <= 1.0 + 1e-6);
      CHECK(p.f[i] >= p.f[i - 1] - 1e-9);
    }
    CHECK(res.error_estimate < 1e-3);
  }
  double prev = 1e300;
  for (double t : {1e-3, 1e-2, 0.1, 0.3, 0.6, 0.9}) {
    double v = I_F(t, {}, {}, false).value;
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("radial energy against refinement and shooting") {
  auto res = I_F(1e-2);
  RadialGrid fine{800, 1e-3};
  double brute = radial_profile(1.0, 1e-2, {}, fine).value;
  CHECK(std::abs(res.extrapolated - brute) <= 1e-5);
  double shot = shooting_energy(0.1);
  CHECK(std::abs(I_F(0.1).extrapolated - shot) <= 1e-5);
}

TEST_CASE("core constant") {
  auto g = gamma_F();
  CHECK(g.value > 0.0);
  CHECK(g.cauchy);
  CHECK(g.differences.back() <= 1e-3);
  for (std::size_t i = 1; i < g.differences.size(); ++i) CHECK(g.differences[i] <= g.differences[i - 1]);
  CHECK(std::abs(g.value - 1.19658) <= 1e-3);
  CHECK(g.grid_change <= 1e-3);

  std::vector<double> dense;
  for (int k = 0; k <= 20; ++k) dense.push_back(0.1 * std::pow(0.5, 0.5 * k));
  CHECK(std::abs(gamma_F({}, dense).value - g.value) < 1e-4);

  std::ostringstream csv;
  write_gamma_csv(csv, g);
  CHECK(csv.str().rfind("t,I_F,g\n", 0) == 0);

  CHECK_THROWS_AS(gamma_F({}, {0.9, 0.8, 0.7}), NumericalError);
  PotentialF bad;
  bad.value = [](double s) { return (1.0 - s) * (1.0 - s) + 0.1; };
  CHECK_THROWS_AS(gamma_F(bad), NumericalError);
}
