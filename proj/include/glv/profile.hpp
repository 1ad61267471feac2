#pragma once

#include <iosfwd>
#include <vector>

#include "glv/connection.hpp"

namespace glv {

/// Geometric grid on [0, R]: nodes R q^{k - N} down to `inner` * eps, plus r = 0.
struct RadialGrid {
  int nodes_per_decade = 80;
  double inner = 1e-2;  ///< Innermost positive node in units of eps.

  RadialGrid doubled() const { return {2 * nodes_per_decade, 0.5 * inner}; }
  std::vector<double> nodes(double R, double eps) const;
};

struct RadialProfile {
  std::vector<double> r;
  std::vector<double> f;  ///< f(0) = 0, f(R) = 1.
  double value = 0.0;
  int iterations = 0;
  double gradient_norm = 0.0;
};

/// pi * integral over [0, R] of (f'^2 + f^2 / r^2 + F(f^2) / (2 eps^2)) r dr for P1 f on the grid.
double radial_energy(const std::vector<double>& r, const std::vector<double>& f, const PotentialF& F, double eps);

/// Discrete minimizer of the radial core problem on [0, R]. Throws on non-convergence.
RadialProfile radial_profile(double R, double eps, const PotentialF& F = {}, const RadialGrid& grid = {});

struct IFResult {
  double value = 0.0;           ///< Discrete minimum on the given grid.
  double error_estimate = 0.0;  ///< |I(grid) - I(doubled grid)| / 3.
  double extrapolated = 0.0;    ///< Richardson value from the grid and its doubling.
  RadialProfile profile;
};

/// I_F(1, t), with the discretization error estimated by one grid doubling when `estimate` is set.
IFResult I_F(double t, const PotentialF& F = {}, const RadialGrid& grid = {}, bool estimate = true);
/// I_F(R, eps) solved directly on [0, R].
double I_F(double R, double eps, const PotentialF& F = {}, const RadialGrid& grid = {});

struct GammaResult {
  double value = 0.0;               ///< Extrapolated constant.
  std::vector<double> t;
  std::vector<double> g;            ///< I_F(t) + pi log t, Richardson-corrected in the grid.
  std::vector<double> differences;  ///< |g_i - g_{i+1}|.
  double grid_change = 0.0;         ///< Change of the value under one grid doubling.
  bool cauchy = false;              ///< Tail difference below 1e-3 and differences non-increasing.
};

/// Default sequence 0.1 * 2^{-k}, k = 0..10.
std::vector<double> default_t_sequence();

/// lim_{t -> 0} (I_F(t) + pi log t). Throws when the tail is not Cauchy or the value is not positive.
GammaResult gamma_F(const PotentialF& F = {}, const std::vector<double>& t = default_t_sequence(),
                    const RadialGrid& grid = {});

/// CSV rows "t,I_F,g".
void write_gamma_csv(std::ostream& out, const GammaResult& g);

}  // namespace glv
