#include "glv/profile.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

namespace glv {

namespace {

constexpr double kGaussX[3] = {0.11270166537925831, 0.5, 0.88729833462074169};
constexpr double kGaussW[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

struct Assembly {
  double energy = 0.0;
  std::vector<double> grad, diag, off;  ///< off[i] couples nodes i and i + 1.
};

/// The first element carries f(0) = 0, where the f^2 / r term integrates to f_1^2 / 2.
Assembly assemble(const std::vector<double>& r, const std::vector<double>& f, const PotentialF& F, double eps,
                  bool derivatives) {
  const int n = static_cast<int>(r.size());
  Assembly out;
  if (derivatives) {
    out.grad.assign(n, 0.0);
    out.diag.assign(n, 0.0);
    out.off.assign(n - 1, 0.0);
  }
  const double inv = 1.0 / (2.0 * eps * eps);
  for (int i = 0; i + 1 < n; ++i) {
    const double r0 = r[i], r1 = r[i + 1], dr = r1 - r0;
    const double c = 0.5 * (r1 + r0) / dr;
    const double df = f[i + 1] - f[i];
    out.energy += c * df * df;
    if (derivatives) {
      out.grad[i] -= 2.0 * c * df;
      out.grad[i + 1] += 2.0 * c * df;
      out.diag[i] += 2.0 * c;
      out.diag[i + 1] += 2.0 * c;
      out.off[i] -= 2.0 * c;
    }
    if (r0 == 0.0) {
      out.energy += 0.5 * f[i + 1] * f[i + 1];
      if (derivatives) {
        out.grad[i + 1] += f[i + 1];
        out.diag[i + 1] += 1.0;
      }
    }
    for (int g = 0; g < 3; ++g) {
      const double n1 = kGaussX[g], n0 = 1.0 - n1;
      const double rq = r0 + n1 * dr;
      const double fq = n0 * f[i] + n1 * f[i + 1];
      const double wr = r0 == 0.0 ? 0.0 : kGaussW[g] * dr / rq;
      const double w = kGaussW[g] * dr * rq * inv;
      const double s = fq * fq;
      out.energy += wr * s + w * F.value(s);
      if (derivatives) {
        const double d1 = 2.0 * wr * fq + w * 2.0 * fq * F.derivative(s);
        const double d2 = 2.0 * wr + w * (2.0 * F.derivative(s) + 4.0 * s * F.second(s));
        out.grad[i] += d1 * n0;
        out.grad[i + 1] += d1 * n1;
        out.diag[i] += d2 * n0 * n0;
        out.diag[i + 1] += d2 * n1 * n1;
        out.off[i] += d2 * n0 * n1;
      }
    }
  }
  out.energy *= kPi;
  if (derivatives) {
    for (auto& x : out.grad) x *= kPi;
    for (auto& x : out.diag) x *= kPi;
    for (auto& x : out.off) x *= kPi;
  }
  return out;
}

/// Solves the tridiagonal system (diag + shift, off) x = rhs; false if a pivot is not positive.
bool solve_tridiagonal(std::vector<double> diag, const std::vector<double>& off, std::vector<double> rhs,
                       double shift, std::vector<double>& x) {
  const int n = static_cast<int>(diag.size());
  for (auto& d : diag) d += shift;
  std::vector<double> c(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      diag[i] -= off[i - 1] * c[i - 1];
      rhs[i] -= off[i - 1] * rhs[i - 1] / diag[i - 1];
    }
    if (!(diag[i] > 0.0)) return false;
    if (i + 1 < n) c[i] = off[i] / diag[i];
  }
  x.assign(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    x[i] = rhs[i] / diag[i];
    if (i + 1 < n) x[i] -= c[i] * x[i + 1];
  }
  return true;
}

}  // namespace

std::vector<double> RadialGrid::nodes(double R, double eps) const {
  if (!(R > 0.0) || !(eps > 0.0)) throw NumericalError("radial grid needs R > 0 and eps > 0");
  const double r_min = std::min(inner * eps, 0.25 * R);
  const double q = std::pow(10.0, 1.0 / nodes_per_decade);
  std::vector<double> all{0.0, R};
  for (double d = r_min; d <= 0.5 * R; d *= q) {
    all.push_back(d);
    all.push_back(R - d);
  }
  std::sort(all.begin(), all.end());
  std::vector<double> r{0.0, r_min};
  for (double x : all) {
    if (x <= r_min || x >= R) continue;
    if (x - r.back() >= 0.5 * (q - 1.0) * std::min(x, R - x)) r.push_back(x);
  }
  if (R - r.back() < 0.25 * (q - 1.0) * r_min) r.pop_back();
  r.push_back(R);
  return r;
}

double radial_energy(const std::vector<double>& r, const std::vector<double>& f, const PotentialF& F, double eps) {
  return assemble(r, f, F, eps, false).energy;
}

RadialProfile radial_profile(double R, double eps, const PotentialF& F, const RadialGrid& grid) {
  RadialProfile p;
  p.r = grid.nodes(R, eps);
  const int n = static_cast<int>(p.r.size());
  const double norm = 1.0 / std::sqrt(1.0 + 2.0 * (eps / R) * (eps / R));
  p.f.resize(n);
  for (int i = 0; i < n; ++i) p.f[i] = p.r[i] / std::sqrt(p.r[i] * p.r[i] + 2.0 * eps * eps) / norm;
  p.f[0] = 0.0;
  p.f[n - 1] = 1.0;

  const int m = n - 2;
  double energy = 0.0;
  for (int it = 0; it < 100; ++it) {
    auto a = assemble(p.r, p.f, F, eps, true);
    energy = a.energy;
    std::vector<double> g(a.grad.begin() + 1, a.grad.end() - 1);
    std::vector<double> d(a.diag.begin() + 1, a.diag.end() - 1);
    std::vector<double> o(a.off.begin() + 1, a.off.end() - 1);
    double gnorm = 0.0;
    for (double x : g) gnorm = std::max(gnorm, std::abs(x));
    p.gradient_norm = gnorm;
    p.iterations = it;
    for (auto& x : g) x = -x;
    std::vector<double> step;
    double shift = 0.0;
    while (!solve_tridiagonal(d, o, g, shift, step)) shift = shift == 0.0 ? 1e-8 * (1.0 + std::abs(d[0])) : 10.0 * shift;
    double slope = 0.0, smax = 0.0;
    for (int i = 0; i < m; ++i) {
      slope -= g[i] * step[i];
      smax = std::max(smax, std::abs(step[i]));
    }
    if (smax < 1e-13 || std::abs(slope) < 1e-18 * std::max(1.0, std::abs(energy))) {
      p.value = energy;
      return p;
    }
    double alpha = 1.0;
    std::vector<double> trial = p.f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (int i = 0; i < m; ++i) trial[i + 1] = p.f[i + 1] + alpha * step[i];
      double e = radial_energy(p.r, trial, F, eps);
      if (e <= energy + 1e-4 * alpha * slope || std::abs(e - energy) <= 1e-15 * std::abs(energy)) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (std::abs(slope) < 1e-14 * std::max(1.0, std::abs(energy))) {
        p.value = energy;
        return p;
      }
      break;
    }
    p.f = trial;
  }
  std::ostringstream s;
  s << "radial profile Newton iteration did not converge (eps " << eps << ", R " << R << ", gradient "
    << p.gradient_norm << ")";
  throw NumericalError(s.str());
}

IFResult I_F(double t, const PotentialF& F, const RadialGrid& grid, bool estimate) {
  if (!(t > 0.0 && t < 1.0)) throw NumericalError("I_F needs t in (0, 1)");
  IFResult out;
  out.profile = radial_profile(1.0, t, F, grid);
  out.value = out.profile.value;
  out.extrapolated = out.value;
  if (estimate) {
    double fine = radial_profile(1.0, t, F, grid.doubled()).value;
    out.error_estimate = std::abs(out.value - fine) / 3.0;
    out.extrapolated = fine + (fine - out.value) / 3.0;
  }
  return out;
}

double I_F(double R, double eps, const PotentialF& F, const RadialGrid& grid) {
  return radial_profile(R, eps, F, grid).value;
}

std::vector<double> default_t_sequence() {
  std::vector<double> t;
  for (int k = 0; k <= 10; ++k) t.push_back(0.1 * std::pow(0.5, k));
  return t;
}

namespace {

std::vector<double> corrected_g(const PotentialF& F, const std::vector<double>& t, const RadialGrid& grid) {
  std::vector<double> g;
  for (double x : t) {
    double coarse = radial_profile(1.0, x, F, grid).value;
    double fine = radial_profile(1.0, x, F, grid.doubled()).value;
    g.push_back(fine + (fine - coarse) / 3.0 + kPi * std::log(x));
  }
  return g;
}

}  // namespace

GammaResult gamma_F(const PotentialF& F, const std::vector<double>& t, const RadialGrid& grid) {
  std::string why;
  if (!F.validate(&why)) throw NumericalError("potential F rejected: " + why);
  if (t.size() < 3) throw NumericalError("gamma_F needs at least three values of t");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] < t[i - 1])) throw NumericalError("t-sequence must be decreasing");
  GammaResult out;
  out.t = t;
  out.g = corrected_g(F, t, grid);
  for (std::size_t i = 1; i < t.size(); ++i) out.differences.push_back(std::abs(out.g[i] - out.g[i - 1]));
  out.value = out.g.back();
  std::vector<double> tail{t.back()};
  out.grid_change = std::abs(corrected_g(F, tail, grid.doubled())[0] - out.value);
  const std::size_t k = out.differences.size();
  out.cauchy = out.differences.back() <= 1e-3 && out.differences[k - 1] <= out.differences[k - 2] + 1e-9;
  if (!out.cauchy) {
    std::ostringstream s;
    s << "non-Cauchy tail in gamma_F: last difference " << out.differences.back();
    throw NumericalError(s.str());
  }
  if (!(out.value > 0.0)) throw NumericalError("gamma_F is not positive");
  return out;
}

void write_gamma_csv(std::ostream& out, const GammaResult& g) {
  out.precision(17);
  out << "t,I_F,g\n";
  for (std::size_t i = 0; i < g.t.size(); ++i) out << g.t[i] << ',' << g.g[i] - kPi * std::log(g.t[i]) << ',' << g.g[i] << '\n';
}

}  // namespace glv
