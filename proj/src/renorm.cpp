#include "glv/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/Dense>

namespace glv {

namespace {

int index_square_sum(const std::vector<int>& d) {
  int s = 0;
  for (int x : d) s += x * x;
  return s;
}

void check_sizes(const VortexConfiguration& config) {
  if (config.a.size() != config.d.size()) throw NumericalError("vortex points and indices differ in length");
}

}  // namespace

RenormalizedEnergy::RenormalizedEnergy(const SurfaceMesh& mesh, std::span<const double> frame_offsets)
    : mesh_(&mesh),
      green_(mesh),
      canonical_(mesh, frame_offsets),
      psi0_(glv::psi0(mesh, green_.solver())),
      coarse_(mesh) {
  curvature_dirichlet_ = curvature_dirichlet(mesh, psi0_);
}

void RenormalizedEnergy::check_flux(const VortexConfiguration& config) const {
  const int n = 2 * mesh_->genus();
  if (config.phi.size() != n) {
    std::ostringstream s;
    s << "flux vector has " << config.phi.size() << " entries, expected " << n;
    throw NumericalError(s.str());
  }
  if (n == 0) return;
  auto lat = canonical_.lattice(config.a, config.d);
  if (!lat.contains(config.phi)) {
    std::ostringstream s;
    s << "flux vector violates the lattice condition (residual " << lat.residual(config.phi) << ")";
    throw NumericalError(s.str());
  }
}

RenormalizedEnergyReport RenormalizedEnergy::formula(const VortexConfiguration& config) const {
  check_sizes(config);
  check_index_sum(*mesh_, config.d);
  const int n = config.size();
  for (int l = 0; l < n; ++l)
    for (int k = l + 1; k < n; ++k)
      if (coarse_.distance(config.a[l], config.a[k]) <= 1e-12) throw NumericalError("coincident vortex points");
  check_flux(config);

  RenormalizedEnergyReport r;
  for (int l = 0; l < n; ++l)
    for (int k = l + 1; k < n; ++k)
      r.terms.interaction += 4.0 * kPi * kPi * config.d[l] * config.d[k] * green_.value(config.a[l], config.a[k]);
  for (int k = 0; k < n; ++k) {
    double hkk = green_.regular_diagonal(config.a[k]);
    r.H.push_back(hkk);
    r.terms.self += 2.0 * kPi * kPi * config.d[k] * config.d[k] * hkk;
    r.terms.psi0_linear += kTwoPi * config.d[k] * glv::evaluate(*mesh_, psi0_.psi0, config.a[k]);
  }
  r.terms.flux = 0.5 * config.phi.squaredNorm();
  r.terms.curvature = curvature_dirichlet_;
  r.W_formula = r.terms.total();
  return r;
}

std::vector<double> form_energy_per_face(const SurfaceMesh& mesh, const Cochain1& x) {
  std::vector<double> out(mesh.num_faces(), 0.0);
  for (int h = 0; h < mesh.num_halfedges(); ++h) {
    double cot = 1.0 / std::tan(mesh.corner_angle(SurfaceMesh::prev(h)));
    double v = x[mesh.edge_of(h)];
    out[SurfaceMesh::face_of(h)] += 0.25 * cot * v * v;
  }
  return out;
}

double min_separation(const GeodesicSolver& geo, const std::vector<SurfacePoint>& a) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l < a.size(); ++l)
    for (std::size_t k = l + 1; k < a.size(); ++k) best = std::min(best, geo.distance(a[l], a[k]));
  return best;
}

std::vector<double> RenormalizedEnergy::default_radii(const VortexConfiguration& config) const {
  const double h = this->h();
  const double sep = min_separation(coarse_, config.a);
  const double inj = coarse_.injectivity_radius();
  std::vector<double> out;
  for (double f : {8.0, 6.0, 5.0, 4.0, 3.0}) {
    double r = f * h;
    if (r < inj && 2.0 * r < sep) out.push_back(r);
  }
  return out;
}

RenormalizedEnergyReport RenormalizedEnergy::limit(const VortexConfiguration& config, std::vector<double> radii) const {
  check_sizes(config);
  check_index_sum(*mesh_, config.d);
  check_flux(config);
  const auto& m = *mesh_;
  const double h = this->h();
  std::sort(radii.begin(), radii.end(), std::greater<>());
  if (radii.size() < 4) throw NumericalError("need at least four radii");
  const double sep = config.size() > 1 ? min_separation(coarse_, config.a) : std::numeric_limits<double>::infinity();
  const double inj = coarse_.injectivity_radius();
  for (double r : radii) {
    std::ostringstream s;
    if (r < 3.0 * h - 1e-12) s << "radius " << r << " below 3h = " << 3.0 * h;
    else if (r >= inj) s << "radius " << r << " not below the injectivity radius " << inj;
    else if (2.0 * r >= sep) s << "radius " << r << " not below half the vortex separation " << sep;
    if (!s.str().empty()) throw NumericalError(s.str());
  }

  RenormalizedEnergyReport rep;
  rep.radii = radii;
  Cochain1 j = canonical_.jstar(config);
  auto energy = form_energy_per_face(m, j);
  std::vector<DistanceField> fields;
  for (const auto& a : config.a) fields.push_back(green_.geodesics().distance_field(a, radii.front() + 2.0 * h));
  const double q = index_square_sum(config.d);
  for (double r : radii) {
    std::vector<double> inside(m.num_faces(), 0.0);
    for (int k = 0; k < config.size(); ++k) {
      auto ball = green_.geodesics().ball(config.a[k], r, fields[k]);
      for (int f = 0; f < m.num_faces(); ++f) inside[f] += ball.face_fraction[f];
    }
    double e = 0.0;
    for (int f = 0; f < m.num_faces(); ++f) e += energy[f] * (1.0 - std::min(1.0, inside[f]));
    rep.partial.push_back(e + kPi * std::log(r) * q);
  }

  const int n = static_cast<int>(radii.size());
  Eigen::MatrixXd a(n, 3);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = radii[i] * radii[i];
    a(i, 2) = h * h / (radii[i] * radii[i]);
    b[i] = rep.partial[i];
  }
  Eigen::Vector3d c = a.colPivHouseholderQr().solve(b);
  rep.W_limit = c[0];
  rep.slope = c[1];
  rep.core = c[2];
  rep.fit_residual = (a * c - b).cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i) rep.corrected.push_back(rep.partial[i] - c[2] * a(i, 2));
  rep.monotone = true;
  for (int i = 2; i < n; ++i) {
    double prev = rep.corrected[i - 2] - rep.corrected[i - 1];
    double step = rep.corrected[i - 1] - rep.corrected[i];
    if (step * prev < 0.0 || std::abs(step) > std::abs(prev) + rep.fit_residual) rep.monotone = false;
  }
  return rep;
}

RenormalizedEnergyReport RenormalizedEnergy::evaluate(const VortexConfiguration& config,
                                                      const std::vector<double>& radii) const {
  auto rep = formula(config);
  auto lim = limit(config, radii);
  rep.W_limit = lim.W_limit;
  rep.radii = lim.radii;
  rep.partial = lim.partial;
  rep.corrected = lim.corrected;
  rep.slope = lim.slope;
  rep.core = lim.core;
  rep.fit_residual = lim.fit_residual;
  rep.monotone = lim.monotone;
  return rep;
}

RenormalizedEnergyReport W_formula(const SurfaceMesh& mesh, const VortexConfiguration& config) {
  return RenormalizedEnergy(mesh).formula(config);
}

RenormalizedEnergyReport W_limit(const SurfaceMesh& mesh, const VortexConfiguration& config,
                                 const std::vector<double>& radii) {
  return RenormalizedEnergy(mesh).limit(config, radii);
}

namespace {

/// Vortex position during the search: vertex v moved toward neighbour w by t.
struct Site {
  int v = 0;
  int w = -1;
  double t = 0.0;

  SurfacePoint point(const SurfaceMesh& m) const {
    if (w < 0 || t == 0.0) return m.vertex_point(v);
    int h = m.find_halfedge(v, w);
    SurfacePoint p{SurfaceMesh::face_of(h), Eigen::Vector3d::Zero()};
    p.bary[h % 3] = 1.0 - t;
    p.bary[(h % 3 + 1) % 3] = t;
    return p;
  }
};

class WEvaluator {
 public:
  WEvaluator(const RenormalizedEnergy& ctx, const std::vector<int>& d) : ctx_(ctx), d_(d) {}

  double hdiag(const Site& s) {
    if (s.w < 0 || s.t == 0.0) {
      auto it = vertex_h_.find(s.v);
      if (it != vertex_h_.end()) return it->second;
      double v = ctx_.green().regular_diagonal(ctx_.mesh().vertex_point(s.v));
      vertex_h_.emplace(s.v, v);
      return v;
    }
    return ctx_.green().regular_diagonal(s.point(ctx_.mesh()));
  }

  /// W at the sites with Phi projected from `phi_prev`; fills `phi`.
  double operator()(const std::vector<Site>& sites, const Eigen::VectorXd& phi_prev, Eigen::VectorXd& phi) {
    ++evaluations;
    const auto& m = ctx_.mesh();
    std::vector<SurfacePoint> a;
    for (const auto& s : sites) a.push_back(s.point(m));
    double w = 0.0;
    for (std::size_t l = 0; l < a.size(); ++l)
      for (std::size_t k = l + 1; k < a.size(); ++k)
        w += 4.0 * kPi * kPi * d_[l] * d_[k] * ctx_.green().value(a[k], a[l]);
    for (std::size_t k = 0; k < a.size(); ++k) {
      w += 2.0 * kPi * kPi * d_[k] * d_[k] * hdiag(sites[k]);
      w += kTwoPi * d_[k] * evaluate(m, ctx_.curvature().psi0, a[k]);
    }
    phi = phi_prev;
    if (m.genus() > 0) {
      auto lat = ctx_.canonical().lattice(a, d_);
      phi = lattice_project(phi_prev, lat).phi;
    }
    w += 0.5 * phi.squaredNorm();
    return w;
  }

  int evaluations = 0;

 private:
  const RenormalizedEnergy& ctx_;
  const std::vector<int>& d_;
  std::map<int, double> vertex_h_;
};

}  // namespace

MinimizeWResult minimize_W(const RenormalizedEnergy& ctx, const std::vector<int>& d, const std::vector<int>& start,
                           const Eigen::VectorXd& phi_start, const MinimizeWOptions& options) {
  const auto& m = ctx.mesh();
  check_index_sum(m, d);
  if (start.size() != d.size()) throw NumericalError("start vertices and indices differ in length");
  const int n = static_cast<int>(d.size());
  const double guard = options.separation_factor * ctx.h();
  const auto& geo = ctx.geodesics();

  std::vector<Site> sites;
  for (int v : start) sites.push_back({v, -1, 0.0});
  auto separated = [&](const std::vector<Site>& s, int moved) {
    SurfacePoint p = s[moved].point(m);
    for (int k = 0; k < n; ++k)
      if (k != moved && geo.distance(p, s[k].point(m)) < guard) return false;
    return true;
  };

  WEvaluator eval(ctx, d);
  MinimizeWResult res;
  Eigen::VectorXd phi = phi_start.size() ? phi_start : Eigen::VectorXd::Zero(2 * m.genus());
  if (m.genus() > 0) {
    std::vector<SurfacePoint> a;
    for (const auto& s : sites) a.push_back(s.point(m));
    phi = lattice_project(phi, ctx.canonical().lattice(a, d)).phi;
  }
  Eigen::VectorXd phi_new;
  double current = eval(sites, phi, phi_new);
  phi = phi_new;

  int step = 0;
  bool stalled = false;
  while (step < options.max_moves) {
    double best = current;
    int best_k = -1, best_v = -1;
    Eigen::VectorXd best_phi;
    bool blocked = false;
    for (int k = 0; k < n; ++k) {
      const int from = sites[k].v;
      for (int h : m.outgoing(from)) {
        auto trial = sites;
        trial[k] = {m.head(h), -1, 0.0};
        bool ok = separated(trial, k);
        double w = eval(trial, phi, phi_new);
        if (!ok) {
          if (w < current - 1e-12) blocked = true;
          continue;
        }
        if (w < best - 1e-12) {
          best = w;
          best_k = k;
          best_v = m.head(h);
          best_phi = phi_new;
        }
      }
    }
    if (best_k < 0) {
      stalled = true;
      res.collapse = blocked;
      break;
    }
    res.log.push_back({++step, best_k, sites[best_k].v, best_v, best});
    sites[best_k] = {best_v, -1, 0.0};
    phi = best_phi;
    current = best;
  }

  if (options.refine && !res.collapse && stalled) {
    double level = 0.5;
    for (int round = 0; round < options.refine_steps && level > 1.0 / 64.0; ++round) {
      double best = current;
      int best_k = -1;
      Site best_site;
      Eigen::VectorXd best_phi;
      for (int k = 0; k < n; ++k) {
        std::vector<Site> cands;
        for (int h : m.outgoing(sites[k].v)) cands.push_back({sites[k].v, m.head(h), level});
        if (sites[k].w >= 0) {
          cands.push_back({sites[k].v, sites[k].w, std::min(0.5, sites[k].t + level)});
          cands.push_back({sites[k].v, sites[k].w, std::max(0.0, sites[k].t - level)});
        }
        for (const auto& c : cands) {
          auto trial = sites;
          trial[k] = c;
          if (!separated(trial, k)) continue;
          double w = eval(trial, phi, phi_new);
          if (w < best - 1e-12) {
            best = w;
            best_k = k;
            best_site = c;
            best_phi = phi_new;
          }
        }
      }
      if (best_k < 0) {
        level *= 0.5;
        continue;
      }
      res.log.push_back({++step, best_k, -1, -1, best});
      sites[best_k] = best_site;
      phi = best_phi;
      current = best;
    }
  }

  res.converged = stalled && !res.collapse;
  res.status = res.collapse ? "collapse detected" : (stalled ? "converged" : "move limit reached");
  res.config.d = d;
  for (const auto& s : sites) res.config.a.push_back(s.point(m));
  res.config.phi = phi;
  res.W = current;
  res.evaluations = eval.evaluations;
  return res;
}

std::vector<int> random_start(const RenormalizedEnergy& ctx, int n, unsigned seed, double min_dist) {
  const auto& m = ctx.mesh();
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> pick(0, m.num_vertices() - 1);
  std::vector<int> out;
  for (int tries = 0; static_cast<int>(out.size()) < n; ++tries) {
    if (tries > 10000) throw NumericalError("could not place separated start points");
    int v = pick(rng);
    bool ok = true;
    for (int w : out) ok = ok && ctx.geodesics().distance(m.vertex_point(v), m.vertex_point(w)) >= min_dist;
    if (ok) out.push_back(v);
  }
  return out;
}

void write_sweep_csv(std::ostream& out, const RenormalizedEnergyReport& report) {
  out.precision(17);
  out << "radius,partial,corrected\n";
  for (std::size_t i = 0; i < report.radii.size(); ++i)
    out << report.radii[i] << ',' << report.partial[i] << ',' << report.corrected[i] << '\n';
}

}  // namespace glv
