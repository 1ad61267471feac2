#include "glv/glsolver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

namespace glv {

GLEnergy::GLEnergy(const FrameField& frame, const PotentialF& F, double eps) : frame_(&frame), F_(F), eps_(eps) {
  if (!(eps > 0.0)) throw NumericalError("epsilon must be positive");
  const auto& m = frame.mesh();
  const int n = m.num_vertices();
  mass_.resize(n);
  offset_.assign(n + 1, 0);
  for (int v = 0; v < n; ++v) {
    mass_[v] = m.dual_area(v);
    offset_[v + 1] = offset_[v] + m.degree(v);
  }
  nbr_.resize(offset_[n]);
  weight_.resize(offset_[n]);
  rot_.resize(offset_[n]);
  for (int v = 0; v < n; ++v) {
    int k = offset_[v];
    for (int h : m.outgoing(v)) {
      nbr_[k] = m.head(h);
      weight_[k] = m.cotan_weight(m.edge_of(h));
      rot_[k] = std::polar(1.0, -frame.transport_angle(h));
      ++k;
    }
  }
}

double GLEnergy::evaluate(const Eigen::VectorXcd& z, Eigen::VectorXcd* grad) const {
  const int n = size();
  if (z.size() != n) throw NumericalError("field size does not match the mesh");
  const double c = 1.0 / (4.0 * eps_ * eps_);
  if (grad) grad->resize(n);
  double energy = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : energy)
  for (int v = 0; v < n; ++v) {
    const Complex zv = z[v];
    Complex g = 0.0;
    double e = 0.0;
    for (int k = offset_[v]; k < offset_[v + 1]; ++k) {
      const Complex diff = zv - rot_[k] * z[nbr_[k]];
      e += 0.25 * weight_[k] * std::norm(diff);
      g += weight_[k] * diff;
    }
    const double s = std::norm(zv);
    e += c * mass_[v] * F_.value(s);
    if (grad) (*grad)[v] = g + 2.0 * c * mass_[v] * F_.derivative(s) * zv;
    energy += e;
  }
  return energy;
}

double GLEnergy::evaluate_serial(const Eigen::VectorXcd& z, Eigen::VectorXcd* grad) const {
  const auto& m = frame_->mesh();
  const int n = size();
  if (z.size() != n) throw NumericalError("field size does not match the mesh");
  const double c = 1.0 / (4.0 * eps_ * eps_);
  if (grad) grad->setZero(n);
  double energy = 0.0;
  for (int e = 0; e < m.num_edges(); ++e) {
    auto [v, w] = m.edge(e);
    const double we = m.cotan_weight(e);
    const Complex t = std::polar(1.0, frame_->connection()[e]);
    const Complex diff = z[w] - t * z[v];
    energy += 0.5 * we * std::norm(diff);
    if (grad) {
      (*grad)[w] += we * diff;
      (*grad)[v] -= we * std::conj(t) * diff;
    }
  }
  for (int v = 0; v < n; ++v) {
    const double s = std::norm(z[v]);
    energy += c * mass_[v] * F_.value(s);
    if (grad) (*grad)[v] += 2.0 * c * mass_[v] * F_.derivative(s) * z[v];
  }
  return energy;
}

SparseMatrix GLEnergy::hessian(const Eigen::VectorXcd& z) const {
  const int n = size();
  const double c = 1.0 / (4.0 * eps_ * eps_);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(4 * (n + nbr_.size()));
  for (int v = 0; v < n; ++v) {
    double wsum = 0.0;
    for (int k = offset_[v]; k < offset_[v + 1]; ++k) {
      const double w = weight_[k];
      wsum += w;
      // Block (v, w) is -w R with R the rotation by -A, mapping w's coefficient to v's frame.
      const double re = rot_[k].real(), im = rot_[k].imag();
      const int a = 2 * v, b = 2 * nbr_[k];
      t.emplace_back(a, b, -w * re);
      t.emplace_back(a, b + 1, w * im);
      t.emplace_back(a + 1, b, -w * im);
      t.emplace_back(a + 1, b + 1, -w * re);
    }
    const double s = std::norm(z[v]);
    const double d1 = 2.0 * c * mass_[v] * F_.derivative(s);
    const double d2 = 4.0 * c * mass_[v] * F_.second(s);
    const double x = z[v].real(), y = z[v].imag();
    t.emplace_back(2 * v, 2 * v, wsum + d1 + d2 * x * x);
    t.emplace_back(2 * v + 1, 2 * v + 1, wsum + d1 + d2 * y * y);
    t.emplace_back(2 * v, 2 * v + 1, d2 * x * y);
    t.emplace_back(2 * v + 1, 2 * v, d2 * x * y);
  }
  SparseMatrix H(2 * n, 2 * n);
  H.setFromTriplets(t.begin(), t.end());
  return H;
}

SparseMatrix GLEnergy::preconditioner() const {
  const int n = size();
  const double c = 1.0 / (eps_ * eps_);
  std::vector<Eigen::Triplet<double>> t;
  for (int v = 0; v < n; ++v) {
    double wsum = 0.0;
    for (int k = offset_[v]; k < offset_[v + 1]; ++k) {
      const double w = std::max(weight_[k], 0.0);
      wsum += w;
      t.emplace_back(v, nbr_[k], -w);
    }
    t.emplace_back(v, v, wsum + c * mass_[v]);
  }
  SparseMatrix P(n, n);
  P.setFromTriplets(t.begin(), t.end());
  return P;
}

TangentVectorField random_field(const FrameField& frame, unsigned seed, int smoothing_steps) {
  const auto& m = frame.mesh();
  const int n = m.num_vertices();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  TangentVectorField u;
  u.frame = &frame;
  u.z.resize(n);
  for (int v = 0; v < n; ++v) {
    double re = normal(rng);
    double im = normal(rng);
    u.z[v] = Complex(re, im);
  }
  Eigen::VectorXcd next(n);
  for (int it = 0; it < smoothing_steps; ++it) {
    for (int v = 0; v < n; ++v) {
      Complex s = 0.0;
      double ws = 0.0;
      for (int h : m.outgoing(v)) {
        double w = std::max(m.cotan_weight(m.edge_of(h)), 0.0);
        s += w * std::polar(1.0, -frame.transport_angle(h)) * u.z[m.head(h)];
        ws += w;
      }
      next[v] = ws > 0.0 ? 0.5 * (u.z[v] + s / ws) : u.z[v];
    }
    u.z.swap(next);
  }
  for (int v = 0; v < n; ++v) {
    double r = std::abs(u.z[v]);
    u.z[v] = r > 1e-300 ? u.z[v] / r : Complex(1.0, 0.0);
  }
  return u;
}

namespace {

double real_dot(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) { return a.dot(b).real(); }

struct Evaluator {
  const GLEnergy& E;
  bool parallel;
  double operator()(const Eigen::VectorXcd& z, Eigen::VectorXcd* g) const {
    return parallel ? E.evaluate(z, g) : E.evaluate_serial(z, g);
  }
};

/// Armijo backtracking along d from alpha0. Near round-off, a step that keeps the energy within
/// 1e-13 (1 + |E|) and lowers the gradient is also accepted.
bool line_search(const Evaluator& eval, Eigen::VectorXcd& z, Eigen::VectorXcd& g, double& energy,
                 const Eigen::VectorXcd& d, double& alpha, double slope) {
  const double gnorm = g.norm();
  Eigen::VectorXcd trial, gt;
  for (int ls = 0; ls < 60; ++ls) {
    trial = z + alpha * d;
    double e = eval(trial, &gt);
    bool armijo = e <= energy + 1e-4 * alpha * slope;
    bool flat = std::abs(e - energy) <= 1e-13 * (1.0 + std::abs(energy)) && gt.norm() < gnorm;
    if (armijo || flat) {
      z.swap(trial);
      g.swap(gt);
      energy = e;
      return true;
    }
    alpha *= 0.5;
  }
  return false;
}

}  // namespace

SolverState minimize_E(const TangentVectorField& init, double eps, const PotentialF& F, const MinimizeOptions& options) {
  if (!init.frame) throw NumericalError("initial field has no frame");
  const auto& m = init.frame->mesh();
  const double h = m.mean_edge_length();
  if (eps < h) {
    std::ostringstream s;
    s << "eps = " << eps << " is below the mesh size h = " << h;
    throw NumericalError(s.str());
  }
  if (eps < 5.0 * h) std::cerr << "warning: eps = " << eps << " is below 5h = " << 5.0 * h << "; cores are under-resolved\n";
  std::string why;
  if (!F.validate(&why)) throw NumericalError("potential F rejected: " + why);

  GLEnergy E(*init.frame, F, eps);
  Evaluator eval{E, options.parallel};
  SolverState st;
  st.eps = eps;
  st.iterate = init;
  Eigen::VectorXcd& z = st.iterate.z;
  Eigen::VectorXcd g;
  double energy = eval(z, &g);
  st.energy_history.push_back(energy);
  auto tol = [&] { return options.tolerance * (1.0 + std::abs(energy)); };

  Eigen::SimplicialLDLT<SparseMatrix> pre(E.preconditioner());
  if (pre.info() != Eigen::Success) throw NumericalError("preconditioner factorization failed");
  auto apply = [&](const Eigen::VectorXcd& r) {
    Eigen::VectorXd re = pre.solve(Eigen::VectorXd(r.real()));
    Eigen::VectorXd im = pre.solve(Eigen::VectorXd(r.imag()));
    Eigen::VectorXcd out(r.size());
    out.real() = re;
    out.imag() = im;
    return out;
  };

  // Preconditioned nonlinear conjugate gradient (Polak-Ribiere+).
  Eigen::VectorXcd s = apply(g), d = -s;
  double gs = real_dot(g, s);
  double alpha = 1.0;
  bool failed = false;
  while (st.ncg_iterations < options.max_ncg) {
    if (g.norm() <= 1e2 * tol()) break;
    double slope = real_dot(g, d);
    if (slope >= 0.0) {
      d = -s;
      slope = -gs;
    }
    alpha = std::min(1.0, 2.0 * alpha);
    Eigen::VectorXcd g_old = g;
    if (!line_search(eval, z, g, energy, d, alpha, slope)) {
      failed = true;
      break;
    }
    ++st.ncg_iterations;
    st.energy_history.push_back(energy);
    Eigen::VectorXcd s_new = apply(g);
    double gs_new = real_dot(g, s_new);
    double beta = std::max(0.0, (gs_new - real_dot(g_old, s_new)) / gs);
    d = -s_new + beta * d;
    s.swap(s_new);
    gs = gs_new;
  }

  // Newton polish; the shift covers the global phase direction.
  Eigen::SimplicialLDLT<SparseMatrix> ldlt;
  bool analyzed = false;
  double mu_rel = 1e-10;
  while (st.newton_iterations < options.max_newton && g.norm() > tol()) {
    SparseMatrix H = E.hessian(z);
    if (!analyzed) {
      ldlt.analyzePattern(H);
      analyzed = true;
    }
    Eigen::VectorXd rhs(2 * z.size());
    for (int v = 0; v < z.size(); ++v) {
      rhs[2 * v] = -g[v].real();
      rhs[2 * v + 1] = -g[v].imag();
    }
    const double scale = H.diagonal().cwiseAbs().maxCoeff();
    Eigen::VectorXd step;
    mu_rel = std::max(1e-10, 0.1 * mu_rel);
    for (int tries = 0; tries < 40; ++tries) {
      SparseMatrix Hs = H;
      for (int i = 0; i < Hs.rows(); ++i) Hs.coeffRef(i, i) += mu_rel * scale;
      ldlt.factorize(Hs);
      if (ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0.0).all()) {
        step = ldlt.solve(rhs);
        break;
      }
      mu_rel = std::max(10.0 * mu_rel, 1e-8);
    }
    if (step.size() == 0) {
      failed = true;
      break;
    }
    Eigen::VectorXcd dz(z.size());
    for (int v = 0; v < z.size(); ++v) dz[v] = Complex(step[2 * v], step[2 * v + 1]);
    double slope = real_dot(g, dz);
    double a = 1.0;
    if (!(slope < 0.0) || !line_search(eval, z, g, energy, dz, a, slope)) {
      failed = true;
      break;
    }
    ++st.newton_iterations;
    st.energy_history.push_back(energy);
  }

  st.gradient_norm = g.norm();
  st.converged = st.gradient_norm <= tol();
  if (st.converged) {
    st.status = "converged";
  } else {
    std::ostringstream msg;
    msg.precision(12);
    msg << (failed ? "line-search failure" : "iteration limit") << ": E = " << energy << ", |grad| = " << st.gradient_norm
        << ", tolerance " << tol() << ", ncg " << st.ncg_iterations << ", newton " << st.newton_iterations;
    st.status = msg.str();
  }
  return st;
}

SolverState minimize_E(const FrameField& frame, double eps, unsigned seed, const PotentialF& F,
                       const MinimizeOptions& options) {
  auto st = minimize_E(random_field(frame, seed, options.smoothing_steps), eps, F, options);
  st.seed = seed;
  return st;
}

Eigen::VectorXd flux(const TangentVectorField& u, const HarmonicBasis& basis) {
  return harmonic_coefficients(u.frame->mesh(), basis, j_form(u));
}

namespace {

/// Zero of the linear interpolant in face f, with corner values moved to the first corner's frame.
SurfacePoint interpolant_zero(const TangentVectorField& u, int f) {
  const auto& m = u.frame->mesh();
  const auto& t = m.face(f);
  const Complex z0 = u.z[t[0]];
  const Complex z1 = std::polar(1.0, -u.frame->transport_angle(3 * f)) * u.z[t[1]];
  const Complex z2 = std::polar(1.0, u.frame->transport_angle(3 * f + 2)) * u.z[t[2]];
  Eigen::Matrix2d a;
  a << (z1 - z0).real(), (z2 - z0).real(), (z1 - z0).imag(), (z2 - z0).imag();
  Eigen::Vector2d b(-z0.real(), -z0.imag());
  Eigen::Vector3d bary = Eigen::Vector3d::Constant(1.0 / 3.0);
  if (std::abs(a.determinant()) > 1e-300) {
    Eigen::Vector2d x = a.partialPivLu().solve(b);
    bary = Eigen::Vector3d(1.0 - x[0] - x[1], x[0], x[1]).cwiseMax(0.0);
    if (bary.sum() > 0.0) bary /= bary.sum();
    else bary = Eigen::Vector3d::Constant(1.0 / 3.0);
  }
  return {f, bary};
}

}  // namespace

std::vector<DetectedVortex> detect_vortices(const TangentVectorField& u) {
  const auto& m = u.frame->mesh();
  auto wind = face_winding(u);
  std::vector<int> marked;
  for (int f = 0; f < m.num_faces(); ++f)
    if (wind[f] != 0) marked.push_back(f);
  // Union-find over marked faces sharing a vertex.
  std::vector<int> parent(m.num_faces());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> owner(m.num_vertices(), -1);
  for (int f : marked)
    for (int v : m.face(f)) {
      if (owner[v] < 0) owner[v] = f;
      else parent[find(f)] = find(owner[v]);
    }
  std::vector<DetectedVortex> out;
  std::vector<int> slot(m.num_faces(), -1);
  for (int f : marked) {
    int r = find(f);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    auto& c = out[slot[r]];
    c.faces.push_back(f);
    c.degree += wind[f];
  }
  std::vector<DetectedVortex> kept;
  for (auto& c : out) {
    if (c.degree == 0) continue;
    int core = c.faces.front();
    double best = -1.0;
    for (int f : c.faces) {
      if ((wind[f] > 0) != (c.degree > 0)) continue;
      double s = 0.0;
      for (int v : m.face(f)) s += std::abs(u.z[v]);
      if (best < 0.0 || s < best) {
        best = s;
        core = f;
      }
    }
    c.point = interpolant_zero(u, core);
    kept.push_back(std::move(c));
  }
  return kept;
}

RecoveryField recovery_sequence(const RenormalizedEnergy& ctx, const VortexConfiguration& config, double eps,
                                const PotentialF& F) {
  for (int d : config.d)
    if (std::abs(d) != 1) throw NumericalError("recovery needs |d_k| = 1");
  const double h = ctx.h();
  if (eps < h) {
    std::ostringstream s;
    s << "eps = " << eps << " is too small for the mesh (h = " << h << ")";
    throw NumericalError(s.str());
  }
  RecoveryField out;
  if (eps < 5.0 * h) {
    std::ostringstream s;
    s << "eps = " << eps << " is below 5h = " << 5.0 * h;
    out.warnings.push_back(s.str());
  }
  const auto& geo = ctx.geodesics();
  double rho = std::max(16.0 * eps, 5.0 * h);
  if (config.size() > 1) {
    double cap = 0.4 * min_separation(geo, config.a);
    if (cap < 5.0 * h) throw NumericalError("vortices too close for a recovery core of radius 5h");
    if (rho > cap) {
      std::ostringstream s;
      s << "core radius lowered from " << rho << " to " << cap;
      out.warnings.push_back(s.str());
      rho = cap;
    }
  }
  if (config.size() > 0) rho = std::min(rho, 0.9 * geo.injectivity_radius());
  out.rho = rho;

  const auto& cs = ctx.canonical();
  auto field = cs.reconstruct(cs.jstar(config), config.a);
  out.u = field.u;
  if (config.size() == 0) return out;
  out.profile = radial_profile(rho, eps, F);
  const auto& r = out.profile.r;
  const auto& f = out.profile.f;
  auto modulus = [&](double x) {
    if (x >= rho) return 1.0;
    auto it = std::upper_bound(r.begin(), r.end(), x);
    int i = static_cast<int>(it - r.begin()) - 1;
    double t = (x - r[i]) / (r[i + 1] - r[i]);
    return (1.0 - t) * f[i] + t * f[i + 1];
  };
  const int n = ctx.mesh().num_vertices();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  for (const auto& a : config.a) {
    auto df = geo.distance_field(a, rho);
    for (int v = 0; v < n; ++v) dist[v] = std::min(dist[v], df.vertex[v]);
  }
  for (int v = 0; v < n; ++v) {
    double rad = modulus(dist[v]);
    double mod = std::abs(out.u.z[v]);
    out.u.z[v] = mod > 0.0 ? rad * out.u.z[v] / mod : Complex(rad, 0.0);
  }
  return out;
}

double field_vorticity_distance(const GeodesicSolver& geo, const TangentVectorField& u,
                                const VortexConfiguration& config, double patch, double* bound) {
  const auto& m = u.frame->mesh();
  const double floor = 1e-5;
  Cochain2 w = vorticity(u);
  std::vector<int> order(m.num_faces());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(w[a]) > std::abs(w[b]); });
  std::vector<char> used(m.num_faces(), 0);
  VorticityMeasure mu;
  double merged = 0.0, dropped = 0.0;
  for (int f : order) {
    if (used[f]) continue;
    if (std::abs(w[f]) < floor) {
      dropped += std::abs(w[f]);
      used[f] = 1;
      continue;
    }
    auto centre = SurfacePoint::centroid(f);
    auto df = geo.distance_field(centre, patch);
    double mass = w[f];
    used[f] = 1;
    std::vector<int> queue{f};
    for (std::size_t q = 0; q < queue.size(); ++q)
      for (int i = 0; i < 3; ++i) {
        int g = SurfaceMesh::face_of(m.twin(3 * queue[q] + i));
        if (used[g]) continue;
        const auto& t = m.face(g);
        double dg = (df.vertex[t[0]] + df.vertex[t[1]] + df.vertex[t[2]]) / 3.0;
        if (!(dg <= patch)) continue;
        used[g] = 1;
        queue.push_back(g);
        mass += w[g];
        merged += std::abs(w[g]) * dg;
      }
    if (std::abs(mass) < floor) {
      dropped += std::abs(mass);
      continue;
    }
    mu.atoms.push_back({centre, mass});
    mu.index.push_back(static_cast<int>(std::lround(mass / kTwoPi)));
    mu.residual.push_back(std::abs(mass / kTwoPi - mu.index.back()));
  }
  if (bound) *bound = merged + dropped;
  return vorticity_distance(geo, mu, point_measure(config.a, config.d));
}

ExpansionRecord expansion_experiment(const RenormalizedEnergy& ctx, std::vector<double> eps,
                                     const std::vector<unsigned>& seeds, const ExpansionOptions& options) {
  if (eps.empty()) throw NumericalError("empty eps list");
  if (seeds.empty()) throw NumericalError("expansion needs at least one seed");
  std::sort(eps.begin(), eps.end(), std::greater<>());
  const auto& m = ctx.mesh();
  const auto& cs = ctx.canonical();
  ExpansionRecord rec;
  rec.liminf_tolerance = options.liminf_tolerance;
  rec.gamma = gamma_F(options.F).value;
  rec.note =
      "desk-scale check: the eps -> 0 limit is not reproducible at this resolution; the monotone defect and the "
      "liminf-side bound stand in for it";
  const FrameField* fr = &cs.frame();
  TangentVectorField previous;
  for (double e : eps) {
    std::vector<std::pair<TangentVectorField, unsigned>> starts;
    for (unsigned s : seeds) starts.emplace_back(random_field(*fr, s, options.minimize.smoothing_steps), s);
    if (options.continuation && previous.frame) starts.emplace_back(previous, 0u);
    ExpansionRow row;
    row.eps = e;
    SolverState best;
    bool have = false;
    for (auto& [init, s] : starts) {
      auto st = minimize_E(init, e, options.F, options.minimize);
      st.seed = s;
      if (!have || st.energy() < best.energy()) {
        best = std::move(st);
        have = true;
      }
    }
    previous = best.iterate;
    row.energy = best.energy();
    row.gradient_norm = best.gradient_norm;
    row.converged = best.converged;
    row.seed = best.seed;
    row.status = best.status;
    row.vortices = detect_vortices(best.iterate);
    VortexConfiguration cfg;
    row.unit_degrees = true;
    for (const auto& v : row.vortices) {
      cfg.a.push_back(v.point);
      cfg.d.push_back(v.degree);
      row.n += std::abs(v.degree);
      row.degree_sum += v.degree;
      if (std::abs(v.degree) != 1) row.unit_degrees = false;
    }
    row.reduced = row.energy - row.n * kPi * std::abs(std::log(e));
    row.phi_measured = flux(best.iterate, cs.basis());
    try {
      if (m.genus() > 0) {
        auto proj = lattice_project(row.phi_measured, cs.lattice(cfg.a, cfg.d));
        row.phi_projected = proj.phi;
      }
      cfg.phi = row.phi_projected;
      row.W = ctx.formula(cfg).W_formula;
      row.defect = row.reduced - row.W - row.n * rec.gamma;
      row.liminf_margin = row.defect;
      row.vorticity_distance = field_vorticity_distance(ctx.geodesics(), best.iterate, cfg, 0.5 * e);
    } catch (const NumericalError& err) {
      row.status += std::string("; W unavailable: ") + err.what();
    }
    rec.rows.push_back(std::move(row));
  }
  // Fit E = N pi |log eps| + C.
  const int k = static_cast<int>(rec.rows.size());
  if (k >= 2) {
    Eigen::MatrixXd A(k, 2);
    Eigen::VectorXd b(k);
    for (int i = 0; i < k; ++i) {
      A(i, 0) = kPi * std::abs(std::log(rec.rows[i].eps));
      A(i, 1) = 1.0;
      b[i] = rec.rows[i].energy;
    }
    Eigen::Vector2d x = A.colPivHouseholderQr().solve(b);
    rec.N = x[0];
    rec.C = x[1];
  }
  rec.defect_decreasing = true;
  rec.liminf_holds = true;
  for (int i = 0; i < k; ++i) {
    const auto& r = rec.rows[i];
    if (!std::isfinite(r.defect)) {
      rec.defect_decreasing = rec.liminf_holds = false;
      continue;
    }
    if (r.converged && r.liminf_margin < -rec.liminf_tolerance) rec.liminf_holds = false;
    if (i > 0 && !(std::abs(r.defect) < std::abs(rec.rows[i - 1].defect)) && std::abs(r.defect) > 1e-9)
      rec.defect_decreasing = false;
  }
  return rec;
}

void write_expansion_csv(std::ostream& out, const ExpansionRecord& record) {
  out.precision(12);
  out << "eps,energy,reduced,n,W,defect,vorticity_distance\n";
  for (const auto& r : record.rows)
    out << r.eps << ',' << r.energy << ',' << r.reduced << ',' << r.n << ',' << r.W << ',' << r.defect << ','
        << r.vorticity_distance << '\n';
}

}  // namespace glv
