#include "glv/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>

#include <Eigen/Dense>

#include "glv/potential.hpp"

namespace glv {

double angle_distance(double x, double y) { return std::abs(wrap_angle(x - y)); }

namespace {

double reduce_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

Eigen::VectorXd codifferential_rhs(const SurfaceMesh& mesh, const Cochain1& a) {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mesh.num_vertices());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    double flux = mesh.cotan_weight(e) * a[e];
    rhs[mesh.edge(e)[0]] -= flux;
    rhs[mesh.edge(e)[1]] += flux;
  }
  return rhs;
}

}  // namespace

double FluxLattice::residual(const Eigen::VectorXd& phi) const {
  if (zeta.size() == 0) return 0.0;
  Eigen::VectorXd r = alpha * phi + zeta;
  double worst = 0.0;
  for (Eigen::Index l = 0; l < r.size(); ++l) worst = std::max(worst, angle_distance(r[l], 0.0));
  return worst;
}

Eigen::VectorXd FluxLattice::point(const Eigen::VectorXi& m) const {
  return alpha.fullPivLu().solve(kTwoPi * m.cast<double>() - zeta);
}

LatticeProjection lattice_project(const Eigen::VectorXd& phi_raw, const FluxLattice& lat) {
  LatticeProjection out;
  const int n = static_cast<int>(lat.zeta.size());
  if (n == 0) {
    out.phi.resize(0);
    out.m.resize(0);
    return out;
  }
  Eigen::VectorXd target = (lat.alpha * phi_raw + lat.zeta) / kTwoPi;
  Eigen::VectorXi m0(n);
  for (int l = 0; l < n; ++l) m0[l] = static_cast<int>(std::lround(target[l]));
  const int span = n <= 2 ? 2 : 1;
  const int width = 2 * span + 1;
  int total = 1;
  for (int l = 0; l < n; ++l) total *= width;
  double best = std::numeric_limits<double>::infinity();
  for (int code = 0; code < total; ++code) {
    Eigen::VectorXi m = m0;
    int c = code;
    for (int l = 0; l < n; ++l) {
      m[l] += c % width - span;
      c /= width;
    }
    Eigen::VectorXd phi = lat.point(m);
    double dist = (phi - phi_raw).norm();
    if (dist < best - 1e-15) {
      best = dist;
      out.phi = phi;
      out.m = m;
    }
  }
  out.residual = best;
  return out;
}

CanonicalSolver::CanonicalSolver(const SurfaceMesh& mesh, std::span<const double> frame_offsets)
    : mesh_(&mesh),
      frame_(build_frame(mesh, frame_offsets)),
      solver_(mesh),
      cycles_(homology_basis(mesh)),
      basis_(harmonic_basis(mesh, cycles_, solver_)) {}

Cochain2 CanonicalSolver::targets(const std::vector<SurfacePoint>& a, const std::vector<int>& d) const {
  if (a.size() != d.size()) throw NumericalError("vortex points and indices differ in length");
  check_index_sum(*mesh_, d);
  Cochain2 t = Cochain2::zero(*mesh_);
  for (int f = 0; f < mesh_->num_faces(); ++f) t[f] = -mesh_->face_curvature(f);
  for (std::size_t k = 0; k < a.size(); ++k) t[a[k].face] += kTwoPi * d[k];
  return t;
}

Cochain1 CanonicalSolver::coexact(const std::vector<SurfacePoint>& a, const std::vector<int>& d) const {
  Cochain2 t = targets(a, d);
  Cochain1 c = Cochain1::zero(*mesh_);
  solve_on_cotree(*mesh_, cycles_.decomposition, t, c);
  Cochain0 f(solver_.solve(codifferential_rhs(*mesh_, c)));
  c.values -= apply_d0(*mesh_, f).values;
  for (const auto& eta : basis_.eta) c.values -= inner1(*mesh_, eta, c) * eta.values;
  return c;
}

double CanonicalSolver::zeta_along(const Cochain1& coexact, const EdgeLoop& loop) const {
  double s = 0.0;
  for (int h : loop) s += mesh_->edge_sign(h) * (coexact[mesh_->edge_of(h)] + frame_.connection()[mesh_->edge_of(h)]);
  return reduce_angle(s);
}

ZetaResult CanonicalSolver::zeta(const std::vector<SurfacePoint>& a, const std::vector<int>& d) const {
  ZetaResult out;
  const int n = cycles_.size();
  out.zeta.resize(n);
  if (n == 0) {
    targets(a, d);
    return out;
  }
  Cochain1 c = coexact(a, d);
  std::vector<int> faces;
  for (const auto& p : a) faces.push_back(p.face);
  for (int l = 0; l < n; ++l) {
    const EdgeLoop& gamma = cycles_.loops[l];
    EdgeLoop lambda = reroute(*mesh_, gamma, faces);
    if (lambda.size() != gamma.size()) ++out.rerouted_loops;
    out.zeta[l] = zeta_along(c, lambda);
    out.reroute_defect = std::max(out.reroute_defect, angle_distance(out.zeta[l], zeta_along(c, gamma)));
  }
  return out;
}

FluxLattice CanonicalSolver::lattice(const std::vector<SurfacePoint>& a, const std::vector<int>& d) const {
  FluxLattice lat;
  lat.zeta = zeta(a, d).zeta;
  lat.alpha = basis_.periods;
  return lat;
}

Cochain1 CanonicalSolver::jstar(const VortexConfiguration& config, double tol) const {
  const int n = basis_.size();
  Eigen::VectorXd phi = config.phi.size() == 0 ? Eigen::VectorXd::Zero(n) : config.phi;
  if (phi.size() != n) throw NumericalError("flux vector length must be twice the genus");
  if (n > 0) {
    auto lat = lattice(config.a, config.d);
    double r = lat.residual(phi);
    if (r > tol) {
      std::ostringstream s;
      s << "flux vector violates the lattice condition (residual " << r << ")";
      throw NumericalError(s.str());
    }
  }
  Cochain1 j = coexact(config.a, config.d);
  for (int k = 0; k < n; ++k) j.values += phi[k] * basis_.eta[k].values;
  return j;
}

ReconstructedField CanonicalSolver::reconstruct(const Cochain1& jstar, const std::vector<SurfacePoint>& a, int root,
                                                double phase, double core_radius) const {
  const auto& m = *mesh_;
  const auto& A = frame_.connection();
  const int nv = m.num_vertices();
  std::vector<double> theta(nv, 0.0);
  std::vector<char> seen(nv, 0);
  std::vector<char> tree(m.num_edges(), 0);
  std::queue<int> q;
  theta[root] = phase;
  seen[root] = 1;
  q.push(root);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int h : m.outgoing(v)) {
      int w = m.head(h);
      if (seen[w]) continue;
      int e = m.edge_of(h);
      seen[w] = 1;
      tree[e] = 1;
      theta[w] = theta[v] + m.edge_sign(h) * (jstar[e] + A[e]);
      q.push(w);
    }
  }
  ReconstructedField out;
  int worst_edge = -1;
  for (int e = 0; e < m.num_edges(); ++e) {
    if (tree[e]) continue;
    auto [v, w] = m.edge(e);
    double defect = angle_distance(theta[w] - theta[v], jstar[e] + A[e]);
    if (defect > out.period_defect) {
      out.period_defect = defect;
      worst_edge = e;
    }
  }
  if (out.period_defect > 1e-3) {
    std::ostringstream s;
    s << "period defect " << out.period_defect << " on the cycle closed by edge " << worst_edge;
    throw NumericalError(s.str());
  }
  out.u = TangentVectorField::constant(frame_);
  for (int v = 0; v < nv; ++v) out.u.z[v] = std::polar(1.0, theta[v]);
  out.core.assign(nv, 0);
  if (core_radius < 0.0) core_radius = 2.0 * m.mean_edge_length();
  if (!a.empty() && core_radius > 0.0) {
    GeodesicSolver geo(m, 2);
    for (const auto& p : a) {
      auto field = geo.distance_field(p, core_radius);
      for (int v = 0; v < nv; ++v)
        if (field.vertex[v] <= core_radius) out.core[v] = 1;
      for (int v : m.face(p.face)) out.core[v] = 1;
    }
  }
  return out;
}

Eigen::VectorXd CanonicalSolver::flux(const TangentVectorField& u) const {
  return harmonic_coefficients(*mesh_, basis_, j_form(u));
}

EdgeLoop reroute(const SurfaceMesh& mesh, const EdgeLoop& loop, const std::vector<int>& faces) {
  std::set<int> avoid(faces.begin(), faces.end());
  EdgeLoop out;
  for (int h : loop) {
    int g = mesh.twin(h);
    if (avoid.count(SurfaceMesh::face_of(h))) {
      out.push_back(mesh.twin(SurfaceMesh::prev(h)));
      out.push_back(mesh.twin(SurfaceMesh::next(h)));
    } else if (avoid.count(SurfaceMesh::face_of(g))) {
      out.push_back(SurfaceMesh::next(g));
      out.push_back(SurfaceMesh::prev(g));
    } else {
      out.push_back(h);
    }
  }
  return out;
}

std::vector<int> enclosed_faces(const SurfaceMesh& mesh, const EdgeLoop& loop) {
  if (!is_closed(mesh, loop)) throw NumericalError("loop is not closed");
  std::vector<char> blocked(mesh.num_edges(), 0);
  for (int h : loop) blocked[mesh.edge_of(h)] = 1;
  std::vector<char> inside(mesh.num_faces(), 0);
  std::queue<int> q;
  for (int h : loop) {
    int f = SurfaceMesh::face_of(h);
    if (!inside[f]) {
      inside[f] = 1;
      q.push(f);
    }
  }
  while (!q.empty()) {
    int f = q.front();
    q.pop();
    for (int k = 0; k < 3; ++k) {
      int h = 3 * f + k;
      if (blocked[mesh.edge_of(h)]) continue;
      int g = SurfaceMesh::face_of(mesh.twin(h));
      if (!inside[g]) {
        inside[g] = 1;
        q.push(g);
      }
    }
  }
  for (int h : loop)
    if (inside[SurfaceMesh::face_of(mesh.twin(h))]) throw NumericalError("loop does not bound a region");
  std::vector<int> out;
  for (int f = 0; f < mesh.num_faces(); ++f)
    if (inside[f]) out.push_back(f);
  return out;
}

EdgeLoop region_boundary(const SurfaceMesh& mesh, const std::vector<int>& faces) {
  std::vector<char> in(mesh.num_faces(), 0);
  for (int f : faces) in[f] = 1;
  std::vector<int> start_of(mesh.num_vertices(), -1);
  int count = 0, first = -1;
  for (int f : faces)
    for (int k = 0; k < 3; ++k) {
      int h = 3 * f + k;
      if (in[SurfaceMesh::face_of(mesh.twin(h))]) continue;
      if (start_of[mesh.tail(h)] >= 0) throw NumericalError("region boundary is not a simple loop");
      start_of[mesh.tail(h)] = h;
      ++count;
      if (first < 0) first = h;
    }
  EdgeLoop loop;
  if (first < 0) return loop;
  int h = first;
  do {
    loop.push_back(h);
    h = start_of[mesh.head(h)];
    if (h < 0) throw NumericalError("region boundary is not closed");
  } while (h != first && static_cast<int>(loop.size()) <= count);
  if (static_cast<int>(loop.size()) != count) throw NumericalError("region boundary has several components");
  return loop;
}

DegreeResult degree(const TangentVectorField& u, const EdgeLoop& loop) {
  const auto& m = u.frame->mesh();
  for (int h : loop)
    if (std::abs(u.z[m.tail(h)]) < 0.5) throw NumericalError("field modulus below 1/2 on the loop");
  auto faces = enclosed_faces(m, loop);
  Cochain1 j = phase_increment(u);
  double s = loop_integral(m, loop, j);
  for (int f : faces) s += m.face_curvature(f);
  DegreeResult r;
  r.value = s / kTwoPi;
  r.degree = static_cast<int>(std::lround(r.value));
  r.residual = std::abs(r.value - r.degree);
  return r;
}

Cochain2 vorticity(const TangentVectorField& u) {
  const auto& m = u.frame->mesh();
  Cochain2 w = apply_d1(m, j_form(u));
  for (int f = 0; f < m.num_faces(); ++f) w[f] += m.face_curvature(f);
  return w;
}

std::vector<int> face_winding(const TangentVectorField& u) {
  const auto& m = u.frame->mesh();
  Cochain2 w = apply_d1(m, phase_increment(u));
  std::vector<int> out(m.num_faces());
  for (int f = 0; f < m.num_faces(); ++f) out[f] = static_cast<int>(std::lround((w[f] + m.face_curvature(f)) / kTwoPi));
  return out;
}

namespace {

SurfacePoint project_to_face(const SurfaceMesh& m, int f, const Eigen::Vector3d& x) {
  const auto& t = m.face(f);
  Eigen::Vector3d p0 = m.position(t[0]), e1 = m.position(t[1]) - p0, e2 = m.position(t[2]) - p0;
  Eigen::Matrix2d g;
  g << e1.dot(e1), e1.dot(e2), e1.dot(e2), e2.dot(e2);
  Eigen::Vector2d rhs(e1.dot(x - p0), e2.dot(x - p0));
  Eigen::Vector2d st = g.ldlt().solve(rhs);
  Eigen::Vector3d b(1.0 - st[0] - st[1], st[0], st[1]);
  b = b.cwiseMax(0.0);
  return {f, b / b.sum()};
}

Eigen::Vector3d face_centroid(const SurfaceMesh& m, int f) {
  const auto& t = m.face(f);
  return (m.position(t[0]) + m.position(t[1]) + m.position(t[2])) / 3.0;
}

}  // namespace

VorticityMeasure localize(const SurfaceMesh& mesh, const Cochain2& omega, double core_area) {
  const int nf = mesh.num_faces();
  std::vector<char> active(nf, 0);
  for (int f = 0; f < nf; ++f) {
    double threshold = core_area > 0.0 ? 0.5 * kPi * mesh.face_area(f) / core_area : 0.5 * kPi;
    active[f] = std::abs(omega[f]) > threshold;
  }
  std::vector<int> label(nf, -1);
  VorticityMeasure out;
  for (int f0 = 0; f0 < nf; ++f0) {
    if (!active[f0] || label[f0] >= 0) continue;
    std::vector<int> cluster{f0};
    label[f0] = f0;
    for (std::size_t i = 0; i < cluster.size(); ++i) {
      int f = cluster[i];
      for (int v : mesh.face(f))
        for (int h : mesh.outgoing(v)) {
          int g = SurfaceMesh::face_of(h);
          if (active[g] && label[g] < 0) {
            label[g] = f0;
            cluster.push_back(g);
          }
        }
    }
    double weight = 0.0, peak = -1.0;
    int peak_face = f0;
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    for (int f : cluster) {
      weight += omega[f];
      if (std::abs(omega[f]) > peak) {
        peak = std::abs(omega[f]);
        peak_face = f;
      }
    }
    Atom atom;
    atom.weight = weight;
    atom.point = SurfacePoint::centroid(peak_face);
    if (mesh.has_positions() && weight != 0.0) {
      for (int f : cluster) center += omega[f] / weight * face_centroid(mesh, f);
      int best = peak_face;
      double bd = std::numeric_limits<double>::infinity();
      for (int f : cluster) {
        double dd = (face_centroid(mesh, f) - center).norm();
        if (dd < bd) {
          bd = dd;
          best = f;
        }
      }
      atom.point = project_to_face(mesh, best, center);
    }
    int idx = static_cast<int>(std::lround(weight / kTwoPi));
    double res = std::abs(weight / kTwoPi - idx);
    if (res > 0.2) {
      std::ostringstream s;
      s << "vorticity cluster weight " << weight << " is not close to a multiple of 2 pi";
      throw NumericalError(s.str());
    }
    out.atoms.push_back(atom);
    out.index.push_back(idx);
    out.residual.push_back(res);
  }
  return out;
}

VorticityMeasure point_measure(const std::vector<SurfacePoint>& a, const std::vector<int>& d) {
  VorticityMeasure out;
  for (std::size_t k = 0; k < a.size(); ++k) {
    out.atoms.push_back({a[k], kTwoPi * d[k]});
    out.index.push_back(d[k]);
    out.residual.push_back(0.0);
  }
  return out;
}

VorticityMeasure cochain_measure(const SurfaceMesh& mesh, const Cochain2& omega, double floor) {
  VorticityMeasure out;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    if (std::abs(omega[f]) <= floor) continue;
    out.atoms.push_back({SurfacePoint::centroid(f), omega[f]});
    out.index.push_back(0);
    out.residual.push_back(0.0);
  }
  return out;
}

namespace {

// Minimum cost of moving mass between sources and sinks, with unit cost `bound` for mass that
// is sent to (or drawn from) outside. Successive shortest paths on the residual bipartite graph.
double transport_cost(const std::vector<double>& pos, const std::vector<double>& neg, const Eigen::MatrixXd& cost,
                      double bound) {
  const int P = static_cast<int>(pos.size()), N = static_cast<int>(neg.size());
  const int S = P + 1, T = N + 1;
  std::vector<double> supply(S), demand(T);
  double total_pos = 0.0, total_neg = 0.0;
  for (int i = 0; i < P; ++i) total_pos += pos[i];
  for (int j = 0; j < N; ++j) total_neg += neg[j];
  for (int i = 0; i < P; ++i) supply[i] = pos[i];
  supply[P] = total_neg;
  for (int j = 0; j < N; ++j) demand[j] = neg[j];
  demand[N] = total_pos;
  Eigen::MatrixXd c(S, T);
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < T; ++j) {
      if (i < P && j < N) c(i, j) = std::min(cost(i, j), 2.0 * bound);
      else if (i == P && j == N) c(i, j) = 0.0;
      else c(i, j) = bound;
    }
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(S, T);
  const double tiny = 1e-14 * std::max(1.0, total_pos + total_neg);
  const double inf = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 4 * (S + T) * (S + T) + 16; ++iter) {
    // Bellman-Ford over sources [0, S) and sinks [S, S + T).
    std::vector<double> dist(S + T, inf);
    std::vector<int> pred(S + T, -1);
    for (int i = 0; i < S; ++i)
      if (supply[i] > tiny) dist[i] = 0.0;
    for (int round = 0; round < S + T; ++round) {
      bool changed = false;
      for (int i = 0; i < S; ++i) {
        if (dist[i] == inf) continue;
        for (int j = 0; j < T; ++j)
          if (dist[i] + c(i, j) < dist[S + j] - 1e-15) {
            dist[S + j] = dist[i] + c(i, j);
            pred[S + j] = i;
            changed = true;
          }
      }
      for (int j = 0; j < T; ++j) {
        if (dist[S + j] == inf) continue;
        for (int i = 0; i < S; ++i)
          if (x(i, j) > tiny && dist[S + j] - c(i, j) < dist[i] - 1e-15) {
            dist[i] = dist[S + j] - c(i, j);
            pred[i] = S + j;
            changed = true;
          }
      }
      if (!changed) break;
    }
    int sink = -1;
    for (int j = 0; j < T; ++j)
      if (demand[j] > tiny && dist[S + j] < inf && (sink < 0 || dist[S + j] < dist[S + sink])) sink = j;
    if (sink < 0) break;
    // Trace back and find the bottleneck.
    double amount = demand[sink];
    int node = S + sink;
    std::vector<int> path{node};
    while (!(node < S && pred[node] < 0)) {
      int p = pred[node];
      if (node < S) amount = std::min(amount, x(node, p - S));
      node = p;
      path.push_back(node);
      if (path.size() > static_cast<std::size_t>(2 * (S + T))) throw NumericalError("transport path cycle");
    }
    amount = std::min(amount, supply[node]);
    supply[node] -= amount;
    demand[sink] -= amount;
    for (std::size_t k = path.size() - 1; k > 0; --k) {
      int from = path[k], to = path[k - 1];
      if (from < S) x(from, to - S) += amount;
      else x(to, from - S) -= amount;
    }
  }
  double total = 0.0;
  for (int i = 0; i < S; ++i)
    for (int j = 0; j < T; ++j) total += x(i, j) * c(i, j);
  return total;
}

}  // namespace

double vorticity_distance(const GeodesicSolver& geo, const VorticityMeasure& mu, const VorticityMeasure& nu) {
  std::vector<SurfacePoint> pp, np;
  std::vector<double> pm, nm;
  auto add = [&](const Atom& a, double sign) {
    double w = sign * a.weight;
    if (w > 0.0) {
      pp.push_back(a.point);
      pm.push_back(w);
    } else if (w < 0.0) {
      np.push_back(a.point);
      nm.push_back(-w);
    }
  };
  for (const auto& a : mu.atoms) add(a, 1.0);
  for (const auto& a : nu.atoms) add(a, -1.0);
  if (pp.empty() && np.empty()) return 0.0;
  Eigen::MatrixXd dist(pp.size(), np.size());
  if (np.size() <= pp.size()) {
    for (std::size_t j = 0; j < np.size(); ++j) {
      auto field = geo.distance_field(np[j]);
      for (std::size_t i = 0; i < pp.size(); ++i) dist(i, j) = geo.distance_to(field, pp[i]);
    }
  } else {
    for (std::size_t i = 0; i < pp.size(); ++i) {
      auto field = geo.distance_field(pp[i]);
      for (std::size_t j = 0; j < np.size(); ++j) dist(i, j) = geo.distance_to(field, np[j]);
    }
  }
  auto value = [&](double L) { return transport_cost(pm, nm, L * dist, 1.0 - L); };
  // The value is concave in L; golden-section search for its maximum.
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.0, hi = 1.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = value(x1), f2 = value(x2);
  for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = value(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = value(x1);
    }
  }
  return std::max({f1, f2, value(0.0)});
}

std::vector<ZetaProbeRow> zeta_continuity_probe(const CanonicalSolver& cs, const std::vector<double>& t,
                                                const std::vector<VortexConfiguration>& path) {
  if (t.size() != path.size()) throw NumericalError("probe parameters and configurations differ in length");
  std::vector<ZetaProbeRow> rows;
  for (std::size_t i = 0; i < path.size(); ++i) rows.push_back({t[i], cs.zeta(path[i].a, path[i].d).zeta});
  return rows;
}

}  // namespace glv
