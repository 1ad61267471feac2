#include "glv/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>

#include <Eigen/Dense>

namespace glv {

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

TreeCotree build_tree_cotree(const SurfaceMesh& mesh, int root) {
  const int nv = mesh.num_vertices(), ne = mesh.num_edges(), nf = mesh.num_faces();
  if (root < 0 || root >= nv) throw MeshError("tree root out of range");
  TreeCotree tc;
  tc.root = root;
  tc.parent_halfedge.assign(nv, -1);
  tc.depth.assign(nv, std::numeric_limits<double>::infinity());
  tc.in_tree.assign(ne, 0);
  tc.in_cotree.assign(ne, 0);

  // Shortest-path tree.
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  std::vector<char> done(nv, 0);
  tc.depth[root] = 0.0;
  heap.emplace(0.0, root);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (done[v]) continue;
    done[v] = 1;
    if (tc.parent_halfedge[v] >= 0) tc.in_tree[mesh.edge_of(tc.parent_halfedge[v])] = 1;
    for (int h : mesh.outgoing(v)) {
      int w = mesh.head(h);
      double nd = d + mesh.halfedge_length(h);
      if (!done[w] && nd < tc.depth[w]) {
        tc.depth[w] = nd;
        tc.parent_halfedge[w] = h;
        heap.emplace(nd, w);
      }
    }
  }

  // Maximum spanning cotree over the dual edges not in the tree.
  std::vector<int> candidates;
  std::vector<double> weight(ne, 0.0);
  for (int e = 0; e < ne; ++e) {
    if (tc.in_tree[e]) continue;
    candidates.push_back(e);
    weight[e] = tc.depth[mesh.edge(e)[0]] + tc.depth[mesh.edge(e)[1]] + mesh.edge_length(e);
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) { return weight[a] > weight[b]; });
  DisjointSets sets(nf);
  for (int e : candidates) {
    int h = mesh.edge_halfedge(e);
    if (sets.unite(SurfaceMesh::face_of(h), SurfaceMesh::face_of(mesh.twin(h)))) tc.in_cotree[e] = 1;
    else tc.generators.push_back(e);
  }

  // Breadth-first order of the cotree.
  tc.cotree_parent.assign(nf, -1);
  std::vector<char> seen(nf, 0);
  tc.cotree_order.reserve(nf);
  tc.cotree_order.push_back(0);
  seen[0] = 1;
  for (std::size_t i = 0; i < tc.cotree_order.size(); ++i) {
    int f = tc.cotree_order[i];
    for (int k = 0; k < 3; ++k) {
      int h = 3 * f + k;
      int e = mesh.edge_of(h);
      if (!tc.in_cotree[e]) continue;
      int g = SurfaceMesh::face_of(mesh.twin(h));
      if (seen[g]) continue;
      seen[g] = 1;
      tc.cotree_parent[g] = e;
      tc.cotree_order.push_back(g);
    }
  }

  // Generator loops, trimmed at the lowest common ancestor.
  for (int e : tc.generators) {
    int h = mesh.edge_halfedge(e);
    int v = mesh.tail(h), w = mesh.head(h);
    std::vector<int> up_v, up_w;  // halfedges from parent to child, walking upward
    for (int x = v; tc.parent_halfedge[x] >= 0; x = mesh.tail(tc.parent_halfedge[x])) {
      up_v.push_back(tc.parent_halfedge[x]);
    }
    for (int x = w; tc.parent_halfedge[x] >= 0; x = mesh.tail(tc.parent_halfedge[x])) {
      up_w.push_back(tc.parent_halfedge[x]);
    }
    while (!up_v.empty() && !up_w.empty() && up_v.back() == up_w.back()) {
      up_v.pop_back();
      up_w.pop_back();
    }
    EdgeLoop loop;
    for (auto it = up_v.rbegin(); it != up_v.rend(); ++it) loop.push_back(*it);
    loop.push_back(h);
    for (int g : up_w) loop.push_back(mesh.twin(g));
    tc.generator_lengths.push_back(loop_length(mesh, loop));
    tc.loops.push_back(std::move(loop));
  }
  return tc;
}

void solve_on_cotree(const SurfaceMesh& mesh, const TreeCotree& tc, const Cochain2& target, Cochain1& x) {
  for (auto it = tc.cotree_order.rbegin(); it != tc.cotree_order.rend(); ++it) {
    int f = *it;
    int pe = tc.cotree_parent[f];
    if (pe < 0) continue;
    double s = 0.0;
    int sign = 0;
    for (int k = 0; k < 3; ++k) {
      int h = 3 * f + k;
      int e = mesh.edge_of(h);
      if (e == pe) sign = mesh.edge_sign(h);
      else s += mesh.edge_sign(h) * x[e];
    }
    x[pe] = sign * (target[f] - s);
  }
}

double loop_integral(const SurfaceMesh& mesh, const EdgeLoop& loop, const Cochain1& form) {
  double s = 0.0;
  for (int h : loop) s += mesh.edge_sign(h) * form[mesh.edge_of(h)];
  return s;
}

bool is_closed(const SurfaceMesh& mesh, const EdgeLoop& loop) {
  if (loop.empty()) return true;
  for (std::size_t i = 0; i < loop.size(); ++i)
    if (mesh.head(loop[i]) != mesh.tail(loop[(i + 1) % loop.size()])) return false;
  return true;
}

double loop_length(const SurfaceMesh& mesh, const EdgeLoop& loop) {
  double s = 0.0;
  for (int h : loop) s += mesh.halfedge_length(h);
  return s;
}

CycleBasis homology_basis(const SurfaceMesh& mesh, int root) {
  CycleBasis cb;
  cb.decomposition = build_tree_cotree(mesh, root);
  cb.loops = cb.decomposition.loops;
  if (cb.size() != 2 * mesh.genus()) {
    std::ostringstream s;
    s << "tree-cotree produced " << cb.size() << " generators, expected " << 2 * mesh.genus();
    throw NumericalError(s.str());
  }
  return cb;
}

HarmonicBasis harmonic_basis(const SurfaceMesh& mesh, const CycleBasis& cycles, const LaplaceSolver& solver) {
  const auto& tc = cycles.decomposition;
  const int n = cycles.size();
  HarmonicBasis hb;
  Cochain2 zero = Cochain2::zero(mesh);
  for (int l = 0; l < n; ++l) {
    // Closed form: 1 on generator l, 0 on the tree and other generators.
    Cochain1 sigma = Cochain1::zero(mesh);
    sigma[tc.generators[l]] = 1.0;
    solve_on_cotree(mesh, tc, zero, sigma);
    // Remove the exact part: sigma - d f with L f = d0^T hodge1 sigma.
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mesh.num_vertices());
    for (int e = 0; e < mesh.num_edges(); ++e) {
      double flux = mesh.cotan_weight(e) * sigma[e];
      rhs[mesh.edge(e)[0]] -= flux;
      rhs[mesh.edge(e)[1]] += flux;
    }
    Cochain0 f(solver.solve(rhs));
    Cochain1 df = apply_d0(mesh, f);
    sigma.values -= df.values;
    // Modified Gram-Schmidt.
    for (const auto& prev : hb.eta) sigma.values -= inner1(mesh, prev, sigma) * prev.values;
    double norm = std::sqrt(inner1(mesh, sigma, sigma));
    if (!(norm > 1e-12)) throw NumericalError("harmonic representative degenerate");
    sigma.values /= norm;
    for (const auto& prev : hb.eta) sigma.values -= inner1(mesh, prev, sigma) * prev.values;
    sigma.values /= std::sqrt(inner1(mesh, sigma, sigma));
    hb.eta.push_back(std::move(sigma));
  }
  hb.gram.resize(n, n);
  hb.periods.resize(n, n);
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      hb.gram(k, l) = inner1(mesh, hb.eta[k], hb.eta[l]);
      hb.periods(l, k) = loop_integral(mesh, cycles.loops[l], hb.eta[k]);
    }
  }
  if (n > 0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(hb.periods);
    if (!lu.isInvertible()) throw NumericalError("period matrix is singular");
  }
  return hb;
}

HarmonicBasis harmonic_basis(const SurfaceMesh& mesh, const CycleBasis& cycles) {
  LaplaceSolver solver(mesh);
  return harmonic_basis(mesh, cycles, solver);
}

Eigen::VectorXd harmonic_coefficients(const SurfaceMesh& mesh, const HarmonicBasis& basis, const Cochain1& form) {
  Eigen::VectorXd c(basis.size());
  for (int k = 0; k < basis.size(); ++k) c[k] = inner1(mesh, basis.eta[k], form);
  return c;
}

HomologyClass homology_class(const SurfaceMesh& mesh, const EdgeLoop& loop, const HarmonicBasis& basis) {
  if (!is_closed(mesh, loop)) throw NumericalError("loop is not closed");
  const int n = basis.size();
  Eigen::VectorXd p(n);
  for (int k = 0; k < n; ++k) p[k] = loop_integral(mesh, loop, basis.eta[k]);
  HomologyClass out;
  if (n == 0) {
    out.c.resize(0);
    return out;
  }
  // p = alpha^T c.
  Eigen::VectorXd c = basis.periods.transpose().fullPivLu().solve(p);
  out.c.resize(n);
  for (int k = 0; k < n; ++k) {
    out.c[k] = static_cast<int>(std::lround(c[k]));
    out.residual = std::max(out.residual, std::abs(c[k] - out.c[k]));
  }
  if (out.residual > 0.05) {
    std::ostringstream s;
    s << "homology class rounding residual " << out.residual << " exceeds 0.05";
    throw NumericalError(s.str());
  }
  return out;
}

HarmonicResiduals harmonic_residuals(const SurfaceMesh& mesh, const HarmonicBasis& basis) {
  HarmonicResiduals r;
  for (int k = 0; k < basis.size(); ++k) {
    r.closed = std::max(r.closed, apply_d1(mesh, basis.eta[k]).values.cwiseAbs().maxCoeff());
    r.coclosed = std::max(r.coclosed, apply_codifferential(mesh, basis.eta[k]).values.cwiseAbs().maxCoeff());
  }
  if (basis.size() > 0)
    r.gram = (basis.gram - Eigen::MatrixXd::Identity(basis.size(), basis.size())).cwiseAbs().maxCoeff();
  return r;
}

Eigen::VectorXd hodge_singular_values(const SurfaceMesh& mesh) {
  // Zero rows pad the stack to at least E rows so that every kernel direction shows up.
  const int rows = std::max(mesh.num_faces() + mesh.num_vertices(), mesh.num_edges());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, mesh.num_edges());
  a.topRows(mesh.num_faces()) = Eigen::MatrixXd(d1(mesh));
  a.middleRows(mesh.num_faces(), mesh.num_vertices()) = Eigen::MatrixXd(SparseMatrix(d0(mesh).transpose()) * hodge1(mesh));
  Eigen::VectorXd s = Eigen::BDCSVD<Eigen::MatrixXd>(a).singularValues();
  std::sort(s.begin(), s.end());
  return s;
}

void write_cycles_csv(std::ostream& out, const SurfaceMesh& mesh, const CycleBasis& cycles) {
  out << "loop,step,halfedge,edge,sign\n";
  for (int l = 0; l < cycles.size(); ++l)
    for (std::size_t i = 0; i < cycles.loops[l].size(); ++i) {
      int h = cycles.loops[l][i];
      out << l << ',' << i << ',' << h << ',' << mesh.edge_of(h) << ',' << mesh.edge_sign(h) << '\n';
    }
}

void write_harmonic_csv(std::ostream& out, const SurfaceMesh& mesh, const HarmonicBasis& basis) {
  out.precision(17);
  out << "edge";
  for (int k = 0; k < basis.size(); ++k) out << ",eta_" << k;
  out << '\n';
  for (int e = 0; e < mesh.num_edges(); ++e) {
    out << e;
    for (int k = 0; k < basis.size(); ++k) out << ',' << basis.eta[k][e];
    out << '\n';
  }
}

}  // namespace glv
