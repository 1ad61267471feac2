#include "glv/exterior.hpp"

#include <cmath>
#include <sstream>

namespace glv {

DualCochain2 gaussian_curvature(const SurfaceMesh& mesh) {
  DualCochain2 k = DualCochain2::zero(mesh);
  for (int v = 0; v < mesh.num_vertices(); ++v) k[v] = mesh.angle_defect(v);
  return k;
}

Cochain2 face_curvature(const SurfaceMesh& mesh) {
  Cochain2 k = Cochain2::zero(mesh);
  for (int f = 0; f < mesh.num_faces(); ++f) k[f] = mesh.face_curvature(f);
  return k;
}

SparseMatrix d0(const SurfaceMesh& mesh) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(2 * mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    t.emplace_back(e, mesh.edge(e)[0], -1.0);
    t.emplace_back(e, mesh.edge(e)[1], 1.0);
  }
  SparseMatrix m(mesh.num_edges(), mesh.num_vertices());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

SparseMatrix d1(const SurfaceMesh& mesh) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(mesh.num_halfedges());
  for (int h = 0; h < mesh.num_halfedges(); ++h)
    t.emplace_back(SurfaceMesh::face_of(h), mesh.edge_of(h), static_cast<double>(mesh.edge_sign(h)));
  SparseMatrix m(mesh.num_faces(), mesh.num_edges());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

namespace {
SparseMatrix diagonal(const Eigen::VectorXd& d) {
  SparseMatrix m(d.size(), d.size());
  m.reserve(Eigen::VectorXi::Constant(d.size(), 1));
  for (Eigen::Index i = 0; i < d.size(); ++i) m.insert(i, i) = d[i];
  m.makeCompressed();
  return m;
}
}  // namespace

SparseMatrix hodge0(const SurfaceMesh& mesh) {
  Eigen::VectorXd d(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) d[v] = mesh.dual_area(v);
  return diagonal(d);
}

SparseMatrix hodge1(const SurfaceMesh& mesh) {
  Eigen::VectorXd d(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) d[e] = mesh.cotan_weight(e);
  return diagonal(d);
}

SparseMatrix hodge2(const SurfaceMesh& mesh) {
  Eigen::VectorXd d(mesh.num_faces());
  for (int f = 0; f < mesh.num_faces(); ++f) d[f] = 1.0 / mesh.face_area(f);
  return diagonal(d);
}

SparseMatrix codifferential1(const SurfaceMesh& mesh) {
  Eigen::VectorXd inv(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v) inv[v] = 1.0 / mesh.dual_area(v);
  SparseMatrix r = diagonal(inv) * SparseMatrix(d0(mesh).transpose()) * hodge1(mesh);
  return r;
}

SparseMatrix cotan_laplacian(const SurfaceMesh& mesh) {
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(4 * mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    auto [a, b] = mesh.edge(e);
    double w = mesh.cotan_weight(e);
    t.emplace_back(a, a, w);
    t.emplace_back(b, b, w);
    t.emplace_back(a, b, -w);
    t.emplace_back(b, a, -w);
  }
  SparseMatrix m(mesh.num_vertices(), mesh.num_vertices());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

Cochain1 apply_d0(const SurfaceMesh& mesh, const Cochain0& f) {
  Cochain1 r = Cochain1::zero(mesh);
  for (int e = 0; e < mesh.num_edges(); ++e) r[e] = f[mesh.edge(e)[1]] - f[mesh.edge(e)[0]];
  return r;
}

Cochain2 apply_d1(const SurfaceMesh& mesh, const Cochain1& a) {
  Cochain2 r = Cochain2::zero(mesh);
  for (int h = 0; h < mesh.num_halfedges(); ++h) r[SurfaceMesh::face_of(h)] += mesh.edge_sign(h) * a[mesh.edge_of(h)];
  return r;
}

Cochain0 apply_codifferential(const SurfaceMesh& mesh, const Cochain1& a) {
  Cochain0 r = Cochain0::zero(mesh);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    double flux = mesh.cotan_weight(e) * a[e];
    r[mesh.edge(e)[0]] -= flux;
    r[mesh.edge(e)[1]] += flux;
  }
  for (int v = 0; v < mesh.num_vertices(); ++v) r[v] /= mesh.dual_area(v);
  return r;
}

double inner1(const SurfaceMesh& mesh, const Cochain1& a, const Cochain1& b) {
  double s = 0.0;
  for (int e = 0; e < mesh.num_edges(); ++e) s += mesh.cotan_weight(e) * a[e] * b[e];
  return s;
}

double integrate(const SurfaceMesh& mesh, const Cochain0& f) {
  double s = 0.0;
  for (int v = 0; v < mesh.num_vertices(); ++v) s += mesh.dual_area(v) * f[v];
  return s;
}

double evaluate(const SurfaceMesh& mesh, const Cochain0& f, const SurfacePoint& p) {
  const auto& t = mesh.face(p.face);
  return p.bary[0] * f[t[0]] + p.bary[1] * f[t[1]] + p.bary[2] * f[t[2]];
}

DualCochain2 dirac(const SurfaceMesh& mesh, const SurfacePoint& p, double weight) {
  DualCochain2 r = DualCochain2::zero(mesh);
  const auto& t = mesh.face(p.face);
  for (int i = 0; i < 3; ++i) r[t[i]] += weight * p.bary[i];
  return r;
}

LaplaceSolver::LaplaceSolver(const SurfaceMesh& mesh) : mesh_(&mesh), laplacian_(cotan_laplacian(mesh)) {
  const int n = mesh.num_vertices();
  // Drop row/column 0.
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(laplacian_.nonZeros());
  for (int k = 0; k < laplacian_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(laplacian_, k); it; ++it)
      if (it.row() > 0 && it.col() > 0) t.emplace_back(it.row() - 1, it.col() - 1, it.value());
  SparseMatrix reduced(n - 1, n - 1);
  reduced.setFromTriplets(t.begin(), t.end());
  factor_ = std::make_unique<Eigen::SimplicialLDLT<SparseMatrix>>();
  factor_->compute(reduced);
  if (factor_->info() != Eigen::Success) throw NumericalError("cotan Laplacian factorization failed");
}

Eigen::VectorXd LaplaceSolver::solve(const Eigen::VectorXd& rhs) const {
  const int n = mesh_->num_vertices();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  x.tail(n - 1) = factor_->solve(rhs.tail(n - 1));
  // One step of iterative refinement keeps residuals near machine precision.
  Eigen::VectorXd r = rhs - laplacian_ * x;
  x.tail(n - 1) += factor_->solve(r.tail(n - 1));
  double mean = 0.0;
  for (int v = 0; v < n; ++v) mean += mesh_->dual_area(v) * x[v];
  mean /= mesh_->total_area();
  x.array() -= mean;
  return x;
}

Cochain0 solve_poisson2(const LaplaceSolver& solver, const DualCochain2& rhs) {
  double total = rhs.values.sum();
  double scale = rhs.values.cwiseAbs().sum();
  if (std::abs(total) > 1e-10 * (scale + 1.0)) {
    std::ostringstream s;
    s << "Poisson right-hand side is not balanced (total " << total << ")";
    throw NumericalError(s.str());
  }
  Eigen::VectorXd b = rhs.values;
  b.array() -= total / b.size();
  return Cochain0(solver.solve(b));
}

Cochain0 solve_poisson2(const SurfaceMesh& mesh, const DualCochain2& rhs) {
  LaplaceSolver solver(mesh);
  return solve_poisson2(solver, rhs);
}

}  // namespace glv
