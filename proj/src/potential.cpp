#include "glv/potential.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>

namespace glv {

GreenOperator::GreenOperator(const SurfaceMesh& mesh, int steiner, std::size_t cache_limit)
    : mesh_(&mesh),
      solver_(mesh),
      geodesics_(mesh, steiner),
      h_(mesh.mean_edge_length()),
      cache_limit_(std::max<std::size_t>(1, cache_limit)) {}

Eigen::VectorXd GreenOperator::column(int v) const {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(v);
    if (it != cache_.end()) return *it->second;
  }
  const auto& m = *mesh_;
  Eigen::VectorXd rhs(m.num_vertices());
  for (int w = 0; w < m.num_vertices(); ++w) rhs[w] = -m.dual_area(w) / m.total_area();
  rhs[v] += 1.0;
  auto col = std::make_shared<const Eigen::VectorXd>(solver_.solve(rhs));
  std::lock_guard<std::mutex> lock(mutex_);
  if (cache_.emplace(v, col).second) {
    order_.push_back(v);
    while (order_.size() > cache_limit_) {
      cache_.erase(order_.front());
      order_.pop_front();
    }
  }
  return *col;
}

Cochain0 GreenOperator::green(const SurfacePoint& y) const {
  const auto& t = mesh_->face(y.face);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(mesh_->num_vertices());
  for (int i = 0; i < 3; ++i)
    if (y.bary[i] != 0.0) g += y.bary[i] * column(t[i]);
  return Cochain0(g);
}

double GreenOperator::value(const SurfacePoint& x, const SurfacePoint& y) const {
  const auto& tx = mesh_->face(x.face);
  const auto& ty = mesh_->face(y.face);
  double s = 0.0;
  for (int j = 0; j < 3; ++j) {
    if (y.bary[j] == 0.0) continue;
    const Eigen::VectorXd col = column(ty[j]);
    for (int i = 0; i < 3; ++i) s += x.bary[i] * y.bary[j] * col[tx[i]];
  }
  return s;
}

GreenOperator::RingData GreenOperator::regular_diagonal_data(const SurfacePoint& y) const {
  const auto& m = *mesh_;
  RingData out;
  out.radius = {4.0 * h_, 8.0 * h_, 16.0 * h_};
  if (out.radius.back() + h_ > geodesics_.injectivity_radius()) {
    std::ostringstream s;
    s << "ring radius " << out.radius.back() << " not resolved below the injectivity radius";
    throw NumericalError(s.str());
  }
  auto field = geodesics_.distance_field(y, out.radius.back() + 2.0 * h_);
  Cochain0 g = green(y);
  for (double r : out.radius) {
    double num = 0.0, den = 0.0;
    for (int v = 0; v < m.num_vertices(); ++v) {
      double d = field.vertex[v];
      double w = 1.0 - std::abs(d - r) / h_;
      if (!(w > 0.0)) continue;
      w *= m.dual_area(v);
      num += w * (g[v] + std::log(d) / kTwoPi);
      den += w;
    }
    if (!(den > 0.0)) throw NumericalError("empty averaging ring");
    out.average.push_back(num / den);
  }
  // Least-squares fit of H + c r^2.
  Eigen::Matrix<double, 3, 2> a;
  Eigen::Vector3d b;
  for (int i = 0; i < 3; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = out.radius[i] * out.radius[i];
    b[i] = out.average[i];
  }
  out.extrapolated = a.colPivHouseholderQr().solve(b)[0];
  return out;
}

double GreenOperator::regular_diagonal(const SurfacePoint& y) const { return regular_diagonal_data(y).extrapolated; }

Cochain0 GreenOperator::regular_part(const SurfacePoint& y, double radius) const {
  const auto& m = *mesh_;
  auto field = geodesics_.distance_field(y, radius);
  Cochain0 g = green(y);
  double hyy = regular_diagonal(y);
  for (int v = 0; v < m.num_vertices(); ++v) {
    double d = field.vertex[v];
    if (d < h_) g[v] = hyy;
    else if (d <= radius) g[v] += std::log(d) / kTwoPi;
  }
  return g;
}

CurvaturePotential psi0(const SurfaceMesh& mesh, const LaplaceSolver& solver) {
  CurvaturePotential c;
  c.kappa_bar = kTwoPi * mesh.euler_characteristic() / mesh.total_area();
  DualCochain2 rhs = DualCochain2::zero(mesh);
  for (int v = 0; v < mesh.num_vertices(); ++v) rhs[v] = -mesh.angle_defect(v) + c.kappa_bar * mesh.dual_area(v);
  c.psi0 = solve_poisson2(solver, rhs);
  Eigen::VectorXd r = solver.laplacian() * c.psi0.values - rhs.values;
  c.residual = r.norm() / std::max(1.0, rhs.values.norm());
  return c;
}

CurvaturePotential psi0(const SurfaceMesh& mesh) {
  LaplaceSolver solver(mesh);
  return psi0(mesh, solver);
}

double curvature_dirichlet(const SurfaceMesh& mesh, const CurvaturePotential& c) {
  return 0.5 * inner1(mesh, apply_d0(mesh, c.psi0), apply_d0(mesh, c.psi0));
}

void check_index_sum(const SurfaceMesh& mesh, const std::vector<int>& d) {
  int total = 0;
  for (int x : d) total += x;
  if (total != mesh.euler_characteristic()) {
    std::ostringstream s;
    s << "Poincare-Hopf violation: sum of indices " << total << " != chi " << mesh.euler_characteristic();
    throw NumericalError(s.str());
  }
}

VortexPotential psi(const SurfaceMesh& mesh, const LaplaceSolver& solver, const std::vector<SurfacePoint>& a,
                    const std::vector<int>& d) {
  if (a.size() != d.size()) throw NumericalError("vortex points and indices differ in length");
  check_index_sum(mesh, d);
  DualCochain2 rhs = DualCochain2::zero(mesh);
  for (int v = 0; v < mesh.num_vertices(); ++v) rhs[v] = -mesh.angle_defect(v);
  for (std::size_t k = 0; k < a.size(); ++k) rhs.values += dirac(mesh, a[k], kTwoPi * d[k]).values;
  VortexPotential p;
  p.a = a;
  p.d = d;
  p.psi = solve_poisson2(solver, rhs);
  Eigen::VectorXd r = solver.laplacian() * p.psi.values - rhs.values;
  p.residual = r.norm() / std::max(1.0, rhs.values.norm());
  return p;
}

VortexPotential psi(const SurfaceMesh& mesh, const std::vector<SurfacePoint>& a, const std::vector<int>& d) {
  LaplaceSolver solver(mesh);
  return psi(mesh, solver, a, d);
}

void write_vertex_csv(std::ostream& out, const Cochain0& f, const char* name) {
  out.precision(17);
  out << "vertex," << name << '\n';
  for (Eigen::Index v = 0; v < f.size(); ++v) out << v << ',' << f[v] << '\n';
}

}  // namespace glv
