#include "glv/connection.hpp"

#include <cmath>
#include <ostream>

namespace glv {

FrameField build_frame(const SurfaceMesh& mesh, std::span<const double> offsets) {
  FrameField frame;
  frame.mesh_ = &mesh;
  frame.offset_.assign(mesh.num_vertices(), 0.0);
  if (!offsets.empty()) {
    if (static_cast<int>(offsets.size()) != mesh.num_vertices()) throw MeshError("frame offsets size mismatch");
    std::copy(offsets.begin(), offsets.end(), frame.offset_.begin());
  }
  frame.connection_ = Cochain1::zero(mesh);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    int h = mesh.edge_halfedge(e);
    int v = mesh.tail(h), w = mesh.head(h);
    // Direction of the edge seen from v, and of the reversed edge seen from w, each relative to
    // the local reference direction. Transport keeps the angle to the edge fixed.
    double at_v = mesh.polygon_angle(h) - frame.offset_[v];
    double at_w = mesh.polygon_angle(mesh.twin(h)) - frame.offset_[w];
    frame.connection_[e] = wrap_angle(at_w + kPi - at_v);
  }
  return frame;
}

double FrameField::holonomy(int f) const {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += transport_angle(3 * f + i);
  return wrap_angle(s);
}

int FrameField::frame_index(int f) const {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += transport_angle(3 * f + i);
  return static_cast<int>(std::lround((mesh_->face_curvature(f) - s) / kTwoPi));
}

TangentVectorField TangentVectorField::constant(const FrameField& frame, Complex value) {
  TangentVectorField u;
  u.frame = &frame;
  u.z = Eigen::VectorXcd::Constant(frame.mesh().num_vertices(), value);
  return u;
}

Cochain1 phase_increment(const TangentVectorField& u) {
  const auto& mesh = u.frame->mesh();
  Cochain1 j = Cochain1::zero(mesh);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    auto [v, w] = mesh.edge(e);
    Complex t = std::conj(u.z[v]) * u.z[w] * std::polar(1.0, -u.frame->connection()[e]);
    j[e] = std::arg(t);
  }
  return j;
}

Cochain1 j_form(const TangentVectorField& u) {
  const auto& mesh = u.frame->mesh();
  Cochain1 j = phase_increment(u);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    auto [v, w] = mesh.edge(e);
    j[e] *= std::abs(u.z[v]) * std::abs(u.z[w]);
  }
  return j;
}

bool PotentialF::validate(std::string* why) const {
  if (std::abs(value(1.0)) > 1e-14) {
    if (why) *why = "F(1) != 0";
    return false;
  }
  for (int i = 0; i <= 200; ++i) {
    double s = 2.0 * i / 200.0;
    if (value(s * s) < coercivity * (1.0 - s) * (1.0 - s) - 1e-12) {
      if (why) *why = "coercivity bound fails at s = " + std::to_string(s);
      return false;
    }
  }
  return true;
}

namespace {
double edge_term(const TangentVectorField& u, int e) {
  const auto& mesh = u.frame->mesh();
  auto [v, w] = mesh.edge(e);
  return std::norm(u.z[w] - std::polar(1.0, u.frame->connection()[e]) * u.z[v]);
}
}  // namespace

double dirichlet_energy(const TangentVectorField& u) {
  const auto& mesh = u.frame->mesh();
  double s = 0.0;
  for (int e = 0; e < mesh.num_edges(); ++e) s += mesh.cotan_weight(e) * edge_term(u, e);
  return 0.5 * s;
}

double potential_energy(const TangentVectorField& u, const PotentialF& F, double eps) {
  if (!(eps > 0.0)) throw NumericalError("epsilon must be positive");
  const auto& mesh = u.frame->mesh();
  double s = 0.0;
  for (int v = 0; v < mesh.num_vertices(); ++v) s += mesh.dual_area(v) * F.value(std::norm(u.z[v]));
  return s / (4.0 * eps * eps);
}

double gl_energy(const TangentVectorField& u, const PotentialF& F, double eps) {
  return dirichlet_energy(u) + potential_energy(u, F, eps);
}

std::vector<double> dirichlet_energy_per_face(const TangentVectorField& u) {
  const auto& mesh = u.frame->mesh();
  std::vector<double> out(mesh.num_faces(), 0.0);
  for (int h = 0; h < mesh.num_halfedges(); ++h) {
    double cot = 1.0 / std::tan(mesh.corner_angle(SurfaceMesh::prev(h)));
    out[SurfaceMesh::face_of(h)] += 0.25 * cot * edge_term(u, mesh.edge_of(h));
  }
  return out;
}

void write_field_csv(std::ostream& out, const TangentVectorField& u) {
  out.precision(17);
  out << "vertex,re,im\n";
  for (int v = 0; v < u.size(); ++v) out << v << ',' << u.z[v].real() << ',' << u.z[v].imag() << '\n';
}

}  // namespace glv
