#pragma once

#include <complex>
#include <functional>
#include <string>
#include <iosfwd>
#include <span>
#include <vector>

#include "glv/exterior.hpp"

namespace glv {

using Complex = std::complex<double>;

/// Per-vertex reference directions plus the Levi-Civita transport between them.
///
/// The reference direction at v sits at `offset(v)` in v's rescaled tangent polygon. The
/// connection 1-form A stores, per oriented edge v->w, the angle by which a coefficient
/// changes when a vector is transported from v's frame to w's frame. Per face, the oriented
/// sum of A equals the face curvature modulo 2 pi; the integer remainders mark where the
/// (global) frame field itself is singular.
class FrameField {
 public:
  const SurfaceMesh& mesh() const { return *mesh_; }
  const Cochain1& connection() const { return connection_; }
  double offset(int v) const { return offset_[v]; }
  /// A along halfedge h (sign-adjusted).
  double transport_angle(int h) const { return mesh_->edge_sign(h) * connection_[mesh_->edge_of(h)]; }
  /// Holonomy of face f reduced to (-pi, pi].
  double holonomy(int f) const;
  /// Index of the frame field in face f: (face curvature - sum of A) / 2 pi.
  int frame_index(int f) const;

 private:
  friend FrameField build_frame(const SurfaceMesh&, std::span<const double>);
  const SurfaceMesh* mesh_ = nullptr;
  std::vector<double> offset_;
  Cochain1 connection_;
};

/// Frames along each vertex's anchor halfedge, rotated by `offsets` when given.
FrameField build_frame(const SurfaceMesh& mesh, std::span<const double> offsets = {});

/// Tangent field as complex coefficients against a frame field.
struct TangentVectorField {
  const FrameField* frame = nullptr;
  Eigen::VectorXcd z;

  static TangentVectorField constant(const FrameField& frame, Complex value = 1.0);
  int size() const { return static_cast<int>(z.size()); }
};

/// Current j(u): per edge v->w, |z_v||z_w| times the phase increment after transport.
/// For unit fields this is the angle increment of the coefficient.
Cochain1 j_form(const TangentVectorField& u);
/// Phase increment after transport, arg(conj(z_v) z_w e^{-iA}); the discrete j(u)/|u|^2.
Cochain1 phase_increment(const TangentVectorField& u);

/// F(s) with F(1) = 0; the default is (1 - s)^2.
struct PotentialF {
  std::function<double(double)> value = [](double s) { return (1.0 - s) * (1.0 - s); };
  std::function<double(double)> derivative = [](double s) { return -2.0 * (1.0 - s); };
  std::function<double(double)> second = [](double) { return 2.0; };
  /// Coercivity constant c in F(s^2) >= c (1 - s)^2.
  double coercivity = 1.0;

  /// Checks F(1) = 0 and the coercivity bound on a grid of s in [0, 2].
  bool validate(std::string* why = nullptr) const;
};

/// 1/2 sum over edges of w_e |z_w - e^{iA} z_v|^2.
double dirichlet_energy(const TangentVectorField& u);
/// sum over vertices of A_v F(|z_v|^2) / (4 eps^2).
double potential_energy(const TangentVectorField& u, const PotentialF& F, double eps);
double gl_energy(const TangentVectorField& u, const PotentialF& F, double eps);

/// Per-face share of the Dirichlet energy (sums to dirichlet_energy).
std::vector<double> dirichlet_energy_per_face(const TangentVectorField& u);

/// Writes "vertex,re,im" rows.
void write_field_csv(std::ostream& out, const TangentVectorField& u);

}  // namespace glv
