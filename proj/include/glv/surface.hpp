#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace glv {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Raised for malformed or non-manifold input meshes.
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a numerical procedure fails its contract (non-convergence, residual too large).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// A point on the surface given by a face and barycentric coordinates.
struct SurfacePoint {
  int face = -1;
  Eigen::Vector3d bary = Eigen::Vector3d(1.0, 0.0, 0.0);

  static SurfacePoint centroid(int face) { return {face, Eigen::Vector3d::Constant(1.0 / 3.0)}; }
};

/// Triangulated closed orientable surface. Immutable after construction.
///
/// Halfedge `h = 3 f + i` runs from corner `i` to corner `i + 1` of face `f`;
/// the corner angle stored at `h` is the angle at its tail. Edges are oriented
/// from the lower to the higher vertex index. The metric is carried entirely by
/// edge lengths; positions are optional.
class SurfaceMesh {
 public:
  using Face = std::array<int, 3>;

  /// Embedded mesh; edge lengths are derived from the positions.
  static SurfaceMesh from_positions(std::vector<Eigen::Vector3d> positions, std::vector<Face> faces,
                                    std::vector<int> anchor_targets = {});

  /// Intrinsic mesh; `lengths[f]` holds the lengths of (v0v1, v1v2, v2v0) for face f.
  /// Shared edges must agree to within `tol`.
  static SurfaceMesh from_lengths(int num_vertices, std::vector<Face> faces,
                                  const std::vector<std::array<double, 3>>& lengths,
                                  std::vector<int> anchor_targets = {}, double tol = 1e-12);

  int num_vertices() const { return num_vertices_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }
  int num_halfedges() const { return 3 * num_faces(); }
  int euler_characteristic() const { return num_vertices() - num_edges() + num_faces(); }
  int genus() const { return (2 - euler_characteristic()) / 2; }
  bool has_positions() const { return !positions_.empty(); }

  const std::vector<Face>& faces() const { return faces_; }
  const Face& face(int f) const { return faces_[f]; }
  const std::array<int, 2>& edge(int e) const { return edges_[e]; }
  const Eigen::Vector3d& position(int v) const { return positions_.at(v); }

  // Halfedge navigation.
  int tail(int h) const { return faces_[h / 3][h % 3]; }
  int head(int h) const { return faces_[h / 3][(h % 3 + 1) % 3]; }
  static int face_of(int h) { return h / 3; }
  static int next(int h) { return 3 * (h / 3) + (h % 3 + 1) % 3; }
  static int prev(int h) { return 3 * (h / 3) + (h % 3 + 2) % 3; }
  int twin(int h) const { return twin_[h]; }
  int edge_of(int h) const { return he_edge_[h]; }
  /// +1 when the halfedge agrees with the edge orientation.
  int edge_sign(int h) const { return tail(h) < head(h) ? 1 : -1; }
  /// The halfedge of edge e that agrees with its orientation.
  int edge_halfedge(int e) const { return edge_he_[e]; }

  /// Outgoing halfedges of v in counterclockwise order, starting at the anchor.
  std::span<const int> outgoing(int v) const {
    return {out_.data() + out_offset_[v], static_cast<std::size_t>(out_offset_[v + 1] - out_offset_[v])};
  }
  int degree(int v) const { return out_offset_[v + 1] - out_offset_[v]; }
  /// Edge between v and w, or -1.
  int find_edge(int v, int w) const;
  /// Halfedge from v to w, or -1.
  int find_halfedge(int v, int w) const;

  // Metric quantities.
  double edge_length(int e) const { return lengths_[e]; }
  double halfedge_length(int h) const { return lengths_[he_edge_[h]]; }
  double corner_angle(int h) const { return corner_angle_[h]; }
  double face_area(int f) const { return face_area_[f]; }
  /// Barycentric dual area (one third of the incident face areas).
  double dual_area(int v) const { return dual_area_[v]; }
  double total_area() const { return total_area_; }
  double angle_sum(int v) const { return angle_sum_[v]; }
  /// Angle defect 2 pi minus the angle sum at v.
  double angle_defect(int v) const { return kTwoPi - angle_sum_[v]; }
  /// Share of the incident vertex defects assigned to face f, proportional to corner angle.
  double face_curvature(int f) const { return face_curvature_[f]; }
  /// Half the sum of the cotangents of the two opposite corners.
  double cotan_weight(int e) const { return cotan_weight_[e]; }
  /// Angle of halfedge h in the tangent polygon of its tail, rescaled to total 2 pi.
  double polygon_angle(int h) const { return polygon_angle_[h]; }
  double mean_edge_length() const { return mean_edge_length_; }
  double max_edge_length() const { return max_edge_length_; }

  /// 2-D layout of face f: corner 0 at the origin, corner 1 on the positive x axis.
  std::array<Eigen::Vector2d, 3> layout(int f) const;
  Eigen::Vector2d layout_point(const SurfacePoint& p) const;

  /// Edges whose cotan weight is not positive (warning list for Hodge stars).
  std::vector<int> nonpositive_cotan_edges() const;

  /// Vertex-located surface point.
  SurfacePoint vertex_point(int v) const;
  /// Vertex with the largest barycentric weight.
  int nearest_vertex(const SurfacePoint& p) const;

 private:
  SurfaceMesh() = default;
  void build(std::vector<int> anchor_targets);

  int num_vertices_ = 0;
  std::vector<Face> faces_;
  std::vector<Eigen::Vector3d> positions_;
  std::vector<std::array<int, 2>> edges_;
  std::vector<int> edge_he_;
  std::vector<int> he_edge_;
  std::vector<int> twin_;
  std::vector<int> out_;
  std::vector<int> out_offset_;
  std::vector<double> lengths_;
  std::vector<double> corner_angle_;
  std::vector<double> face_area_;
  std::vector<double> dual_area_;
  std::vector<double> angle_sum_;
  std::vector<double> face_curvature_;
  std::vector<double> cotan_weight_;
  std::vector<double> polygon_angle_;
  double total_area_ = 0.0;
  double mean_edge_length_ = 0.0;
  double max_edge_length_ = 0.0;

  // Transient, used only during construction.
  std::vector<std::array<double, 3>> face_lengths_;
};

// Mesh I/O. Formats: OFF, OBJ (positions + triangles), INTRINSIC (edge lengths).
SurfaceMesh read_off(std::istream& in);
SurfaceMesh read_obj(std::istream& in);
SurfaceMesh read_intrinsic(std::istream& in);
/// Dispatch on the extension (.off, .obj) or the INTRINSIC header.
SurfaceMesh load_mesh(const std::string& path);
void write_intrinsic(std::ostream& out, const SurfaceMesh& mesh);
void write_off(std::ostream& out, const SurfaceMesh& mesh);

// Generators for the test surfaces.
SurfaceMesh make_icosphere(int level);
/// n x n grid of square cells with side `cell`, periodic in both directions, intrinsic.
/// Vertex (i, j) has index j * n + i; anchors point along +x.
SurfaceMesh make_flat_torus(int n, double cell = 1.0);
/// Embedded torus of revolution with major radius R and minor radius r.
SurfaceMesh make_revolution_torus(double major, double minor, int n_major, int n_minor);
/// Genus-2 intrinsic surface: two flat n x n tori with one cell removed each, glued along the holes.
SurfaceMesh make_genus2(int n);

/// Per-edge coordinate increments (dx, dy) of the flat torus from `make_flat_torus`.
std::array<Eigen::VectorXd, 2> flat_torus_coordinate_forms(const SurfaceMesh& mesh, int n, double cell = 1.0);

}  // namespace glv
