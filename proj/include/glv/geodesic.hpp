#pragma once

#include <limits>
#include <vector>

#include "glv/surface.hpp"

namespace glv {

/// Result of a single-source distance computation.
struct DistanceField {
  std::vector<double> vertex;  ///< Distance at every vertex (infinity beyond the cutoff).
  double cutoff = std::numeric_limits<double>::infinity();
};

/// Boundary and interior of a sublevel set of a distance field.
struct GeodesicBall {
  SurfacePoint center;
  double radius = 0.0;
  std::vector<SurfacePoint> boundary;  ///< Closed polyline, first point not repeated.
  double boundary_length = 0.0;
  double area = 0.0;
  /// Fraction of each face lying inside the ball (linear interpolation of the distance field).
  std::vector<double> face_fraction;
};

/// Shortest paths in a Steiner graph laid over the intrinsic metric.
///
/// Each edge carries `steiner` interior nodes; all boundary nodes of a face are joined by
/// straight segments in the face's flat layout. The resulting graph metric is symmetric,
/// satisfies the triangle inequality exactly, and overestimates the polyhedral distance
/// by a relative error of order 1 / steiner^2.
class GeodesicSolver {
 public:
  explicit GeodesicSolver(const SurfaceMesh& mesh, int steiner = 4);

  const SurfaceMesh& mesh() const { return *mesh_; }

  double distance(const SurfacePoint& a, const SurfacePoint& b) const;
  /// Vertex distances from `source`, exploring only up to `cutoff`.
  DistanceField distance_field(const SurfacePoint& source,
                               double cutoff = std::numeric_limits<double>::infinity()) const;
  /// Distance from the field's source to an arbitrary point, using the field's node values.
  double distance_to(const DistanceField& field, const SurfacePoint& p) const;

  /// Ball of radius r around `center`. Throws if the boundary is not a single closed loop or
  /// r exceeds half the estimated diameter.
  GeodesicBall ball(const SurfacePoint& center, double r) const;
  /// Same, reusing a precomputed field from `center`.
  GeodesicBall ball(const SurfacePoint& center, double r, const DistanceField& field) const;

  /// Double-sweep estimate of the diameter (cached).
  double diameter() const;
  /// Half the diameter for spheres; half the shortest noncontractible loop otherwise.
  double injectivity_radius() const;

 private:
  struct FaceNode {
    int node;
    Eigen::Vector2d pos;
  };
  std::vector<double> run(const SurfacePoint& source, double cutoff, const SurfacePoint* target,
                          double* target_dist) const;
  std::span<const FaceNode> face_nodes(int f) const {
    return {face_nodes_.data() + static_cast<std::size_t>(f) * per_face_, static_cast<std::size_t>(per_face_)};
  }
  std::vector<int> node_faces(int node) const;

  const SurfaceMesh* mesh_;
  int steiner_;
  int per_face_;
  int num_nodes_;
  std::vector<FaceNode> face_nodes_;
  mutable double diameter_ = -1.0;
  mutable double injectivity_ = -1.0;
};

}  // namespace glv
