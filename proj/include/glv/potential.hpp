#pragma once

#include <deque>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "glv/exterior.hpp"
#include "glv/geodesic.hpp"

namespace glv {

/// Green's function of the cotan Laplacian with the mean-zero normalization:
/// L G(., y) = delta_y - (dual area) / Area, with zero lumped mean.
/// `steiner` sets the resolution of the geodesic distances used near the diagonal.
class GreenOperator {
 public:
  explicit GreenOperator(const SurfaceMesh& mesh, int steiner = 16, std::size_t cache_limit = 256);

  const SurfaceMesh& mesh() const { return *mesh_; }
  const LaplaceSolver& solver() const { return solver_; }
  const GeodesicSolver& geodesics() const { return geodesics_; }

  /// Column G(., v) for a vertex source; the most recent `cache_limit` columns are kept.
  Eigen::VectorXd column(int v) const;
  /// G(., y) for a barycentric source.
  Cochain0 green(const SurfacePoint& y) const;
  /// G(x, y) for two surface points.
  double value(const SurfacePoint& x, const SurfacePoint& y) const;

  /// Diagonal of the regular part, H(y, y), by Richardson extrapolation of ring averages of
  /// G(x, y) + log(dist) / 2 pi at radii {4h, 8h, 16h}.
  double regular_diagonal(const SurfacePoint& y) const;
  /// Ring averages used by `regular_diagonal`, with the radii.
  struct RingData {
    std::vector<double> radius;
    std::vector<double> average;
    double extrapolated = 0.0;
  };
  RingData regular_diagonal_data(const SurfacePoint& y) const;
  /// H(x, y) = G(x, y) + log(dist(x, y)) / 2 pi near y, with H(y, y) at the source itself.
  Cochain0 regular_part(const SurfacePoint& y, double radius) const;

  /// Mesh size used for the ring radii.
  double h() const { return h_; }

 private:
  const SurfaceMesh* mesh_;
  LaplaceSolver solver_;
  GeodesicSolver geodesics_;
  double h_;
  mutable std::mutex mutex_;
  std::size_t cache_limit_;
  mutable std::map<int, std::shared_ptr<const Eigen::VectorXd>> cache_;
  mutable std::deque<int> order_;
};

struct CurvaturePotential {
  Cochain0 psi0;
  double kappa_bar = 0.0;
  double residual = 0.0;
};

/// Solves L psi0 = -K + kappa_bar * (dual area), zero mean.
CurvaturePotential psi0(const SurfaceMesh& mesh, const LaplaceSolver& solver);
CurvaturePotential psi0(const SurfaceMesh& mesh);
/// 1/2 integral of |d psi0|^2.
double curvature_dirichlet(const SurfaceMesh& mesh, const CurvaturePotential& c);

struct VortexPotential {
  Cochain0 psi;  ///< Density of the 2-form psi.
  std::vector<SurfacePoint> a;
  std::vector<int> d;
  double residual = 0.0;
};

/// Solves L psi = -K + 2 pi sum d_k delta_{a_k}; throws "Poincare-Hopf violation" unless sum d = chi.
VortexPotential psi(const SurfaceMesh& mesh, const LaplaceSolver& solver, const std::vector<SurfacePoint>& a,
                    const std::vector<int>& d);
VortexPotential psi(const SurfaceMesh& mesh, const std::vector<SurfacePoint>& a, const std::vector<int>& d);

/// Checks sum d = chi, throwing the Poincare-Hopf error otherwise.
void check_index_sum(const SurfaceMesh& mesh, const std::vector<int>& d);

/// CSV rows "vertex,value".
void write_vertex_csv(std::ostream& out, const Cochain0& f, const char* name = "value");

}  // namespace glv
