#pragma once

#include <iosfwd>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "glv/canonical.hpp"
#include "glv/potential.hpp"

namespace glv {

/// Terms of the closed formula for W.
struct RenormTerms {
  double interaction = 0.0;  ///< 4 pi^2 sum over unordered pairs d_l d_k G(a_l, a_k).
  double self = 0.0;         ///< 2 pi^2 sum d_k^2 H(a_k, a_k).
  double psi0_linear = 0.0;  ///< 2 pi sum d_k psi0(a_k).
  double flux = 0.0;         ///< |Phi|^2 / 2.
  double curvature = 0.0;    ///< integral of |d psi0|^2 / 2.

  double total() const { return interaction + self + psi0_linear + flux + curvature; }
};

struct RenormalizedEnergyReport {
  double W_formula = std::numeric_limits<double>::quiet_NaN();
  double W_limit = std::numeric_limits<double>::quiet_NaN();
  RenormTerms terms;
  std::vector<double> H;  ///< H(a_k, a_k).

  std::vector<double> radii;    ///< Decreasing.
  std::vector<double> partial;  ///< Energy outside the balls plus pi log r sum d_k^2.
  std::vector<double> corrected;  ///< Partial values minus the fitted core term.
  double slope = 0.0;           ///< Fitted coefficient of r^2.
  double core = 0.0;            ///< Fitted coefficient of (h / r)^2.
  double fit_residual = 0.0;    ///< Largest deviation from the fitted model.
  bool monotone = false;        ///< Corrected values monotone in r with shrinking increments.
};

/// Green's function, canonical solver and curvature potential for one mesh.
class RenormalizedEnergy {
 public:
  explicit RenormalizedEnergy(const SurfaceMesh& mesh, std::span<const double> frame_offsets = {});

  const SurfaceMesh& mesh() const { return *mesh_; }
  const GreenOperator& green() const { return green_; }
  const CanonicalSolver& canonical() const { return canonical_; }
  const CurvaturePotential& curvature() const { return psi0_; }
  /// Coarser distances for separation checks.
  const GeodesicSolver& geodesics() const { return coarse_; }
  double h() const { return green_.h(); }

  /// Closed formula. Throws on coincident points, an index sum other than chi, or Phi off the lattice.
  RenormalizedEnergyReport formula(const VortexConfiguration& config) const;
  /// Removed-ball limit from the canonical field, fitted as W + b r^2 + c (h / r)^2. At least four
  /// radii, each at least 3h, below the injectivity radius and below half the smallest separation.
  RenormalizedEnergyReport limit(const VortexConfiguration& config, std::vector<double> radii) const;
  /// Both sides.
  RenormalizedEnergyReport evaluate(const VortexConfiguration& config, const std::vector<double>& radii) const;

  /// {8, 6, 5, 4, 3} h, dropping radii that violate the limit preconditions.
  std::vector<double> default_radii(const VortexConfiguration& config) const;

  /// Checks the lattice condition for genus > 0 (or an empty Phi for genus 0).
  void check_flux(const VortexConfiguration& config) const;

 private:
  const SurfaceMesh* mesh_;
  GreenOperator green_;
  CanonicalSolver canonical_;
  CurvaturePotential psi0_;
  double curvature_dirichlet_ = 0.0;
  GeodesicSolver coarse_;
};

RenormalizedEnergyReport W_formula(const SurfaceMesh& mesh, const VortexConfiguration& config);
RenormalizedEnergyReport W_limit(const SurfaceMesh& mesh, const VortexConfiguration& config,
                                 const std::vector<double>& radii);

/// Per-face share of 1/2 sum w_e x_e^2.
std::vector<double> form_energy_per_face(const SurfaceMesh& mesh, const Cochain1& x);

/// Smallest pairwise geodesic distance.
double min_separation(const GeodesicSolver& geo, const std::vector<SurfacePoint>& a);

struct MinimizeWOptions {
  double separation_factor = 5.0;  ///< Guard distance in units of h.
  int max_moves = 2000;
  bool refine = true;              ///< Barycentric finite-difference polish after the vertex descent.
  int refine_steps = 20;
};

struct WMove {
  int step = 0;
  int vortex = 0;
  int from = -1;  ///< Vertex (or -1 during refinement).
  int to = -1;
  double W = 0.0;
};

struct MinimizeWResult {
  VortexConfiguration config;
  double W = 0.0;
  std::vector<WMove> log;
  bool converged = false;
  bool collapse = false;  ///< An improving move was blocked by the separation guard.
  std::string status;
  int evaluations = 0;
};

/// Coordinate descent over vertex-neighbourhood moves. Phi follows the nearest lattice point of
/// the previous Phi. `start` lists one vertex per vortex.
MinimizeWResult minimize_W(const RenormalizedEnergy& ctx, const std::vector<int>& d, const std::vector<int>& start,
                           const Eigen::VectorXd& phi_start = {}, const MinimizeWOptions& options = {});

/// Random start vertices with pairwise separation at least `min_dist`.
std::vector<int> random_start(const RenormalizedEnergy& ctx, int n, unsigned seed, double min_dist);

/// CSV rows "radius,partial,corrected".
void write_sweep_csv(std::ostream& out, const RenormalizedEnergyReport& report);

}  // namespace glv
