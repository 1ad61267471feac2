#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "glv/connection.hpp"
#include "glv/geodesic.hpp"
#include "glv/topology.hpp"

namespace glv {

/// Vortex points, integer indices and the flux vector.
struct VortexConfiguration {
  std::vector<SurfacePoint> a;
  std::vector<int> d;
  Eigen::VectorXd phi;

  int size() const { return static_cast<int>(a.size()); }
};

/// The affine lattice {Phi : alpha Phi + zeta in 2 pi Z^{2g}}.
struct FluxLattice {
  Eigen::VectorXd zeta;   ///< Reduced to [0, 2 pi).
  Eigen::MatrixXd alpha;  ///< Periods, alpha(l, k) = integral of eta_k over loop l.

  /// Largest distance of alpha Phi + zeta from 2 pi Z, in radians.
  double residual(const Eigen::VectorXd& phi) const;
  bool contains(const Eigen::VectorXd& phi, double tol = 1e-6 * kTwoPi) const { return residual(phi) <= tol; }
  /// Phi for the integer vector m: alpha^{-1} (2 pi m - zeta).
  Eigen::VectorXd point(const Eigen::VectorXi& m) const;
};

struct LatticeProjection {
  Eigen::VectorXd phi;
  Eigen::VectorXi m;
  double residual = 0.0;  ///< |phi - phi_raw| in the Euclidean norm.
};

/// Nearest lattice point (rounding plus a search over neighbouring integer vectors).
LatticeProjection lattice_project(const Eigen::VectorXd& phi_raw, const FluxLattice& lat);

struct ZetaResult {
  Eigen::VectorXd zeta;
  /// Largest mod-2pi difference between the stored and the rerouted loops.
  double reroute_defect = 0.0;
  int rerouted_loops = 0;
};

struct ReconstructedField {
  TangentVectorField u;
  std::vector<char> core;  ///< Vertices within the core radius of some a_k.
  double period_defect = 0.0;
};

/// Everything needed to build canonical harmonic fields on one mesh.
class CanonicalSolver {
 public:
  CanonicalSolver(const SurfaceMesh& mesh, std::span<const double> frame_offsets = {});

  const SurfaceMesh& mesh() const { return *mesh_; }
  const FrameField& frame() const { return frame_; }
  const LaplaceSolver& solver() const { return solver_; }
  const CycleBasis& cycles() const { return cycles_; }
  const HarmonicBasis& basis() const { return basis_; }
  int genus() const { return mesh_->genus(); }

  /// Face targets of d j*: -K_f plus 2 pi d_k on the face holding a_k.
  Cochain2 targets(const std::vector<SurfacePoint>& a, const std::vector<int>& d) const;
  /// The co-exact part of j*: d c = targets, d* c = 0, no harmonic component.
  Cochain1 coexact(const std::vector<SurfacePoint>& a, const std::vector<int>& d) const;

  /// zeta_l = integral over lambda_l of (c + A) mod 2 pi, with lambda_l the stored generator
  /// rerouted around faces that hold a vortex.
  ZetaResult zeta(const std::vector<SurfacePoint>& a, const std::vector<int>& d) const;
  /// Same integrand along an arbitrary closed loop, reduced to [0, 2 pi).
  double zeta_along(const Cochain1& coexact, const EdgeLoop& loop) const;
  FluxLattice lattice(const std::vector<SurfacePoint>& a, const std::vector<int>& d) const;

  /// j* = c + sum Phi_k eta_k. Throws if Phi is off the lattice by more than `tol`.
  Cochain1 jstar(const VortexConfiguration& config, double tol = 1e-6 * kTwoPi) const;
  /// Integrates j* + A along a spanning tree from `root`. Throws on a period defect above 1e-3.
  ReconstructedField reconstruct(const Cochain1& jstar, const std::vector<SurfacePoint>& a, int root = 0,
                                 double phase = 0.0, double core_radius = -1.0) const;

  /// Flux vector (eta_k, j(u)) under hodge1.
  Eigen::VectorXd flux(const TangentVectorField& u) const;

 private:
  const SurfaceMesh* mesh_;
  FrameField frame_;
  LaplaceSolver solver_;
  CycleBasis cycles_;
  HarmonicBasis basis_;
};

/// Detour of `loop` around the given faces: a halfedge bordering such a face is replaced by the
/// two other edges of that face.
EdgeLoop reroute(const SurfaceMesh& mesh, const EdgeLoop& loop, const std::vector<int>& faces);

/// (1 / 2 pi)(sum of phase increments along the loop + curvature of the enclosed faces), rounded.
/// The loop must bound the region on its left. Throws on low modulus or a non-bounding loop.
struct DegreeResult {
  int degree = 0;
  double value = 0.0;
  double residual = 0.0;
};
DegreeResult degree(const TangentVectorField& u, const EdgeLoop& loop);
/// Faces on the left of a bounding loop; throws if the loop does not separate the surface.
std::vector<int> enclosed_faces(const SurfaceMesh& mesh, const EdgeLoop& loop);
/// Boundary loop (counterclockwise) of the union of the given faces, which must be a disk.
EdgeLoop region_boundary(const SurfaceMesh& mesh, const std::vector<int>& faces);

/// omega = d j(u) + K per face.
Cochain2 vorticity(const TangentVectorField& u);
/// Integer winding of the phase around each face (exact for fields without zeros at vertices).
std::vector<int> face_winding(const TangentVectorField& u);

struct Atom {
  SurfacePoint point;
  double weight = 0.0;
};

struct VorticityMeasure {
  std::vector<Atom> atoms;
  std::vector<int> index;          ///< Rounded weight / 2 pi per atom.
  std::vector<double> residual;    ///< |weight / 2 pi - index| per atom.
};

/// Clusters faces with |omega_f| > (pi / 2) * A_f / core_area into point masses. With
/// core_area <= 0 the threshold is pi / 2 per face. Throws when a cluster's weight is more than
/// 0.2 away from an integer multiple of 2 pi.
VorticityMeasure localize(const SurfaceMesh& mesh, const Cochain2& omega, double core_area = 0.0);

/// The measure 2 pi sum d_k delta_{a_k}.
VorticityMeasure point_measure(const std::vector<SurfacePoint>& a, const std::vector<int>& d);
/// Atoms of a raw face cochain at face centroids (entries below `floor` dropped).
VorticityMeasure cochain_measure(const SurfaceMesh& mesh, const Cochain2& omega, double floor = 1e-10);

/// Bounded-Lipschitz dual distance: sup of the integral of f against (mu - nu) over
/// ||f||_inf + Lip(f) <= 1.
double vorticity_distance(const GeodesicSolver& geo, const VorticityMeasure& mu, const VorticityMeasure& nu);

struct ZetaProbeRow {
  double t = 0.0;
  Eigen::VectorXd zeta;
};
/// zeta along a path of configurations.
std::vector<ZetaProbeRow> zeta_continuity_probe(const CanonicalSolver& cs, const std::vector<double>& t,
                                                const std::vector<VortexConfiguration>& path);

/// Smallest |x - y| modulo 2 pi.
double angle_distance(double x, double y);

}  // namespace glv
