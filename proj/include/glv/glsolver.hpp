#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "glv/profile.hpp"
#include "glv/renorm.hpp"

namespace glv {

/// E_eps on one frame in vertex-gather form. `evaluate` runs the OpenMP kernel and
/// `evaluate_serial` the edge-scatter reference.
class GLEnergy {
 public:
  GLEnergy(const FrameField& frame, const PotentialF& F, double eps);

  const FrameField& frame() const { return *frame_; }
  const PotentialF& potential() const { return F_; }
  double eps() const { return eps_; }
  int size() const { return static_cast<int>(mass_.size()); }

  /// Energy, and the gradient dE/dRe + i dE/dIm when `grad` is non-null.
  double evaluate(const Eigen::VectorXcd& z, Eigen::VectorXcd* grad = nullptr) const;
  double evaluate_serial(const Eigen::VectorXcd& z, Eigen::VectorXcd* grad = nullptr) const;

  /// Real Hessian in the ordering (Re z_0, Im z_0, Re z_1, ...).
  SparseMatrix hessian(const Eigen::VectorXcd& z) const;
  /// (L + c M) on each real component, c = 1 / eps^2.
  SparseMatrix preconditioner() const;

 private:
  const FrameField* frame_;
  PotentialF F_;
  double eps_;
  std::vector<double> mass_;
  std::vector<int> offset_, nbr_;
  std::vector<double> weight_;
  std::vector<Complex> rot_;  ///< e^{-iA} along v -> w, mapping w's coefficient to v's frame.
};

struct MinimizeOptions {
  int max_ncg = 4000;
  int max_newton = 60;
  double tolerance = 1e-6;  ///< Stationarity ||grad|| <= tolerance (1 + |E|).
  int smoothing_steps = 30;
  bool parallel = true;
};

struct SolverState {
  TangentVectorField iterate;
  double eps = 0.0;
  std::vector<double> energy_history;
  double gradient_norm = 0.0;
  int ncg_iterations = 0;
  int newton_iterations = 0;
  unsigned seed = 0;
  bool converged = false;
  std::string status;

  double energy() const { return energy_history.empty() ? 0.0 : energy_history.back(); }
};

/// Smoothed random start: random coefficients, a few connection-averaging sweeps, unit modulus.
TangentVectorField random_field(const FrameField& frame, unsigned seed, int smoothing_steps = 30);

/// Minimizes E_eps from `init`. Warns on stderr when eps < 5h; throws when eps < h.
SolverState minimize_E(const TangentVectorField& init, double eps, const PotentialF& F = {},
                       const MinimizeOptions& options = {});
SolverState minimize_E(const FrameField& frame, double eps, unsigned seed, const PotentialF& F = {},
                       const MinimizeOptions& options = {});

/// Phi_k = (j(u), eta_k) under hodge1.
Eigen::VectorXd flux(const TangentVectorField& u, const HarmonicBasis& basis);

struct DetectedVortex {
  SurfacePoint point;  ///< Zero of the linear interpolant in the core face.
  int degree = 0;
  std::vector<int> faces;
};

/// Clusters of faces with nonzero winding (faces sharing a vertex are joined).
std::vector<DetectedVortex> detect_vortices(const TangentVectorField& u);

struct RecoveryField {
  TangentVectorField u;
  double rho = 0.0;
  RadialProfile profile;
  std::vector<std::string> warnings;
};

/// u* outside B_rho(a_k); inside, the core profile on [0, rho] times the phase of u*.
/// rho = 16 eps, raised to 5h and capped at 0.4 times the smallest separation.
RecoveryField recovery_sequence(const RenormalizedEnergy& ctx, const VortexConfiguration& config, double eps,
                                const PotentialF& F = {});

/// Vorticity of u merged into patches of radius `patch` (atoms below 1e-5 dropped) against
/// 2 pi sum d_k delta_{a_k}. `bound` receives the merge error bound.
double field_vorticity_distance(const GeodesicSolver& geo, const TangentVectorField& u,
                                const VortexConfiguration& config, double patch, double* bound = nullptr);

struct ExpansionRow {
  double eps = 0.0;
  double energy = 0.0;
  double reduced = 0.0;  ///< E - n pi |log eps|.
  std::vector<DetectedVortex> vortices;
  int n = 0;
  int degree_sum = 0;
  bool unit_degrees = false;
  Eigen::VectorXd phi_measured;
  Eigen::VectorXd phi_projected;
  double W = std::numeric_limits<double>::quiet_NaN();
  double defect = std::numeric_limits<double>::quiet_NaN();  ///< reduced - W - n gamma_F.
  double liminf_margin = std::numeric_limits<double>::quiet_NaN();  ///< reduced - (W + n gamma_F).
  double vorticity_distance = std::numeric_limits<double>::quiet_NaN();
  double gradient_norm = 0.0;
  bool converged = false;
  unsigned seed = 0;
  std::string status;
};

struct ExpansionRecord {
  std::vector<ExpansionRow> rows;
  double gamma = 0.0;
  double N = 0.0;  ///< Fit E = N pi |log eps| + C.
  double C = 0.0;
  bool defect_decreasing = false;  ///< |D| strictly decreasing along the sweep, or below 1e-9.
  bool liminf_holds = false;
  double liminf_tolerance = 0.5;
  std::string note;
};

struct ExpansionOptions {
  MinimizeOptions minimize;
  double liminf_tolerance = 0.5;
  bool continuation = true;  ///< Also start each eps from the previous minimizer.
  PotentialF F;
};

/// Minimizes for every eps (largest first) from each seed and keeps the lowest energy.
ExpansionRecord expansion_experiment(const RenormalizedEnergy& ctx, std::vector<double> eps,
                                     const std::vector<unsigned>& seeds, const ExpansionOptions& options = {});

/// CSV rows "eps,energy,reduced,n,W,defect,vorticity_distance".
void write_expansion_csv(std::ostream& out, const ExpansionRecord& record);

}  // namespace glv
