#pragma once

#include <iosfwd>
#include <vector>

#include "glv/exterior.hpp"

namespace glv {

/// Closed path given as a sequence of halfedges, head of each equal to tail of the next.
using EdgeLoop = std::vector<int>;

/// Greedy tree-cotree decomposition.
///
/// The primal tree is the shortest-path tree from `root`; the dual cotree is a maximum spanning
/// tree of the remaining dual edges, weighted by the length of the loop each edge closes. The
/// 2g leftover edges each close one generator loop.
struct TreeCotree {
  int root = 0;
  std::vector<int> parent_halfedge;  ///< Per vertex: halfedge from the parent, -1 at the root.
  std::vector<double> depth;         ///< Tree distance to the root.
  std::vector<char> in_tree;         ///< Per edge.
  std::vector<char> in_cotree;       ///< Per edge.
  std::vector<int> cotree_order;     ///< Faces in breadth-first order from the cotree root.
  std::vector<int> cotree_parent;    ///< Per face: edge to the parent face, -1 at the root.
  std::vector<int> generators;       ///< Leftover edges.
  std::vector<double> generator_lengths;
  std::vector<EdgeLoop> loops;
};

TreeCotree build_tree_cotree(const SurfaceMesh& mesh, int root = 0);

/// Overwrites the cotree entries of `x` so that d1 x = target on every face; other entries are
/// kept. The target must be balanced against the fixed entries (total face sum zero).
void solve_on_cotree(const SurfaceMesh& mesh, const TreeCotree& tc, const Cochain2& target, Cochain1& x);

/// Oriented sum of a 1-cochain along a loop.
double loop_integral(const SurfaceMesh& mesh, const EdgeLoop& loop, const Cochain1& form);
/// Checks that consecutive halfedges chain and the path closes.
bool is_closed(const SurfaceMesh& mesh, const EdgeLoop& loop);
double loop_length(const SurfaceMesh& mesh, const EdgeLoop& loop);

struct CycleBasis {
  TreeCotree decomposition;
  std::vector<EdgeLoop> loops;
  int size() const { return static_cast<int>(loops.size()); }
};

CycleBasis homology_basis(const SurfaceMesh& mesh, int root = 0);

/// Orthonormal harmonic 1-forms and their periods over the cycle basis.
struct HarmonicBasis {
  std::vector<Cochain1> eta;
  Eigen::MatrixXd gram;     ///< (eta_k, eta_l) under hodge1.
  Eigen::MatrixXd periods;  ///< alpha(l, k) = integral of eta_k over loop l.
  int size() const { return static_cast<int>(eta.size()); }
};

/// Closed representatives dual to the generators, made co-closed and orthonormalized in loop order.
HarmonicBasis harmonic_basis(const SurfaceMesh& mesh, const CycleBasis& cycles, const LaplaceSolver& solver);
HarmonicBasis harmonic_basis(const SurfaceMesh& mesh, const CycleBasis& cycles);

/// Harmonic projection coefficients (eta_k, form).
Eigen::VectorXd harmonic_coefficients(const SurfaceMesh& mesh, const HarmonicBasis& basis, const Cochain1& form);

struct HomologyClass {
  Eigen::VectorXi c;
  double residual = 0.0;
};

/// Integer coordinates of a closed loop in the cycle basis. Throws if the rounding residual exceeds 0.05.
HomologyClass homology_class(const SurfaceMesh& mesh, const EdgeLoop& loop, const HarmonicBasis& basis);

/// Largest |d eta| and |d* eta| over the basis.
struct HarmonicResiduals {
  double closed = 0.0;
  double coclosed = 0.0;
  double gram = 0.0;
};
HarmonicResiduals harmonic_residuals(const SurfaceMesh& mesh, const HarmonicBasis& basis);

/// Singular values of [d1; d0^T hodge1] in ascending order (dense; small meshes only).
Eigen::VectorXd hodge_singular_values(const SurfaceMesh& mesh);

/// CSV rows "loop,step,halfedge,edge,sign".
void write_cycles_csv(std::ostream& out, const SurfaceMesh& mesh, const CycleBasis& cycles);
/// CSV rows "edge,eta_0,eta_1,...".
void write_harmonic_csv(std::ostream& out, const SurfaceMesh& mesh, const HarmonicBasis& basis);

}  // namespace glv
