#pragma once

#include <memory>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "glv/surface.hpp"

namespace glv {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Where the values of a cochain live.
enum class Cell {
  Vertex,      ///< primal 0-cochain
  Edge,        ///< primal 1-cochain, sign follows edge orientation
  Face,        ///< primal 2-cochain (integrated over faces)
  VertexDual,  ///< 2-form integrated over the barycentric dual cell of each vertex
};

template <Cell C>
struct Cochain {
  Eigen::VectorXd values;

  Cochain() = default;
  explicit Cochain(Eigen::VectorXd v) : values(std::move(v)) {}
  static Cochain zero(const SurfaceMesh& mesh) { return Cochain(Eigen::VectorXd::Zero(size(mesh))); }

  static Eigen::Index size(const SurfaceMesh& mesh) {
    if constexpr (C == Cell::Vertex || C == Cell::VertexDual) return mesh.num_vertices();
    else if constexpr (C == Cell::Edge) return mesh.num_edges();
    else return mesh.num_faces();
  }
  double operator[](Eigen::Index i) const { return values[i]; }
  double& operator[](Eigen::Index i) { return values[i]; }
  Eigen::Index size() const { return values.size(); }
};

using Cochain0 = Cochain<Cell::Vertex>;
using Cochain1 = Cochain<Cell::Edge>;
using Cochain2 = Cochain<Cell::Face>;
using DualCochain2 = Cochain<Cell::VertexDual>;

/// Angle defects as a dual 2-form; sums to 2 pi chi.
DualCochain2 gaussian_curvature(const SurfaceMesh& mesh);
/// The same curvature redistributed onto faces in proportion to corner angles.
Cochain2 face_curvature(const SurfaceMesh& mesh);

// Operators. d0: E x V, d1: F x E; Hodge stars are diagonal.
SparseMatrix d0(const SurfaceMesh& mesh);
SparseMatrix d1(const SurfaceMesh& mesh);
SparseMatrix hodge0(const SurfaceMesh& mesh);
SparseMatrix hodge1(const SurfaceMesh& mesh);
SparseMatrix hodge2(const SurfaceMesh& mesh);
/// Codifferential on 1-forms, the adjoint of d0 for the hodge0/hodge1 inner products:
/// d* = hodge0^{-1} d0^T hodge1.
SparseMatrix codifferential1(const SurfaceMesh& mesh);
/// Cotan Laplacian d0^T hodge1 d0 (positive semi-definite).
SparseMatrix cotan_laplacian(const SurfaceMesh& mesh);

Cochain1 apply_d0(const SurfaceMesh& mesh, const Cochain0& f);
Cochain2 apply_d1(const SurfaceMesh& mesh, const Cochain1& a);
Cochain0 apply_codifferential(const SurfaceMesh& mesh, const Cochain1& a);
/// Inner product of 1-forms under hodge1.
double inner1(const SurfaceMesh& mesh, const Cochain1& a, const Cochain1& b);

/// Integral of a vertex function against the lumped measure.
double integrate(const SurfaceMesh& mesh, const Cochain0& f);
/// Value of a vertex function at a surface point (linear interpolation).
double evaluate(const SurfaceMesh& mesh, const Cochain0& f, const SurfacePoint& p);
/// Dirac mass at p split barycentrically onto the three corner vertices.
DualCochain2 dirac(const SurfaceMesh& mesh, const SurfacePoint& p, double weight = 1.0);

/// Factorized cotan Laplacian with the constant kernel removed by pinning vertex 0.
///
/// Solves L x = b for b with zero sum and returns the solution with zero lumped mean.
class LaplaceSolver {
 public:
  explicit LaplaceSolver(const SurfaceMesh& mesh);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  const SparseMatrix& laplacian() const { return laplacian_; }
  const SurfaceMesh& mesh() const { return *mesh_; }

 private:
  const SurfaceMesh* mesh_;
  SparseMatrix laplacian_;
  std::unique_ptr<Eigen::SimplicialLDLT<SparseMatrix>> factor_;
};

/// Solves -Laplace psi = rhs for a dual 2-form rhs with zero total; returns the density of psi
/// (psi = density * vol) normalized to zero mean. Throws on an unbalanced right-hand side.
Cochain0 solve_poisson2(const LaplaceSolver& solver, const DualCochain2& rhs);
Cochain0 solve_poisson2(const SurfaceMesh& mesh, const DualCochain2& rhs);

}  // namespace glv
