#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "ks3d/linalg.hpp"
#include "ks3d/spaces.hpp"

namespace ks3d {

/// Quadrature degrees used by the assemblers.
inline constexpr int kStiffnessDegree = 4;
inline constexpr int kDivergenceDegree = 2;
inline constexpr int kMassDegree = 6;
inline constexpr int kLoadDegree = 8;
inline constexpr int kTractionDegree = 4;

/// a_h(u, v) = 2 mu sum_T int_T eps(u) : eps(v), over all velocity dofs.
[[nodiscard]] SparseMatrix assemble_a(const VelocitySpace& space, double mu);

/// Entry (i, T) = -int_T div(phi_i); columns are cells (P0 pressure).
[[nodiscard]] SparseMatrix assemble_b(const VelocitySpace& space);

enum class GramKind { Mass, Grad, Eps };

/// Gram matrices of int u.v, sum_T int grad u : grad v and
/// sum_T int eps(u) : eps(v).
[[nodiscard]] SparseMatrix assemble_gram(const VelocitySpace& space, GramKind kind);

/// v^T G v for the Gram matrix of `kind`, evaluated cellwise as a sum of
/// squares at quadrature points (no cancellation for near-kernel v).
/// `coefficients` covers all velocity dofs.
[[nodiscard]] double gram_form(const VelocitySpace& space, const VectorXd& coefficients,
                               GramKind kind);

/// Pressure mass diagonal |T|.
[[nodiscard]] VectorXd pressure_mass(const Mesh& mesh);

using TractionField = std::function<Vec3(const Vec3& x, const Vec3& normal)>;

/// F_i = int g . phi_i + sum over Neumann faces of int_F t(x, nu) . phi_i.
/// Either callback may be empty.
[[nodiscard]] VectorXd assemble_load(const VelocitySpace& space, const VectorField& body,
                                     const TractionField& traction);

/// Linear system on the free velocity dofs after eliminating the Dirichlet
/// values carried by `lifting`.
struct StokesSystem {
  std::shared_ptr<const VelocitySpace> space;
  SparseMatrix a;  // free x free
  SparseMatrix b;  // free x cells
  VectorXd f;      // F_free - A_fc * lifting
  VectorXd g;      // -B^T * lifting
  FiniteElementFunction lifting;
  std::vector<int> free;
  double mu = 1.0;

  [[nodiscard]] int num_velocity() const { return static_cast<int>(free.size()); }
  [[nodiscard]] int num_pressure() const { return b.cols(); }
  /// Free velocity dofs plus pressure dofs.
  [[nodiscard]] int n_dof() const { return num_velocity() + num_pressure(); }
  /// Nonzeros of the reduced block matrix [A B; B^T 0].
  [[nodiscard]] long long nnz() const { return a.nnz() + 2 * b.nnz(); }

  /// Lifting plus the free coefficients scattered into place.
  [[nodiscard]] FiniteElementFunction expand(const VectorXd& free_values) const;
};

/// Eliminates the constrained rows and columns. Throws
/// Error(InconsistentLifting) if the lifting is nonzero at a free dof.
[[nodiscard]] StokesSystem apply_dirichlet(std::shared_ptr<const VelocitySpace> space,
                                           const SparseMatrix& a_full, const SparseMatrix& b_full,
                                           const VectorXd& f_full,
                                           const FiniteElementFunction& lifting, double mu);

/// Assembles everything for one problem.
[[nodiscard]] StokesSystem assemble_stokes(std::shared_ptr<const VelocitySpace> space, double mu,
                                           const VectorField& body, const TractionField& traction,
                                           const VectorField& dirichlet_data);

}  // namespace ks3d
