#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ks3d/linalg.hpp"
#include "ks3d/spaces.hpp"

namespace ks3d {

enum class Verdict { Stable, Degenerate };

[[nodiscard]] std::string_view to_string(Verdict v) noexcept;

/// Constants at or below this value are reported as degenerate.
inline constexpr double kDegenerateThreshold = 1e-8;

struct StabilityReport {
  std::string quantity;  // "korn" or "infsup"
  std::string space;
  int level = 0;
  double constant = 0.0;
  /// Extremal vector on the free velocity dofs (Korn) or on the cells
  /// (inf-sup).
  VectorXd vector;
  double eigen_residual = 0.0;
  Verdict verdict = Verdict::Stable;
};

/// sqrt of the smallest eigenvalue of (E, Mass + Grad) on the free dofs.
[[nodiscard]] StabilityReport korn_constant(const std::shared_ptr<const VelocitySpace>& space,
                                            const EigenOptions& options = {});

/// sqrt of the smallest eigenvalue of (B^T Grad^{-1} B, diag|T|) on the free
/// velocity dofs; constants are deflated iff there is no Neumann boundary.
[[nodiscard]] StabilityReport infsup_constant(const std::shared_ptr<const VelocitySpace>& space,
                                              const EigenOptions& options = {});

struct BResidual {
  double max_abs = 0.0;
  int dof = -1;  // free velocity dof attaining the maximum
};

/// max over free velocity dofs i of |b_h(phi_i, q)|.
[[nodiscard]] BResidual b_residual(const VelocitySpace& space, const VectorXd& q);

struct InfSupCounterexample {
  VectorXd q;
  double q_norm = 0.0;  // L2 norm
  BResidual residual;
  double infsup = 0.0;
};

/// Octahedron patch with pure Dirichlet boundary and the space
/// P1C x P1C x P1NC: q is 1 on T_111, T_112, T_221, T_222 and 0 elsewhere,
/// minus `shift`. Throws Error(AssertionFailed) naming the offending dof if
/// some |b_h(phi_i, q)| exceeds 1e-13 max(1, ||q||).
[[nodiscard]] InfSupCounterexample counterexample_infsup(double shift = 0.5);

enum class KornVariant { Wedge, Tensor };

struct KornCounterexample {
  KornVariant variant = KornVariant::Wedge;
  double a = 1.0;
  VectorXd phi;  // coefficients on all dofs (wedge only)
  double eps_norm = 0.0;
  double max_interior_jump = 0.0;
  double max_boundary_mean = 0.0;
  double grad_norm = 0.0;
  double korn = 0.0;
  double cosine = 0.0;  // |cos| between phi and the Korn extremal vector
};

/// Wedge: the piecewise rigid motion on the four cells around conv{0, e1},
/// checked for zero strain, continuous face means, vanishing boundary means
/// and ||grad_h phi|| >= |a|. Tensor: the pyramid mesh, checked spectrally.
/// Throws Error(InvalidInput) for a = 0 and Error(AssertionFailed) naming
/// the failed check.
[[nodiscard]] KornCounterexample counterexample_korn(KornVariant variant, double a = 1.0);

/// max_T |(1/|T|) int_T div_h u_h|.
[[nodiscard]] double divergence_means(const FiniteElementFunction& u_h);

/// (sum_T ||g - mean_T g||^2_T)^{1/2} with degree-8 quadrature.
[[nodiscard]] double oscillation(const VectorField& g, const Mesh& mesh);
[[nodiscard]] double oscillation(const ScalarField& g, const Mesh& mesh);

}  // namespace ks3d
