#pragma once

#include <array>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ks3d/jet.hpp"
#include "ks3d/mesh.hpp"
#include "ks3d/spaces.hpp"

namespace ks3d {

using Jet1 = Jet<1>;
using Jet2 = Jet<2>;
using Jet3 = Jet<3>;

template <int N>
using JetVec = std::array<Jet<N>, 3>;

/// Exponent of the corner singularity on the L-shaped domain.
inline constexpr double kGrisvardAlpha = 0.544483736782464;
inline constexpr double kGrisvardOmega = 1.5 * std::numbers::pi;

/// Plate singular function on the L-shaped domain (x3 is ignored). The polar
/// angle is taken in [0, 3pi/2]. Throws Error(EvaluationAtCorner) within
/// 1e-12 of the origin.
template <int N>
[[nodiscard]] Jet<N> grisvard(const Jet<N>& x1, const Jet<N>& x2);

/// Convenience: order-3 jet of u_Gr at (x1, x2).
[[nodiscard]] Jet3 eval_ugr(double x1, double x2);

/// Same function written directly in polar coordinates (test reference).
[[nodiscard]] double grisvard_polar(double r, double theta);

/// A manufactured Stokes solution with its domain and boundary split.
struct ExactCase {
  std::string name;
  double mu = 1.0;
  BoundaryClassifier classify;
  std::function<Mesh(const BoundaryClassifier&)> coarse_mesh;
  std::function<JetVec<2>(const Vec3&)> velocity2;
  std::function<JetVec<1>(const Vec3&)> velocity1;
  std::function<Jet1(const Vec3&)> pressure1;

  [[nodiscard]] Mesh build_mesh() const { return coarse_mesh(classify); }
  /// Velocity value; on the L-shape reentrant edge this is the limit 0.
  [[nodiscard]] Vec3 u(const Vec3& x) const;
  [[nodiscard]] Mat3 grad_u(const Vec3& x) const;
  [[nodiscard]] double p(const Vec3& x) const;
  /// g = -2 mu div eps(u) + grad p.
  [[nodiscard]] Vec3 body_force(const Vec3& x) const;
  /// (2 mu eps(u) - p I) nu.
  [[nodiscard]] Vec3 traction(const Vec3& x, const Vec3& normal) const;
};

/// Known names: cube1, cube2, cube3, lshape. Throws Error(UnknownCase).
[[nodiscard]] ExactCase case_library(std::string_view name, double mu = 1.0);
[[nodiscard]] std::vector<std::string> case_names();

struct ErrorNorms {
  double u_h1 = 0.0;  // broken H1 seminorm of u - u_h
  double u_l2 = 0.0;
  double p_l2 = 0.0;
};

/// Cellwise degree-8 quadrature of |u - u_h|^2, |grad u - grad_h u_h|^2 and
/// |p - p_h|^2 (p_h piecewise constant per cell).
[[nodiscard]] ErrorNorms error_norms(const FiniteElementFunction& u_h, const Eigen::VectorXd& p_h,
                                     const ExactCase& exact);

}  // namespace ks3d
