#pragma once

#include <array>
#include <functional>
#include <vector>

#include "ks3d/mesh.hpp"

namespace ks3d {

using Bary = std::array<double, 4>;
using FaceBary = std::array<double, 3>;

/// Quadrature on the reference tetrahedron in barycentric coordinates;
/// weights are normalized to sum to one (multiply by |T|).
struct QuadratureRule {
  std::vector<Bary> points;
  std::vector<double> weights;
  int exactness_degree = 0;

  [[nodiscard]] int size() const noexcept { return static_cast<int>(points.size()); }
};

/// Triangle rule in barycentric coordinates of the face's vertices; weights
/// sum to one (multiply by the face area).
struct FaceQuadratureRule {
  std::vector<FaceBary> points;
  std::vector<double> weights;
  int exactness_degree = 0;

  [[nodiscard]] int size() const noexcept { return static_cast<int>(points.size()); }
};

/// Supported degrees: 1, 2, 3, 4, 5, 6, 8. Degree 1 is the centroid rule and
/// degree 2 the symmetric 4-point rule; higher degrees are collapsed
/// (conical) Gauss-Jacobi product rules with positive weights.
/// Throws Error(UnsupportedDegree) otherwise.
[[nodiscard]] const QuadratureRule& rule_for_degree(int degree);

/// Supported degrees: 1, 2 (3 points), 4 (6 points), 6.
[[nodiscard]] const FaceQuadratureRule& face_rule_for_degree(int degree);

/// Gauss-Jacobi nodes/weights for the weight (1-x)^a (1+x)^b on [-1,1].
void gauss_jacobi(int n, double a, double b, std::vector<double>& nodes,
                  std::vector<double>& weights);

[[nodiscard]] double integrate(const Mesh& mesh, int cell,
                               const std::function<double(const Vec3&)>& f,
                               const QuadratureRule& rule);

/// Maps face-local barycentric coordinates of mesh face `face` (ordered as
/// its sorted vertex triple) to a physical point.
[[nodiscard]] Vec3 face_point(const Mesh& mesh, int face, const FaceBary& bary);

/// Barycentric coordinates in `cell` of a physical point (affine, so exact up
/// to rounding for points inside).
[[nodiscard]] Bary barycentric_in_cell(const Mesh& mesh, int cell, const Vec3& x);

}  // namespace ks3d
