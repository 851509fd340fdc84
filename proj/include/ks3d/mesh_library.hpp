#pragma once

#include <array>

#include "ks3d/mesh.hpp"

namespace ks3d {

/// Boundary classifier labelling every boundary face Dirichlet.
[[nodiscard]] BoundaryClassifier all_dirichlet();

/// conv{0, e1, e2, e3}.
[[nodiscard]] Mesh reference_tet(const BoundaryClassifier& classify = all_dirichlet());

/// Vertex patch of z = 0 with the 8 cells T_jkl = conv{z, (-1)^j e1, (-1)^k e2,
/// (-1)^l e3}, j,k,l in {1,2}. Cell index of T_jkl is 4(j-1) + 2(k-1) + (l-1).
[[nodiscard]] Mesh octahedron_patch(const BoundaryClassifier& classify = all_dirichlet());
[[nodiscard]] int octahedron_cell(int j, int k, int l);

/// Four cells around the edge conv{0, e1}: conv{0,e1,e2,e3}, conv{0,e1,-e2,e3},
/// conv{0,e1,-e2,-e3}, conv{0,e1,e2,-e3}, in that order.
[[nodiscard]] Mesh korn_wedge(const BoundaryClassifier& classify = all_dirichlet());

/// Pyramid over the criss-cross square {0} x (-1,1)^2 with apex (1,0,0), split
/// into the four cells conv{(1,0,0), T~_j}.
[[nodiscard]] Mesh korn_pyramid(const BoundaryClassifier& classify = all_dirichlet());

/// The 6-tet Kuhn subdivision of a single box (every vertex on the boundary).
[[nodiscard]] Mesh kuhn_box(const Vec3& lo, const Vec3& hi,
                            const BoundaryClassifier& classify = all_dirichlet());

/// Box split into 2x2x2 sub-boxes, each Kuhn-subdivided along the diagonal
/// that ends in the box centre, so that every interior face touches the
/// centre vertex.
[[nodiscard]] Mesh cube_mesh(const Vec3& lo, const Vec3& hi,
                             const BoundaryClassifier& classify = all_dirichlet());

/// ((-1,1)^2 \ ([0,1] x [-1,0])) x (-1,1) as three 1 x 1 x 2 boxes, each
/// meshed like cube_mesh().
[[nodiscard]] Mesh lshape_mesh(const BoundaryClassifier& classify = all_dirichlet());

}  // namespace ks3d
