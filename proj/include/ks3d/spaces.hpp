#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ks3d/mesh.hpp"
#include "ks3d/quadrature.hpp"

namespace ks3d {

/// Scalar finite element kinds. BRNormalBubbles is vector valued: its local
/// basis function for face F is phi_F * nu_F with the global face normal.
enum class SpaceKind { P1C, P2C, P1NC, Bubble, P1CPlusBubble, P0, BRNormalBubbles };

[[nodiscard]] std::string_view to_string(SpaceKind kind) noexcept;
[[nodiscard]] int local_dof_count(SpaceKind kind) noexcept;

enum class EntityType { Vertex, Edge, Face, Cell };

struct DofEntity {
  EntityType type = EntityType::Vertex;
  int index = -1;
};

/// Marks a local slot without a global degree of freedom (face bubbles on
/// Dirichlet faces).
inline constexpr int kNoDof = -1;

/// Degree-of-freedom layout of one scalar space over a mesh. Local order
/// per cell: vertices in cell order, then edges (P2) in Mesh::kLocalEdges
/// order, then faces opposite each local vertex.
class DofMap {
 public:
  [[nodiscard]] SpaceKind kind() const noexcept { return kind_; }
  [[nodiscard]] int total_dofs() const noexcept { return static_cast<int>(entities_.size()); }
  [[nodiscard]] int local_count() const noexcept { return local_; }
  [[nodiscard]] std::span<const int> cell_dofs(int c) const {
    return {cell_to_global_.data() + static_cast<std::size_t>(c) * local_,
            static_cast<std::size_t>(local_)};
  }
  [[nodiscard]] const DofEntity& entity(int dof) const { return entities_[dof]; }
  [[nodiscard]] bool is_dirichlet(int dof) const { return dirichlet_[dof] != 0; }
  [[nodiscard]] int num_constrained() const noexcept;

 private:
  friend DofMap build_dofmap(const Mesh& mesh, SpaceKind kind);

  SpaceKind kind_ = SpaceKind::P1C;
  int local_ = 0;
  std::vector<int> cell_to_global_;
  std::vector<DofEntity> entities_;
  std::vector<char> dirichlet_;
};

[[nodiscard]] DofMap build_dofmap(const Mesh& mesh, SpaceKind kind);

/// Local basis values at a barycentric point, in local order. For
/// BRNormalBubbles the scalar bubble factors are returned.
void eval_basis(SpaceKind kind, const Bary& bary, std::span<double> out);

/// Physical gradients of the local basis on `cell`.
void eval_basis_gradients(const Mesh& mesh, int cell, SpaceKind kind, const Bary& bary,
                          std::span<Vec3> out);

enum class VelocitySpaceKind {
  KsP2,            // S^{C,1} x S^{C,2} x S^{NC,1}
  KsBubble,        // S^{C,1} x (S^{C,1} + face bubbles) x S^{NC,1}
  BernardiRaugel,  // (S^{C,1})^3 + normal face bubbles
  P1P1NC,          // S^{C,1} x S^{C,1} x S^{NC,1} (not inf-sup stable)
  P1NCNC,          // S^{C,1} x S^{NC,1} x S^{NC,1} (no discrete Korn inequality)
};

[[nodiscard]] std::string_view to_string(VelocitySpaceKind kind) noexcept;
/// Accepts "ks-p2", "ks-bubble", "br", "p1p1nc", "p1ncnc".
[[nodiscard]] VelocitySpaceKind parse_velocity_space(std::string_view name);

/// Composite vector-valued velocity space. Global numbering is blockwise:
/// component x1, x2, x3, then (Bernardi-Raugel only) the normal bubbles.
class VelocitySpace {
 public:
  VelocitySpace(std::shared_ptr<const Mesh> mesh, VelocitySpaceKind kind);

  [[nodiscard]] const Mesh& mesh() const noexcept { return *mesh_; }
  [[nodiscard]] const std::shared_ptr<const Mesh>& mesh_ptr() const noexcept { return mesh_; }
  [[nodiscard]] VelocitySpaceKind kind() const noexcept { return kind_; }
  [[nodiscard]] int num_blocks() const noexcept { return static_cast<int>(blocks_.size()); }
  [[nodiscard]] const DofMap& block(int b) const { return blocks_[b]; }
  /// Vector component carried by block b, or -1 for the normal bubbles.
  [[nodiscard]] int block_component(int b) const { return b < 3 ? b : -1; }
  [[nodiscard]] int block_offset(int b) const { return offsets_[b]; }
  [[nodiscard]] int total_dofs() const noexcept { return offsets_.back(); }
  [[nodiscard]] int local_count() const noexcept { return local_count_; }

  /// Global indices of the local basis (kNoDof for absent slots).
  void cell_dofs(int c, std::span<int> out) const;

  /// Values and gradients (grad(i,j) = d v_i / d x_j) of the local vector
  /// basis. Either span may be empty to skip that part.
  void eval(int c, const Bary& bary, std::span<Vec3> values, std::span<Mat3> gradients) const;

  [[nodiscard]] bool is_dirichlet(int dof) const { return dirichlet_[dof] != 0; }
  [[nodiscard]] std::vector<int> free_dofs() const;
  [[nodiscard]] int num_free() const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  VelocitySpaceKind kind_;
  std::vector<DofMap> blocks_;
  std::vector<int> offsets_;
  std::vector<char> dirichlet_;
  int local_count_ = 0;
};

using VectorField = std::function<Vec3(const Vec3&)>;
using ScalarField = std::function<double(const Vec3&)>;

/// Coefficients of a discrete velocity (including Dirichlet values).
struct FiniteElementFunction {
  std::shared_ptr<const VelocitySpace> space;
  Eigen::VectorXd coefficients;

  [[nodiscard]] Vec3 value(int cell, const Bary& bary) const;
  [[nodiscard]] Mat3 gradient(int cell, const Bary& bary) const;
};

/// Canonical interpolant: vertex values, P2 edge-midpoint values, face means
/// (degree-4 face rule) for the nonconforming component, zero bubbles.
[[nodiscard]] FiniteElementFunction interpolate(std::shared_ptr<const VelocitySpace> space,
                                                const VectorField& f);

/// Interpolant restricted to the Dirichlet degrees of freedom (zero elsewhere).
[[nodiscard]] FiniteElementFunction dirichlet_lifting(std::shared_ptr<const VelocitySpace> space,
                                                      const VectorField& f);

/// Scalar interpolation into a single DofMap, with the same functionals.
[[nodiscard]] Eigen::VectorXd interpolate(const Mesh& mesh, const DofMap& dofs,
                                          const ScalarField& f);

/// Sum of coefficient times basis on one cell (no continuity assumed).
[[nodiscard]] double eval_function(const Mesh& mesh, const DofMap& dofs,
                                   const Eigen::VectorXd& coefficients, int cell,
                                   const Bary& bary);
[[nodiscard]] Vec3 eval_function(const FiniteElementFunction& fef, int cell, const Bary& bary);

}  // namespace ks3d
