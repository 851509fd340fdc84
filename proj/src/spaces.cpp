#include "ks3d/spaces.hpp"

#include <algorithm>

#include "ks3d/error.hpp"

namespace ks3d {

std::string_view to_string(SpaceKind kind) noexcept {
  switch (kind) {
    case SpaceKind::P1C: return "P1C";
    case SpaceKind::P2C: return "P2C";
    case SpaceKind::P1NC: return "P1NC";
    case SpaceKind::Bubble: return "Bubble";
    case SpaceKind::P1CPlusBubble: return "P1C_plus_Bubble";
    case SpaceKind::P0: return "P0";
    case SpaceKind::BRNormalBubbles: return "BR_normal_bubbles";
  }
  return "?";
}

int local_dof_count(SpaceKind kind) noexcept {
  switch (kind) {
    case SpaceKind::P1C: return 4;
    case SpaceKind::P2C: return 10;
    case SpaceKind::P1NC: return 4;
    case SpaceKind::Bubble: return 4;
    case SpaceKind::P1CPlusBubble: return 8;
    case SpaceKind::P0: return 1;
    case SpaceKind::BRNormalBubbles: return 4;
  }
  return 0;
}

int DofMap::num_constrained() const noexcept {
  return static_cast<int>(std::count(dirichlet_.begin(), dirichlet_.end(), 1));
}

DofMap build_dofmap(const Mesh& mesh, SpaceKind kind) {
  DofMap map;
  map.kind_ = kind;
  map.local_ = local_dof_count(kind);
  const int nc = mesh.num_cells();
  map.cell_to_global_.assign(static_cast<std::size_t>(nc) * map.local_, kNoDof);

  auto add = [&](EntityType type, int index, bool dirichlet) {
    map.entities_.push_back({type, index});
    map.dirichlet_.push_back(dirichlet ? 1 : 0);
    return static_cast<int>(map.entities_.size()) - 1;
  };
  auto slot = [&](int c, int i) -> int& {
    return map.cell_to_global_[static_cast<std::size_t>(c) * map.local_ + i];
  };

  const bool has_vertices = kind == SpaceKind::P1C || kind == SpaceKind::P2C ||
                            kind == SpaceKind::P1CPlusBubble;
  int vertex_base = 0;
  if (has_vertices) {
    vertex_base = static_cast<int>(map.entities_.size());
    for (int v = 0; v < mesh.num_vertices(); ++v) {
      add(EntityType::Vertex, v, mesh.is_dirichlet_vertex(v));
    }
    for (int c = 0; c < nc; ++c)
      for (int i = 0; i < 4; ++i) slot(c, i) = vertex_base + mesh.cell(c)[i];
  }
  switch (kind) {
    case SpaceKind::P2C: {
      const int base = static_cast<int>(map.entities_.size());
      for (int e = 0; e < mesh.num_edges(); ++e) add(EntityType::Edge, e, mesh.is_dirichlet_edge(e));
      for (int c = 0; c < nc; ++c)
        for (int i = 0; i < 6; ++i) slot(c, 4 + i) = base + mesh.cell_edges(c)[i];
      break;
    }
    case SpaceKind::P1NC: {
      for (int f = 0; f < mesh.num_faces(); ++f) {
        add(EntityType::Face, f, mesh.face(f).label == BoundaryLabel::Dirichlet);
      }
      for (int c = 0; c < nc; ++c)
        for (int i = 0; i < 4; ++i) slot(c, i) = mesh.cell_faces(c)[i];
      break;
    }
    case SpaceKind::Bubble:
    case SpaceKind::P1CPlusBubble:
    case SpaceKind::BRNormalBubbles: {
      // Face bubbles exist only on interior and Neumann faces.
      std::vector<int> face_dof(mesh.num_faces(), kNoDof);
      for (int f = 0; f < mesh.num_faces(); ++f) {
        if (mesh.face(f).label != BoundaryLabel::Dirichlet) {
          face_dof[f] = add(EntityType::Face, f, false);
        }
      }
      const int first = kind == SpaceKind::P1CPlusBubble ? 4 : 0;
      for (int c = 0; c < nc; ++c)
        for (int i = 0; i < 4; ++i) slot(c, first + i) = face_dof[mesh.cell_faces(c)[i]];
      break;
    }
    case SpaceKind::P0: {
      for (int c = 0; c < nc; ++c) slot(c, 0) = add(EntityType::Cell, c, false);
      break;
    }
    case SpaceKind::P1C:
      break;
  }
  return map;
}

namespace {

double bubble(const Bary& l, int opposite) {
  double p = 60.0;
  for (int k = 0; k < 4; ++k) {
    if (k != opposite) p *= l[k];
  }
  return p;
}

Vec3 bubble_gradient(const Bary& l, const std::array<Vec3, 4>& g, int opposite) {
  Vec3 out = Vec3::Zero();
  for (int k = 0; k < 4; ++k) {
    if (k == opposite) continue;
    double p = 60.0;
    for (int m = 0; m < 4; ++m) {
      if (m != opposite && m != k) p *= l[m];
    }
    out += p * g[k];
  }
  return out;
}

void scalar_values(SpaceKind kind, const Bary& l, std::span<double> out) {
  switch (kind) {
    case SpaceKind::P1C:
      for (int i = 0; i < 4; ++i) out[i] = l[i];
      break;
    case SpaceKind::P2C:
      for (int i = 0; i < 4; ++i) out[i] = l[i] * (2.0 * l[i] - 1.0);
      for (int e = 0; e < 6; ++e) {
        out[4 + e] = 4.0 * l[Mesh::kLocalEdges[e][0]] * l[Mesh::kLocalEdges[e][1]];
      }
      break;
    case SpaceKind::P1NC:
      for (int i = 0; i < 4; ++i) out[i] = 1.0 - 3.0 * l[i];
      break;
    case SpaceKind::Bubble:
    case SpaceKind::BRNormalBubbles:
      for (int i = 0; i < 4; ++i) out[i] = bubble(l, i);
      break;
    case SpaceKind::P1CPlusBubble:
      for (int i = 0; i < 4; ++i) {
        out[i] = l[i];
        out[4 + i] = bubble(l, i);
      }
      break;
    case SpaceKind::P0:
      out[0] = 1.0;
      break;
  }
}

void scalar_gradients(SpaceKind kind, const Bary& l, const std::array<Vec3, 4>& g,
                      std::span<Vec3> out) {
  switch (kind) {
    case SpaceKind::P1C:
      for (int i = 0; i < 4; ++i) out[i] = g[i];
      break;
    case SpaceKind::P2C:
      for (int i = 0; i < 4; ++i) out[i] = (4.0 * l[i] - 1.0) * g[i];
      for (int e = 0; e < 6; ++e) {
        const int a = Mesh::kLocalEdges[e][0];
        const int b = Mesh::kLocalEdges[e][1];
        out[4 + e] = 4.0 * (l[b] * g[a] + l[a] * g[b]);
      }
      break;
    case SpaceKind::P1NC:
      for (int i = 0; i < 4; ++i) out[i] = -3.0 * g[i];
      break;
    case SpaceKind::Bubble:
    case SpaceKind::BRNormalBubbles:
      for (int i = 0; i < 4; ++i) out[i] = bubble_gradient(l, g, i);
      break;
    case SpaceKind::P1CPlusBubble:
      for (int i = 0; i < 4; ++i) {
        out[i] = g[i];
        out[4 + i] = bubble_gradient(l, g, i);
      }
      break;
    case SpaceKind::P0:
      out[0] = Vec3::Zero();
      break;
  }
}

std::array<SpaceKind, 3> component_kinds(VelocitySpaceKind kind) {
  switch (kind) {
    case VelocitySpaceKind::KsP2: return {SpaceKind::P1C, SpaceKind::P2C, SpaceKind::P1NC};
    case VelocitySpaceKind::KsBubble:
      return {SpaceKind::P1C, SpaceKind::P1CPlusBubble, SpaceKind::P1NC};
    case VelocitySpaceKind::BernardiRaugel: return {SpaceKind::P1C, SpaceKind::P1C, SpaceKind::P1C};
    case VelocitySpaceKind::P1P1NC: return {SpaceKind::P1C, SpaceKind::P1C, SpaceKind::P1NC};
    case VelocitySpaceKind::P1NCNC: return {SpaceKind::P1C, SpaceKind::P1NC, SpaceKind::P1NC};
  }
  return {SpaceKind::P1C, SpaceKind::P1C, SpaceKind::P1C};
}

double face_mean(const Mesh& mesh, int face, const ScalarField& f) {
  const auto& rule = face_rule_for_degree(4);
  double sum = 0.0;
  for (int q = 0; q < rule.size(); ++q) sum += rule.weights[q] * f(face_point(mesh, face, rule.points[q]));
  return sum;
}

}  // namespace

void eval_basis(SpaceKind kind, const Bary& bary, std::span<double> out) {
  scalar_values(kind, bary, out);
}

void eval_basis_gradients(const Mesh& mesh, int cell, SpaceKind kind, const Bary& bary,
                          std::span<Vec3> out) {
  scalar_gradients(kind, bary, mesh.barycentric_gradients(cell), out);
}

std::string_view to_string(VelocitySpaceKind kind) noexcept {
  switch (kind) {
    case VelocitySpaceKind::KsP2: return "ks-p2";
    case VelocitySpaceKind::KsBubble: return "ks-bubble";
    case VelocitySpaceKind::BernardiRaugel: return "br";
    case VelocitySpaceKind::P1P1NC: return "p1p1nc";
    case VelocitySpaceKind::P1NCNC: return "p1ncnc";
  }
  return "?";
}

VelocitySpaceKind parse_velocity_space(std::string_view name) {
  for (auto k : {VelocitySpaceKind::KsP2, VelocitySpaceKind::KsBubble,
                 VelocitySpaceKind::BernardiRaugel, VelocitySpaceKind::P1P1NC,
                 VelocitySpaceKind::P1NCNC}) {
    if (to_string(k) == name) return k;
  }
  throw Error(Errc::InvalidInput, "unknown velocity space '" + std::string(name) + "'");
}

VelocitySpace::VelocitySpace(std::shared_ptr<const Mesh> mesh, VelocitySpaceKind kind)
    : mesh_(std::move(mesh)), kind_(kind) {
  for (SpaceKind k : component_kinds(kind)) blocks_.push_back(build_dofmap(*mesh_, k));
  if (kind == VelocitySpaceKind::BernardiRaugel) {
    blocks_.push_back(build_dofmap(*mesh_, SpaceKind::BRNormalBubbles));
  }
  offsets_.push_back(0);
  for (const auto& b : blocks_) {
    offsets_.push_back(offsets_.back() + b.total_dofs());
    local_count_ += b.local_count();
    for (int d = 0; d < b.total_dofs(); ++d) dirichlet_.push_back(b.is_dirichlet(d) ? 1 : 0);
  }
}

void VelocitySpace::cell_dofs(int c, std::span<int> out) const {
  int k = 0;
  for (int b = 0; b < num_blocks(); ++b) {
    for (int d : blocks_[b].cell_dofs(c)) out[k++] = d == kNoDof ? kNoDof : offsets_[b] + d;
  }
}

void VelocitySpace::eval(int c, const Bary& bary, std::span<Vec3> values,
                         std::span<Mat3> gradients) const {
  std::array<double, 10> s{};
  std::array<Vec3, 10> ds{};
  const auto& g = mesh_->barycentric_gradients(c);
  int k = 0;
  for (int b = 0; b < num_blocks(); ++b) {
    const SpaceKind kind = blocks_[b].kind();
    const int n = blocks_[b].local_count();
    if (!values.empty()) scalar_values(kind, bary, s);
    if (!gradients.empty()) scalar_gradients(kind, bary, g, ds);
    const int comp = block_component(b);
    for (int i = 0; i < n; ++i, ++k) {
      if (comp >= 0) {
        if (!values.empty()) {
          values[k].setZero();
          values[k][comp] = s[i];
        }
        if (!gradients.empty()) {
          gradients[k].setZero();
          gradients[k].row(comp) = ds[i].transpose();
        }
      } else {
        const Vec3& nu = mesh_->face(mesh_->cell_faces(c)[i]).normal;
        if (!values.empty()) values[k] = s[i] * nu;
        if (!gradients.empty()) gradients[k] = nu * ds[i].transpose();
      }
    }
  }
}

std::vector<int> VelocitySpace::free_dofs() const {
  std::vector<int> out;
  for (int d = 0; d < total_dofs(); ++d) {
    if (!dirichlet_[d]) out.push_back(d);
  }
  return out;
}

int VelocitySpace::num_free() const {
  return static_cast<int>(std::count(dirichlet_.begin(), dirichlet_.end(), 0));
}

Vec3 FiniteElementFunction::value(int cell, const Bary& bary) const {
  const int n = space->local_count();
  std::array<int, 32> dofs{};
  std::array<Vec3, 32> vals{};
  space->cell_dofs(cell, std::span(dofs.data(), n));
  space->eval(cell, bary, std::span(vals.data(), n), {});
  Vec3 out = Vec3::Zero();
  for (int i = 0; i < n; ++i) {
    if (dofs[i] != kNoDof) out += coefficients[dofs[i]] * vals[i];
  }
  return out;
}

Mat3 FiniteElementFunction::gradient(int cell, const Bary& bary) const {
  const int n = space->local_count();
  std::array<int, 32> dofs{};
  std::array<Mat3, 32> grads{};
  space->cell_dofs(cell, std::span(dofs.data(), n));
  space->eval(cell, bary, {}, std::span(grads.data(), n));
  Mat3 out = Mat3::Zero();
  for (int i = 0; i < n; ++i) {
    if (dofs[i] != kNoDof) out += coefficients[dofs[i]] * grads[i];
  }
  return out;
}

Eigen::VectorXd interpolate(const Mesh& mesh, const DofMap& dofs, const ScalarField& f) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dofs.total_dofs());
  const bool bubble_only_faces = dofs.kind() == SpaceKind::Bubble ||
                                 dofs.kind() == SpaceKind::P1CPlusBubble ||
                                 dofs.kind() == SpaceKind::BRNormalBubbles;
  for (int d = 0; d < dofs.total_dofs(); ++d) {
    const DofEntity& e = dofs.entity(d);
    switch (e.type) {
      case EntityType::Vertex:
        out[d] = f(mesh.vertex(e.index));
        break;
      case EntityType::Edge: {
        const auto& ed = mesh.edges()[e.index];
        out[d] = f(0.5 * (mesh.vertex(ed[0]) + mesh.vertex(ed[1])));
        break;
      }
      case EntityType::Face:
        out[d] = bubble_only_faces ? 0.0 : face_mean(mesh, e.index, f);
        break;
      case EntityType::Cell: {
        out[d] = integrate(mesh, e.index, f, rule_for_degree(4)) / mesh.cell_volume(e.index);
        break;
      }
    }
  }
  return out;
}

FiniteElementFunction interpolate(std::shared_ptr<const VelocitySpace> space, const VectorField& f) {
  FiniteElementFunction out{space, Eigen::VectorXd::Zero(space->total_dofs())};
  const Mesh& mesh = space->mesh();
  for (int b = 0; b < space->num_blocks(); ++b) {
    const int comp = space->block_component(b);
    if (comp < 0) continue;  // normal bubbles interpolate to zero
    const Eigen::VectorXd c =
        interpolate(mesh, space->block(b), [&](const Vec3& x) { return f(x)[comp]; });
    out.coefficients.segment(space->block_offset(b), c.size()) = c;
  }
  return out;
}

FiniteElementFunction dirichlet_lifting(std::shared_ptr<const VelocitySpace> space,
                                        const VectorField& f) {
  FiniteElementFunction out = interpolate(space, f);
  for (int d = 0; d < space->total_dofs(); ++d) {
    if (!space->is_dirichlet(d)) out.coefficients[d] = 0.0;
  }
  return out;
}

double eval_function(const Mesh& mesh, const DofMap& dofs, const Eigen::VectorXd& coefficients,
                     int cell, const Bary& bary) {
  (void)mesh;
  std::array<double, 10> s{};
  scalar_values(dofs.kind(), bary, s);
  double out = 0.0;
  const auto cd = dofs.cell_dofs(cell);
  for (std::size_t i = 0; i < cd.size(); ++i) {
    if (cd[i] != kNoDof) out += coefficients[cd[i]] * s[i];
  }
  return out;
}

Vec3 eval_function(const FiniteElementFunction& fef, int cell, const Bary& bary) {
  return fef.value(cell, bary);
}

}  // namespace ks3d
