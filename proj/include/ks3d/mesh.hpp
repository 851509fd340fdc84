#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace ks3d {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class BoundaryLabel : std::uint8_t { Interior, Dirichlet, Neumann };

std::string_view to_string(BoundaryLabel label) noexcept;

inline constexpr int kNoCell = -1;

using CellVertices = std::array<int, 4>;
using FaceKey = std::array<int, 3>;  // sorted vertex triple
using EdgeKey = std::array<int, 2>;  // sorted vertex pair

struct IndexArrayHash {
  template <std::size_t N>
  std::size_t operator()(const std::array<int, N>& a) const noexcept {
    std::size_t h = 1469598103934665603ULL;
    for (int v : a) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v));
      h *= 1099511628211ULL;
    }
    return h;
  }
};

/// A triangular face of the mesh. `normal` is the fixed unit normal nu_F,
/// pointing out of `plus_cell`; on the boundary it is the outward normal of
/// the domain and `minus_cell == kNoCell`.
struct Face {
  FaceKey vertices{};
  int plus_cell = kNoCell;
  int minus_cell = kNoCell;
  Vec3 normal = Vec3::Zero();
  double area = 0.0;
  double diameter = 0.0;
  Vec3 centroid = Vec3::Zero();
  BoundaryLabel label = BoundaryLabel::Interior;

  [[nodiscard]] bool is_boundary() const noexcept { return minus_cell == kNoCell; }
};

/// Classifies a boundary face by its centroid. Must not return Interior.
using BoundaryClassifier = std::function<BoundaryLabel(const Vec3& centroid)>;

/// Explicit labels for boundary faces, keyed by the sorted vertex triple.
using FaceLabels = std::map<FaceKey, BoundaryLabel>;

/// Immutable conforming tetrahedral mesh. Construct with build_mesh().
///
/// Local numbering conventions used everywhere downstream:
///  - local face i of a cell is the face opposite local vertex i;
///  - local edges are the pairs (0,1),(0,2),(0,3),(1,2),(1,3),(2,3).
class Mesh {
 public:
  static constexpr std::array<std::array<int, 2>, 6> kLocalEdges{
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

  [[nodiscard]] int num_vertices() const noexcept { return static_cast<int>(vertices_.size()); }
  [[nodiscard]] int num_cells() const noexcept { return static_cast<int>(cells_.size()); }
  [[nodiscard]] int num_faces() const noexcept { return static_cast<int>(faces_.size()); }
  [[nodiscard]] int num_edges() const noexcept { return static_cast<int>(edges_.size()); }

  [[nodiscard]] const std::vector<Vec3>& vertices() const noexcept { return vertices_; }
  [[nodiscard]] const Vec3& vertex(int v) const { return vertices_[v]; }
  [[nodiscard]] const std::vector<CellVertices>& cells() const noexcept { return cells_; }
  [[nodiscard]] const CellVertices& cell(int c) const { return cells_[c]; }
  [[nodiscard]] const std::vector<Face>& faces() const noexcept { return faces_; }
  [[nodiscard]] const Face& face(int f) const { return faces_[f]; }
  [[nodiscard]] const std::vector<EdgeKey>& edges() const noexcept { return edges_; }

  [[nodiscard]] const std::array<int, 4>& cell_faces(int c) const { return cell_faces_[c]; }
  [[nodiscard]] const std::array<int, 6>& cell_edges(int c) const { return cell_edges_[c]; }
  [[nodiscard]] double cell_volume(int c) const { return volumes_[c]; }
  [[nodiscard]] double cell_diameter(int c) const { return diameters_[c]; }
  /// Gradients of the four barycentric coordinates (constant on the cell).
  [[nodiscard]] const std::array<Vec3, 4>& barycentric_gradients(int c) const {
    return bary_gradients_[c];
  }

  [[nodiscard]] Vec3 map_to_physical(int c, const std::array<double, 4>& bary) const;

  [[nodiscard]] bool is_boundary_vertex(int v) const { return boundary_vertex_[v] != 0; }
  /// A vertex is Dirichlet iff it lies on at least one Dirichlet face.
  [[nodiscard]] bool is_dirichlet_vertex(int v) const { return dirichlet_vertex_[v] != 0; }
  [[nodiscard]] bool is_boundary_edge(int e) const { return boundary_edge_[e] != 0; }
  [[nodiscard]] bool is_dirichlet_edge(int e) const { return dirichlet_edge_[e] != 0; }

  [[nodiscard]] double volume() const noexcept { return total_volume_; }
  [[nodiscard]] double max_cell_diameter() const noexcept;
  [[nodiscard]] bool has_neumann_boundary() const noexcept { return has_neumann_; }
  [[nodiscard]] bool has_dirichlet_boundary() const noexcept { return has_dirichlet_; }

  [[nodiscard]] int find_face(const FaceKey& sorted) const;
  [[nodiscard]] int find_edge(const EdgeKey& sorted) const;

 private:
  friend Mesh build_mesh(std::vector<Vec3>, std::vector<CellVertices>, const BoundaryClassifier&,
                         const FaceLabels&);

  std::vector<Vec3> vertices_;
  std::vector<CellVertices> cells_;
  std::vector<Face> faces_;
  std::vector<EdgeKey> edges_;
  std::vector<std::array<int, 4>> cell_faces_;
  std::vector<std::array<int, 6>> cell_edges_;
  std::vector<double> volumes_;
  std::vector<double> diameters_;
  std::vector<std::array<Vec3, 4>> bary_gradients_;
  std::vector<char> boundary_vertex_;
  std::vector<char> dirichlet_vertex_;
  std::vector<char> boundary_edge_;
  std::vector<char> dirichlet_edge_;
  std::unordered_map<FaceKey, int, IndexArrayHash> face_index_;
  std::unordered_map<EdgeKey, int, IndexArrayHash> edge_index_;
  double total_volume_ = 0.0;
  bool has_neumann_ = false;
  bool has_dirichlet_ = false;
};

[[nodiscard]] double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

/// Builds a mesh, deduplicating faces and fixing face orientation: the
/// incident cell with the smaller index is T_+. Boundary faces take their
/// label from `explicit_labels` if present, otherwise from `classify`.
///
/// Throws Error with InvalidInput (index out of range), DuplicateVertex,
/// InvertedCell, NonConforming or UnclassifiedBoundaryFace.
[[nodiscard]] Mesh build_mesh(std::vector<Vec3> vertices, std::vector<CellVertices> cells,
                              const BoundaryClassifier& classify,
                              const FaceLabels& explicit_labels = {});

/// Uniform red refinement: 8 children per cell. The interior octahedron is
/// split along its shortest diagonal (ties: smallest sorted vertex pair).
/// Boundary labels are inherited from the parent faces.
[[nodiscard]] Mesh red_refine(const Mesh& mesh);

[[nodiscard]] Mesh refine_times(const Mesh& mesh, int times);

/// Reports the horizontal Dirichlet faces (|nu_F(3)| = 1 up to 1e-12) that
/// satisfy neither condition (a) nor condition (b) of assumption (H1).
[[nodiscard]] std::vector<int> check_h1(const Mesh& mesh);

struct H2Violation {
  enum class Kind { SingleCell, BoundaryInteriorFace };
  Kind kind = Kind::BoundaryInteriorFace;
  int face = -1;  // -1 for SingleCell
};

/// Reports interior faces whose three vertices are all on the boundary, and
/// a SingleCell violation for one-cell meshes.
[[nodiscard]] std::vector<H2Violation> check_h2(const Mesh& mesh);

/// Minimum dihedral angle (radians) of cell c.
[[nodiscard]] double min_dihedral_angle(const Mesh& mesh, int c);

// ASCII mesh format:
//   $vertices N / N lines "x y z"
//   $cells M / M lines "v0 v1 v2 v3"  (0-based)
//   optional $boundary K / K lines "v0 v1 v2 D|N"
struct MeshFileData {
  std::vector<Vec3> vertices;
  std::vector<CellVertices> cells;
  FaceLabels labels;
};

[[nodiscard]] MeshFileData read_mesh_data(std::istream& in);
[[nodiscard]] MeshFileData read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh& mesh, bool with_boundary = true);

}  // namespace ks3d
