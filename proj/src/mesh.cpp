#include "ks3d/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "ks3d/error.hpp"

namespace ks3d {

std::string_view to_string(BoundaryLabel label) noexcept {
  switch (label) {
    case BoundaryLabel::Interior: return "Interior";
    case BoundaryLabel::Dirichlet: return "Dirichlet";
    case BoundaryLabel::Neumann: return "Neumann";
  }
  return "?";
}

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

namespace {

FaceKey sorted_face(int a, int b, int c) {
  FaceKey k{a, b, c};
  std::sort(k.begin(), k.end());
  return k;
}

EdgeKey sorted_edge(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

FaceKey local_face(const CellVertices& cell, int opposite) {
  std::array<int, 3> f{};
  int k = 0;
  for (int i = 0; i < 4; ++i) {
    if (i != opposite) f[k++] = cell[i];
  }
  std::sort(f.begin(), f.end());
  return f;
}

void check_duplicate_vertices(const std::vector<Vec3>& vertices) {
  std::vector<int> order(vertices.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return vertices[a].x() < vertices[b].x(); });
  constexpr double kTol = 1e-12;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const Vec3& p = vertices[order[i]];
      const Vec3& q = vertices[order[j]];
      if (q.x() - p.x() > kTol) break;
      if ((p - q).norm() <= kTol) {
        throw Error(Errc::DuplicateVertex, "vertices " + std::to_string(order[i]) + " and " +
                                               std::to_string(order[j]) + " coincide");
      }
    }
  }
}

// Point-in-closed-triangle test for a point already known to be close to the
// triangle's plane.
bool point_in_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c, double tol) {
  const Vec3 n = (b - a).cross(c - a);
  const double n2 = n.squaredNorm();
  if (n2 == 0.0) return false;
  const double dist = std::abs((p - a).dot(n)) / std::sqrt(n2);
  if (dist > tol) return false;
  // Barycentric coordinates of the projection.
  const double l0 = (b - p).cross(c - p).dot(n) / n2;
  const double l1 = (c - p).cross(a - p).dot(n) / n2;
  const double l2 = 1.0 - l0 - l1;
  const double rel = tol / std::sqrt(std::sqrt(n2));
  return l0 >= -rel && l1 >= -rel && l2 >= -rel;
}

// Rejects meshes in which a vertex lies on a face (or a face edge) without
// being one of that face's vertices: the signature of a hanging vertex.
void check_conformity(const std::vector<Vec3>& vertices, const std::vector<FaceKey>& faces) {
  if (faces.empty()) return;
  Vec3 lo = vertices.front();
  Vec3 hi = vertices.front();
  for (const auto& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const double extent = (hi - lo).maxCoeff();
  const double tol = 1e-10 * std::max(extent, 1e-300);
  const int n = std::max(1, static_cast<int>(std::cbrt(static_cast<double>(faces.size()))));
  const Vec3 cell_size = ((hi - lo) / n).cwiseMax(Vec3::Constant(1e-300));
  auto bucket_of = [&](const Vec3& p) {
    std::array<int, 3> b{};
    for (int d = 0; d < 3; ++d) {
      b[d] = std::clamp(static_cast<int>((p[d] - lo[d]) / cell_size[d]), 0, n - 1);
    }
    return b;
  };
  std::vector<std::vector<int>> grid(static_cast<std::size_t>(n) * n * n);
  auto flat = [n](int i, int j, int k) { return (static_cast<std::size_t>(i) * n + j) * n + k; };
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    Vec3 flo = vertices[faces[f][0]];
    Vec3 fhi = flo;
    for (int v : faces[f]) {
      flo = flo.cwiseMin(vertices[v]);
      fhi = fhi.cwiseMax(vertices[v]);
    }
    const auto b0 = bucket_of(flo - Vec3::Constant(tol));
    const auto b1 = bucket_of(fhi + Vec3::Constant(tol));
    for (int i = b0[0]; i <= b1[0]; ++i)
      for (int j = b0[1]; j <= b1[1]; ++j)
        for (int k = b0[2]; k <= b1[2]; ++k) grid[flat(i, j, k)].push_back(f);
  }
  for (int v = 0; v < static_cast<int>(vertices.size()); ++v) {
    const auto b = bucket_of(vertices[v]);
    for (int f : grid[flat(b[0], b[1], b[2])]) {
      const FaceKey& fk = faces[f];
      if (fk[0] == v || fk[1] == v || fk[2] == v) continue;
      if (point_in_triangle(vertices[v], vertices[fk[0]], vertices[fk[1]], vertices[fk[2]], tol)) {
        throw Error(Errc::NonConforming, "vertex " + std::to_string(v) + " lies on face (" +
                                             std::to_string(fk[0]) + "," + std::to_string(fk[1]) +
                                             "," + std::to_string(fk[2]) + ")");
      }
    }
  }
}

}  // namespace

Vec3 Mesh::map_to_physical(int c, const std::array<double, 4>& bary) const {
  const auto& cv = cells_[c];
  return bary[0] * vertices_[cv[0]] + bary[1] * vertices_[cv[1]] + bary[2] * vertices_[cv[2]] +
         bary[3] * vertices_[cv[3]];
}

double Mesh::max_cell_diameter() const noexcept {
  return diameters_.empty() ? 0.0 : *std::max_element(diameters_.begin(), diameters_.end());
}

int Mesh::find_face(const FaceKey& sorted) const {
  const auto it = face_index_.find(sorted);
  return it == face_index_.end() ? -1 : it->second;
}

int Mesh::find_edge(const EdgeKey& sorted) const {
  const auto it = edge_index_.find(sorted);
  return it == edge_index_.end() ? -1 : it->second;
}

Mesh build_mesh(std::vector<Vec3> vertices, std::vector<CellVertices> cells,
                const BoundaryClassifier& classify, const FaceLabels& explicit_labels) {
  const int nv = static_cast<int>(vertices.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (int v : cells[c]) {
      if (v < 0 || v >= nv) {
        throw Error(Errc::InvalidInput, "cell " + std::to_string(c) + " references vertex " +
                                            std::to_string(v) + " out of range");
      }
    }
    auto sorted = cells[c];
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(Errc::InvertedCell, "cell " + std::to_string(c) + " repeats a vertex");
    }
  }
  check_duplicate_vertices(vertices);

  Mesh m;
  m.vertices_ = std::move(vertices);
  m.cells_ = std::move(cells);
  const int nc = m.num_cells();

  m.volumes_.resize(nc);
  m.diameters_.resize(nc);
  m.bary_gradients_.resize(nc);
  for (int c = 0; c < nc; ++c) {
    const auto& cv = m.cells_[c];
    const Vec3& a = m.vertices_[cv[0]];
    double diam = 0.0;
    for (const auto& e : Mesh::kLocalEdges) {
      diam = std::max(diam, (m.vertices_[cv[e[0]]] - m.vertices_[cv[e[1]]]).norm());
    }
    const double vol = signed_volume(a, m.vertices_[cv[1]], m.vertices_[cv[2]], m.vertices_[cv[3]]);
    if (!(vol > 1e-14 * diam * diam * diam)) {
      throw Error(Errc::InvertedCell,
                  "cell " + std::to_string(c) + " has signed volume " + std::to_string(vol));
    }
    m.volumes_[c] = vol;
    m.diameters_[c] = diam;
    Mat3 jac;
    for (int k = 0; k < 3; ++k) jac.col(k) = m.vertices_[cv[k + 1]] - a;
    const Mat3 inv = jac.inverse();
    auto& g = m.bary_gradients_[c];
    for (int k = 0; k < 3; ++k) g[k + 1] = inv.row(k).transpose();
    g[0] = -(g[1] + g[2] + g[3]);
    m.total_volume_ += vol;
  }

  // Faces, in order of first appearance; the first (smaller) cell is T_+.
  m.cell_faces_.resize(nc);
  m.face_index_.reserve(static_cast<std::size_t>(2.2 * nc) + 4);
  for (int c = 0; c < nc; ++c) {
    for (int i = 0; i < 4; ++i) {
      const FaceKey key = local_face(m.cells_[c], i);
      auto [it, inserted] = m.face_index_.try_emplace(key, m.num_faces());
      if (inserted) {
        Face f;
        f.vertices = key;
        f.plus_cell = c;
        m.faces_.push_back(f);
      } else {
        Face& f = m.faces_[it->second];
        if (f.minus_cell != kNoCell) {
          throw Error(Errc::NonConforming, "face shared by more than two cells");
        }
        f.minus_cell = c;
      }
      m.cell_faces_[c][i] = it->second;
    }
  }

  m.boundary_vertex_.assign(m.num_vertices(), 0);
  m.dirichlet_vertex_.assign(m.num_vertices(), 0);
  for (auto& f : m.faces_) {
    const Vec3& a = m.vertices_[f.vertices[0]];
    const Vec3& b = m.vertices_[f.vertices[1]];
    const Vec3& c = m.vertices_[f.vertices[2]];
    Vec3 n = (b - a).cross(c - a);
    f.area = 0.5 * n.norm();
    n.normalize();
    // Orient out of T_+: the vertex of T_+ opposite the face lies behind.
    const auto& pc = m.cells_[f.plus_cell];
    int opposite = -1;
    for (int v : pc) {
      if (v != f.vertices[0] && v != f.vertices[1] && v != f.vertices[2]) opposite = v;
    }
    if ((m.vertices_[opposite] - a).dot(n) > 0.0) n = -n;
    f.normal = n;
    f.centroid = (a + b + c) / 3.0;
    f.diameter = std::max({(a - b).norm(), (b - c).norm(), (a - c).norm()});
    if (f.is_boundary()) {
      const auto it = explicit_labels.find(f.vertices);
      BoundaryLabel label = BoundaryLabel::Interior;
      if (it != explicit_labels.end()) {
        label = it->second;
      } else if (classify) {
        label = classify(f.centroid);
      }
      if (label == BoundaryLabel::Interior) {
        throw Error(Errc::UnclassifiedBoundaryFace,
                    "boundary face with centroid (" + std::to_string(f.centroid.x()) + ", " +
                        std::to_string(f.centroid.y()) + ", " + std::to_string(f.centroid.z()) +
                        ") has no boundary label");
      }
      f.label = label;
      m.has_dirichlet_ |= label == BoundaryLabel::Dirichlet;
      m.has_neumann_ |= label == BoundaryLabel::Neumann;
      for (int v : f.vertices) {
        m.boundary_vertex_[v] = 1;
        if (label == BoundaryLabel::Dirichlet) m.dirichlet_vertex_[v] = 1;
      }
    }
  }

  // Edges, in order of first appearance.
  m.cell_edges_.resize(nc);
  m.edge_index_.reserve(static_cast<std::size_t>(1.5 * nc) + 8);
  for (int c = 0; c < nc; ++c) {
    const auto& cv = m.cells_[c];
    for (int e = 0; e < 6; ++e) {
      const EdgeKey key = sorted_edge(cv[Mesh::kLocalEdges[e][0]], cv[Mesh::kLocalEdges[e][1]]);
      auto [it, inserted] = m.edge_index_.try_emplace(key, m.num_edges());
      if (inserted) m.edges_.push_back(key);
      m.cell_edges_[c][e] = it->second;
    }
  }
  m.boundary_edge_.assign(m.num_edges(), 0);
  m.dirichlet_edge_.assign(m.num_edges(), 0);
  for (const auto& f : m.faces_) {
    if (!f.is_boundary()) continue;
    const auto& v = f.vertices;
    for (const EdgeKey& key : {EdgeKey{v[0], v[1]}, EdgeKey{v[0], v[2]}, EdgeKey{v[1], v[2]}}) {
      const int e = m.edge_index_.at(key);
      m.boundary_edge_[e] = 1;
      if (f.label == BoundaryLabel::Dirichlet) m.dirichlet_edge_[e] = 1;
    }
  }

  std::vector<FaceKey> keys;
  keys.reserve(m.faces_.size());
  for (const auto& f : m.faces_) keys.push_back(f.vertices);
  check_conformity(m.vertices_, keys);
  return m;
}

Mesh red_refine(const Mesh& mesh) {
  const int nv = mesh.num_vertices();
  std::vector<Vec3> vertices = mesh.vertices();
  vertices.reserve(nv + mesh.num_edges());
  for (const auto& e : mesh.edges()) {
    vertices.push_back(0.5 * (mesh.vertex(e[0]) + mesh.vertex(e[1])));
  }
  auto mid = [&](int a, int b) { return nv + mesh.find_edge(sorted_edge(a, b)); };

  std::vector<CellVertices> cells;
  cells.reserve(8 * static_cast<std::size_t>(mesh.num_cells()));
  auto push_oriented = [&](CellVertices t) {
    if (signed_volume(vertices[t[0]], vertices[t[1]], vertices[t[2]], vertices[t[3]]) < 0.0) {
      std::swap(t[2], t[3]);
    }
    cells.push_back(t);
  };

  for (const auto& cv : mesh.cells()) {
    std::array<std::array<int, 4>, 4> m{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m[i][j] = i == j ? cv[i] : mid(cv[i], cv[j]);
    for (int i = 0; i < 4; ++i) {
      CellVertices corner{};
      for (int j = 0; j < 4; ++j) corner[j] = m[i][j];
      push_oriented(corner);
    }
    // Octahedron diagonals (m_ij, m_kl) for the three splittings of {0,1,2,3}.
    constexpr std::array<std::array<int, 4>, 3> kSplits{{{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}}};
    int best = 0;
    double best_len = std::numeric_limits<double>::infinity();
    EdgeKey best_key{};
    for (int s = 0; s < 3; ++s) {
      const auto& sp = kSplits[s];
      const int a = m[sp[0]][sp[1]];
      const int b = m[sp[2]][sp[3]];
      const double len = (vertices[a] - vertices[b]).norm();
      const EdgeKey key = sorted_edge(a, b);
      const bool shorter = len < best_len * (1.0 - 1e-12);
      const bool tie = !shorter && len <= best_len * (1.0 + 1e-12);
      if (shorter || (tie && key < best_key)) {
        best = s;
        best_len = len;
        best_key = key;
      }
    }
    const auto& sp = kSplits[best];
    const int i = sp[0], j = sp[1], k = sp[2], l = sp[3];
    const int a = m[i][j];
    const int b = m[k][l];
    // Equator around the diagonal (m_ij, m_kl): m_ik, m_jk, m_jl, m_il.
    const std::array<int, 4> ring{m[i][k], m[j][k], m[j][l], m[i][l]};
    for (int r = 0; r < 4; ++r) push_oriented({a, b, ring[r], ring[(r + 1) % 4]});
  }

  FaceLabels labels;
  for (const auto& f : mesh.faces()) {
    if (!f.is_boundary()) continue;
    const int p = f.vertices[0], q = f.vertices[1], r = f.vertices[2];
    const int pq = mid(p, q), pr = mid(p, r), qr = mid(q, r);
    labels[sorted_face(p, pq, pr)] = f.label;
    labels[sorted_face(q, pq, qr)] = f.label;
    labels[sorted_face(r, pr, qr)] = f.label;
    labels[sorted_face(pq, pr, qr)] = f.label;
  }
  return build_mesh(std::move(vertices), std::move(cells), nullptr, labels);
}

Mesh refine_times(const Mesh& mesh, int times) {
  Mesh m = mesh;
  for (int i = 0; i < times; ++i) m = red_refine(m);
  return m;
}

std::vector<int> check_h1(const Mesh& mesh) {
  constexpr double kTol = 1e-12;
  auto is_horizontal = [&](const Face& f) { return std::abs(f.normal.z()) >= 1.0 - kTol; };
  std::vector<std::vector<int>> dirichlet_faces_at(mesh.num_vertices());
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (face.label != BoundaryLabel::Dirichlet) continue;
    for (int v : face.vertices) dirichlet_faces_at[v].push_back(f);
  }
  auto contains = [](const FaceKey& k, int v) { return k[0] == v || k[1] == v || k[2] == v; };

  std::vector<int> violations;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (face.label != BoundaryLabel::Dirichlet || !is_horizontal(face)) continue;
    bool ok = false;
    for (int z : face.vertices) {
      const auto& around = dirichlet_faces_at[z];
      // (a) a non-horizontal Dirichlet face through z.
      for (int g : around) {
        if (g != f && !is_horizontal(mesh.face(g))) ok = true;
      }
      // (b) two further Dirichlet faces meeting F exactly in {z}.
      for (std::size_t p = 0; p < around.size() && !ok; ++p) {
        for (std::size_t q = p + 1; q < around.size() && !ok; ++q) {
          const int g = around[p];
          const int h = around[q];
          if (g == f || h == f) continue;
          int common = 0;
          for (int v : face.vertices) {
            if (contains(mesh.face(g).vertices, v) && contains(mesh.face(h).vertices, v)) ++common;
          }
          ok = common == 1;
        }
      }
      if (ok) break;
    }
    if (!ok) violations.push_back(f);
  }
  return violations;
}

std::vector<H2Violation> check_h2(const Mesh& mesh) {
  std::vector<H2Violation> out;
  if (mesh.num_cells() == 1) out.push_back({H2Violation::Kind::SingleCell, -1});
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (face.is_boundary()) continue;
    const auto& v = face.vertices;
    if (mesh.is_boundary_vertex(v[0]) && mesh.is_boundary_vertex(v[1]) &&
        mesh.is_boundary_vertex(v[2])) {
      out.push_back({H2Violation::Kind::BoundaryInteriorFace, f});
    }
  }
  return out;
}

double min_dihedral_angle(const Mesh& mesh, int c) {
  const auto& g = mesh.barycentric_gradients(c);
  // The outward normal of the face opposite vertex i is -grad(lambda_i)/|.|.
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : Mesh::kLocalEdges) {
    std::array<int, 2> others{};
    int k = 0;
    for (int i = 0; i < 4; ++i) {
      if (i != e[0] && i != e[1]) others[k++] = i;
    }
    const Vec3 n0 = -g[others[0]].normalized();
    const Vec3 n1 = -g[others[1]].normalized();
    const double angle = std::acos(std::clamp(-n0.dot(n1), -1.0, 1.0));
    best = std::min(best, angle);
  }
  return best;
}

MeshFileData read_mesh_data(std::istream& in) {
  MeshFileData data;
  std::string token;
  auto fail = [](const std::string& what) { throw Error(Errc::ParseError, what); };
  while (in >> token) {
    long count = -1;
    if (!(in >> count) || count < 0) fail("expected a count after " + token);
    if (token == "$vertices") {
      data.vertices.resize(count);
      for (auto& v : data.vertices) {
        if (!(in >> v.x() >> v.y() >> v.z())) fail("truncated $vertices block");
      }
    } else if (token == "$cells") {
      data.cells.resize(count);
      for (auto& c : data.cells) {
        if (!(in >> c[0] >> c[1] >> c[2] >> c[3])) fail("truncated $cells block");
      }
    } else if (token == "$boundary") {
      for (long i = 0; i < count; ++i) {
        int a = 0, b = 0, c = 0;
        std::string marker;
        if (!(in >> a >> b >> c >> marker)) fail("truncated $boundary block");
        BoundaryLabel label = BoundaryLabel::Interior;
        if (marker == "D") {
          label = BoundaryLabel::Dirichlet;
        } else if (marker == "N") {
          label = BoundaryLabel::Neumann;
        } else {
          fail("unknown boundary marker '" + marker + "'");
        }
        data.labels[sorted_face(a, b, c)] = label;
      }
    } else {
      fail("unknown section '" + token + "'");
    }
  }
  return data;
}

MeshFileData read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidInput, "cannot open mesh file '" + path + "'");
  return read_mesh_data(in);
}

void write_mesh(std::ostream& out, const Mesh& mesh, bool with_boundary) {
  out.precision(17);
  out << "$vertices " << mesh.num_vertices() << '\n';
  for (const auto& v : mesh.vertices()) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  out << "$cells " << mesh.num_cells() << '\n';
  for (const auto& c : mesh.cells()) out << c[0] << ' ' << c[1] << ' ' << c[2] << ' ' << c[3] << '\n';
  if (!with_boundary) return;
  std::vector<const Face*> boundary;
  for (const auto& f : mesh.faces()) {
    if (f.is_boundary()) boundary.push_back(&f);
  }
  out << "$boundary " << boundary.size() << '\n';
  for (const Face* f : boundary) {
    out << f->vertices[0] << ' ' << f->vertices[1] << ' ' << f->vertices[2] << ' '
        << (f->label == BoundaryLabel::Dirichlet ? 'D' : 'N') << '\n';
  }
}

}  // namespace ks3d
