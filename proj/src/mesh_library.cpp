#include "ks3d/mesh_library.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

namespace ks3d {

namespace {

class VertexPool {
 public:
  int add(const Vec3& p) {
    const std::array<long long, 3> key{std::llround(p.x() * kScale), std::llround(p.y() * kScale),
                                       std::llround(p.z() * kScale)};
    auto [it, inserted] = index_.try_emplace(key, static_cast<int>(points_.size()));
    if (inserted) points_.push_back(p);
    return it->second;
  }
  std::vector<Vec3> take() { return std::move(points_); }
  [[nodiscard]] const Vec3& at(int i) const { return points_[i]; }

 private:
  static constexpr double kScale = 1 << 24;
  std::map<std::array<long long, 3>, int> index_;
  std::vector<Vec3> points_;
};

CellVertices oriented(const std::vector<Vec3>& pts, CellVertices c) {
  if (signed_volume(pts[c[0]], pts[c[1]], pts[c[2]], pts[c[3]]) < 0.0) std::swap(c[2], c[3]);
  return c;
}

// Kuhn subdivision of the box spanned by `outer` and `hub` (opposite
// corners); all six tetrahedra share the diagonal outer-hub.
void add_kuhn_box(VertexPool& pool, std::vector<CellVertices>& cells, const Vec3& outer,
                  const Vec3& hub) {
  const Vec3 span = hub - outer;
  auto local = [&](double s0, double s1, double s2) {
    return pool.add(outer + Vec3(s0, s1, s2).cwiseProduct(span));
  };
  std::array<int, 3> perm{0, 1, 2};
  do {
    Vec3 s = Vec3::Zero();
    CellVertices c{};
    c[0] = local(0, 0, 0);
    s[perm[0]] = 1.0;
    c[1] = local(s[0], s[1], s[2]);
    s[perm[1]] = 1.0;
    c[2] = local(s[0], s[1], s[2]);
    c[3] = local(1, 1, 1);
    cells.push_back(c);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

// 2x2x2 sub-boxes, each Kuhn-subdivided along its diagonal to the box
// centre. Every face on the box surface is cut into an X around the face
// centre, so neighbouring boxes match.
void add_centred_box(VertexPool& pool, std::vector<CellVertices>& cells, const Vec3& lo,
                     const Vec3& hi) {
  const Vec3 centre = 0.5 * (lo + hi);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const Vec3 outer(i == 0 ? lo.x() : hi.x(), j == 0 ? lo.y() : hi.y(),
                         k == 0 ? lo.z() : hi.z());
        add_kuhn_box(pool, cells, outer, centre);
      }
}

Mesh finish(VertexPool& pool, std::vector<CellVertices> cells, const BoundaryClassifier& classify) {
  std::vector<Vec3> pts = pool.take();
  for (auto& c : cells) c = oriented(pts, c);
  return build_mesh(std::move(pts), std::move(cells), classify);
}

}  // namespace

BoundaryClassifier all_dirichlet() {
  return [](const Vec3&) { return BoundaryLabel::Dirichlet; };
}

Mesh reference_tet(const BoundaryClassifier& classify) {
  VertexPool pool;
  std::vector<CellVertices> cells{{pool.add(Vec3(0, 0, 0)), pool.add(Vec3(1, 0, 0)),
                                   pool.add(Vec3(0, 1, 0)), pool.add(Vec3(0, 0, 1))}};
  return finish(pool, std::move(cells), classify);
}

int octahedron_cell(int j, int k, int l) { return 4 * (j - 1) + 2 * (k - 1) + (l - 1); }

Mesh octahedron_patch(const BoundaryClassifier& classify) {
  VertexPool pool;
  const int z = pool.add(Vec3::Zero());
  std::vector<CellVertices> cells;
  for (int j = 1; j <= 2; ++j)
    for (int k = 1; k <= 2; ++k)
      for (int l = 1; l <= 2; ++l) {
        const double sj = j == 1 ? -1.0 : 1.0;
        const double sk = k == 1 ? -1.0 : 1.0;
        const double sl = l == 1 ? -1.0 : 1.0;
        cells.push_back({z, pool.add(Vec3(sj, 0, 0)), pool.add(Vec3(0, sk, 0)),
                         pool.add(Vec3(0, 0, sl))});
      }
  return finish(pool, std::move(cells), classify);
}

Mesh korn_wedge(const BoundaryClassifier& classify) {
  VertexPool pool;
  const int o = pool.add(Vec3(0, 0, 0));
  const int e1 = pool.add(Vec3(1, 0, 0));
  const int pe2 = pool.add(Vec3(0, 1, 0));
  const int me2 = pool.add(Vec3(0, -1, 0));
  const int pe3 = pool.add(Vec3(0, 0, 1));
  const int me3 = pool.add(Vec3(0, 0, -1));
  std::vector<CellVertices> cells{
      {o, e1, pe2, pe3}, {o, e1, me2, pe3}, {o, e1, me2, me3}, {o, e1, pe2, me3}};
  return finish(pool, std::move(cells), classify);
}

Mesh korn_pyramid(const BoundaryClassifier& classify) {
  VertexPool pool;
  const int apex = pool.add(Vec3(1, 0, 0));
  const int centre = pool.add(Vec3(0, 0, 0));
  const int pp = pool.add(Vec3(0, 1, 1));
  const int mp = pool.add(Vec3(0, -1, 1));
  const int mm = pool.add(Vec3(0, -1, -1));
  const int pm = pool.add(Vec3(0, 1, -1));
  // Criss-cross triangles: top, left, bottom, right in the (x2, x3) plane.
  std::vector<CellVertices> cells{
      {apex, centre, pp, mp}, {apex, centre, mp, mm}, {apex, centre, mm, pm}, {apex, centre, pm, pp}};
  return finish(pool, std::move(cells), classify);
}

Mesh kuhn_box(const Vec3& lo, const Vec3& hi, const BoundaryClassifier& classify) {
  VertexPool pool;
  std::vector<CellVertices> cells;
  add_kuhn_box(pool, cells, lo, hi);
  return finish(pool, std::move(cells), classify);
}

Mesh cube_mesh(const Vec3& lo, const Vec3& hi, const BoundaryClassifier& classify) {
  VertexPool pool;
  std::vector<CellVertices> cells;
  add_centred_box(pool, cells, lo, hi);
  return finish(pool, std::move(cells), classify);
}

Mesh lshape_mesh(const BoundaryClassifier& classify) {
  VertexPool pool;
  std::vector<CellVertices> cells;
  add_centred_box(pool, cells, Vec3(-1, -1, -1), Vec3(0, 0, 1));
  add_centred_box(pool, cells, Vec3(-1, 0, -1), Vec3(0, 1, 1));
  add_centred_box(pool, cells, Vec3(0, 0, -1), Vec3(1, 1, 1));
  return finish(pool, std::move(cells), classify);
}

}  // namespace ks3d
