#include "ks3d/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "ks3d/error.hpp"

namespace ks3d {

void gauss_jacobi(int n, double a, double b, std::vector<double>& nodes,
                  std::vector<double>& weights) {
  // Golub-Welsch on the symmetric Jacobi matrix of the monic recurrence.
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    const double s = 2.0 * k + a + b;
    jac(k, k) = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    if (k + 1 < n) {
      const double m = k + 1.0;
      const double t = 2.0 * m + a + b;
      const double beta =
          4.0 * m * (m + a) * (m + b) * (m + a + b) / (t * t * (t + 1.0) * (t - 1.0));
      jac(k, k + 1) = jac(k + 1, k) = std::sqrt(beta);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jac);
  const double mu0 = std::pow(2.0, a + b + 1.0) * std::tgamma(a + 1.0) * std::tgamma(b + 1.0) /
                     std::tgamma(a + b + 2.0);
  nodes.resize(n);
  weights.resize(n);
  for (int k = 0; k < n; ++k) {
    nodes[k] = eig.eigenvalues()(k);
    const double v = eig.eigenvectors()(0, k);
    weights[k] = mu0 * v * v;
  }
}

namespace {

// Rule for int_0^1 (1-u)^a f(u) du.
void jacobi_unit(int n, double a, std::vector<double>& u, std::vector<double>& w) {
  gauss_jacobi(n, a, 0.0, u, w);
  const double scale = std::pow(0.5, a + 1.0);
  for (int k = 0; k < n; ++k) {
    u[k] = 0.5 * (1.0 + u[k]);
    w[k] *= scale;
  }
}

QuadratureRule collapsed_tet_rule(int degree) {
  const int n = (degree + 2) / 2;
  std::vector<double> u, wu, v, wv, s, ws;
  jacobi_unit(n, 2.0, u, wu);
  jacobi_unit(n, 1.0, v, wv);
  jacobi_unit(n, 0.0, s, ws);
  QuadratureRule rule;
  rule.exactness_degree = 2 * n - 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double x = u[i];
        const double y = (1.0 - u[i]) * v[j];
        const double z = (1.0 - u[i]) * (1.0 - v[j]) * s[k];
        rule.points.push_back({1.0 - x - y - z, x, y, z});
        rule.weights.push_back(6.0 * wu[i] * wv[j] * ws[k]);
      }
  return rule;
}

FaceQuadratureRule collapsed_triangle_rule(int degree) {
  const int n = (degree + 2) / 2;
  std::vector<double> u, wu, v, wv;
  jacobi_unit(n, 1.0, u, wu);
  jacobi_unit(n, 0.0, v, wv);
  FaceQuadratureRule rule;
  rule.exactness_degree = 2 * n - 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = u[i];
      const double y = (1.0 - u[i]) * v[j];
      rule.points.push_back({1.0 - x - y, x, y});
      rule.weights.push_back(2.0 * wu[i] * wv[j]);
    }
  return rule;
}

QuadratureRule make_tet_rule(int degree) {
  switch (degree) {
    case 1:
      return {{{0.25, 0.25, 0.25, 0.25}}, {1.0}, 1};
    case 2: {
      const double a = (5.0 - std::sqrt(5.0)) / 20.0;
      const double b = 1.0 - 3.0 * a;
      return {{{b, a, a, a}, {a, b, a, a}, {a, a, b, a}, {a, a, a, b}},
              {0.25, 0.25, 0.25, 0.25},
              2};
    }
    case 3:
    case 4:
    case 5:
    case 6:
    case 8:
      return collapsed_tet_rule(degree);
    default:
      throw Error(Errc::UnsupportedDegree,
                  "no tetrahedral rule for degree " + std::to_string(degree));
  }
}

FaceQuadratureRule make_face_rule(int degree) {
  switch (degree) {
    case 1:
      return {{{1.0 / 3, 1.0 / 3, 1.0 / 3}}, {1.0}, 1};
    case 2: {
      const double a = 1.0 / 6.0;
      const double b = 2.0 / 3.0;
      return {{{b, a, a}, {a, b, a}, {a, a, b}}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, 2};
    }
    case 4: {
      // Dunavant's 6-point rule.
      const double a1 = 0.445948490915965, w1 = 0.223381589678011;
      const double a2 = 0.091576213509771, w2 = 0.109951743655322;
      const double b1 = 1.0 - 2.0 * a1, b2 = 1.0 - 2.0 * a2;
      return {{{b1, a1, a1}, {a1, b1, a1}, {a1, a1, b1}, {b2, a2, a2}, {a2, b2, a2}, {a2, a2, b2}},
              {w1, w1, w1, w2, w2, w2},
              4};
    }
    case 6:
      return collapsed_triangle_rule(6);
    default:
      throw Error(Errc::UnsupportedDegree,
                  "no triangle rule for degree " + std::to_string(degree));
  }
}

}  // namespace

const QuadratureRule& rule_for_degree(int degree) {
  static std::mutex mutex;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(degree);
  if (it == cache.end()) it = cache.emplace(degree, make_tet_rule(degree)).first;
  return it->second;
}

const FaceQuadratureRule& face_rule_for_degree(int degree) {
  static std::mutex mutex;
  static std::map<int, FaceQuadratureRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(degree);
  if (it == cache.end()) it = cache.emplace(degree, make_face_rule(degree)).first;
  return it->second;
}

double integrate(const Mesh& mesh, int cell, const std::function<double(const Vec3&)>& f,
                 const QuadratureRule& rule) {
  double sum = 0.0;
  for (int q = 0; q < rule.size(); ++q) {
    sum += rule.weights[q] * f(mesh.map_to_physical(cell, rule.points[q]));
  }
  return sum * mesh.cell_volume(cell);
}

Vec3 face_point(const Mesh& mesh, int face, const FaceBary& bary) {
  const auto& v = mesh.face(face).vertices;
  return bary[0] * mesh.vertex(v[0]) + bary[1] * mesh.vertex(v[1]) + bary[2] * mesh.vertex(v[2]);
}

Bary barycentric_in_cell(const Mesh& mesh, int cell, const Vec3& x) {
  const auto& g = mesh.barycentric_gradients(cell);
  const Vec3& v0 = mesh.vertex(mesh.cell(cell)[0]);
  Bary b{};
  for (int k = 1; k < 4; ++k) b[k] = g[k].dot(x - v0);
  b[0] = 1.0 - b[1] - b[2] - b[3];
  return b;
}

}  // namespace ks3d
