#include "ks3d/manufactured.hpp"

#include <cmath>
#include <numbers>

#include "ks3d/error.hpp"
#include "ks3d/mesh_library.hpp"
#include "ks3d/quadrature.hpp"

namespace ks3d {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFaceTol = 1e-12;

template <int N>
std::array<Jet<N>, 3> coordinates(const Vec3& x) {
  return {Jet<N>::variable(0, x[0]), Jet<N>::variable(1, x[1]), Jet<N>::variable(2, x[2])};
}

template <int N>
Jet<N> sq(const Jet<N>& a) {
  return a * a;
}

template <int N>
JetVec<N> cube1_u(const Vec3& x) {
  const auto [x1, x2, x3] = coordinates<N>(x);
  const Jet<N> s1 = sin(kPi * x1);
  const Jet<N> s2 = sin(kPi * x2);
  const Jet<N> s3 = sin(kPi * x3);
  const Jet<N> c1 = cos(kPi * x1);
  const Jet<N> c2 = cos(kPi * x2);
  return {kPi * c2 * sq(s1) * s2 * s3, -kPi * c1 * sq(s2) * s1 * s3, Jet<N>::constant(0.0)};
}

template <int N>
Jet<N> cube1_p(const Vec3&) {
  return Jet<N>::constant(0.0);
}

template <int N>
JetVec<N> cube2_u(const Vec3& x) {
  const auto [x1, x2, x3] = coordinates<N>(x);
  const Jet<N> q1 = sq(sq(x1));
  const Jet<N> q2 = sq(sq(x2));
  const Jet<N> q3 = sq(sq(x3));
  return {10.0 * x1 * q2 + 10.0 * x1 * q3 - 4.0 * x1 * q1,
          10.0 * x2 * q1 + 10.0 * x2 * q3 - 4.0 * x2 * q2,
          10.0 * x3 * q1 + 10.0 * x3 * q2 - 4.0 * x3 * q3};
}

template <int N>
Jet<N> cube2_p(const Vec3& x) {
  const auto [x1, x2, x3] = coordinates<N>(x);
  const Jet<N> s1 = sq(x1);
  const Jet<N> s2 = sq(x2);
  const Jet<N> s3 = sq(x3);
  return -60.0 * s1 * s2 - 60.0 * s1 * s3 - 60.0 * s2 * s3 + 20.0 * sq(s1) + 20.0 * sq(s2) +
         20.0 * sq(s3);
}

template <int N>
JetVec<N> cube3_u(const Vec3& x) {
  const auto [x1, x2, x3] = coordinates<N>(x);
  const Jet<N> a = sq(x1) - 1.0;
  const Jet<N> b = sq(x2) - 1.0;
  const Jet<N> c = sq(x3) - 1.0;
  return {2.0 * x2 * x3 * sq(a) * b * c, -1.0 * x1 * x3 * a * sq(b) * c,
          -1.0 * x1 * x2 * a * b * sq(c)};
}

template <int N>
Jet<N> cube3_p(const Vec3& x) {
  const auto [x1, x2, x3] = coordinates<N>(x);
  return x1 * x2 * x3;
}

// u = curl psi with psi = ((1 - x3^2)^2 G, cos(pi x3) G, x3 G), G = u_Gr(x1, x2).
template <int N>
JetVec<N> lshape_u(const Vec3& x) {
  const auto [x1, x2, x3] = coordinates<N + 1>(x);
  const Jet<N + 1> g = grisvard(x1, x2);
  const Jet<N + 1> psi1 = sq(1.0 - sq(x3)) * g;
  const Jet<N + 1> psi2 = cos(kPi * x3) * g;
  const Jet<N + 1> psi3 = x3 * g;
  return {derivative(psi3, 1) - derivative(psi2, 2), derivative(psi1, 2) - derivative(psi3, 0),
          derivative(psi2, 0) - derivative(psi1, 1)};
}

template <int N>
Jet<N> lshape_p(const Vec3&) {
  return Jet<N>::constant(0.0);
}

BoundaryClassifier cube1_boundary() {
  return [](const Vec3& c) {
    return std::abs(c[2]) < kFaceTol ? BoundaryLabel::Neumann : BoundaryLabel::Dirichlet;
  };
}

BoundaryClassifier cube23_boundary() {
  return [](const Vec3& c) {
    const bool n = std::abs(c[2] + 1.0) < kFaceTol && c[0] > 0.0 && c[1] > 0.0;
    return n ? BoundaryLabel::Neumann : BoundaryLabel::Dirichlet;
  };
}

BoundaryClassifier lshape_boundary() {
  return [](const Vec3& c) {
    const bool n = std::abs(c[0] - 1.0) < kFaceTol && c[1] > 0.0;
    return n ? BoundaryLabel::Neumann : BoundaryLabel::Dirichlet;
  };
}

}  // namespace

template <int N>
Jet<N> grisvard(const Jet<N>& x1, const Jet<N>& x2) {
  constexpr double a = kGrisvardAlpha;
  constexpr double w = kGrisvardOmega;
  const Jet<N> r2 = sq(x1) + sq(x2);
  if (r2.value() < 1e-24) throw Error(Errc::EvaluationAtCorner, "u_Gr evaluated at the corner");
  Jet<N> theta = atan2(x2, x1);
  if (theta.value() < -0.5 * kPi) theta += 2.0 * kPi;
  const double ca = std::sin((a - 1.0) * w) / (a - 1.0) - std::sin((a + 1.0) * w) / (a + 1.0);
  const double cb = std::cos((a - 1.0) * w) - std::cos((a + 1.0) * w);
  const Jet<N> g = ca * (cos((a - 1.0) * theta) - cos((a + 1.0) * theta)) -
                   (sin((a - 1.0) * theta) / (a - 1.0) - sin((a + 1.0) * theta) / (a + 1.0)) * cb;
  return sq(sq(x1) - 1.0) * sq(sq(x2) - 1.0) * pow(r2, 0.5 * (1.0 + a)) * g;
}

template Jet<0> grisvard<0>(const Jet<0>&, const Jet<0>&);
template Jet<1> grisvard<1>(const Jet<1>&, const Jet<1>&);
template Jet<2> grisvard<2>(const Jet<2>&, const Jet<2>&);
template Jet<3> grisvard<3>(const Jet<3>&, const Jet<3>&);

Jet3 eval_ugr(double x1, double x2) {
  return grisvard(Jet3::variable(0, x1), Jet3::variable(1, x2));
}

double grisvard_polar(double r, double theta) {
  constexpr double a = kGrisvardAlpha;
  constexpr double w = kGrisvardOmega;
  const double g = (std::sin((a - 1) * w) / (a - 1) - std::sin((a + 1) * w) / (a + 1)) *
                       (std::cos((a - 1) * theta) - std::cos((a + 1) * theta)) -
                   (std::sin((a - 1) * theta) / (a - 1) - std::sin((a + 1) * theta) / (a + 1)) *
                       (std::cos((a - 1) * w) - std::cos((a + 1) * w));
  const double c = r * r * std::cos(theta) * std::cos(theta) - 1.0;
  const double s = r * r * std::sin(theta) * std::sin(theta) - 1.0;
  return c * c * s * s * std::pow(r, 1.0 + a) * g;
}

Vec3 ExactCase::u(const Vec3& x) const {
  try {
    const auto v = velocity1(x);
    return {v[0].value(), v[1].value(), v[2].value()};
  } catch (const Error& e) {
    // The L-shape velocity involves only u_Gr and its first derivatives,
    // which tend to zero on the reentrant edge; vertex and edge-midpoint
    // interpolation lands there.
    if (e.code() != Errc::EvaluationAtCorner) throw;
    return Vec3::Zero();
  }
}

Mat3 ExactCase::grad_u(const Vec3& x) const {
  const auto v = velocity1(x);
  Mat3 g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = v[i].d(j);
  return g;
}

double ExactCase::p(const Vec3& x) const { return pressure1(x).value(); }

Vec3 ExactCase::body_force(const Vec3& x) const {
  const auto v = velocity2(x);
  const Jet1 pj = pressure1(x);
  Vec3 g;
  for (int i = 0; i < 3; ++i) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j) s += v[i].d2(j, j) + v[j].d2(i, j);
    g[i] = -mu * s + pj.d(i);
  }
  return g;
}

Vec3 ExactCase::traction(const Vec3& x, const Vec3& normal) const {
  const Mat3 g = grad_u(x);
  const Mat3 sigma = mu * (g + g.transpose()) - p(x) * Mat3::Identity();
  return sigma * normal;
}

ExactCase case_library(std::string_view name, double mu) {
  if (!(mu > 0.0)) throw Error(Errc::InvalidInput, "viscosity must be positive");
  ExactCase ec;
  ec.name = std::string(name);
  ec.mu = mu;
  const Vec3 lo(-1.0, -1.0, -1.0);
  const Vec3 hi(1.0, 1.0, 1.0);
  if (name == "cube1") {
    ec.classify = cube1_boundary();
    ec.coarse_mesh = [](const BoundaryClassifier& c) {
      return cube_mesh(Vec3::Zero(), Vec3::Ones(), c);
    };
    ec.velocity2 = cube1_u<2>;
    ec.velocity1 = cube1_u<1>;
    ec.pressure1 = cube1_p<1>;
  } else if (name == "cube2") {
    ec.classify = cube23_boundary();
    ec.coarse_mesh = [lo, hi](const BoundaryClassifier& c) { return cube_mesh(lo, hi, c); };
    ec.velocity2 = cube2_u<2>;
    ec.velocity1 = cube2_u<1>;
    ec.pressure1 = cube2_p<1>;
  } else if (name == "cube3") {
    ec.classify = cube23_boundary();
    ec.coarse_mesh = [lo, hi](const BoundaryClassifier& c) { return cube_mesh(lo, hi, c); };
    ec.velocity2 = cube3_u<2>;
    ec.velocity1 = cube3_u<1>;
    ec.pressure1 = cube3_p<1>;
  } else if (name == "lshape") {
    ec.classify = lshape_boundary();
    ec.coarse_mesh = [](const BoundaryClassifier& c) { return lshape_mesh(c); };
    ec.velocity2 = lshape_u<2>;
    ec.velocity1 = lshape_u<1>;
    ec.pressure1 = lshape_p<1>;
  } else {
    throw Error(Errc::UnknownCase, "unknown case '" + std::string(name) + "'");
  }
  return ec;
}

std::vector<std::string> case_names() { return {"cube1", "cube2", "cube3", "lshape"}; }

ErrorNorms error_norms(const FiniteElementFunction& u_h, const Eigen::VectorXd& p_h,
                       const ExactCase& exact) {
  const VelocitySpace& space = *u_h.space;
  const Mesh& mesh = space.mesh();
  if (p_h.size() != mesh.num_cells()) throw Error(Errc::ShapeMismatch, "pressure length");
  const QuadratureRule& rule = rule_for_degree(8);
  const int n = space.local_count();
  std::array<int, 32> dofs{};
  std::array<Vec3, 32> vals{};
  std::array<Mat3, 32> grads{};
  double e_h1 = 0.0, e_l2 = 0.0, e_p = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    space.cell_dofs(c, std::span(dofs.data(), n));
    const double vol = mesh.cell_volume(c);
    for (int q = 0; q < rule.size(); ++q) {
      space.eval(c, rule.points[q], std::span(vals.data(), n), std::span(grads.data(), n));
      Vec3 uh = Vec3::Zero();
      Mat3 gh = Mat3::Zero();
      for (int i = 0; i < n; ++i) {
        if (dofs[i] == kNoDof) continue;
        const double coef = u_h.coefficients[dofs[i]];
        uh += coef * vals[i];
        gh += coef * grads[i];
      }
      const Vec3 x = mesh.map_to_physical(c, rule.points[q]);
      const auto v = exact.velocity1(x);
      Vec3 ue;
      Mat3 ge;
      for (int i = 0; i < 3; ++i) {
        ue[i] = v[i].value();
        for (int j = 0; j < 3; ++j) ge(i, j) = v[i].d(j);
      }
      const double w = rule.weights[q] * vol;
      e_l2 += w * (ue - uh).squaredNorm();
      e_h1 += w * (ge - gh).squaredNorm();
      const double dp = exact.pressure1(x).value() - p_h[c];
      e_p += w * dp * dp;
    }
  }
  return {std::sqrt(e_h1), std::sqrt(e_l2), std::sqrt(e_p)};
}

}  // namespace ks3d
