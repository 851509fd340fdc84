#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ks3d/error.hpp"
#include "ks3d/manufactured.hpp"
#include "ks3d/mesh_library.hpp"
#include "ks3d/quadrature.hpp"
#include "test_support.hpp"

using namespace ks3d;
using namespace ks3d::test_support;

namespace {

constexpr double kPi = std::numbers::pi;

// Sixth-order central stencils.
template <class F>
double d1_6(const F& f, const Vec3& x, int dir, double h) {
  constexpr double w[] = {-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0};
  double s = 0.0;
  for (int k = -3; k <= 3; ++k) {
    if (k == 0) continue;
    Vec3 y = x;
    y[dir] += k * h;
    s += w[k + 3] * f(y);
  }
  return s / (60.0 * h);
}

template <class F>
double d2_6(const F& f, const Vec3& x, int i, int j, double h) {
  if (i != j) {
    return d1_6([&](const Vec3& y) { return d1_6(f, y, j, h); }, x, i, h);
  }
  constexpr double w[] = {2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0};
  double s = 0.0;
  for (int k = -3; k <= 3; ++k) {
    Vec3 y = x;
    y[i] += k * h;
    s += w[k + 3] * f(y);
  }
  return s / (180.0 * h * h);
}

// g = -2 mu div eps(u) + grad p from finite differences of plain formulas.
template <class U, class P>
Vec3 body_force_fd(const U& u, const P& p, double mu, const Vec3& x) {
  const double h = 1e-2;
  Vec3 g;
  for (int i = 0; i < 3; ++i) {
    double div_eps = 0.0;
    for (int j = 0; j < 3; ++j) {
      div_eps += 0.5 * d2_6([&](const Vec3& y) { return u(y)[i]; }, x, j, j, h);
      div_eps += 0.5 * d2_6([&](const Vec3& y) { return u(y)[j]; }, x, i, j, h);
    }
    g[i] = -2.0 * mu * div_eps + d1_6(p, x, i, h);
  }
  return g;
}

Vec3 cube1_formula(const Vec3& x) {
  const double s1 = std::sin(kPi * x[0]), s2 = std::sin(kPi * x[1]), s3 = std::sin(kPi * x[2]);
  return {kPi * std::cos(kPi * x[1]) * s1 * s1 * s2 * s3,
          -kPi * std::cos(kPi * x[0]) * s2 * s2 * s1 * s3, 0.0};
}

Vec3 cube2_formula(const Vec3& x) {
  const double a = x[0], b = x[1], c = x[2];
  auto p4 = [](double t) { return t * t * t * t; };
  auto p5 = [](double t) { return t * t * t * t * t; };
  return {10 * a * p4(b) + 10 * a * p4(c) - 4 * p5(a), 10 * b * p4(a) + 10 * b * p4(c) - 4 * p5(b),
          10 * c * p4(a) + 10 * c * p4(b) - 4 * p5(c)};
}

double cube2_pressure(const Vec3& x) {
  const double a = x[0] * x[0], b = x[1] * x[1], c = x[2] * x[2];
  return -60 * a * b - 60 * a * c - 60 * b * c + 20 * a * a + 20 * b * b + 20 * c * c;
}

double div_of(const ExactCase& ec, const Vec3& x) { return ec.grad_u(x).trace(); }

// Case with an arbitrary polynomial velocity (given for jets of orders 1
// and 2) and zero pressure.
template <class F>
ExactCase custom_case(const F& field, double mu) {
  ExactCase ec;
  ec.name = "custom";
  ec.mu = mu;
  ec.classify = all_dirichlet();
  ec.coarse_mesh = [](const BoundaryClassifier& c) { return octahedron_patch(c); };
  ec.velocity2 = [field](const Vec3& x) {
    return field(Jet2::variable(0, x[0]), Jet2::variable(1, x[1]), Jet2::variable(2, x[2]));
  };
  ec.velocity1 = [field](const Vec3& x) {
    const auto v =
        field(Jet2::variable(0, x[0]), Jet2::variable(1, x[1]), Jet2::variable(2, x[2]));
    return JetVec<1>{truncate<1>(v[0]), truncate<1>(v[1]), truncate<1>(v[2])};
  };
  ec.pressure1 = [](const Vec3&) { return Jet1::constant(0.0); };
  return ec;
}

}  // namespace

TEST(Jet, MatchesFiniteDifferencesOnRandomExpressions) {
  std::mt19937 gen(20261016);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double h = 1e-3;
  int checked = 0;
  for (int e = 0; e < 50; ++e) {
    const int kind = e % 10;
    const Coeffs k{unit(gen), unit(gen), unit(gen)};
    const Vec3 x(unit(gen), unit(gen), unit(gen));
    const Jet3 jet = eval_jet(kind, k, x);
    EXPECT_NEAR(jet.value(), eval_double(kind, k, x), 1e-14 * std::max(1.0, std::abs(jet.value())));
    // Order |m| + 1 coefficients against differences of order |m| data; the
    // base level uses plain double evaluation.
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; a + b <= 2; ++b)
        for (int c = 0; a + b + c <= 2; ++c)
          for (int dir = 0; dir < 3; ++dir) {
            const int m[3] = {a + (dir == 0), b + (dir == 1), c + (dir == 2)};
            const double exact = jet.derivative_at(m[0], m[1], m[2]);
            auto lower = [&](const Vec3& y) {
              if (a + b + c == 0) return eval_double(kind, k, y);
              return eval_jet(kind, k, y).derivative_at(a, b, c);
            };
            const double fd = richardson(lower, x, dir, h);
            EXPECT_NEAR(exact, fd, 1e-6 * std::max(1.0, std::abs(exact)))
                << "expression " << e << " kind " << kind << " multi-index " << m[0] << m[1]
                << m[2];
            ++checked;
          }
  }
  EXPECT_EQ(checked, 50 * 10 * 3);
}

TEST(Jet, ArithmeticIdentities) {
  const Jet3 x = Jet3::variable(0, 0.7);
  const Jet3 y = Jet3::variable(1, -0.2);
  const Jet3 one = sin(x + y) * sin(x + y) + cos(x + y) * cos(x + y);
  EXPECT_NEAR(one.value(), 1.0, 1e-15);
  for (int k = 1; k < Jet3::kSize; ++k) EXPECT_NEAR(one[k], 0.0, 1e-14);
  const Jet3 q = (x * y) / y;
  for (int k = 0; k < Jet3::kSize; ++k) EXPECT_NEAR(q[k], x[k], 1e-13);
  const Jet3 r = sqrt(x * x);
  for (int k = 0; k < Jet3::kSize; ++k) EXPECT_NEAR(r[k], x[k], 1e-14);
  EXPECT_NEAR(derivative(x * x * x, 0).derivative_at(1, 0, 0), 6.0 * 0.7, 1e-14);
}

TEST(Manufactured, Cube1VanishesAtCentre) {
  const ExactCase ec = case_library("cube1");
  const Vec3 u = ec.u(Vec3(0.5, 0.5, 0.5));
  EXPECT_NEAR(u.norm(), 0.0, 1e-15);
  EXPECT_EQ(ec.p(Vec3(0.3, 0.4, 0.5)), 0.0);
}

TEST(Manufactured, Cube2AtOrigin) {
  const ExactCase ec = case_library("cube2");
  EXPECT_EQ(ec.p(Vec3::Zero()), 0.0);
  EXPECT_EQ(ec.u(Vec3::Zero()).norm(), 0.0);
}

TEST(Manufactured, FormulasMatchHandWrittenValues) {
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const ExactCase c1 = case_library("cube1");
  const ExactCase c2 = case_library("cube2");
  const ExactCase c3 = case_library("cube3");
  for (int t = 0; t < 10; ++t) {
    const Vec3 x(unit(gen), unit(gen), unit(gen));
    const Vec3 y = 2.0 * x - Vec3::Ones();
    EXPECT_NEAR((c1.u(x) - cube1_formula(x)).norm(), 0.0, 1e-14);
    EXPECT_NEAR((c2.u(y) - cube2_formula(y)).norm(), 0.0, 1e-13);
    EXPECT_NEAR(c2.p(y), cube2_pressure(y), 1e-12);
    EXPECT_NEAR(c3.p(y), y[0] * y[1] * y[2], 1e-15);
  }
}

TEST(Manufactured, DivergenceFree) {
  std::mt19937 gen(8);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const ExactCase c1 = case_library("cube1");
  const ExactCase c2 = case_library("cube2");
  const ExactCase c3 = case_library("cube3");
  const ExactCase ls = case_library("lshape");
  for (int t = 0; t < 10; ++t) {
    const Vec3 y(unit(gen), unit(gen), unit(gen));
    EXPECT_LE(std::abs(div_of(c3, y)), 1e-10);
    EXPECT_LE(std::abs(div_of(c2, y)), 1e-10);
    EXPECT_LE(std::abs(div_of(c1, 0.5 * (y + Vec3::Ones()))), 1e-10);
    // Reflect into the L-shape (the quadrant x1 > 0, x2 < 0 is excluded).
    Vec3 z = y;
    if (z[0] > 0.0 && z[1] < 0.0) z[1] = -z[1];
    EXPECT_LE(std::abs(div_of(ls, z)), 1e-10) << z.transpose();
  }
}

TEST(Grisvard, VanishesOnClampedEdges) {
  const Jet3 right = eval_ugr(1.0, 0.3);
  const Jet3 left = eval_ugr(-1.0, 0.45);
  EXPECT_NEAR(right.value(), 0.0, 1e-14);
  EXPECT_NEAR(left.value(), 0.0, 1e-14);
  for (int d = 0; d < 2; ++d) {
    EXPECT_NEAR(right.d(d), 0.0, 1e-13);
    EXPECT_NEAR(left.d(d), 0.0, 1e-13);
  }
  EXPECT_NEAR(eval_ugr(-0.4, 1.0).value(), 0.0, 1e-14);
  EXPECT_NEAR(eval_ugr(-0.4, -1.0).value(), 0.0, 1e-14);
}

TEST(Grisvard, MatchesPolarForm) {
  const double r = 0.5;
  for (double theta : {kPi / 4, 3 * kPi / 4, kPi + 0.6, 1.4 * kPi}) {
    const double v = eval_ugr(r * std::cos(theta), r * std::sin(theta)).value();
    EXPECT_NEAR(v, grisvard_polar(r, theta), 1e-12) << theta;
  }
  EXPECT_NE(grisvard_polar(r, kPi / 4), 0.0);
}

TEST(Grisvard, DerivativesMatchFiniteDifferences) {
  const Vec3 x(-0.3, 0.55, 0.0);
  const Jet3 j = eval_ugr(x[0], x[1]);
  for (int dir = 0; dir < 2; ++dir) {
    const double fd = richardson([](const Vec3& y) { return eval_ugr(y[0], y[1]).value(); }, x,
                                 dir, 1e-3);
    EXPECT_NEAR(j.d(dir), fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

TEST(Grisvard, EvaluationAtCorner) {
  for (const auto& [a, b] : {std::pair{0.0, 0.0}, std::pair{1e-13, 0.0}}) {
    try {
      (void)eval_ugr(a, b);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::EvaluationAtCorner);
    }
  }
}

TEST(BodyForce, RigidMotionGivesZero) {
  const auto rigid = [](const Jet2& x, const Jet2& y, const Jet2& z) {
    return JetVec<2>{1.0 + 0.3 * y - 0.7 * z, -2.0 - 0.3 * x + 0.2 * z, 0.5 + 0.7 * x - 0.2 * y};
  };
  const ExactCase ec = custom_case(rigid, 1.3);
  for (const Vec3& x : {Vec3(0.1, 0.2, 0.3), Vec3(-0.5, 0.4, 0.0)}) {
    EXPECT_NEAR(ec.body_force(x).norm(), 0.0, 1e-14);
    EXPECT_NEAR(ec.traction(x, Vec3(0, 0, 1)).norm(), 0.0, 1e-14);
  }
}

TEST(BodyForce, QuadraticStretch) {
  const auto field = [](const Jet2& x, const Jet2&, const Jet2&) {
    return JetVec<2>{x * x, Jet2::constant(0.0), Jet2::constant(0.0)};
  };
  const ExactCase ec = custom_case(field, 0.5);
  const Vec3 g = ec.body_force(Vec3(0.3, -0.1, 0.8));
  EXPECT_NEAR(g[0], -2.0, 1e-14);
  EXPECT_NEAR(g[1], 0.0, 1e-14);
  EXPECT_NEAR(g[2], 0.0, 1e-14);
}

TEST(BodyForce, Cube1MatchesFiniteDifferences) {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  const ExactCase ec = case_library("cube1", 0.7);
  for (int t = 0; t < 10; ++t) {
    const Vec3 x(unit(gen), unit(gen), unit(gen));
    const Vec3 fd = body_force_fd(cube1_formula, [](const Vec3&) { return 0.0; }, 0.7, x);
    const Vec3 g = ec.body_force(x);
    EXPECT_NEAR((g - fd).norm(), 0.0, 1e-6 * std::max(1.0, fd.norm())) << x.transpose();
  }
}

TEST(BodyForce, Cube2MatchesFiniteDifferences) {
  std::mt19937 gen(12);
  std::uniform_real_distribution<double> unit(-0.9, 0.9);
  const ExactCase ec = case_library("cube2");
  for (int t = 0; t < 10; ++t) {
    const Vec3 x(unit(gen), unit(gen), unit(gen));
    const Vec3 fd = body_force_fd(cube2_formula, cube2_pressure, 1.0, x);
    EXPECT_NEAR((ec.body_force(x) - fd).norm(), 0.0, 1e-6 * std::max(1.0, fd.norm()));
  }
}

TEST(BodyForce, TractionFromStress) {
  const ExactCase ec = case_library("cube2", 2.0);
  const Vec3 x(0.3, 0.6, -1.0);
  const Vec3 n(0.0, 0.0, -1.0);
  Mat3 grad;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      grad(i, j) = d1_6([&](const Vec3& y) { return cube2_formula(y)[i]; }, x, j, 1e-2);
  const Mat3 stress =
      2.0 * 2.0 * (0.5 * (grad + grad.transpose())) - cube2_pressure(x) * Mat3::Identity();
  const Vec3 expected = stress * n;
  EXPECT_NEAR((ec.traction(x, n) - expected).norm(), 0.0, 1e-8 * expected.norm());
}

TEST(ErrorNorms, LinearFieldIsReproduced) {
  const auto linear = [](const Jet2& x, const Jet2& y, const Jet2& z) {
    return JetVec<2>{1.0 + 2.0 * x - y, 3.0 * z, x + y - 0.5 * z};
  };
  const ExactCase ec = custom_case(linear, 1.0);
  auto mesh = std::make_shared<const Mesh>(red_refine(ec.build_mesh()));
  for (auto kind : {VelocitySpaceKind::KsP2, VelocitySpaceKind::KsBubble,
                    VelocitySpaceKind::BernardiRaugel}) {
    auto space = std::make_shared<const VelocitySpace>(mesh, kind);
    const FiniteElementFunction u_h = interpolate(space, [&](const Vec3& x) { return ec.u(x); });
    const ErrorNorms e = error_norms(u_h, Eigen::VectorXd::Zero(mesh->num_cells()), ec);
    EXPECT_LE(e.u_h1, 1e-12);
    EXPECT_LE(e.u_l2, 1e-12);
    EXPECT_EQ(e.p_l2, 0.0);
  }
}

TEST(ErrorNorms, ZeroSolutionGivesNormsOfExact) {
  const ExactCase ec = case_library("cube3");
  auto mesh = std::make_shared<const Mesh>(ec.build_mesh());
  auto space = std::make_shared<const VelocitySpace>(mesh, VelocitySpaceKind::KsBubble);
  FiniteElementFunction zero{space, Eigen::VectorXd::Zero(space->total_dofs())};
  const ErrorNorms e = error_norms(zero, Eigen::VectorXd::Zero(mesh->num_cells()), ec);
  const auto& rule = rule_for_degree(8);
  double l2 = 0.0, h1 = 0.0;
  for (int c = 0; c < mesh->num_cells(); ++c) {
    l2 += integrate(*mesh, c, [&](const Vec3& x) { return ec.u(x).squaredNorm(); }, rule);
    h1 += integrate(*mesh, c, [&](const Vec3& x) { return ec.grad_u(x).squaredNorm(); }, rule);
  }
  EXPECT_NEAR(e.u_l2, std::sqrt(l2), 1e-13 * std::sqrt(l2));
  EXPECT_NEAR(e.u_h1, std::sqrt(h1), 1e-13 * std::sqrt(h1));
  // int_{(-1,1)^3} (x1 x2 x3)^2 = (2/3)^3.
  EXPECT_NEAR(e.p_l2, std::pow(2.0 / 3.0, 1.5), 1e-13);
}

TEST(Manufactured, Cube1LiftingIsZero) {
  const ExactCase ec = case_library("cube1");
  auto mesh = std::make_shared<const Mesh>(red_refine(ec.build_mesh()));
  for (auto kind : {VelocitySpaceKind::KsP2, VelocitySpaceKind::KsBubble,
                    VelocitySpaceKind::BernardiRaugel}) {
    auto space = std::make_shared<const VelocitySpace>(mesh, kind);
    const FiniteElementFunction lift =
        dirichlet_lifting(space, [&](const Vec3& x) { return ec.u(x); });
    EXPECT_LE(lift.coefficients.lpNorm<Eigen::Infinity>(), 1e-14);
  }
  double worst = 0.0;
  for (int v = 0; v < mesh->num_vertices(); ++v)
    if (mesh->is_boundary_vertex(v)) worst = std::max(worst, ec.u(mesh->vertex(v)).norm());
  EXPECT_LE(worst, 1e-14);
}

TEST(Manufactured, BoundarySplit) {
  const Mesh c1 = case_library("cube1").build_mesh();
  const Mesh c2 = case_library("cube2").build_mesh();
  const Mesh ls = case_library("lshape").build_mesh();
  auto neumann_area = [](const Mesh& m) {
    double area = 0.0;
    for (const Face& f : m.faces())
      if (f.is_boundary() && f.label == BoundaryLabel::Neumann) area += f.area;
    return area;
  };
  EXPECT_NEAR(neumann_area(c1), 1.0, 1e-14);
  EXPECT_NEAR(neumann_area(c2), 1.0, 1e-14);
  EXPECT_NEAR(neumann_area(ls), 2.0, 1e-14);
  EXPECT_NEAR(c2.volume(), 8.0, 1e-13);
  EXPECT_NEAR(ls.volume(), 6.0, 1e-13);
}

TEST(Manufactured, UnknownCase) {
  try {
    (void)case_library("cube4");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownCase);
  }
  EXPECT_THROW((void)case_library("cube1", 0.0), Error);
  EXPECT_EQ(case_names().size(), 4u);
}
