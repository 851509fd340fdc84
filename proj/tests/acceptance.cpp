// Acceptance driver: evaluates criteria 1-8 and prints one PASS/FAIL line
// for each, preceded by indented detail lines.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ks3d/assembly.hpp"
#include "ks3d/error.hpp"
#include "ks3d/manufactured.hpp"
#include "ks3d/mesh_library.hpp"
#include "ks3d/quadrature.hpp"
#include "ks3d/stability.hpp"
#include "ks3d/study.hpp"
#include "test_support.hpp"

using namespace ks3d;

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    detail += (detail.empty() ? "" : "; ") + what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Per-solve diagnostics gathered by criteria 4 and 5, checked by 6 and 7.
struct SolveLog {
  int solves = 0;
  double worst_div_ratio = 0.0;  // max_div_mean / (1 + ||grad_h u_h||)
  double worst_residual = 0.0;

  void add(const ConvergenceTable& t) {
    for (const auto& d : t.diagnostics) {
      ++solves;
      worst_div_ratio = std::max(worst_div_ratio, d.max_div_mean / (1.0 + d.grad_norm));
      worst_residual = std::max(worst_residual, d.saddle_residual);
    }
  }
};

SolveLog g_solves;

constexpr VelocitySpaceKind kProposed[] = {VelocitySpaceKind::KsP2, VelocitySpaceKind::KsBubble};
constexpr VelocitySpaceKind kStudied[] = {VelocitySpaceKind::KsP2, VelocitySpaceKind::KsBubble,
                                          VelocitySpaceKind::BernardiRaugel};

Outcome criterion1() {
  Outcome o;
  const auto start = Clock::now();
  const InfSupCounterexample ce = counterexample_infsup(0.5);
  const double t = elapsed(start);
  std::printf("  max |b_h(phi_i, q)| = %.3e, inf-sup constant = %.3e, %.3f s\n",
              ce.residual.max_abs, ce.infsup, t);
  o.require(ce.residual.max_abs <= 1e-13, "residual " + fmt("%.3e", ce.residual.max_abs));
  o.require(ce.infsup <= 1e-8, "inf-sup constant " + fmt("%.3e", ce.infsup));
  o.require(t < 1.0, "runtime " + fmt("%.2f s", t));
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto start = Clock::now();
  const KornCounterexample ce = counterexample_korn(KornVariant::Wedge, 1.0);
  const double t = elapsed(start);
  std::printf("  ||eps_h|| = %.3e, jumps = %.3e, boundary means = %.3e, ||grad_h|| = %.4f, "
              "korn = %.3e, %.3f s\n",
              ce.eps_norm, ce.max_interior_jump, ce.max_boundary_mean, ce.grad_norm, ce.korn, t);
  o.require(ce.eps_norm <= 1e-12, "strain");
  o.require(ce.max_interior_jump <= 1e-13, "interior jumps");
  o.require(ce.max_boundary_mean <= 1e-13, "boundary means");
  o.require(ce.grad_norm >= 1.0, "gradient norm");
  o.require(ce.korn <= 1e-10, "korn constant " + fmt("%.3e", ce.korn));
  o.require(t < 1.0, "runtime " + fmt("%.2f s", t));
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto start = Clock::now();
  for (auto kind : kProposed) {
    const std::string name(to_string(kind));
    auto patch = std::make_shared<const VelocitySpace>(
        std::make_shared<const Mesh>(octahedron_patch()), kind);
    const double pk = korn_constant(patch).constant;
    const double pb = infsup_constant(patch).constant;
    std::printf("  %-9s octa-patch  korn %.4f  infsup %.4f\n", name.c_str(), pk, pb);
    o.require(pk >= 1e-2 && pb >= 1e-2, name + " patch constant below 1e-2");

    Mesh mesh = case_library("cube1").build_mesh();
    double prev_k = 0.0, prev_b = 0.0;
    for (int level = 0; level <= 2; ++level) {
      if (level > 0) mesh = red_refine(mesh);
      const auto t0 = Clock::now();
      auto space = std::make_shared<const VelocitySpace>(std::make_shared<const Mesh>(mesh), kind);
      const double k = korn_constant(space).constant;
      const double b = infsup_constant(space).constant;
      std::printf("  %-9s cube level %d  korn %.4f  infsup %.4f  (%.1f s)\n", name.c_str(), level,
                  k, b, elapsed(t0));
      o.require(k >= 1e-2 && b >= 1e-2,
                name + " cube level " + std::to_string(level) + " constant below 1e-2");
      if (level > 0) {
        const double dk = std::abs(k - prev_k) / prev_k;
        const double db = std::abs(b - prev_b) / prev_b;
        o.require(dk <= 0.25, name + " korn drift " + fmt("%.3f", dk));
        o.require(db <= 0.25, name + " infsup drift " + fmt("%.3f", db));
      }
      prev_k = k;
      prev_b = b;
    }
  }
  const double t = elapsed(start);
  std::printf("  total %.1f s\n", t);
  o.require(t < 300.0, "runtime " + fmt("%.0f s", t));
  return o;
}

struct RateWindow {
  double h1_lo, h1_hi, l2_lo, l2_hi;
};

Outcome criterion4() {
  Outcome o;
  for (const char* case_name : {"cube1", "cube2", "cube3"}) {
    const RateWindow w = std::string(case_name) == "cube2" ? RateWindow{0.85, 1.15, 1.5, 2.3}
                                                           : RateWindow{0.85, 1.15, 1.6, 2.4};
    for (auto kind : kStudied) {
      const std::string label = std::string(case_name) + " " + std::string(to_string(kind));
      const auto start = Clock::now();
      const ConvergenceTable table = run_case(case_library(case_name), kind, 3);
      const double t = elapsed(start);
      g_solves.add(table);
      const ConvergenceRow& last = table.rows.back();
      const double h1 = *last.rate_h1;
      const double l2 = *last.rate_l2;
      std::printf("  %-15s rate_h1 %.3f  rate_l2 %.3f  err_h1 %.3e  err_l2 %.3e  (%.0f s)\n",
                  label.c_str(), h1, l2, last.err_u_h1, last.err_u_l2, t);
      std::fflush(stdout);
      o.require(h1 >= w.h1_lo && h1 <= w.h1_hi, label + " rate_h1 " + fmt("%.3f", h1));
      o.require(l2 >= w.l2_lo && l2 <= w.l2_hi, label + " rate_l2 " + fmt("%.3f", l2));
      o.require(t < 600.0, label + " runtime " + fmt("%.0f s", t));
    }
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto start = Clock::now();
  for (auto kind : kStudied) {
    const std::string label = "lshape " + std::string(to_string(kind));
    const auto t0 = Clock::now();
    const ConvergenceTable table = run_case(case_library("lshape"), kind, 2);
    g_solves.add(table);
    const double h1 = *table.rows.back().rate_h1;
    std::printf("  %-16s rate_h1 %.3f  (%.0f s)\n", label.c_str(), h1, elapsed(t0));
    std::fflush(stdout);
    o.require(h1 >= 0.7, label + " rate_h1 " + fmt("%.3f", h1));
  }
  const double t = elapsed(start);
  o.require(t < 900.0, "runtime " + fmt("%.0f s", t));
  return o;
}

// Solves cube1 on levels 1-2 when criteria 4 and 5 were not run.
void ensure_solves() {
  if (g_solves.solves > 0) return;
  for (auto kind : kStudied) g_solves.add(run_case(case_library("cube1"), kind, 2));
}

Outcome criterion6() {
  Outcome o;
  ensure_solves();
  std::printf("  %d solves, worst max_T |mean div_h u_h| / (1 + ||grad_h u_h||) = %.3e\n",
              g_solves.solves, g_solves.worst_div_ratio);
  o.require(g_solves.worst_div_ratio <= 1e-10, "divergence " + fmt("%.3e", g_solves.worst_div_ratio));
  return o;
}

Outcome criterion7() {
  Outcome o;
  namespace ts = ks3d::test_support;

  double quad_err = 0.0;
  for (int d : {1, 2, 3, 4, 5, 6, 8}) {
    const QuadratureRule& r = rule_for_degree(d);
    for (int a0 = 0; a0 <= d; ++a0)
      for (int a1 = 0; a0 + a1 <= d; ++a1)
        for (int a2 = 0; a0 + a1 + a2 <= d; ++a2)
          for (int a3 = 0; a0 + a1 + a2 + a3 <= d; ++a3) {
            const int a[4] = {a0, a1, a2, a3};
            double q = 0.0;
            for (int k = 0; k < r.size(); ++k) {
              double m = 1.0;
              for (int i = 0; i < 4; ++i) m *= std::pow(r.points[k][i], a[i]);
              q += r.weights[k] * m;
            }
            const double exact = 6.0 * std::tgamma(a0 + 1.0) * std::tgamma(a1 + 1.0) *
                                 std::tgamma(a2 + 1.0) * std::tgamma(a3 + 1.0) /
                                 std::tgamma(a0 + a1 + a2 + a3 + 4.0);
            quad_err = std::max(quad_err, std::abs(q - exact) / exact);
          }
  }
  std::printf("  quadrature: worst relative monomial error %.2e\n", quad_err);
  o.require(quad_err <= 1e-12, "quadrature");

  std::mt19937 gen(20261016);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double jet_err = 0.0;
  for (int e = 0; e < 50; ++e) {
    const int kind = e % 10;
    const ts::Coeffs k{unit(gen), unit(gen), unit(gen)};
    const Vec3 x(unit(gen), unit(gen), unit(gen));
    const Jet3 jet = ts::eval_jet(kind, k, x);
    for (int a = 0; a <= 2; ++a)
      for (int b = 0; a + b <= 2; ++b)
        for (int c = 0; a + b + c <= 2; ++c)
          for (int dir = 0; dir < 3; ++dir) {
            const double exact =
                jet.derivative_at(a + (dir == 0), b + (dir == 1), c + (dir == 2));
            auto lower = [&](const Vec3& y) {
              if (a + b + c == 0) return ts::eval_double(kind, k, y);
              return ts::eval_jet(kind, k, y).derivative_at(a, b, c);
            };
            const double fd = ts::richardson(lower, x, dir, 1e-3);
            jet_err = std::max(jet_err, std::abs(exact - fd) / std::max(1.0, std::abs(exact)));
          }
  }
  std::printf("  jets: 50 expressions, worst relative derivative error %.2e\n", jet_err);
  o.require(jet_err <= 1e-6, "jets");

  const BoundaryClassifier free_boundary = [](const Vec3&) { return BoundaryLabel::Neumann; };
  auto tet = std::make_shared<const Mesh>(reference_tet(free_boundary));
  for (auto kind : kStudied) {
    auto space = std::make_shared<const VelocitySpace>(tet, kind);
    const SparseMatrix a = assemble_a(*space, 1.0);
    const Eigen::SelfAdjointEigenSolver<MatrixXd> es(a.to_dense());
    const double top = es.eigenvalues().maxCoeff();
    int dim = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) dim += es.eigenvalues()[i] < 1e-12 * top;
    double res = 0.0;
    for (int r = 0; r < 6; ++r) {
      const Vec3 e = Vec3::Unit(r % 3);
      const auto rigid = interpolate(
          space, [&](const Vec3& x) { return r < 3 ? e : Vec3(e.cross(x)); });
      res = std::max(res, matvec(a, rigid.coefficients).norm() / rigid.coefficients.norm());
    }
    std::printf("  rigid kernel %-9s dim %d, residual %.2e\n",
                std::string(to_string(kind)).c_str(), dim, res);
    o.require(dim == 6 && res <= 1e-12, "rigid kernel " + std::string(to_string(kind)));
  }

  ensure_solves();
  std::printf("  saddle: %d solves, worst relative residual %.2e\n", g_solves.solves,
              g_solves.worst_residual);
  o.require(g_solves.worst_residual <= 1e-10, "saddle residual");

  double eig_err = 0.0;
  for (unsigned seed = 0; seed < 5; ++seed) {
    std::mt19937 rg(100 + seed);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    MatrixXd g(20, 20), h(20, 20);
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) {
        g(i, j) = d(rg);
        h(i, j) = d(rg);
      }
    const MatrixXd s = g * g.transpose() + 1e-3 * MatrixXd::Identity(20, 20);
    const MatrixXd m = h * h.transpose() + 20.0 * MatrixXd::Identity(20, 20);
    const MatrixXd l = Eigen::LLT<MatrixXd>(m).matrixL();
    const MatrixXd li = l.inverse();
    const VectorXd oracle = ts::jacobi_eigenvalues(li * s * li.transpose());
    const EigenPair e =
        smallest_generalized_eigenpair(SparseMatrix::from_dense(s), SparseMatrix::from_dense(m));
    eig_err = std::max(eig_err, std::abs(e.value - oracle[0]) / std::abs(oracle[0]));
  }
  std::printf("  eigensolver: n=20 pencils, worst relative error %.2e\n", eig_err);
  o.require(eig_err <= 1e-10, "eigensolver");
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto single = check_h2(reference_tet());
  o.require(!single.empty() && single.front().kind == H2Violation::Kind::SingleCell,
            "single tet not flagged");

  const Mesh kuhn = kuhn_box(Vec3::Zero(), Vec3::Ones());
  int interior = 0;
  for (const Face& f : kuhn.faces()) interior += !f.is_boundary();
  int flagged = 0;
  for (const auto& v : check_h2(kuhn)) flagged += v.kind == H2Violation::Kind::BoundaryInteriorFace;
  o.require(interior > 0 && flagged == interior, "Kuhn cube interior faces not all flagged");

  const BoundaryClassifier neumann = [](const Vec3&) { return BoundaryLabel::Neumann; };
  const Mesh probe = cube_mesh(Vec3::Zero(), Vec3::Ones(), neumann);
  Vec3 island = Vec3::Constant(-1.0);
  for (const Face& f : probe.faces())
    if (f.is_boundary() && std::abs(f.centroid.z()) < 1e-12) {
      island = f.centroid;
      break;
    }
  const Mesh islanded = cube_mesh(Vec3::Zero(), Vec3::Ones(), [island](const Vec3& x) {
    return (x - island).norm() < 1e-12 ? BoundaryLabel::Dirichlet : BoundaryLabel::Neumann;
  });
  const auto h1 = check_h1(islanded);
  o.require(!h1.empty(), "Dirichlet island not flagged");

  const Mesh octa = octahedron_patch();
  const bool octa_ok = check_h1(octa).empty() && check_h2(octa).empty();
  o.require(octa_ok, "octahedron patch flagged");
  std::printf("  single tet H2 violations %zu, Kuhn cube %d/%d interior faces flagged, "
              "island H1 violations %zu, octa patch %s\n",
              single.size(), flagged, interior, h1.size(), octa_ok ? "clean" : "flagged");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ks3d acceptance criteria"};
  std::vector<int> only;
  std::vector<int> known;
  app.add_option("--only", only, "run only these criteria")->check(CLI::Range(1, 8));
  app.add_option("--known-failure", known,
                 "criteria whose FAIL does not make the exit status nonzero")
      ->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria = {
      criterion1, criterion2, criterion3, criterion4,
      criterion5, criterion6, criterion7, criterion8};
  const std::set<int> selected(only.begin(), only.end());
  const std::set<int> tolerated(known.begin(), known.end());
  int failures = 0, unexpected = 0, run = 0;
  for (int n = 1; n <= 8; ++n) {
    if (!selected.empty() && !selected.count(n)) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = criteria[n - 1]();
    } catch (const Error& e) {
      o.pass = false;
      o.detail = std::string(to_string(e.code())) + ": " + e.what();
    }
    ++run;
    std::printf("criterion %d: %s  (%.1f s)%s%s\n", n, o.pass ? "PASS" : "FAIL", elapsed(start),
                o.detail.empty() ? "" : "  ", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) {
      ++failures;
      if (!tolerated.count(n)) ++unexpected;
    }
  }
  std::printf("%d of %d criteria PASS\n", run - failures, run);
  return unexpected == 0 ? 0 : 1;
}
