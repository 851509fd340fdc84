// ks3d: convergence studies, stability reports, counterexamples, mesh checks
// and plots for the nonconforming Stokes elements.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <string>

#include "ks3d/error.hpp"
#include "ks3d/manufactured.hpp"
#include "ks3d/mesh.hpp"
#include "ks3d/mesh_library.hpp"
#include "ks3d/stability.hpp"
#include "ks3d/study.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 2;
constexpr int kExitSolver = 3;
constexpr int kExitInput = 4;

int exit_code(ks3d::Errc code) {
  switch (code) {
    case ks3d::Errc::AssertionFailed: return kExitAssertion;
    case ks3d::Errc::NotConverged:
    case ks3d::Errc::Indefinite:
    case ks3d::Errc::SingularSaddle: return kExitSolver;
    default: return kExitInput;
  }
}

ks3d::BoundaryClassifier constant_label(const std::string& label) {
  if (label == "D") return ks3d::all_dirichlet();
  if (label == "N") {
    return [](const ks3d::Vec3&) { return ks3d::BoundaryLabel::Neumann; };
  }
  throw ks3d::Error(ks3d::Errc::InvalidInput, "default label must be D or N");
}

int cmd_run(const std::string& case_name, const std::string& space, int levels, int first,
            double mu, const std::string& out_path) {
  const ks3d::ExactCase exact = ks3d::case_library(case_name, mu);
  const auto kind = ks3d::parse_velocity_space(space);
  if (kind != ks3d::VelocitySpaceKind::KsP2 && kind != ks3d::VelocitySpaceKind::KsBubble &&
      kind != ks3d::VelocitySpaceKind::BernardiRaugel) {
    throw ks3d::Error(ks3d::Errc::InvalidInput, "run supports ks-p2, ks-bubble and br");
  }
  const ks3d::ConvergenceTable table = ks3d::run_case(exact, kind, levels, &std::cout, first);
  std::ofstream out(out_path);
  if (!out) throw ks3d::Error(ks3d::Errc::InvalidInput, "cannot write " + out_path);
  table.write_csv(out);
  for (const auto& r : table.rows) {
    std::printf("level %d  h_max %.4e  rate_h1 %s  rate_l2 %s\n", r.level, r.h_max,
                r.rate_h1 ? std::to_string(*r.rate_h1).c_str() : "-",
                r.rate_l2 ? std::to_string(*r.rate_l2).c_str() : "-");
  }
  return kExitOk;
}

int cmd_stability(const std::string& builtin, const std::string& mesh_file,
                  const std::string& default_label, const std::string& space, int levels,
                  bool json) {
  if (levels < 1) throw ks3d::Error(ks3d::Errc::InvalidInput, "--levels must be at least 1");
  ks3d::Mesh mesh;
  if (!mesh_file.empty()) {
    const auto data = ks3d::read_mesh_file(mesh_file);
    mesh = ks3d::build_mesh(data.vertices, data.cells, constant_label(default_label), data.labels);
  } else if (builtin == "octa-patch") {
    mesh = ks3d::octahedron_patch(ks3d::all_dirichlet());
  } else if (builtin == "cube") {
    mesh = ks3d::case_library("cube1").build_mesh();
  } else {
    throw ks3d::Error(ks3d::Errc::InvalidInput, "need --builtin {octa-patch|cube} or --mesh");
  }
  const auto kind = ks3d::parse_velocity_space(space);
  for (int level = 0; level < levels; ++level) {
    if (level > 0) mesh = ks3d::red_refine(mesh);
    auto mesh_ptr = std::make_shared<const ks3d::Mesh>(mesh);
    auto vspace = std::make_shared<const ks3d::VelocitySpace>(mesh_ptr, kind);
    for (const char* quantity : {"korn", "infsup"}) {
      const auto start = std::chrono::steady_clock::now();
      ks3d::StabilityReport r = std::string(quantity) == "korn" ? ks3d::korn_constant(vspace)
                                                                : ks3d::infsup_constant(vspace);
      r.level = level;
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (json) {
        nlohmann::json rec = {{"quantity", r.quantity},
                              {"space", r.space},
                              {"level", r.level},
                              {"constant", r.constant},
                              {"verdict", std::string(ks3d::to_string(r.verdict))}};
        std::cout << rec.dump() << '\n';
      } else {
        std::printf("%-6s %-9s level %d  cells %6d  constant %.6e  %s  (%.2f s)\n", quantity,
                    r.space.c_str(), level, mesh.num_cells(), r.constant,
                    std::string(ks3d::to_string(r.verdict)).c_str(), secs);
      }
    }
  }
  return kExitOk;
}

int cmd_counterexample(const std::string& kind, double a) {
  if (kind == "infsup") {
    const auto r = ks3d::counterexample_infsup(0.5);
    std::printf("max |b_h(phi_i, q)| = %.3e (dof %d), ||q|| = %.6f, inf-sup constant = %.3e\n",
                r.residual.max_abs, r.residual.dof, r.q_norm, r.infsup);
    if (!(r.infsup <= ks3d::kDegenerateThreshold)) {
      throw ks3d::Error(ks3d::Errc::AssertionFailed, "inf-sup constant is not degenerate");
    }
    std::printf("PASS\n");
    return kExitOk;
  }
  if (kind == "korn-wedge" || kind == "korn-tensor") {
    const auto variant = kind == "korn-wedge" ? ks3d::KornVariant::Wedge : ks3d::KornVariant::Tensor;
    const auto r = ks3d::counterexample_korn(variant, a);
    if (variant == ks3d::KornVariant::Wedge) {
      std::printf("||eps_h(phi)|| = %.3e\nmax interior face-mean jump = %.3e\n"
                  "max boundary face mean = %.3e\n||grad_h phi|| = %.6f\n",
                  r.eps_norm, r.max_interior_jump, r.max_boundary_mean, r.grad_norm);
      std::printf("cosine(phi, Korn extremal vector) = %.12f\n", r.cosine);
    }
    std::printf("Korn constant = %.3e\nPASS\n", r.korn);
    return kExitOk;
  }
  throw ks3d::Error(ks3d::Errc::InvalidInput, "unknown counterexample '" + kind + "'");
}

int cmd_check(const std::string& path, const std::string& default_label) {
  const auto data = ks3d::read_mesh_file(path);
  const ks3d::Mesh mesh =
      ks3d::build_mesh(data.vertices, data.cells, constant_label(default_label), data.labels);
  const auto h1 = ks3d::check_h1(mesh);
  const auto h2 = ks3d::check_h2(mesh);
  std::printf("vertices %d  cells %d  faces %d\n", mesh.num_vertices(), mesh.num_cells(),
              mesh.num_faces());
  for (int f : h1) {
    const auto& v = mesh.face(f).vertices;
    std::printf("H1 violation: face %d (%d %d %d)\n", f, v[0], v[1], v[2]);
  }
  for (const auto& v : h2) {
    if (v.kind == ks3d::H2Violation::Kind::SingleCell) {
      std::printf("H2 violation: mesh has a single cell\n");
    } else {
      const auto& fv = mesh.face(v.face).vertices;
      std::printf("H2 violation: interior face %d (%d %d %d) has all vertices on the boundary\n",
                  v.face, fv[0], fv[1], fv[2]);
    }
  }
  if (h1.empty() && h2.empty()) {
    std::printf("H1 and H2 hold\n");
    return kExitOk;
  }
  return kExitAssertion;
}

int cmd_plot(const std::string& in_path, const std::string& out_path) {
  std::ifstream in(in_path);
  if (!in) throw ks3d::Error(ks3d::Errc::InvalidInput, "cannot read " + in_path);
  const auto table = ks3d::ConvergenceTable::read_csv(in);
  std::ofstream out(out_path);
  if (!out) throw ks3d::Error(ks3d::Errc::InvalidInput, "cannot write " + out_path);
  ks3d::emit_plot(table, out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ks3d: nonconforming finite elements for 3D Stokes"};
  app.require_subcommand(1);

  std::string case_name, space = "ks-bubble", out_path;
  int levels = 3, first = 1;
  double mu = 1.0;
  auto* run = app.add_subcommand("run", "convergence study for a manufactured solution");
  run->add_option("--case", case_name, "cube1 | cube2 | cube3 | lshape")->required();
  run->add_option("--space", space, "ks-p2 | ks-bubble | br")->required();
  run->add_option("--levels", levels, "finest level (number of red refinements)")->required();
  run->add_option("--first-level", first, "coarsest level to solve")->capture_default_str();
  run->add_option("--mu", mu, "viscosity")->capture_default_str();
  run->add_option("--out", out_path, "CSV output")->required();

  std::string builtin, mesh_file, default_label = "D";
  int stab_levels = 1;
  bool json = false;
  auto* stab = app.add_subcommand("stability", "discrete Korn and inf-sup constants");
  stab->add_option("--builtin", builtin, "octa-patch | cube");
  stab->add_option("--mesh", mesh_file, "mesh file instead of a builtin mesh");
  stab->add_option("--default-label", default_label, "label of unlisted boundary faces (D|N)");
  stab->add_option("--space", space, "ks-p2 | ks-bubble | br | p1p1nc | p1ncnc")->required();
  stab->add_option("--levels", stab_levels, "number of levels (0..N-1)")->capture_default_str();
  stab->add_flag("--json", json, "one JSON record per line");

  std::string ce_kind;
  double a = 1.0;
  auto* ce = app.add_subcommand("counterexample", "instability counterexamples");
  ce->add_option("kind", ce_kind, "infsup | korn-wedge | korn-tensor")->required();
  ce->add_option("--a", a, "rigid motion parameter")->capture_default_str();

  std::string check_mesh;
  auto* check = app.add_subcommand("check", "check mesh assumptions H1 and H2");
  check->add_option("--mesh", check_mesh, "mesh file")->required();
  check->add_option("--default-label", default_label, "label of unlisted boundary faces (D|N)");

  std::string plot_in, plot_out;
  auto* plot = app.add_subcommand("plot", "SVG convergence plot from a CSV table");
  plot->add_option("--in", plot_in, "CSV input")->required();
  plot->add_option("--out", plot_out, "SVG output")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*run) return cmd_run(case_name, space, levels, first, mu, out_path);
    if (*stab) return cmd_stability(builtin, mesh_file, default_label, space, stab_levels, json);
    if (*ce) return cmd_counterexample(ce_kind, a);
    if (*check) return cmd_check(check_mesh, default_label);
    if (*plot) return cmd_plot(plot_in, plot_out);
  } catch (const ks3d::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return kExitInput;
}
