#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "ks3d/error.hpp"
#include "ks3d/mesh_library.hpp"
#include "ks3d/study.hpp"

using namespace ks3d;

namespace {

ConvergenceRow row(const std::string& space, int level, double h, double e1, double e2) {
  ConvergenceRow r;
  r.case_name = "cube1";
  r.space = space;
  r.level = level;
  r.h_max = h;
  r.n_dof = 100 * (level + 1);
  r.nnz = 1000 * (level + 1);
  r.err_u_h1 = e1;
  r.err_u_l2 = e2;
  r.err_p_l2 = 0.5 * e1;
  return r;
}

ConvergenceTable synthetic(int levels) {
  ConvergenceTable t;
  for (const char* s : {"ks-p2", "br"})
    for (int l = 1; l <= levels; ++l) {
      const double h = std::ldexp(1.0, -l);
      t.rows.push_back(row(s, l, h, 3.0 * h, 0.7 * h * h));
    }
  t.compute_rates();
  return t;
}

std::string svg_of(const ConvergenceTable& t) {
  std::ostringstream out;
  emit_plot(t, out);
  return out.str();
}

std::string csv_of(const ConvergenceTable& t) {
  std::ostringstream out;
  t.write_csv(out);
  return out.str();
}

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "ks3d_test_cli";
  std::filesystem::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(KS3D_BINARY) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(ConvergenceTable, RatesFromErrors) {
  const ConvergenceTable t = synthetic(3);
  for (const auto& r : t.rows) {
    if (r.level == 1) {
      EXPECT_FALSE(r.rate_h1.has_value());
      EXPECT_FALSE(r.rate_l2.has_value());
    } else {
      EXPECT_NEAR(*r.rate_h1, 1.0, 1e-14);
      EXPECT_NEAR(*r.rate_l2, 2.0, 1e-14);
    }
  }
}

TEST(ConvergenceTable, CsvRoundTrip) {
  const ConvergenceTable t = synthetic(3);
  const std::string text = csv_of(t);
  EXPECT_EQ(text.substr(0, text.find('\n')), kCsvHeader);
  std::istringstream in(text);
  const ConvergenceTable back = ConvergenceTable::read_csv(in);
  ASSERT_EQ(back.rows.size(), t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].space, t.rows[i].space);
    EXPECT_EQ(back.rows[i].level, t.rows[i].level);
    EXPECT_EQ(back.rows[i].n_dof, t.rows[i].n_dof);
    EXPECT_EQ(back.rows[i].nnz, t.rows[i].nnz);
    EXPECT_NEAR(back.rows[i].err_u_h1, t.rows[i].err_u_h1, 1e-10 * t.rows[i].err_u_h1);
    EXPECT_EQ(back.rows[i].rate_h1.has_value(), t.rows[i].rate_h1.has_value());
  }
  EXPECT_EQ(csv_of(back), text);
}

TEST(ConvergenceTable, MalformedCsv) {
  for (const std::string bad :
       {std::string(""), std::string("case,space\n"),
        std::string(kCsvHeader) + "\ncube1,br,1,0.5,10,20,x,1,1,,\n",
        std::string(kCsvHeader) + "\ncube1,br,1,0.5\n"}) {
    std::istringstream in(bad);
    try {
      (void)ConvergenceTable::read_csv(in);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::ParseError);
    }
  }
}

TEST(Plot, TwoPointTableGivesOneSegmentPerSeries) {
  const std::string svg = svg_of(synthetic(2));
  const std::regex poly("<polyline[^>]* points=\"([^\"]*)\"");
  int count = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), poly); it != std::sregex_iterator();
       ++it) {
    std::istringstream pts((*it)[1].str());
    std::string p;
    int n = 0;
    while (pts >> p) ++n;
    EXPECT_EQ(n, 2);
    ++count;
  }
  EXPECT_EQ(count, 4);  // two spaces, H1 and L2
}

TEST(Plot, ReferenceSlopes) {
  const std::string svg = svg_of(synthetic(3));
  const std::regex tri("data-slope=\"(\\d)\" data-log=\"([^\"]*)\"");
  int found = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), tri); it != std::sregex_iterator();
       ++it) {
    const int slope = std::stoi((*it)[1].str());
    std::istringstream in((*it)[2].str());
    double ax, ay, bx, by, cx, cy;
    in >> ax >> ay >> bx >> by >> cx >> cy;
    EXPECT_EQ(ay, by);
    EXPECT_EQ(bx, cx);
    EXPECT_NEAR((cy - by) / (bx - ax), slope, 1e-12);
    ++found;
  }
  EXPECT_EQ(found, 2);
  EXPECT_NE(svg.find("data-slope=\"1\""), std::string::npos);
  EXPECT_NE(svg.find("data-slope=\"2\""), std::string::npos);
}

TEST(Plot, Deterministic) {
  const ConvergenceTable t = synthetic(3);
  const std::string a = svg_of(t);
  EXPECT_EQ(a, svg_of(t));
  std::istringstream in(csv_of(t));
  const ConvergenceTable back = ConvergenceTable::read_csv(in);
  std::istringstream in2(csv_of(back));
  EXPECT_EQ(svg_of(back), svg_of(ConvergenceTable::read_csv(in2)));
}

TEST(Plot, TooFewLevels) {
  for (int levels : {0, 1}) {
    try {
      (void)svg_of(synthetic(levels));
      FAIL() << levels;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::TooFewLevels);
    }
  }
}

TEST(RunCase, TwoCoarseLevels) {
  const ConvergenceTable t =
      run_case(case_library("cube1"), VelocitySpaceKind::KsBubble, 1, nullptr, 0);
  ASSERT_EQ(t.rows.size(), 2u);
  ASSERT_EQ(t.diagnostics.size(), 2u);
  EXPECT_EQ(t.rows[0].level, 0);
  EXPECT_EQ(t.rows[1].level, 1);
  EXPECT_LT(t.rows[0].n_dof, t.rows[1].n_dof);
  EXPECT_LT(t.rows[0].nnz, t.rows[1].nnz);
  EXPECT_NEAR(t.rows[1].h_max, 0.5 * t.rows[0].h_max, 1e-14);
  EXPECT_FALSE(t.rows[0].rate_h1.has_value());
  EXPECT_TRUE(t.rows[1].rate_h1.has_value());
  for (const auto& d : t.diagnostics) {
    EXPECT_LE(d.saddle_residual, 1e-10);
    EXPECT_LE(d.max_div_mean, 1e-10 * (1.0 + d.grad_norm));
  }
  EXPECT_THROW((void)run_case(case_library("cube1"), VelocitySpaceKind::KsBubble, 0), Error);
}

TEST(Cli, CounterexamplesSucceed) {
  EXPECT_EQ(run_cli("counterexample infsup"), 0);
  EXPECT_EQ(run_cli("counterexample korn-wedge"), 0);
  EXPECT_EQ(run_cli("counterexample korn-wedge --a -3"), 0);
  EXPECT_EQ(run_cli("counterexample korn-tensor"), 0);
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(run_cli("counterexample korn-wedge --a 0"), 4);
  EXPECT_EQ(run_cli("counterexample nothing"), 4);
  EXPECT_EQ(run_cli("run --case cube9 --space br --levels 1 --out /dev/null"), 4);
  EXPECT_EQ(run_cli("run --case cube1 --space p1p1nc --levels 1 --out /dev/null"), 4);
  EXPECT_EQ(run_cli("check --mesh /nonexistent/mesh.txt"), 4);
  EXPECT_EQ(run_cli("frobnicate"), 4);
}

TEST(Cli, MeshCheckExitCodes) {
  const auto dir = scratch_dir();
  const auto bad = dir / "single.msh";
  const auto good = dir / "octa.msh";
  {
    std::ofstream out(bad);
    write_mesh(out, reference_tet());
  }
  {
    std::ofstream out(good);
    write_mesh(out, octahedron_patch());
  }
  EXPECT_EQ(run_cli("check --mesh " + bad.string()), 2);
  EXPECT_EQ(run_cli("check --mesh " + good.string()), 0);
}

TEST(Cli, StabilityAndPlot) {
  const auto dir = scratch_dir();
  EXPECT_EQ(run_cli("stability --builtin octa-patch --space ks-p2 --levels 1 --json"), 0);
  const auto csv = dir / "t.csv";
  const auto svg1 = dir / "a.svg";
  const auto svg2 = dir / "b.svg";
  {
    std::ofstream out(csv);
    synthetic(3).write_csv(out);
  }
  EXPECT_EQ(run_cli("plot --in " + csv.string() + " --out " + svg1.string()), 0);
  EXPECT_EQ(run_cli("plot --in " + csv.string() + " --out " + svg2.string()), 0);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  EXPECT_FALSE(slurp(svg1).empty());
  EXPECT_EQ(slurp(svg1), slurp(svg2));
  {
    std::ofstream out(csv);
    synthetic(1).write_csv(out);
  }
  EXPECT_EQ(run_cli("plot --in " + csv.string() + " --out " + svg1.string()), 4);
}
