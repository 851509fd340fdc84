#include "ks3d/study.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "ks3d/assembly.hpp"
#include "ks3d/error.hpp"
#include "ks3d/linalg.hpp"
#include "ks3d/stability.hpp"

namespace ks3d {
namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, int line) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) {
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

}  // namespace

void ConvergenceTable::compute_rates() {
  std::map<std::pair<std::string, std::string>, const ConvergenceRow*> prev;
  for (auto& r : rows) {
    const auto key = std::make_pair(r.case_name, r.space);
    auto it = prev.find(key);
    if (it == prev.end()) {
      r.rate_h1.reset();
      r.rate_l2.reset();
    } else {
      r.rate_h1 = std::log2(it->second->err_u_h1 / r.err_u_h1);
      r.rate_l2 = std::log2(it->second->err_u_l2 / r.err_u_l2);
    }
    prev[key] = &r;
  }
}

void ConvergenceTable::write_csv(std::ostream& out) const {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.case_name << ',' << r.space << ',' << r.level << ',' << fmt("%.10e", r.h_max) << ','
        << r.n_dof << ',' << r.nnz << ',' << fmt("%.10e", r.err_u_h1) << ','
        << fmt("%.10e", r.err_u_l2) << ',' << fmt("%.10e", r.err_p_l2) << ','
        << (r.rate_h1 ? fmt("%.6f", *r.rate_h1) : "") << ','
        << (r.rate_l2 ? fmt("%.6f", *r.rate_l2) : "") << '\n';
  }
}

ConvergenceTable ConvergenceTable::read_csv(std::istream& in) {
  ConvergenceTable t;
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::ParseError, "empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw Error(Errc::ParseError, "unexpected CSV header");
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    if (f.size() != 11) {
      throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected 11 fields");
    }
    ConvergenceRow r;
    r.case_name = f[0];
    r.space = f[1];
    r.level = static_cast<int>(parse_double(f[2], lineno));
    r.h_max = parse_double(f[3], lineno);
    r.n_dof = static_cast<long long>(parse_double(f[4], lineno));
    r.nnz = static_cast<long long>(parse_double(f[5], lineno));
    r.err_u_h1 = parse_double(f[6], lineno);
    r.err_u_l2 = parse_double(f[7], lineno);
    r.err_p_l2 = parse_double(f[8], lineno);
    if (!f[9].empty()) r.rate_h1 = parse_double(f[9], lineno);
    if (!f[10].empty()) r.rate_l2 = parse_double(f[10], lineno);
    t.rows.push_back(r);
  }
  return t;
}

ConvergenceTable run_case(const ExactCase& exact, VelocitySpaceKind kind, int levels,
                          std::ostream* log, int first_level) {
  if (levels < 1 || first_level < 0 || first_level > levels) {
    throw Error(Errc::InvalidInput, "levels must satisfy 0 <= first <= levels, levels >= 1");
  }
  ConvergenceTable table;
  Mesh mesh = exact.build_mesh();
  const VectorField body = [&](const Vec3& x) { return exact.body_force(x); };
  const TractionField traction = [&](const Vec3& x, const Vec3& n) { return exact.traction(x, n); };
  const VectorField data = [&](const Vec3& x) { return exact.u(x); };
  for (int level = 0; level <= levels; ++level) {
    if (level > 0) mesh = red_refine(mesh);
    if (level < first_level) continue;
    const auto start = std::chrono::steady_clock::now();
    auto mesh_ptr = std::make_shared<const Mesh>(mesh);
    auto space = std::make_shared<const VelocitySpace>(mesh_ptr, kind);
    const StokesSystem sys = assemble_stokes(space, exact.mu, body, traction, data);
    SaddleOptions opt;
    opt.pressure_weights = pressure_mass(mesh);
    opt.pressure_nullspace = !mesh.has_neumann_boundary();
    const SaddleSolution sol = solve_saddle(sys.a, sys.b, sys.f, sys.g, opt);
    const FiniteElementFunction u_h = sys.expand(sol.u);
    const ErrorNorms err = error_norms(u_h, sol.p, exact);

    ConvergenceRow row;
    row.case_name = exact.name;
    row.space = std::string(to_string(kind));
    row.level = level;
    row.h_max = mesh.max_cell_diameter();
    row.n_dof = sys.n_dof();
    row.nnz = sys.nnz();
    row.err_u_h1 = err.u_h1;
    row.err_u_l2 = err.u_l2;
    row.err_p_l2 = err.p_l2;
    table.rows.push_back(row);

    LevelDiagnostics diag;
    diag.level = level;
    diag.saddle_residual = sol.relative_residual;
    diag.max_div_mean = divergence_means(u_h);
    diag.grad_norm = std::sqrt(gram_form(*space, u_h.coefficients, GramKind::Grad));
    diag.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    table.diagnostics.push_back(diag);
    if (log) {
      *log << exact.name << ' ' << row.space << " level " << level << ": cells "
           << mesh.num_cells() << ", n_dof " << row.n_dof << ", nnz " << row.nnz << ", err_h1 "
           << fmt("%.4e", err.u_h1) << ", err_l2 " << fmt("%.4e", err.u_l2) << ", residual "
           << fmt("%.2e", sol.relative_residual) << ", " << fmt("%.2f", diag.seconds) << " s\n";
    }
  }
  table.compute_rates();
  return table;
}

void emit_plot(const ConvergenceTable& table, std::ostream& out) {
  struct Series {
    std::string label;
    std::vector<std::pair<double, double>> pts;  // log10 h, log10 err
  };
  std::vector<Series> series;
  std::map<std::string, std::size_t> index;
  auto add = [&](const std::string& label, double h, double e) {
    auto it = index.find(label);
    if (it == index.end()) {
      it = index.emplace(label, series.size()).first;
      series.push_back({label, {}});
    }
    series[it->second].pts.emplace_back(std::log10(h), std::log10(e));
  };
  for (const auto& r : table.rows) {
    add(r.space + " H1", r.h_max, r.err_u_h1);
    add(r.space + " L2", r.h_max, r.err_u_l2);
  }
  if (series.empty()) throw Error(Errc::TooFewLevels, "empty table");
  for (const auto& s : series) {
    if (s.pts.size() < 2) throw Error(Errc::TooFewLevels, "series '" + s.label + "' has one point");
  }
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& s : series)
    for (const auto& [x, y] : s.pts) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  const double dx = std::max(x1 - x0, 0.1);
  const double dy = std::max(y1 - y0, 0.1);
  x0 -= 0.15 * dx;
  x1 += 0.05 * dx;
  y0 -= 0.35 * dy;
  y1 += 0.05 * dy;

  const double width = 720, height = 480, left = 70, right = 190, top = 20, bottom = 50;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * (width - left - right); };
  auto sy = [&](double y) { return top + (y1 - y) / (y1 - y0) * (height - top - bottom); };
  auto pt = [&](double x, double y) { return fmt("%.2f", sx(x)) + "," + fmt("%.2f", sy(y)); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width - left - right
      << "\" height=\"" << height - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(std::ceil(x0)); d <= static_cast<int>(std::floor(x1)); ++d) {
    out << "<text x=\"" << fmt("%.2f", sx(d)) << "\" y=\"" << height - bottom + 18
        << "\" text-anchor=\"middle\">1e" << d << "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(y0)); d <= static_cast<int>(std::floor(y1)); ++d) {
    out << "<text x=\"" << left - 6 << "\" y=\"" << fmt("%.2f", sy(d) + 4)
        << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  out << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 10
      << "\" text-anchor=\"middle\">h_max</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = colors[k % 8];
    const bool dashed = s.label.size() > 2 && s.label.substr(s.label.size() - 2) == "L2";
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
        << (dashed ? " stroke-dasharray=\"5,3\"" : "") << " points=\"";
    for (std::size_t i = 0; i < s.pts.size(); ++i) {
      out << (i ? " " : "") << pt(s.pts[i].first, s.pts[i].second);
    }
    out << "\"/>\n";
    const double ly = top + 16 + 18 * static_cast<double>(k);
    out << "<line x1=\"" << width - right + 10 << "\" y1=\"" << ly << "\" x2=\""
        << width - right + 35 << "\" y2=\"" << ly << "\" stroke=\"" << color << "\""
        << (dashed ? " stroke-dasharray=\"5,3\"" : "") << "/>\n";
    out << "<text x=\"" << width - right + 40 << "\" y=\"" << ly + 4 << "\">" << s.label
        << "</text>\n";
  }

  // Reference triangles anchored at the lower right, legs in log10 units.
  const double run = 0.25 * dx;
  for (int slope = 1; slope <= 2; ++slope) {
    const double ax = x1 - 0.05 * dx - run;
    const double ay = y0 + 0.05 * dy + (slope - 1) * 0.08 * dy;
    const double bx = ax + run;
    const double by = ay;
    const double cx = bx;
    const double cy = ay + slope * run;
    out << "<polygon data-slope=\"" << slope << "\" data-log=\"" << fmt("%.17g", ax) << ' '
        << fmt("%.17g", ay) << ' ' << fmt("%.17g", bx) << ' ' << fmt("%.17g", by) << ' '
        << fmt("%.17g", cx) << ' ' << fmt("%.17g", cy)
        << "\" fill=\"none\" stroke=\"gray\" points=\""
        << pt(ax, ay) << ' ' << pt(bx, by) << ' ' << pt(cx, cy) << "\"/>\n";
    out << "<text x=\"" << fmt("%.2f", sx(bx) + 4) << "\" y=\""
        << fmt("%.2f", 0.5 * (sy(by) + sy(cy)) + 4) << "\" fill=\"gray\">" << slope << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace ks3d
