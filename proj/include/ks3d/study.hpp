#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ks3d/manufactured.hpp"
#include "ks3d/spaces.hpp"

namespace ks3d {

struct ConvergenceRow {
  std::string case_name;
  std::string space;
  int level = 0;
  double h_max = 0.0;
  long long n_dof = 0;
  long long nnz = 0;
  double err_u_h1 = 0.0;
  double err_u_l2 = 0.0;
  double err_p_l2 = 0.0;
  std::optional<double> rate_h1;
  std::optional<double> rate_l2;
};

/// Per-level solver diagnostics that are not part of the CSV.
struct LevelDiagnostics {
  int level = 0;
  double saddle_residual = 0.0;
  double max_div_mean = 0.0;
  double grad_norm = 0.0;  // ||grad_h u_h||
  double seconds = 0.0;
};

class ConvergenceTable {
 public:
  std::vector<ConvergenceRow> rows;
  std::vector<LevelDiagnostics> diagnostics;

  /// Recomputes rate = log2(err_prev / err) per (case, space) series; the
  /// first row of each series has no rate.
  void compute_rates();

  void write_csv(std::ostream& out) const;
  /// Throws Error(ParseError) on malformed input.
  [[nodiscard]] static ConvergenceTable read_csv(std::istream& in);
};

inline constexpr const char* kCsvHeader =
    "case,space,level,h_max,n_dof,nnz,err_u_h1,err_u_l2,err_p_l2,rate_h1,rate_l2";

/// Solves the case on levels first_level..levels, where level k is the
/// coarse mesh refined k times. Progress lines go to `log` if given.
[[nodiscard]] ConvergenceTable run_case(const ExactCase& exact, VelocitySpaceKind space,
                                        int levels, std::ostream* log = nullptr,
                                        int first_level = 1);

/// Log-log SVG of the errors against h_max, one polyline per (space, norm),
/// with slope-1 and slope-2 reference triangles. Byte-identical output for
/// identical tables. Throws Error(TooFewLevels) if a series has fewer than
/// two points.
void emit_plot(const ConvergenceTable& table, std::ostream& out);

}  // namespace ks3d
