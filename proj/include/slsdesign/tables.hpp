#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slsdesign/serialize.hpp"
#include "slsdesign/solver.hpp"

namespace slsdesign {

enum class TableId { T1, T2, T3, T4, T5 };

std::string_view to_string(TableId id);
TableId parse_table_id(std::string_view s);

enum class Provenance { Input, Analytic, Solver, Efficiency };

std::string_view to_string(Provenance p);

struct TableCell {
  std::string text;              // display form, 4 dp for computed values
  std::optional<double> value;   // full precision; absent for blanks/labels
  Provenance provenance = Provenance::Input;
  bool converged = true;
};

struct TableRow {
  std::vector<TableCell> cells;
  // All q class masses at full precision (tables 2-4 display j <= 6 only).
  std::vector<double> class_masses;
};

struct TableArtifact {
  TableId id = TableId::T1;
  std::string title;
  std::vector<std::string> columns;
  std::vector<TableRow> rows;
  bool all_converged = true;
};

// Solver settings used for tables: delta = 1e-10 with a 10^7 iteration cap.
// Rows whose optimum has classes on the boundary (psi equal to the bound
// with vanishing mass) close the gap only like 1/h; q = 8, t = 0.9 under A
// needs about 3.2e6 iterations.
SolverConfig table_solver_config();

// Rebuilds one of the published tables:
//   T1  xi_t for t = 0(0.1)0.9
//   T2  D-optimal class masses and eff_D(p_ev1), even q, t1(q) < t <= 0.9
//   T3  A-optimal class masses and eff_A(p_ev2), even q, t2(q) < t <= 0.9
//   T4  D/A-optimal class masses and efficiencies of p_odd, t0(q) < t <= 0.9
//   T5  D-efficiency of the d1-based measure relative to p_ev1
TableArtifact regenerate_table(TableId id,
                               const SolverConfig& config = table_solver_config());

std::string to_csv(const TableArtifact& table);
std::string to_text(const TableArtifact& table);
Json to_json(const TableArtifact& table);

// "%.{decimals}f" with negative zero printed as zero.
std::string format_fixed(double v, int decimals);

}  // namespace slsdesign
