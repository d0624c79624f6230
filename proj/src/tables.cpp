#include "slsdesign/tables.hpp"

#include <cstdio>
#include <sstream>

#include "slsdesign/analytic.hpp"
#include "slsdesign/combinatorics.hpp"
#include "slsdesign/errors.hpp"

namespace slsdesign {

namespace {

constexpr int kShownClasses = 6;
constexpr int kGridSteps = 10;  // t = 0, 0.1, ..., 0.9

double grid_t(int i) { return i / 10.0; }

TableCell label(std::string text) { return {std::move(text), std::nullopt}; }

TableCell blank() { return {"", std::nullopt}; }

TableCell input(double v, int decimals) {
  return {format_fixed(v, decimals), v, Provenance::Input};
}

TableCell computed(double v, Provenance p, bool converged = true) {
  return {converged ? format_fixed(v, 4) : "unconverged", v, p, converged};
}

void append_class_cells(TableRow& row, const std::vector<double>& pi,
                        bool converged) {
  for (int j = 1; j <= kShownClasses; ++j) {
    if (j <= static_cast<int>(pi.size())) {
      row.cells.push_back(computed(pi[j - 1], Provenance::Solver, converged));
    } else {
      row.cells.push_back(blank());
    }
  }
  row.class_masses = pi;
}

std::vector<std::string> with_class_columns(std::vector<std::string> cols) {
  for (int j = 1; j <= kShownClasses; ++j) cols.push_back("pi_" + std::to_string(j));
  return cols;
}

std::vector<double> class_masses_of(const SolverResult& r) {
  auto pi = collapse_to_classes(r.measure, 1e-9);
  if (!pi) throw Error("solver returned a measure that is not class-symmetric");
  return *pi;
}

TableArtifact table1() {
  TableArtifact tab;
  tab.id = TableId::T1;
  tab.title = "Values of xi_t for various t";
  tab.columns.push_back("t");
  TableRow row;
  row.cells.push_back(label("xi_t"));
  for (int i = 0; i < kGridSteps; ++i) {
    tab.columns.push_back(format_fixed(grid_t(i), 1));
    row.cells.push_back(computed(xi_root(grid_t(i)), Provenance::Analytic));
  }
  tab.rows.push_back(std::move(row));
  return tab;
}

TableArtifact table2(const SolverConfig& config) {
  TableArtifact tab;
  tab.id = TableId::T2;
  tab.title = "D-optimal design measures for even q and t1(q) < t <= 0.9";
  tab.columns = with_class_columns({"q", "t", "eff_D(p_ev1)"});
  for (int q = 4; q <= 10; q += 2) {
    const double t1 = *thresholds(q).t1;
    auto space = enumerate_binary(q);
    for (int i = 0; i < kGridSteps; ++i) {
      const double t = grid_t(i);
      if (t <= t1 + 1e-12) continue;
      const auto opt = solve(space, t, Criterion::D, config);
      const auto ev1 = analytic_measure(AnalyticKind::Ev1, space);
      TableRow row;
      row.cells.push_back(input(q, 0));
      row.cells.push_back(input(t, 1));
      row.cells.push_back(computed(efficiency(ev1, opt.measure, t, Criterion::D),
                                   Provenance::Efficiency, opt.converged));
      append_class_cells(row, class_masses_of(opt), opt.converged);
      tab.all_converged = tab.all_converged && opt.converged;
      tab.rows.push_back(std::move(row));
    }
  }
  return tab;
}

TableArtifact table3(const SolverConfig& config) {
  TableArtifact tab;
  tab.id = TableId::T3;
  tab.title = "A-optimal design measures for even q and t2(q) < t <= 0.9";
  tab.columns = with_class_columns({"q", "t2(q)", "t", "eff_A(p_ev2)"});
  for (int q = 4; q <= 10; q += 2) {
    const double t2 = *thresholds(q).t2;
    auto space = enumerate_binary(q);
    bool first = true;
    for (int i = 0; i < kGridSteps; ++i) {
      const double t = grid_t(i);
      if (t <= t2 + 1e-12) continue;
      const auto opt = solve(space, t, Criterion::A, config);
      const auto ev2 = analytic_measure(AnalyticKind::Ev2, space);
      TableRow row;
      row.cells.push_back(first ? input(q, 0) : blank());
      row.cells.push_back(first ? computed(t2, Provenance::Analytic) : blank());
      row.cells.push_back(input(t, 1));
      row.cells.push_back(computed(efficiency(ev2, opt.measure, t, Criterion::A),
                                   Provenance::Efficiency, opt.converged));
      append_class_cells(row, class_masses_of(opt), opt.converged);
      tab.all_converged = tab.all_converged && opt.converged;
      tab.rows.push_back(std::move(row));
      first = false;
    }
  }
  return tab;
}

TableArtifact table4(const SolverConfig& config) {
  TableArtifact tab;
  tab.id = TableId::T4;
  tab.title = "D- and A-optimal design measures for odd q and t0(q) < t <= 0.9";
  tab.columns = with_class_columns({"q", "t", "eff_D(p_odd)", "eff_A(p_odd)"});
  for (int q = 3; q <= 9; q += 2) {
    const double t0 = *thresholds(q).t0;
    auto space = enumerate_binary(q);
    for (int i = 0; i < kGridSteps; ++i) {
      const double t = grid_t(i);
      if (t <= t0 + 1e-12) continue;
      const auto opt_d = solve(space, t, Criterion::D, config);
      const auto opt_a = solve(space, t, Criterion::A, config);
      const auto odd = analytic_measure(AnalyticKind::Odd, space);
      TableRow row;
      row.cells.push_back(input(q, 0));
      row.cells.push_back(input(t, 1));
      row.cells.push_back(computed(efficiency(odd, opt_d.measure, t, Criterion::D),
                                   Provenance::Efficiency, opt_d.converged));
      row.cells.push_back(computed(efficiency(odd, opt_a.measure, t, Criterion::A),
                                   Provenance::Efficiency, opt_a.converged));
      append_class_cells(row, class_masses_of(opt_d), opt_d.converged);
      tab.all_converged = tab.all_converged && opt_d.converged && opt_a.converged;
      tab.rows.push_back(std::move(row));
    }
  }
  return tab;
}

TableArtifact table5() {
  TableArtifact tab;
  tab.id = TableId::T5;
  tab.title = "D-efficiency of p^[1] relative to p_ev1";
  tab.columns.push_back("q");
  for (int i = 0; i < kGridSteps; ++i) tab.columns.push_back(format_fixed(grid_t(i), 1));
  for (int q = 6; q <= 10; q += 2) {
    auto space = enumerate_binary(q);
    const auto reduced = measure_from_incidence(bib_d1(q / 2), space);
    const auto ev1 = analytic_measure(AnalyticKind::Ev1, space);
    TableRow row;
    row.cells.push_back(input(q, 0));
    for (int i = 0; i < kGridSteps; ++i) {
      row.cells.push_back(computed(relative_d_efficiency(reduced, ev1, grid_t(i)),
                                   Provenance::Efficiency));
    }
    tab.rows.push_back(std::move(row));
  }
  return tab;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s(buf);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) {
    s.erase(0, 1);
  }
  return s;
}

SolverConfig table_solver_config() {
  SolverConfig c;
  c.max_iterations = 10'000'000;
  return c;
}

std::string_view to_string(TableId id) {
  switch (id) {
    case TableId::T1: return "T1";
    case TableId::T2: return "T2";
    case TableId::T3: return "T3";
    case TableId::T4: return "T4";
    case TableId::T5: return "T5";
  }
  return "?";
}

TableId parse_table_id(std::string_view s) {
  if (s == "T1" || s == "1") return TableId::T1;
  if (s == "T2" || s == "2") return TableId::T2;
  if (s == "T3" || s == "3") return TableId::T3;
  if (s == "T4" || s == "4") return TableId::T4;
  if (s == "T5" || s == "5") return TableId::T5;
  throw DomainError("unknown table id '" + std::string(s) + "'");
}

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Input: return "input";
    case Provenance::Analytic: return "analytic";
    case Provenance::Solver: return "solver";
    case Provenance::Efficiency: return "efficiency";
  }
  return "?";
}

TableArtifact regenerate_table(TableId id, const SolverConfig& config) {
  switch (id) {
    case TableId::T1: return table1();
    case TableId::T2: return table2(config);
    case TableId::T3: return table3(config);
    case TableId::T4: return table4(config);
    case TableId::T5: return table5();
  }
  throw DomainError("unknown table id");
}

std::string to_csv(const TableArtifact& table) {
  std::ostringstream out;
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << csv_escape(table.columns[c]);
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.cells.size(); ++c) {
      out << (c ? "," : "") << csv_escape(row.cells[c].text);
    }
    out << '\n';
  }
  return out.str();
}

std::string to_text(const TableArtifact& table) {
  std::vector<std::size_t> width(table.columns.size(), 0);
  for (std::size_t c = 0; c < width.size(); ++c) width[c] = table.columns[c].size();
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.cells.size(); ++c) {
      width[c] = std::max(width[c], row.cells[c].text.size());
    }
  }
  std::ostringstream out;
  out << "Table " << to_string(table.id).substr(1) << ". " << table.title << "\n";
  auto emit = [&](const auto& get) {
    for (std::size_t c = 0; c < width.size(); ++c) {
      const std::string s = get(c);
      out << (c ? "  " : "") << std::string(width[c] - s.size(), ' ') << s;
    }
    out << '\n';
  };
  emit([&](std::size_t c) { return table.columns[c]; });
  for (const auto& row : table.rows) {
    emit([&](std::size_t c) { return row.cells[c].text; });
  }
  return out.str();
}

Json to_json(const TableArtifact& table) {
  Json j;
  j["table_id"] = to_string(table.id);
  j["title"] = table.title;
  j["columns"] = table.columns;
  j["all_converged"] = table.all_converged;
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json cells = Json::array();
    for (const auto& cell : row.cells) {
      Json jc;
      jc["text"] = cell.text;
      jc["value"] = cell.value ? Json(*cell.value) : Json(nullptr);
      jc["provenance"] = to_string(cell.provenance);
      jc["converged"] = cell.converged;
      cells.push_back(std::move(jc));
    }
    Json jr;
    jr["cells"] = std::move(cells);
    jr["class_masses"] = row.class_masses;
    rows.push_back(std::move(jr));
  }
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace slsdesign
