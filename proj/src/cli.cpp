#include "slsdesign/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "slsdesign/analytic.hpp"
#include "slsdesign/combinatorics.hpp"
#include "slsdesign/errors.hpp"
#include "slsdesign/serialize.hpp"

namespace slsdesign {

namespace {

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Analytic: return "analytic";
    case Command::Verify: return "verify";
    case Command::ReduceSupport: return "reduce-support";
    case Command::Tables: return "tables";
  }
  return "?";
}

std::string fmt_g(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

std::filesystem::path resolve_output(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
      return std::filesystem::path(dir) / p;
    }
  }
  return p;
}

void write_file(const std::string& path, const std::string& payload) {
  const auto p = resolve_output(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw Error("cannot open output file " + p.string());
  f << payload;
  if (!f) throw Error("failed writing " + p.string());
}

void emit(const RunConfig& config, const std::string& payload, std::ostream& out) {
  if (config.output_path) {
    write_file(*config.output_path, payload);
  } else {
    out << payload;
  }
}

std::string class_masses_text(std::span<const double> pi) {
  std::string s;
  for (std::size_t j = 0; j < pi.size(); ++j) {
    s += (j ? " " : "") + format_fixed(pi[j], 4);
  }
  return s;
}

std::vector<Criterion> criteria_of(const RunConfig& config) {
  if (config.criterion) return {*config.criterion};
  return {Criterion::D, Criterion::A};
}

std::string verdict_line(const DesignMeasure& p, double t,
                         const std::vector<Criterion>& criteria, Json& jout) {
  std::string line;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    const auto check = check_optimal(p, t, criteria[c]);
    const std::string name(to_string(criteria[c]));
    if (c) line += "; ";
    Json jc;
    jc["criterion"] = name;
    jc["optimal"] = check.optimal;
    if (!check.report) {
      line += "singular (" + name + ")";
      jc["singular"] = true;
    } else {
      line += std::string(check.optimal ? "optimal" : "not optimal") + " (" + name +
              ") gap=" + fmt_g(check.report->max_gap);
      jc["singular"] = false;
      jc["max_gap"] = check.report->max_gap;
      jc["bound"] = check.report->bound;
      jc["phi"] = check.report->phi;
    }
    jout.push_back(std::move(jc));
  }
  return line;
}

int run_solve(const RunConfig& config, std::ostream& out) {
  auto space = enumerate_binary(config.q);
  const double t = config.t.front();
  const auto crit = *config.criterion;
  const auto result = solve(space, t, crit, config.solver);
  const auto pi = collapse_to_classes(result.measure, 1e-12);

  Json body;
  body["command"] = "solve";
  body["q"] = config.q;
  body["t"] = t;
  body["criterion"] = to_string(crit);
  body["delta"] = config.solver.delta;
  body["max_iterations"] = config.solver.max_iterations;
  body["use_class_symmetry"] = config.solver.use_class_symmetry;
  body["result"] = to_json(result);
  const auto json_text = versioned(body).dump(2) + "\n";
  if (config.json_path) write_file(*config.json_path, json_text);

  std::string payload;
  switch (config.output_format) {
    case OutputFormat::Json:
      payload = json_text;
      break;
    case OutputFormat::Csv: {
      std::ostringstream s;
      s.precision(17);
      if (pi) {
        s << "j,n_j,pi_j\n";
        for (int j = 1; j <= config.q; ++j) {
          s << j << ',' << space->class_sizes()[j - 1] << ',' << (*pi)[j - 1] << '\n';
        }
      } else {
        s << "index,point,mass\n";
        for (std::size_t i = 0; i < space->size(); ++i) {
          s << i << ',';
          for (int c : space->point(i).coords) s << c;
          s << ',' << result.measure.mass(i) << '\n';
        }
      }
      payload = s.str();
      break;
    }
    case OutputFormat::Text: {
      std::ostringstream s;
      s << "criterion " << to_string(crit) << "  q=" << config.q << "  t=" << t << '\n'
        << "converged: " << (result.converged ? "yes" : "no")
        << "  iterations=" << result.iterations
        << "  gap=" << fmt_g(result.final_gap) << "  phi=" << fmt_g(result.phi) << '\n';
      if (pi) s << "class masses: " << class_masses_text(*pi) << '\n';
      payload = s.str();
      break;
    }
  }
  emit(config, payload, out);
  return kExitOk;
}

int run_analytic(const RunConfig& config, std::ostream& out) {
  const auto kind = parse_analytic_kind(config.measure);
  std::optional<double> t;
  if (!config.t.empty()) t = config.t.front();
  auto space = enumerate_binary(config.q);
  const auto p = analytic_measure(kind, space, t);
  const auto th = thresholds(config.q, t);

  Json body;
  body["command"] = "analytic";
  body["kind"] = to_string(kind);
  body["q"] = config.q;
  body["t"] = t ? Json(*t) : Json(nullptr);
  body["thresholds"] = to_json(th);
  body["class_masses"] = *p.class_masses();
  body["support_size"] = p.support_size();
  Json checks = Json::array();
  std::string verdict;
  if (t) verdict = verdict_line(p, *t, criteria_of(config), checks);
  body["checks"] = checks;

  std::string payload;
  if (config.output_format == OutputFormat::Json) {
    payload = versioned(body).dump(2) + "\n";
  } else if (config.output_format == OutputFormat::Csv) {
    std::ostringstream s;
    s.precision(17);
    s << "j,n_j,pi_j\n";
    for (int j = 1; j <= config.q; ++j) {
      s << j << ',' << space->class_sizes()[j - 1] << ',' << (*p.class_masses())[j - 1]
        << '\n';
    }
    payload = s.str();
  } else {
    std::ostringstream s;
    s << "measure " << to_string(kind) << "  q=" << config.q
      << "  support=" << p.support_size() << '\n';
    s << "thresholds:";
    if (th.t0) s << " t0=" << format_fixed(*th.t0, 4);
    if (th.t1) s << " t1=" << format_fixed(*th.t1, 4);
    if (th.t2) s << " t2=" << format_fixed(*th.t2, 4);
    if (th.xi_t) s << " xi_t=" << format_fixed(*th.xi_t, 4);
    s << '\n' << "class masses: " << class_masses_text(*p.class_masses()) << '\n';
    if (t) s << verdict << '\n';
    payload = s.str();
  }
  emit(config, payload, out);
  return kExitOk;
}

DesignMeasure verify_measure(const RunConfig& config, std::optional<double> t) {
  const auto& name = config.measure;
  const int q = config.q;
  if (name == "example1") return example1_measure(q).second;
  auto space = enumerate_binary(q);
  if (name == "uniform") return uniform_measure(space);
  if (name == "p1") {
    if (q % 2 != 0 || q < 4) throw DomainError("p1 requires even q >= 4");
    return measure_from_incidence(bib_d1(q / 2), space);
  }
  if (name == "p2") {
    if (q % 4 != 1) throw DomainError("p2 requires q = 1 (mod 4)");
    return measure_from_incidence(bib_d2((q - 1) / 4), space);
  }
  if (name == "p3") {
    if (q % 4 != 3) throw DomainError("p3 requires q = 3 (mod 4)");
    return measure_from_incidence(bib_d3((q - 3) / 4), space);
  }
  return analytic_measure(parse_analytic_kind(name), space, t);
}

int run_verify(const RunConfig& config, std::ostream& out) {
  const auto criteria = criteria_of(config);
  Json rows = Json::array();
  std::ostringstream text;
  std::ostringstream csv;
  csv << "t,criterion,optimal,max_gap\n";
  for (double t : config.t) {
    const auto p = verify_measure(config, t);
    Json checks = Json::array();
    const auto line = verdict_line(p, t, criteria, checks);
    if (config.t.size() > 1) text << "t=" << t << ": ";
    text << line << '\n';
    for (const auto& c : checks) {
      csv << t << ',' << c["criterion"].get<std::string>() << ','
          << (c["optimal"].get<bool>() ? 1 : 0) << ','
          << (c.contains("max_gap") ? fmt_g(c["max_gap"].get<double>()) : "") << '\n';
    }
    rows.push_back({{"t", t}, {"checks", checks}});
  }
  std::string payload;
  if (config.output_format == OutputFormat::Json) {
    Json body;
    body["command"] = "verify";
    body["q"] = config.q;
    body["measure"] = config.measure;
    body["results"] = rows;
    payload = versioned(body).dump(2) + "\n";
  } else if (config.output_format == OutputFormat::Csv) {
    payload = csv.str();
  } else {
    payload = text.str();
  }
  emit(config, payload, out);
  return kExitOk;
}

int run_reduce_support(const RunConfig& config, std::ostream& out) {
  const int q = config.q;
  if (q < 3) throw DomainError("reduce-support requires q >= 3");
  auto space = enumerate_binary(q);
  std::string design;
  IncidenceMatrix n;
  AnalyticKind full_kind;
  if (q % 2 == 0) {
    design = "d1";
    n = bib_d1(q / 2);
    full_kind = AnalyticKind::Ev2;
  } else if (q % 4 == 1) {
    design = "d2";
    n = bib_d2((q - 1) / 4);
    full_kind = AnalyticKind::Odd;
  } else {
    design = "d3";
    n = bib_d3((q - 3) / 4);
    full_kind = AnalyticKind::Odd;
  }
  const auto reduced = measure_from_incidence(n, space);
  const auto full = analytic_measure(full_kind, space);
  std::optional<DesignMeasure> ev1;
  if (q % 2 == 0) ev1 = analytic_measure(AnalyticKind::Ev1, space);

  const std::vector<double> grid =
      config.t.empty() ? std::vector<double>{0.0, 0.5, 0.9} : config.t;
  Json checks = Json::array();
  std::ostringstream text;
  std::ostringstream csv;
  csv.precision(17);
  csv << "t,h_equivalent,max_abs_diff" << (ev1 ? ",rel_D_eff_vs_p_ev1" : "") << '\n';
  const std::string reduced_name = "p^[" + design.substr(1) + "]";
  text << reduced_name << " from " << design << ": BIB(" << n.q << ", " << n.b << ", "
       << n.r << ", " << n.k << ", " << n.lambda << ")\n";
  text << "support: " << reduced.support_size() << " points vs "
       << full.support_size() << " for p_" << to_string(full_kind) << '\n';
  for (double t : grid) {
    const auto eq = verify_h_equivalence(reduced, full, t);
    Json jc{{"t", t}, {"h_equivalent", eq.equivalent}, {"max_abs_diff", eq.max_abs_diff}};
    text << "t=" << t << ": H(" << reduced_name << ") "
         << (eq.equivalent ? "==" : "!=") << " H(p_" << to_string(full_kind)
         << ")  max|diff|=" << fmt_g(eq.max_abs_diff);
    csv << t << ',' << (eq.equivalent ? 1 : 0) << ',' << eq.max_abs_diff;
    if (ev1) {
      const double eff = relative_d_efficiency(reduced, *ev1, t);
      jc["rel_D_eff_vs_p_ev1"] = eff;
      text << "  D-eff vs p_ev1=" << format_fixed(eff, 4);
      csv << ',' << eff;
    }
    text << '\n';
    csv << '\n';
    checks.push_back(std::move(jc));
  }
  text << "incidence matrix:\n" << to_text_grid(n);

  std::string payload;
  if (config.output_format == OutputFormat::Json) {
    Json body;
    body["command"] = "reduce-support";
    body["q"] = q;
    body["design"] = design;
    body["incidence"] = to_json(n);
    body["support_reduced"] = reduced.support_size();
    body["support_full"] = full.support_size();
    body["full_measure"] = to_string(full_kind);
    body["checks"] = checks;
    payload = versioned(body).dump(2) + "\n";
  } else if (config.output_format == OutputFormat::Csv) {
    payload = csv.str();
  } else {
    payload = text.str();
  }
  emit(config, payload, out);
  return kExitOk;
}

int run_tables(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::string payload;
  Json all = Json::array();
  bool converged = true;
  for (std::size_t i = 0; i < config.tables.size(); ++i) {
    const auto tab = regenerate_table(config.tables[i], config.solver);
    converged = converged && tab.all_converged;
    if (!tab.all_converged) {
      err << "table " << to_string(tab.id) << ": some solves did not converge\n";
    }
    switch (config.output_format) {
      case OutputFormat::Csv:
        payload += (i ? "\n" : "") + to_csv(tab);
        break;
      case OutputFormat::Text:
        payload += (i ? "\n" : "") + to_text(tab);
        break;
      case OutputFormat::Json:
        all.push_back(to_json(tab));
        break;
    }
  }
  if (config.output_format == OutputFormat::Json) {
    Json body;
    body["command"] = "tables";
    body["tables"] = all;
    payload = versioned(body).dump(2) + "\n";
  }
  emit(config, payload, out);
  return converged ? kExitOk : kExitFailure;
}

}  // namespace

void RunConfig::validate() const {
  for (double v : t) {
    if (!(v >= 0.0 && v < 1.0)) {
      throw DomainError("t values must lie in [0, 1), got " + std::to_string(v));
    }
  }
  switch (command) {
    case Command::Solve:
      if (q < 2) throw DomainError("solve requires --q >= 2");
      if (t.size() != 1) throw DomainError("solve requires exactly one --t");
      if (!criterion) throw DomainError("solve requires --criterion D|A");
      break;
    case Command::Analytic:
      if (measure.empty()) throw DomainError("analytic requires --kind");
      if (q < 2) throw DomainError("analytic requires --q >= 2");
      if (t.size() > 1) throw DomainError("analytic accepts a single --t");
      break;
    case Command::Verify:
      if (measure.empty()) throw DomainError("verify requires --measure");
      if (q < 1) throw DomainError("verify requires --q");
      if (t.empty()) throw DomainError("verify requires --t");
      break;
    case Command::ReduceSupport:
      if (q < 3) throw DomainError("reduce-support requires --q >= 3");
      break;
    case Command::Tables:
      if (tables.empty()) throw DomainError("tables requires --id");
      break;
  }
  solver.validate();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
    switch (config.command) {
      case Command::Solve: return run_solve(config, out);
      case Command::Analytic: return run_analytic(config, out);
      case Command::Verify: return run_verify(config, out);
      case Command::ReduceSupport: return run_reduce_support(config, out);
      case Command::Tables: return run_tables(config, out, err);
    }
  } catch (const std::exception& e) {
    err << "error (" << to_string(config.command) << "): " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Optimal approximate designs under second-order least squares"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string format;
  std::string criterion;
  std::vector<std::string> table_ids;
  std::int64_t max_iter = cfg.solver.max_iterations;

  const std::vector<std::string> formats{"json", "csv", "text"};
  auto common = [&](CLI::App* sub, std::string default_format) {
    format = default_format;
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember(formats));
    sub->add_option("--output", cfg.output_path, "Write output to this file");
  };
  auto solver_opts = [&](CLI::App* sub) {
    sub->add_option("--delta", cfg.solver.delta, "Stopping threshold on the gap");
    sub->add_option("--max-iter", max_iter, "Maximum multiplicative iterations");
  };

  auto* solve_cmd = app.add_subcommand("solve", "Run the multiplicative algorithm");
  solve_cmd->add_option("--q", cfg.q, "Number of weighed objects")->required();
  solve_cmd->add_option("--t", cfg.t, "Asymmetry parameter in [0, 1)")->required();
  solve_cmd->add_option("--criterion", criterion, "D or A")
      ->required()
      ->check(CLI::IsMember({"D", "A"}));
  solver_opts(solve_cmd);
  bool full_space = false;
  solve_cmd->add_flag("--full-space", full_space, "Iterate on all 2^q - 1 points");
  solve_cmd->add_option("--json", cfg.json_path, "Also write the JSON result here");

  auto* analytic_cmd = app.add_subcommand("analytic", "Closed-form design measures");
  analytic_cmd->add_option("--kind", cfg.measure, "pD_q2|pA_q2|ev1|ev2|odd")
      ->required()
      ->check(CLI::IsMember({"pD_q2", "pA_q2", "ev1", "ev2", "odd"}));
  analytic_cmd->add_option("--q", cfg.q, "Dimension")->required();
  analytic_cmd->add_option("--t", cfg.t, "Asymmetry parameter");

  auto* verify_cmd = app.add_subcommand("verify", "Check the equivalence conditions");
  verify_cmd->add_option("--q", cfg.q, "Dimension")->required();
  verify_cmd->add_option("--t", cfg.t, "One or more t values")
      ->required()
      ->delimiter(',');
  verify_cmd->add_option("--measure", cfg.measure,
                         "ev1|ev2|odd|pD_q2|pA_q2|uniform|p1|p2|p3|example1")
      ->required()
      ->check(CLI::IsMember({"ev1", "ev2", "odd", "pD_q2", "pA_q2", "uniform", "p1",
                             "p2", "p3", "example1"}));
  verify_cmd->add_option("--criterion", criterion, "D, A or both")
      ->check(CLI::IsMember({"D", "A", "both"}));

  auto* reduce_cmd =
      app.add_subcommand("reduce-support", "BIB-based measures with small support");
  reduce_cmd->add_option("--q", cfg.q, "Dimension")->required();
  reduce_cmd->add_option("--t", cfg.t, "t grid (default 0,0.5,0.9)")->delimiter(',');

  auto* tables_cmd = app.add_subcommand("tables", "Regenerate the published tables");
  tables_cmd->add_option("--id", table_ids, "T1..T5 or all")
      ->required()
      ->delimiter(',');
  solver_opts(tables_cmd);

  // Defaults per subcommand; the last registration wins, so bind after parse.
  for (auto* sub : {solve_cmd, analytic_cmd, verify_cmd, reduce_cmd}) common(sub, "text");
  common(tables_cmd, "csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  auto* chosen = app.get_subcommands().front();
  if (chosen == solve_cmd) cfg.command = Command::Solve;
  if (chosen == analytic_cmd) cfg.command = Command::Analytic;
  if (chosen == verify_cmd) cfg.command = Command::Verify;
  if (chosen == reduce_cmd) cfg.command = Command::ReduceSupport;
  if (chosen == tables_cmd) cfg.command = Command::Tables;

  if (chosen->count("--format") == 0) {
    format = cfg.command == Command::Tables ? "csv" : "text";
  }
  cfg.output_format = format == "json"  ? OutputFormat::Json
                      : format == "csv" ? OutputFormat::Csv
                                        : OutputFormat::Text;
  if (!criterion.empty() && criterion != "both") cfg.criterion = parse_criterion(criterion);
  const auto* max_iter_opt = chosen->get_option_no_throw("--max-iter");
  if (max_iter_opt && max_iter_opt->count() > 0) {
    cfg.solver.max_iterations = max_iter;
  } else if (cfg.command == Command::Tables) {
    cfg.solver.max_iterations = table_solver_config().max_iterations;
  }
  cfg.solver.use_class_symmetry = !full_space;

  try {
    for (const auto& id : table_ids) {
      if (id == "all") {
        cfg.tables = {TableId::T1, TableId::T2, TableId::T3, TableId::T4, TableId::T5};
        break;
      }
      cfg.tables.push_back(parse_table_id(id));
    }
    cfg.validate();
  } catch (const Error& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  return run(cfg, out, err);
}

}  // namespace slsdesign
