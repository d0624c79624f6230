#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "slsdesign/analytic.hpp"
#include "slsdesign/cli.hpp"
#include "slsdesign/combinatorics.hpp"
#include "slsdesign/errors.hpp"
#include "slsdesign/information.hpp"
#include "slsdesign/serialize.hpp"
#include "slsdesign/solver.hpp"
#include "slsdesign/tables.hpp"

namespace py = pybind11;
using namespace slsdesign;

namespace {

using MutableSpace = std::shared_ptr<DesignSpace>;

// Spaces are immutable in C++; Python only sees read-only accessors.
MutableSpace expose(const SpacePtr& s) { return std::const_pointer_cast<DesignSpace>(s); }

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Optimal approximate designs under second-order least squares";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto domain = py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<DegenerateDistributionError>(m, "DegenerateDistributionError",
                                                      domain.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<InvalidMeasureError>(m, "InvalidMeasureError", base.ptr());
  auto singular = py::register_exception<SingularityError>(m, "SingularityError", base.ptr());
  py::register_exception<SingularStartError>(m, "SingularStartError", singular.ptr());
  py::register_exception<UnsupportedOrderError>(m, "UnsupportedOrderError", base.ptr());
  py::register_exception<ConstructionError>(m, "ConstructionError", base.ptr());

  py::enum_<SpaceKind>(m, "SpaceKind")
      .value("Binary", SpaceKind::Binary)
      .value("ChemicalBalance", SpaceKind::ChemicalBalance);
  py::enum_<Criterion>(m, "Criterion").value("D", Criterion::D).value("A", Criterion::A);
  py::enum_<AnalyticKind>(m, "AnalyticKind")
      .value("pD_q2", AnalyticKind::PD_q2)
      .value("pA_q2", AnalyticKind::PA_q2)
      .value("ev1", AnalyticKind::Ev1)
      .value("ev2", AnalyticKind::Ev2)
      .value("odd", AnalyticKind::Odd);
  py::enum_<PsiOracleKind>(m, "PsiOracleKind")
      .value("ev1_D", PsiOracleKind::Ev1_D)
      .value("ev2_A", PsiOracleKind::Ev2_A)
      .value("odd_D", PsiOracleKind::Odd_D)
      .value("odd_A", PsiOracleKind::Odd_A);
  py::enum_<TableId>(m, "TableId")
      .value("T1", TableId::T1)
      .value("T2", TableId::T2)
      .value("T3", TableId::T3)
      .value("T4", TableId::T4)
      .value("T5", TableId::T5);

  // design space
  py::class_<DesignSpace, MutableSpace>(m, "DesignSpace")
      .def_property_readonly("q", &DesignSpace::q)
      .def_property_readonly("kind", &DesignSpace::kind)
      .def("__len__", &DesignSpace::size)
      .def_property_readonly("points",
                             [](const DesignSpace& s) {
                               std::vector<std::vector<int>> pts;
                               for (const auto& p : s.points()) pts.push_back(p.coords);
                               return pts;
                             })
      .def_property_readonly("matrix", &DesignSpace::matrix,
                             py::return_value_policy::copy)
      .def_property_readonly("class_sizes", &DesignSpace::class_sizes)
      .def("class_of", &DesignSpace::class_of, py::arg("index"))
      .def("index_of", [](const DesignSpace& s, const std::vector<int>& x) {
        return s.index_of(x);
      });

  m.def("enumerate_binary", [](int q) { return expose(enumerate_binary(q)); }, py::arg("q"));
  m.def("enumerate_chemical_balance",
        [](int q) { return expose(enumerate_chemical_balance(q)); }, py::arg("q"));

  py::class_<DesignMeasure>(m, "DesignMeasure")
      .def(py::init([](const MutableSpace& s, std::vector<double> masses) {
             return DesignMeasure(s, std::move(masses));
           }),
           py::arg("space"), py::arg("masses"))
      .def_property_readonly("space",
                             [](const DesignMeasure& p) { return expose(p.space_ptr()); })
      .def_property_readonly("masses",
                             [](const DesignMeasure& p) { return to_vector(p.masses()); })
      .def_property_readonly("class_masses", &DesignMeasure::class_masses)
      .def("support_size", &DesignMeasure::support_size, py::arg("tol") = 0.0)
      .def("mix", &DesignMeasure::mix, py::arg("other"), py::arg("eps"))
      .def("__len__", &DesignMeasure::size)
      .def("to_json", [](const DesignMeasure& p) { return to_json(p).dump(); });

  m.def("measure_from_json",
        [](const std::string& text) { return measure_from_json(Json::parse(text)); });
  m.def("uniform_measure", [](const MutableSpace& s) { return uniform_measure(s); });
  m.def("class_measure",
        [](const MutableSpace& s, std::vector<double> pi) {
          return class_measure(s, std::move(pi));
        },
        py::arg("space"), py::arg("pi"));
  m.def("collapse_to_classes", &collapse_to_classes, py::arg("measure"),
        py::arg("tol") = 1e-12);

  // information
  m.def("moments_to_t", &moments_to_t, py::arg("mu2"), py::arg("mu3"), py::arg("mu4"));

  py::class_<InformationSummary>(m, "InformationSummary")
      .def_readonly("G", &InformationSummary::G)
      .def_readonly("g", &InformationSummary::g)
      .def_readonly("H", &InformationSummary::H)
      .def_readonly("t", &InformationSummary::t)
      .def_readonly("singular", &InformationSummary::singular)
      .def_readonly("inv_H", &InformationSummary::inv_H)
      .def_readonly("log_det_H", &InformationSummary::log_det_H);

  m.def("information", &information, py::arg("measure"), py::arg("t"));
  m.def("information_from_classes",
        [](int q, const std::vector<double>& pi, double t) {
          return information_from_classes(q, pi, t);
        },
        py::arg("q"), py::arg("pi"), py::arg("t"));
  m.def("phi", &phi, py::arg("summary"), py::arg("criterion"));

  py::class_<OptimalityReport>(m, "OptimalityReport")
      .def_readonly("criterion", &OptimalityReport::criterion)
      .def_readonly("psi", &OptimalityReport::psi)
      .def_readonly("bound", &OptimalityReport::bound)
      .def_readonly("max_gap", &OptimalityReport::max_gap)
      .def_readonly("phi", &OptimalityReport::phi)
      .def_readonly("delta_certificate", &OptimalityReport::delta_certificate);

  m.def("psi_values", &psi_values, py::arg("measure"), py::arg("summary"),
        py::arg("criterion"));
  m.def("check_optimal",
        [](const DesignMeasure& p, double t, Criterion c, double tol) {
          auto r = check_optimal(p, t, c, tol);
          return py::make_tuple(r.optimal, r.report);
        },
        py::arg("measure"), py::arg("t"), py::arg("criterion"),
        py::arg("tol") = kDefaultOptimalityTol);
  m.def("directional_derivative", &directional_derivative, py::arg("p"), py::arg("p_tilde"),
        py::arg("t"), py::arg("criterion"));

  // closed forms
  m.def("u_t", &u_t, py::arg("xi"), py::arg("t"));
  m.def("xi_root", &xi_root, py::arg("t"));

  py::class_<ThresholdSet>(m, "ThresholdSet")
      .def_readonly("q", &ThresholdSet::q)
      .def_readonly("t0", &ThresholdSet::t0)
      .def_readonly("t1", &ThresholdSet::t1)
      .def_readonly("t2", &ThresholdSet::t2)
      .def_readonly("xi_t", &ThresholdSet::xi_t);

  m.def("thresholds", &thresholds, py::arg("q"), py::arg("t") = py::none());
  m.def("analytic_class_masses", &analytic_class_masses, py::arg("kind"), py::arg("q"),
        py::arg("t") = py::none());
  m.def("analytic_measure",
        [](AnalyticKind kind, const MutableSpace& s, std::optional<double> t) {
          return analytic_measure(kind, s, t);
        },
        py::arg("kind"), py::arg("space"), py::arg("t") = py::none());
  m.def("closed_form_inverse", &closed_form_inverse, py::arg("kind"), py::arg("q"),
        py::arg("t"));
  m.def("oracle_psi_closed_form", &oracle_psi_closed_form, py::arg("kind"), py::arg("q"),
        py::arg("j"), py::arg("t"));
  m.def("l_function", &l_function, py::arg("q"), py::arg("j"), py::arg("t"));

  // solver
  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("delta", &SolverConfig::delta)
      .def_readwrite("max_iterations", &SolverConfig::max_iterations)
      .def_readwrite("renormalize_each_step", &SolverConfig::renormalize_each_step)
      .def_readwrite("use_class_symmetry", &SolverConfig::use_class_symmetry)
      .def_readwrite("mass_floor", &SolverConfig::mass_floor)
      .def_readwrite("trace_every", &SolverConfig::trace_every);

  py::class_<SolverResult>(m, "SolverResult")
      .def_readonly("measure", &SolverResult::measure)
      .def_readonly("iterations", &SolverResult::iterations)
      .def_readonly("final_gap", &SolverResult::final_gap)
      .def_readonly("phi", &SolverResult::phi)
      .def_readonly("converged", &SolverResult::converged)
      .def_property_readonly("trace", [](const SolverResult& r) {
        std::vector<std::tuple<std::int64_t, double, double>> out;
        for (const auto& tp : r.trace) out.emplace_back(tp.iteration, tp.phi, tp.gap);
        return out;
      });

  m.def("solve",
        [](const MutableSpace& s, double t, Criterion c, const SolverConfig& cfg) {
          py::gil_scoped_release release;
          return solve(s, t, c, cfg);
        },
        py::arg("space"), py::arg("t"), py::arg("criterion"),
        py::arg("config") = SolverConfig{});
  m.def("multiplicative_update", &multiplicative_update, py::arg("measure"), py::arg("t"),
        py::arg("criterion"), py::arg("renormalize") = false);
  m.def("efficiency", &efficiency, py::arg("candidate"), py::arg("reference_optimal"),
        py::arg("t"), py::arg("criterion"));
  m.def("relative_d_efficiency", &relative_d_efficiency, py::arg("p1"), py::arg("p2"),
        py::arg("t"));

  // combinatorics
  m.def("hadamard", [](int order) { return hadamard(order).entries; }, py::arg("order"));
  m.def("hadamard_supported", &hadamard_supported, py::arg("order"));

  py::class_<IncidenceMatrix>(m, "IncidenceMatrix")
      .def_readonly("q", &IncidenceMatrix::q)
      .def_readonly("b", &IncidenceMatrix::b)
      .def_readonly("r", &IncidenceMatrix::r)
      .def_readonly("k", &IncidenceMatrix::k)
      .def_readonly("lambda_", &IncidenceMatrix::lambda)
      .def_readonly("entries", &IncidenceMatrix::entries)
      .def("to_json", [](const IncidenceMatrix& n) { return to_json(n).dump(); });

  m.def("bib_d1", &bib_d1, py::arg("m"));
  m.def("bib_d2", &bib_d2, py::arg("s"));
  m.def("bib_d3", &bib_d3, py::arg("s"));
  m.def("measure_from_incidence",
        [](const IncidenceMatrix& n, const MutableSpace& s) {
          return measure_from_incidence(n, s);
        },
        py::arg("incidence"), py::arg("space"));
  m.def("verify_h_equivalence",
        [](const DesignMeasure& a, const DesignMeasure& b, double t) {
          auto r = verify_h_equivalence(a, b, t);
          return py::make_tuple(r.equivalent, r.max_abs_diff);
        },
        py::arg("p_reduced"), py::arg("p_full"), py::arg("t"));
  m.def("example1_measure", [](int q) {
    auto [s, p] = example1_measure(q);
    return py::make_tuple(expose(s), p);
  });

  // tables and CLI
  m.def("table_csv",
        [](TableId id) {
          py::gil_scoped_release release;
          return to_csv(regenerate_table(id));
        },
        py::arg("id"));
  m.def("table_json",
        [](TableId id) {
          py::gil_scoped_release release;
          return versioned(to_json(regenerate_table(id))).dump();
        },
        py::arg("id"));
  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::vector<const char*> argv{"slsdesign"};
          for (const auto& a : args) argv.push_back(a.c_str());
          std::ostringstream out, err;
          int status;
          {
            py::gil_scoped_release release;
            status = slsdesign::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
          }
          return py::make_tuple(status, out.str(), err.str());
        },
        py::arg("args"));
}
