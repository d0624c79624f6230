#include "slsdesign/serialize.hpp"

#include <cmath>
#include <limits>

#include "slsdesign/errors.hpp"

namespace slsdesign {

namespace {

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

// JSON has no infinities; a singular phi is written as null.
Json finite_or_null(double v) {
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

Json points_json(const DesignSpace& space) {
  Json pts = Json::array();
  for (const auto& p : space.points()) pts.push_back(p.coords);
  return pts;
}

}  // namespace

Json to_json(const DesignSpace& space) {
  Json j;
  j["q"] = space.q();
  j["kind"] = to_string(space.kind());
  j["n"] = space.size();
  j["points"] = points_json(space);
  return j;
}

Json to_json(const DesignMeasure& measure) {
  const auto& space = measure.space();
  Json j;
  j["q"] = space.q();
  j["kind"] = to_string(space.kind());
  j["points"] = points_json(space);
  j["masses"] = std::vector<double>(measure.masses().begin(), measure.masses().end());
  j["class_masses"] =
      measure.class_masses() ? Json(*measure.class_masses()) : Json(nullptr);
  return j;
}

DesignMeasure measure_from_json(const Json& j) {
  const int q = j.at("q").get<int>();
  const auto kind = j.at("kind").get<std::string>();
  SpacePtr space;
  if (kind == "binary") {
    space = enumerate_binary(q);
  } else if (kind == "chemical_balance") {
    space = enumerate_chemical_balance(q);
  } else {
    throw DomainError("unknown design space kind '" + kind + "'");
  }
  if (j.contains("points")) {
    const auto pts = j.at("points").get<std::vector<std::vector<int>>>();
    if (pts.size() != space->size()) throw DomainError("point count mismatch");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (pts[i] != space->point(i).coords) {
        throw DomainError("serialized point order does not match the space");
      }
    }
  }
  if (j.contains("class_masses") && !j.at("class_masses").is_null()) {
    return class_measure(space, j.at("class_masses").get<std::vector<double>>());
  }
  return DesignMeasure(space, j.at("masses").get<std::vector<double>>());
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  j["data"] = std::move(data);
  return j;
}

Json to_json(const OptimalityReport& report) {
  Json j;
  j["criterion"] = to_string(report.criterion);
  j["bound"] = report.bound;
  j["max_gap"] = report.max_gap;
  j["phi"] = finite_or_null(report.phi);
  j["delta_certificate"] = report.delta_certificate;
  j["psi"] = report.psi;
  return j;
}

Json to_json(const InformationSummary& summary) {
  Json j;
  j["t"] = summary.t;
  j["singular"] = summary.singular;
  j["G"] = matrix_to_json(summary.G);
  j["g"] = std::vector<double>(summary.g.data(), summary.g.data() + summary.g.size());
  j["H"] = matrix_to_json(summary.H);
  j["inv_H"] = summary.inv_H ? matrix_to_json(*summary.inv_H) : Json(nullptr);
  j["log_det_H"] = optional_number(summary.log_det_H);
  return j;
}

Json to_json(const ThresholdSet& s) {
  Json j;
  j["q"] = s.q;
  j["t0"] = optional_number(s.t0);
  j["t1"] = optional_number(s.t1);
  j["t2"] = optional_number(s.t2);
  j["xi_t"] = optional_number(s.xi_t);
  return j;
}

Json to_json(const IncidenceMatrix& n) {
  Json j;
  j["q"] = n.q;
  j["b"] = n.b;
  j["r"] = n.r;
  j["k"] = n.k;
  j["lambda"] = n.lambda;
  Json cols = Json::array();
  for (int c = 0; c < n.b; ++c) {
    std::vector<int> col(n.q);
    for (int r = 0; r < n.q; ++r) col[r] = n.entries(r, c);
    cols.push_back(std::move(col));
  }
  j["columns"] = std::move(cols);
  return j;
}

std::string to_text_grid(const IncidenceMatrix& n) {
  std::string out;
  out.reserve(static_cast<std::size_t>(n.q) * (n.b + 1));
  for (int r = 0; r < n.q; ++r) {
    for (int c = 0; c < n.b; ++c) out.push_back(n.entries(r, c) ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

Json to_json(const SolverResult& result) {
  Json j;
  j["iterations"] = result.iterations;
  j["final_gap"] = result.final_gap;
  j["phi"] = finite_or_null(result.phi);
  j["converged"] = result.converged;
  const auto pi = collapse_to_classes(result.measure, 1e-12);
  j["class_masses"] = pi ? Json(*pi) : Json(nullptr);
  j["measure"] = to_json(result.measure);
  Json trace = Json::array();
  for (const auto& tp : result.trace) {
    trace.push_back({{"iteration", tp.iteration},
                     {"phi", finite_or_null(tp.phi)},
                     {"gap", tp.gap}});
  }
  j["trace"] = std::move(trace);
  return j;
}

Json versioned(Json body) {
  Json out;
  out["schema_version"] = kSchemaVersion;
  for (auto it = body.begin(); it != body.end(); ++it) out[it.key()] = it.value();
  return out;
}

}  // namespace slsdesign
