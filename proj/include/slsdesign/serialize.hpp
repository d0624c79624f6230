#pragma once

#include <string>

#include <json.hpp>

#include "slsdesign/analytic.hpp"
#include "slsdesign/combinatorics.hpp"
#include "slsdesign/design_space.hpp"
#include "slsdesign/information.hpp"
#include "slsdesign/solver.hpp"

namespace slsdesign {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// {"q", "kind", "points": [[...]], "masses": [...], "class_masses": [...]}.
// class_masses is null when the measure has no class-symmetric form.
Json to_json(const DesignMeasure& measure);

// {"q", "kind", "n", "points": [[...]]}.
Json to_json(const DesignSpace& space);

// Inverse of to_json(DesignMeasure); the points are rebuilt from q/kind and
// checked against the serialized coordinates.
DesignMeasure measure_from_json(const Json& j);

// {"rows", "cols", "data": [...]}, row-major.
Json matrix_to_json(const Eigen::MatrixXd& m);

// {"criterion", "bound", "max_gap", "phi", "delta_certificate", "psi"}.
Json to_json(const OptimalityReport& report);

Json to_json(const InformationSummary& summary);

Json to_json(const ThresholdSet& thresholds);

// {"q", "b", "r", "k", "lambda", "columns": [[...]]}.
Json to_json(const IncidenceMatrix& n);

// One line per symbol, one 0/1 character per block.
std::string to_text_grid(const IncidenceMatrix& n);

// SolverResult fields plus "class_masses".
Json to_json(const SolverResult& result);

// Adds "schema_version" as the first key.
Json versioned(Json body);

}  // namespace slsdesign
