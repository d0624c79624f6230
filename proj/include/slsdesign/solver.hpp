#pragma once

#include <cstdint>
#include <vector>

#include "slsdesign/design_space.hpp"
#include "slsdesign/information.hpp"

namespace slsdesign {

struct SolverConfig {
  double delta = 1e-10;
  std::int64_t max_iterations = 1'000'000;
  bool renormalize_each_step = true;
  // Iterate on the q class masses when the space is binary.
  bool use_class_symmetry = true;
  // Masses are clamped to at least this value before renormalizing.
  double mass_floor = 0.0;
  // Record (iteration, phi, gap) every this many iterations; 0 disables.
  std::int64_t trace_every = 100;

  void validate() const;
};

struct TracePoint {
  std::int64_t iteration = 0;
  double phi = 0.0;
  double gap = 0.0;
};

struct SolverResult {
  DesignMeasure measure;
  std::int64_t iterations = 0;
  double final_gap = 0.0;
  double phi = 0.0;
  bool converged = false;
  std::vector<TracePoint> trace;
};

// Multiplicative algorithm from the uniform measure:
//   D: p_i <- p_i psi_Di(p) / q
//   A: p_i <- p_i psi_Ai(p) / tr H(p)^{-1}
// until max_i psi_i - bound <= delta, which guarantees
// phi(p) >= max phi - delta. Throws SingularStartError when H of the
// uniform measure is singular; running out of iterations is reported
// through converged = false.
SolverResult solve(const SpacePtr& space, double t, Criterion criterion,
                   const SolverConfig& config = {});

// One multiplicative step applied to an arbitrary measure. The returned
// masses are not renormalized unless requested.
std::vector<double> multiplicative_update(const DesignMeasure& measure, double t,
                                          Criterion criterion,
                                          bool renormalize = false);

// D: [det H(candidate) / det H(reference)]^{1/q}
// A: tr H(reference)^{-1} / tr H(candidate)^{-1}
double efficiency(const DesignMeasure& candidate,
                  const DesignMeasure& reference_optimal, double t,
                  Criterion criterion);

// [det H(p1) / det H(p2)]^{1/q}, through log-determinants.
double relative_d_efficiency(const DesignMeasure& p1, const DesignMeasure& p2,
                             double t);

}  // namespace slsdesign
