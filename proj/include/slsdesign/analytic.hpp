#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "slsdesign/design_space.hpp"

namespace slsdesign {

// u_t(xi) = 1 - 2 t xi - (3 - 2t) xi^2 + 4 t xi^3 - 2 t^2 xi^4.
double u_t(double xi, double t);

// The unique root of u_t in (1/2, 2^{-1/2}), by bisection to 1e-12.
// Throws DomainError for t outside [0, 1).
double xi_root(double t);

// Optimality thresholds in t for the closed-form measures.
//   odd q >= 3:  t0 = q / (q + 1)
//   even q >= 4: t1 = (q + 1) / (q + 2),
//                t2 = 1 - (q + sqrt(4 (q-1)^2 + q^2)) / (2 (q-1)^2)
//   q = 2:       xi_t when t is supplied
struct ThresholdSet {
  int q = 0;
  std::optional<double> t0;
  std::optional<double> t1;
  std::optional<double> t2;
  std::optional<double> xi_t;
};

ThresholdSet thresholds(int q, std::optional<double> t = std::nullopt);

enum class AnalyticKind { PD_q2, PA_q2, Ev1, Ev2, Odd };

std::string_view to_string(AnalyticKind kind);
AnalyticKind parse_analytic_kind(std::string_view s);

// Class masses pi_1..pi_q of the closed-form measure. Throws DomainError
// when kind and q are incompatible (q2 kinds need q = 2, ev1/ev2 need even
// q >= 4, odd needs odd q >= 3) or when PA_q2 is requested without t.
std::vector<double> analytic_class_masses(AnalyticKind kind, int q,
                                          std::optional<double> t = std::nullopt);

// The closed-form measure on a binary space.
DesignMeasure analytic_measure(AnalyticKind kind, const SpacePtr& space,
                               std::optional<double> t = std::nullopt);

// H(p)^{-1} for p_ev1, p_ev2, p_odd, written in the idempotents
// I_q - J_q/q and J_q/q.
Eigen::MatrixXd closed_form_inverse(AnalyticKind kind, int q, double t);

// tr H(p)^{-1} of the closed-form inverse.
double closed_form_trace_inverse(AnalyticKind kind, int q, double t);

enum class PsiOracleKind { Ev1_D, Ev2_A, Odd_D, Odd_A };

// psi on weight class j for the closed-form measures:
//   Ev1_D: q - c (j-m)(j-m-1)
//   Ev2_A: tr H^{-1} - 16 q^{-3} (1-t)^{-2} l(j, t)
//   Odd_D: q - {q - (q+1)t} (j-m-1)^2 / ((m+1)^2 (1-t))
//   Odd_A: tr H^{-1} minus the closed-form difference.
double oracle_psi_closed_form(PsiOracleKind kind, int q, int j, double t);

// l(j, t) = {(q-1)^2 (1-t)^2 - 1} (j-m)^2 - q (1-t)(j-m), q = 2m even >= 4.
double l_function(int q, int j, double t);

}  // namespace slsdesign
