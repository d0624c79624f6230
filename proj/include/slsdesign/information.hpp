#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "slsdesign/design_space.hpp"

namespace slsdesign {

enum class Criterion { D, A };

std::string_view to_string(Criterion c);
Criterion parse_criterion(std::string_view s);

// Central moments of the error law and the derived asymmetry parameter
// t = mu3^2 / (mu2 (mu4 - mu2^2)), 0 <= t < 1.
struct ErrorMomentProfile {
  double mu2;
  double mu3;
  double mu4;
  double t;

  static ErrorMomentProfile from_moments(double mu2, double mu3, double mu4);
};

// Throws DomainError when mu2 <= 0 or mu4 - mu2^2 <= 0, and
// DegenerateDistributionError when the result would be >= 1.
double moments_to_t(double mu2, double mu3, double mu4);

// G(p), g(p) and H(p) = G - t g g^T. When H is nonsingular its inverse and
// log-determinant are cached.
struct InformationSummary {
  Eigen::MatrixXd G;
  Eigen::VectorXd g;
  Eigen::MatrixXd H;
  double t = 0.0;
  bool singular = true;
  std::optional<Eigen::MatrixXd> inv_H;
  std::optional<double> log_det_H;

  int q() const { return static_cast<int>(g.size()); }
  double trace_inv_H() const;
};

// Assembles the summary from G and g. H is declared singular when its
// smallest eigenvalue falls below 1e-12 * (1 + largest eigenvalue).
InformationSummary summarize(Eigen::MatrixXd G, Eigen::VectorXd g, double t);

InformationSummary information(const DesignMeasure& measure, double t);

// Same result as information(class_measure(...), t) without enumerating the
// space, using the closed-form class sums
//   sum_{x in class j} x     = (j n_j / q) 1_q
//   sum_{x in class j} x x^T = j n_j / (q (q-1)) {(q-j) I_q + (j-1) J_q}.
InformationSummary information_from_classes(int q, std::span<const double> pi,
                                            double t);

// log det H (D) or -tr H^{-1} (A); -infinity when H is singular.
double phi(const InformationSummary& summary, Criterion criterion);

// psi for one point; requires a nonsingular summary.
//   D: (1-t) x'H^{-1}x + t (x-g)'H^{-1}(x-g)
//   A: same with H^{-2} in place of H^{-1}
double psi_point(const InformationSummary& summary, Criterion criterion,
                 const Eigen::Ref<const Eigen::VectorXd>& x);

// q for D, tr H^{-1} for A.
double psi_bound(const InformationSummary& summary, Criterion criterion);

struct OptimalityReport {
  Criterion criterion = Criterion::D;
  std::vector<double> psi;
  double bound = 0.0;
  double max_gap = 0.0;
  double phi = 0.0;
  // Upper bound on (optimal phi) - phi implied by the gap; zero means the
  // equivalence conditions hold exactly.
  double delta_certificate = 0.0;
};

// psi_i for every point of the measure's space (not only the support).
// Throws SingularityError when the summary is singular.
OptimalityReport psi_values(const DesignMeasure& measure,
                            const InformationSummary& summary,
                            Criterion criterion);

// psi for every column of X (one design point per column).
std::vector<double> psi_columns(const Eigen::MatrixXd& X,
                                const InformationSummary& summary,
                                Criterion criterion);

// psi on one representative point per weight class j = 1..q. Valid for
// class-symmetric summaries, where psi is constant within each class.
std::vector<double> class_psi_values(const InformationSummary& summary,
                                     Criterion criterion);

inline constexpr double kDefaultOptimalityTol = 1e-8;

struct OptimalityCheck {
  bool optimal = false;
  std::optional<OptimalityReport> report;  // absent when H is singular
};

// True iff H(p) is nonsingular and max_i psi_i - bound <= tol.
OptimalityCheck check_optimal(const DesignMeasure& measure, double t,
                              Criterion criterion,
                              double tol = kDefaultOptimalityTol);

// One-sided derivative of phi along (1-eps) p + eps p_tilde at eps = 0+,
// i.e. sum_i p_tilde_i (psi_i(p) - bound).
double directional_derivative(const DesignMeasure& p,
                              const DesignMeasure& p_tilde, double t,
                              Criterion criterion);

}  // namespace slsdesign
