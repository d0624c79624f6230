#include "slsdesign/analytic.hpp"

#include <cmath>
#include <string>

#include "slsdesign/errors.hpp"

namespace slsdesign {

namespace {

void require_t(double t) {
  if (!(t >= 0.0 && t < 1.0)) {
    throw DomainError("t must lie in [0, 1), got " + std::to_string(t));
  }
}

void require_even(int q) {
  if (q < 4 || q % 2 != 0) {
    throw DomainError("requires even q >= 4, got q = " + std::to_string(q));
  }
}

void require_odd(int q) {
  if (q < 3 || q % 2 == 0) {
    throw DomainError("requires odd q >= 3, got q = " + std::to_string(q));
  }
}

void require_class(int q, int j) {
  if (j < 1 || j > q) {
    throw DomainError("class index j must lie in [1, q], got j = " +
                      std::to_string(j));
  }
}

// alpha (I - J/q) + beta (J/q).
Eigen::MatrixXd idempotent_combination(int q, double alpha, double beta) {
  const Eigen::MatrixXd Q = Eigen::MatrixXd::Constant(q, q, 1.0 / q);
  const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(q, q) - Q;
  return alpha * P + beta * Q;
}

}  // namespace

double u_t(double xi, double t) {
  const double xi2 = xi * xi;
  return 1.0 - 2.0 * t * xi - (3.0 - 2.0 * t) * xi2 + 4.0 * t * xi2 * xi -
         2.0 * t * t * xi2 * xi2;
}

double xi_root(double t) {
  require_t(t);
  // u_t is strictly decreasing on the bracket with u_t(lo) > 0 > u_t(hi).
  double lo = 0.5;
  double hi = 1.0 / std::sqrt(2.0);
  for (int it = 0; it < 100 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (u_t(mid, t) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

ThresholdSet thresholds(int q, std::optional<double> t) {
  if (q < 2) throw DomainError("thresholds require q >= 2");
  ThresholdSet s;
  s.q = q;
  const double qd = q;
  if (q == 2) {
    if (t) s.xi_t = xi_root(*t);
  } else if (q % 2 == 1) {
    s.t0 = qd / (qd + 1.0);
  } else {
    s.t1 = (qd + 1.0) / (qd + 2.0);
    const double r = (qd - 1.0) * (qd - 1.0);
    s.t2 = 1.0 - 0.5 / r * (qd + std::sqrt(4.0 * r + qd * qd));
  }
  return s;
}

std::string_view to_string(AnalyticKind kind) {
  switch (kind) {
    case AnalyticKind::PD_q2: return "pD_q2";
    case AnalyticKind::PA_q2: return "pA_q2";
    case AnalyticKind::Ev1: return "ev1";
    case AnalyticKind::Ev2: return "ev2";
    case AnalyticKind::Odd: return "odd";
  }
  return "?";
}

AnalyticKind parse_analytic_kind(std::string_view s) {
  if (s == "pD_q2" || s == "pD") return AnalyticKind::PD_q2;
  if (s == "pA_q2" || s == "pA") return AnalyticKind::PA_q2;
  if (s == "ev1") return AnalyticKind::Ev1;
  if (s == "ev2") return AnalyticKind::Ev2;
  if (s == "odd") return AnalyticKind::Odd;
  throw DomainError("unknown analytic measure '" + std::string(s) + "'");
}

std::vector<double> analytic_class_masses(AnalyticKind kind, int q,
                                          std::optional<double> t) {
  std::vector<double> pi;
  switch (kind) {
    case AnalyticKind::PD_q2:
      if (q != 2) throw DomainError("pD_q2 requires q = 2");
      return {1.0 / 3.0, 1.0 / 3.0};
    case AnalyticKind::PA_q2: {
      if (q != 2) throw DomainError("pA_q2 requires q = 2");
      if (!t) throw DomainError("pA_q2 requires t");
      const double xi = xi_root(*t);
      return {1.0 - xi, 2.0 * xi - 1.0};
    }
    case AnalyticKind::Ev1: {
      require_even(q);
      const int m = q / 2;
      pi.assign(q, 0.0);
      const double mass = 1.0 / (binomial(q, m) + binomial(q, m + 1));
      pi[m - 1] = mass;
      pi[m] = mass;
      return pi;
    }
    case AnalyticKind::Ev2: {
      require_even(q);
      const int m = q / 2;
      pi.assign(q, 0.0);
      pi[m - 1] = 1.0 / binomial(q, m);
      return pi;
    }
    case AnalyticKind::Odd: {
      require_odd(q);
      const int m = (q - 1) / 2;
      pi.assign(q, 0.0);
      pi[m] = 1.0 / binomial(q, m + 1);
      return pi;
    }
  }
  throw DomainError("unknown analytic measure");
}

DesignMeasure analytic_measure(AnalyticKind kind, const SpacePtr& space,
                               std::optional<double> t) {
  if (space->kind() != SpaceKind::Binary) {
    throw DomainError("closed-form measures live on the binary design space");
  }
  return class_measure(space, analytic_class_masses(kind, space->q(), t));
}

Eigen::MatrixXd closed_form_inverse(AnalyticKind kind, int q, double t) {
  require_t(t);
  const double qd = q;
  switch (kind) {
    case AnalyticKind::Ev1: {
      require_even(q);
      const double m = qd / 2;
      const double scale = 2.0 * (2.0 * m + 1.0) / (m + 1.0);
      const double beta = (2.0 * m + 1.0) / (1.0 + 4.0 * m * (m + 1.0) * (1.0 - t));
      return idempotent_combination(q, scale, scale * beta);
    }
    case AnalyticKind::Ev2: {
      require_even(q);
      const double m = qd / 2;
      return idempotent_combination(q, 2.0 * (2.0 * m - 1.0) / m,
                                    2.0 / (m * (1.0 - t)));
    }
    case AnalyticKind::Odd: {
      require_odd(q);
      const double m = (qd - 1.0) / 2;
      const double scale = 2.0 * (2.0 * m + 1.0) / (m + 1.0);
      return idempotent_combination(q, scale,
                                    scale / (2.0 * (m + 1.0) * (1.0 - t)));
    }
    default:
      throw DomainError("closed-form inverse covers ev1, ev2 and odd only");
  }
}

double closed_form_trace_inverse(AnalyticKind kind, int q, double t) {
  require_t(t);
  const double qd = q;
  switch (kind) {
    case AnalyticKind::Ev2: {
      require_even(q);
      const double m = qd / 2;
      return 2.0 / m * ((2.0 * m - 1.0) * (2.0 * m - 1.0) + 1.0 / (1.0 - t));
    }
    case AnalyticKind::Odd: {
      require_odd(q);
      const double m = (qd - 1.0) / 2;
      return 2.0 * qd / (m + 1.0) * (qd - 1.0 + 1.0 / (2.0 * (m + 1.0) * (1.0 - t)));
    }
    default:
      return closed_form_inverse(kind, q, t).trace();
  }
}

double l_function(int q, int j, double t) {
  require_even(q);
  require_class(q, j);
  const double m = q / 2;
  const double d = j - m;
  const double s = 1.0 - t;
  const double r = (q - 1.0) * (q - 1.0);
  return (r * s * s - 1.0) * d * d - q * s * d;
}

double oracle_psi_closed_form(PsiOracleKind kind, int q, int j, double t) {
  require_t(t);
  require_class(q, j);
  const double qd = q;
  const double s = 1.0 - t;
  switch (kind) {
    case PsiOracleKind::Ev1_D: {
      require_even(q);
      const double m = qd / 2;
      const double c = 2.0 * (2.0 * m + 1.0) * (qd + 1.0 - (qd + 2.0) * t) /
                       ((m + 1.0) * (1.0 + 4.0 * m * (m + 1.0) * s));
      return qd - c * (j - m) * (j - m - 1.0);
    }
    case PsiOracleKind::Ev2_A: {
      const double tr = closed_form_trace_inverse(AnalyticKind::Ev2, q, t);
      return tr - 16.0 / (qd * qd * qd) / (s * s) * l_function(q, j, t);
    }
    case PsiOracleKind::Odd_D: {
      require_odd(q);
      const double m = (qd - 1.0) / 2;
      const double d = j - m - 1.0;
      return qd - (qd - (qd + 1.0) * t) * d * d / ((m + 1.0) * (m + 1.0) * s);
    }
    case PsiOracleKind::Odd_A: {
      const double tr = closed_form_trace_inverse(AnalyticKind::Odd, q, t);
      const double m = (qd - 1.0) / 2;
      const double d = j - m - 1.0;
      const double m1 = m + 1.0;
      const double diff = qd * (qd - (qd + 1.0) * t) *
                          (d * d + 2.0 * d * (j - m) * m1 * s) /
                          (m1 * m1 * m1 * m1 * s * s);
      return tr - diff;
    }
  }
  throw DomainError("unknown psi oracle");
}

}  // namespace slsdesign
