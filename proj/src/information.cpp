#include "slsdesign/information.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "slsdesign/errors.hpp"

namespace slsdesign {

namespace {

constexpr double kSingularRelTol = 1e-12;

void require_t(double t) {
  if (!(t >= 0.0 && t < 1.0)) {
    throw DomainError("t must lie in [0, 1), got " + std::to_string(t));
  }
}

const Eigen::MatrixXd& inverse_or_throw(const InformationSummary& s) {
  if (s.singular || !s.inv_H) {
    throw SingularityError("H(p) is singular");
  }
  return *s.inv_H;
}

// H^{-1} for D, H^{-2} for A.
Eigen::MatrixXd psi_kernel(const InformationSummary& s, Criterion c) {
  const auto& inv = inverse_or_throw(s);
  if (c == Criterion::D) return inv;
  return inv * inv;
}

double psi_with_kernel(const Eigen::MatrixXd& W, const Eigen::VectorXd& g,
                       double t, const Eigen::Ref<const Eigen::VectorXd>& x) {
  const Eigen::VectorXd e = x - g;
  return (1.0 - t) * x.dot(W * x) + t * e.dot(W * e);
}

}  // namespace

std::string_view to_string(Criterion c) { return c == Criterion::D ? "D" : "A"; }

Criterion parse_criterion(std::string_view s) {
  if (s == "D" || s == "d") return Criterion::D;
  if (s == "A" || s == "a") return Criterion::A;
  throw DomainError("unknown criterion '" + std::string(s) + "', expected D or A");
}

double moments_to_t(double mu2, double mu3, double mu4) {
  if (!(mu2 > 0.0)) throw DomainError("mu2 must be positive");
  const double excess = mu4 - mu2 * mu2;
  if (!(excess > 0.0)) throw DomainError("mu4 - mu2^2 must be positive");
  const double t = mu3 * mu3 / (mu2 * excess);
  if (!(t < 1.0)) {
    throw DegenerateDistributionError("moments give t = " + std::to_string(t) +
                                      " >= 1");
  }
  return t;
}

ErrorMomentProfile ErrorMomentProfile::from_moments(double mu2, double mu3,
                                                    double mu4) {
  return {mu2, mu3, mu4, moments_to_t(mu2, mu3, mu4)};
}

double InformationSummary::trace_inv_H() const {
  return inverse_or_throw(*this).trace();
}

InformationSummary summarize(Eigen::MatrixXd G, Eigen::VectorXd g, double t) {
  require_t(t);
  InformationSummary s;
  s.t = t;
  s.H = G - t * g * g.transpose();
  s.G = std::move(G);
  s.g = std::move(g);

  const Eigen::MatrixXd sym = 0.5 * (s.H + s.H.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  const double lo = ev.minCoeff();
  const double hi = ev.maxCoeff();
  if (lo < kSingularRelTol * (1.0 + std::max(hi, 0.0))) {
    s.singular = true;
    return s;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() != Eigen::Success) {
    s.singular = true;
    return s;
  }
  const Eigen::Index q = sym.rows();
  s.inv_H = llt.solve(Eigen::MatrixXd::Identity(q, q));
  const Eigen::MatrixXd L = llt.matrixL();
  s.log_det_H = 2.0 * L.diagonal().array().log().sum();
  s.singular = false;
  return s;
}

InformationSummary information(const DesignMeasure& measure, double t) {
  const auto& X = measure.space().matrix();
  const Eigen::Map<const Eigen::VectorXd> p(measure.masses().data(),
                                            static_cast<Eigen::Index>(measure.size()));
  Eigen::VectorXd g = X * p;
  Eigen::MatrixXd G = X * p.asDiagonal() * X.transpose();
  return summarize(std::move(G), std::move(g), t);
}

InformationSummary information_from_classes(int q, std::span<const double> pi,
                                            double t) {
  if (q < 2) throw DomainError("class-symmetric information requires q >= 2");
  if (static_cast<int>(pi.size()) != q) {
    throw InvalidMeasureError("expected " + std::to_string(q) + " class masses");
  }
  for (double v : pi) {
    if (!(v >= 0.0)) throw InvalidMeasureError("class masses must be nonnegative");
  }
  if (std::abs(class_mass_total(q, pi) - 1.0) > 1e-9) {
    throw InvalidMeasureError("class masses do not sum to one");
  }
  // G = a I + b J, g = c 1.
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  const double qd = q;
  for (int j = 1; j <= q; ++j) {
    const double w = pi[j - 1] * binomial(q, j);
    const double s = w * j / (qd * (qd - 1.0));
    a += s * (q - j);
    b += s * (j - 1);
    c += w * j / qd;
  }
  Eigen::MatrixXd G = Eigen::MatrixXd::Constant(q, q, b);
  G.diagonal().array() += a;
  Eigen::VectorXd g = Eigen::VectorXd::Constant(q, c);
  return summarize(std::move(G), std::move(g), t);
}

double phi(const InformationSummary& summary, Criterion criterion) {
  if (summary.singular) return -std::numeric_limits<double>::infinity();
  if (criterion == Criterion::D) return *summary.log_det_H;
  return -summary.inv_H->trace();
}

double psi_bound(const InformationSummary& summary, Criterion criterion) {
  if (criterion == Criterion::D) return summary.q();
  return summary.trace_inv_H();
}

double psi_point(const InformationSummary& summary, Criterion criterion,
                 const Eigen::Ref<const Eigen::VectorXd>& x) {
  return psi_with_kernel(psi_kernel(summary, criterion), summary.g, summary.t, x);
}

std::vector<double> psi_columns(const Eigen::MatrixXd& X,
                                const InformationSummary& summary,
                                Criterion criterion) {
  const Eigen::MatrixXd W = psi_kernel(summary, criterion);
  const double t = summary.t;
  // x'Wx and (x-g)'W(x-g) = x'Wx - 2 g'Wx + g'Wg, columnwise.
  const Eigen::MatrixXd WX = W * X;
  const Eigen::VectorXd Wg = W * summary.g;
  const double gWg = summary.g.dot(Wg);
  std::vector<double> out(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index i = 0; i < X.cols(); ++i) {
    const double xWx = X.col(i).dot(WX.col(i));
    const double gWx = X.col(i).dot(Wg);
    out[static_cast<std::size_t>(i)] =
        (1.0 - t) * xWx + t * (xWx - 2.0 * gWx + gWg);
  }
  return out;
}

OptimalityReport psi_values(const DesignMeasure& measure,
                            const InformationSummary& summary,
                            Criterion criterion) {
  OptimalityReport r;
  r.criterion = criterion;
  r.psi = psi_columns(measure.space().matrix(), summary, criterion);
  r.bound = psi_bound(summary, criterion);
  r.phi = phi(summary, criterion);
  double gap = -std::numeric_limits<double>::infinity();
  for (double v : r.psi) gap = std::max(gap, v - r.bound);
  r.max_gap = gap;
  r.delta_certificate = std::max(gap, 0.0);
  return r;
}

std::vector<double> class_psi_values(const InformationSummary& summary,
                                     Criterion criterion) {
  const Eigen::MatrixXd W = psi_kernel(summary, criterion);
  const int q = summary.q();
  std::vector<double> out(q);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(q);
  for (int j = 1; j <= q; ++j) {
    x[j - 1] = 1.0;
    out[j - 1] = psi_with_kernel(W, summary.g, summary.t, x);
  }
  return out;
}

OptimalityCheck check_optimal(const DesignMeasure& measure, double t,
                              Criterion criterion, double tol) {
  const auto summary = information(measure, t);
  OptimalityCheck out;
  if (summary.singular) return out;
  out.report = psi_values(measure, summary, criterion);
  out.optimal = out.report->max_gap <= tol;
  return out;
}

double directional_derivative(const DesignMeasure& p,
                              const DesignMeasure& p_tilde, double t,
                              Criterion criterion) {
  if (p.space_ptr() != p_tilde.space_ptr()) {
    throw DomainError("measures must share a design space");
  }
  const auto summary = information(p, t);
  const auto report = psi_values(p, summary, criterion);
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    d += p_tilde.mass(i) * (report.psi[i] - report.bound);
  }
  return d;
}

}  // namespace slsdesign
