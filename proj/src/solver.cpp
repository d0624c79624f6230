#include "slsdesign/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "slsdesign/errors.hpp"

namespace slsdesign {

namespace {

InformationSummary information_from_masses(const Eigen::MatrixXd& X,
                                           const std::vector<double>& p,
                                           double t) {
  const Eigen::Map<const Eigen::VectorXd> w(p.data(), static_cast<Eigen::Index>(p.size()));
  Eigen::VectorXd g = X * w;
  Eigen::MatrixXd G = X * w.asDiagonal() * X.transpose();
  return summarize(std::move(G), std::move(g), t);
}

// Masses are weighted by `multiplicity` when summing (n_j in class mode).
struct Iterate {
  std::vector<double> masses;
  std::vector<double> multiplicity;

  double total() const {
    double s = 0.0;
    for (std::size_t i = 0; i < masses.size(); ++i) s += multiplicity[i] * masses[i];
    return s;
  }
};

template <typename Evaluate>
SolverResult run(const SpacePtr& space, Criterion criterion,
                 const SolverConfig& config, Iterate it, bool class_mode,
                 Evaluate&& evaluate) {
  SolverResult result{uniform_measure(space), 0, 0.0, 0.0, false, {}};
  std::int64_t h = 0;
  double gap = std::numeric_limits<double>::infinity();
  double phi_value = -std::numeric_limits<double>::infinity();
  for (;; ++h) {
    const auto [summary, psi] = evaluate(it.masses);
    if (summary.singular) {
      if (h == 0) {
        throw SingularStartError("H is singular at the uniform starting measure");
      }
      break;
    }
    const double bound = psi_bound(summary, criterion);
    gap = *std::max_element(psi.begin(), psi.end()) - bound;
    phi_value = phi(summary, criterion);
    const bool done = gap <= config.delta || h >= config.max_iterations;
    if (config.trace_every > 0 && (h % config.trace_every == 0 || done)) {
      result.trace.push_back({h, phi_value, gap});
    }
    if (done) break;
    for (std::size_t i = 0; i < it.masses.size(); ++i) {
      it.masses[i] = std::max(it.masses[i] * psi[i] / bound, config.mass_floor);
    }
    if (config.renormalize_each_step || config.mass_floor > 0.0) {
      const double s = it.total();
      for (double& m : it.masses) m /= s;
    }
  }

  const double s = it.total();
  for (double& m : it.masses) m /= s;
  result.measure = class_mode ? class_measure(space, std::move(it.masses))
                              : DesignMeasure(space, std::move(it.masses));
  result.iterations = h;
  result.final_gap = gap;
  result.phi = phi_value;
  result.converged = gap <= config.delta;
  return result;
}

}  // namespace

void SolverConfig::validate() const {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  if (max_iterations < 1) throw DomainError("max_iterations must be at least 1");
  if (!(mass_floor >= 0.0)) throw DomainError("mass_floor must be nonnegative");
}

SolverResult solve(const SpacePtr& space, double t, Criterion criterion,
                   const SolverConfig& config) {
  config.validate();
  if (!(t >= 0.0 && t < 1.0)) {
    throw DomainError("t must lie in [0, 1), got " + std::to_string(t));
  }
  const int q = space->q();
  const double n = static_cast<double>(space->size());

  if (space->kind() == SpaceKind::Binary && config.use_class_symmetry) {
    Iterate start{std::vector<double>(q, 1.0 / n), std::vector<double>(q)};
    for (int j = 1; j <= q; ++j) start.multiplicity[j - 1] = binomial(q, j);
    return run(space, criterion, config, std::move(start), true,
               [&](const std::vector<double>& pi) {
                 auto s = information_from_classes(q, pi, t);
                 std::vector<double> psi;
                 if (!s.singular) psi = class_psi_values(s, criterion);
                 return std::pair{std::move(s), std::move(psi)};
               });
  }

  const auto& X = space->matrix();
  Iterate start{std::vector<double>(space->size(), 1.0 / n),
                std::vector<double>(space->size(), 1.0)};
  return run(space, criterion, config, std::move(start), false,
             [&](const std::vector<double>& p) {
               auto s = information_from_masses(X, p, t);
               std::vector<double> psi;
               if (!s.singular) psi = psi_columns(X, s, criterion);
               return std::pair{std::move(s), std::move(psi)};
             });
}

std::vector<double> multiplicative_update(const DesignMeasure& measure, double t,
                                          Criterion criterion, bool renormalize) {
  const auto summary = information(measure, t);
  const auto report = psi_values(measure, summary, criterion);
  std::vector<double> next(measure.size());
  for (std::size_t i = 0; i < next.size(); ++i) {
    next[i] = measure.mass(i) * report.psi[i] / report.bound;
  }
  if (renormalize) {
    const double s = std::accumulate(next.begin(), next.end(), 0.0);
    for (double& m : next) m /= s;
  }
  return next;
}

double efficiency(const DesignMeasure& candidate,
                  const DesignMeasure& reference_optimal, double t,
                  Criterion criterion) {
  if (candidate.space().q() != reference_optimal.space().q() ||
      candidate.size() != reference_optimal.size()) {
    throw DomainError("measures must live on the same design space");
  }
  const auto hc = information(candidate, t);
  const auto hr = information(reference_optimal, t);
  if (hc.singular || hr.singular) {
    throw SingularityError("efficiency requires nonsingular H for both measures");
  }
  if (criterion == Criterion::D) {
    return std::exp((*hc.log_det_H - *hr.log_det_H) / hc.q());
  }
  return hr.trace_inv_H() / hc.trace_inv_H();
}

double relative_d_efficiency(const DesignMeasure& p1, const DesignMeasure& p2,
                             double t) {
  return efficiency(p1, p2, t, Criterion::D);
}

}  // namespace slsdesign
