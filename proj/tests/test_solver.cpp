#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "slsdesign/analytic.hpp"
#include "slsdesign/combinatorics.hpp"
#include "slsdesign/errors.hpp"
#include "slsdesign/solver.hpp"

using namespace slsdesign;

namespace {

std::vector<double> classes(const SolverResult& r) {
  auto pi = collapse_to_classes(r.measure, 1e-9);
  REQUIRE(pi);
  return *pi;
}

void check_rounded(const std::vector<double>& got, const std::vector<double>& want) {
  REQUIRE(got.size() >= want.size());
  for (std::size_t j = 0; j < want.size(); ++j) {
    INFO("class " << j + 1);
    CHECK(std::abs(got[j] - want[j]) <= 6e-5);
  }
}

}  // namespace

TEST_CASE("published optimal class masses") {
  auto s4 = enumerate_binary(4);
  const auto d = solve(s4, 0.9, Criterion::D);
  CHECK(d.converged);
  check_rounded(classes(d), {0.0444, 0.0778, 0.0778, 0.0444});

  const auto a = solve(s4, 0.5, Criterion::A);
  CHECK(a.converged);
  check_rounded(classes(a), {0.0000, 0.1535, 0.0197, 0.0000});

  auto s3 = enumerate_binary(3);
  const auto d3 = solve(s3, 0.9, Criterion::D);
  const auto a3 = solve(s3, 0.9, Criterion::A);
  check_rounded(classes(d3), {0.1667, 0.1111, 0.1667});
  check_rounded(classes(a3), {0.1667, 0.1111, 0.1667});
  for (int j = 0; j < 3; ++j) CHECK(std::abs(classes(d3)[j] - classes(a3)[j]) <= 1e-6);
}

TEST_CASE("terminal measures satisfy the stopping rule") {
  for (int q : {2, 3, 5}) {
    auto s = enumerate_binary(q);
    for (double t : {0.0, 0.6, 0.9}) {
      for (auto c : {Criterion::D, Criterion::A}) {
        const auto r = solve(s, t, c);
        REQUIRE(r.converged);
        const auto chk = check_optimal(r.measure, t, c, 1e-10 + 1e-12);
        CHECK(chk.optimal);
        CHECK(r.final_gap <= 1e-10);
        CHECK(r.phi == doctest::Approx(phi(information(r.measure, t), c)).epsilon(1e-12));
        REQUIRE_FALSE(r.trace.empty());
        CHECK(r.trace.back().iteration == r.iterations);
      }
    }
  }
}

TEST_CASE("one update conserves total mass") {
  std::mt19937_64 rng(21);
  for (int q = 2; q <= 6; ++q) {
    auto s = enumerate_binary(q);
    for (int rep = 0; rep < 10; ++rep) {
      DesignMeasure p(s, oracle::dirichlet(rng, s->size()));
      for (double t : {0.0, 0.5, 0.9}) {
        for (auto c : {Criterion::D, Criterion::A}) {
          const auto next = multiplicative_update(p, t, c);
          double sum = 0.0;
          for (double v : next) {
            CHECK(v >= 0.0);
            sum += v;
          }
          CHECK(std::abs(sum - 1.0) <= 1e-12);
        }
      }
    }
  }
  auto s = enumerate_binary(3);
  std::vector<double> m(s->size(), 0.0);
  m[0] = 1.0;
  CHECK_THROWS_AS(multiplicative_update(DesignMeasure(s, m), 0.2, Criterion::D),
                  SingularityError);
}

TEST_CASE("criterion increases along the iteration and the gap bounds the loss") {
  for (int q : {2, 4, 6, 8}) {
    auto s = enumerate_binary(q);
    for (double t : {0.0, 0.3, 0.6, 0.9}) {
      for (auto c : {Criterion::D, Criterion::A}) {
        // The terminal phi never exceeds the optimum, so the bound below
        // also holds against it when the run hits the iteration cap.
        const auto best = solve(s, t, c);
        DesignMeasure p = uniform_measure(s);
        double last = phi(information(p, t), c);
        for (int h = 0; h < 60; ++h) {
          const auto info = information(p, t);
          const auto rep = psi_values(p, info, c);
          // phi(optimum) - phi(p) <= max gap at every iterate.
          CHECK(best.phi - rep.phi <= rep.max_gap + 1e-12);
          p = DesignMeasure(s, multiplicative_update(p, t, c, true));
          const double now = phi(information(p, t), c);
          CHECK(now >= last - 1e-12);
          last = now;
        }
      }
    }
  }
}

TEST_CASE("full-space iteration keeps the class symmetry") {
  SolverConfig full;
  full.use_class_symmetry = false;
  for (auto [q, t, c] : {std::tuple{4, 0.9, Criterion::D}, std::tuple{5, 0.9, Criterion::A},
                         std::tuple{6, 0.8, Criterion::A}}) {
    auto s = enumerate_binary(q);
    const auto a = solve(s, t, c, full);
    const auto b = solve(s, t, c);
    CHECK(a.converged);
    auto pi = collapse_to_classes(a.measure, 1e-6);
    REQUIRE(pi);
    const auto pb = classes(b);
    for (int j = 0; j < q; ++j) CHECK(std::abs((*pi)[j] - pb[j]) <= 1e-6);
  }
}

TEST_CASE("t = 0 reproduces the ordinary least squares optimum") {
  auto s = enumerate_binary(4);
  const auto r = solve(s, 0.0, Criterion::D);
  REQUIRE(r.converged);
  const auto ev1 = analytic_measure(AnalyticKind::Ev1, s);
  CHECK(phi(information(ev1, 0.0), Criterion::D) - r.phi <= 1e-10);
  CHECK(r.phi - phi(information(ev1, 0.0), Criterion::D) <= 1e-12);
  check_rounded(classes(r), {0.0, 0.1, 0.1, 0.0});
}

TEST_CASE("efficiencies") {
  auto s4 = enumerate_binary(4);
  const auto ev1 = analytic_measure(AnalyticKind::Ev1, s4);
  const auto ev2 = analytic_measure(AnalyticKind::Ev2, s4);
  const auto d = solve(s4, 0.9, Criterion::D);
  CHECK(std::abs(efficiency(ev1, d.measure, 0.9, Criterion::D) - 0.9807) <= 5e-5);
  const auto a = solve(s4, 0.8, Criterion::A);
  CHECK(std::abs(efficiency(ev2, a.measure, 0.8, Criterion::A) - 0.9190) <= 5e-5);
  CHECK(efficiency(ev1, ev1, 0.4, Criterion::D) == 1.0);
  CHECK(efficiency(ev2, ev2, 0.4, Criterion::A) == 1.0);
  CHECK(relative_d_efficiency(ev1, ev1, 0.3) == 1.0);

  auto s6 = enumerate_binary(6);
  const auto p1 = measure_from_incidence(bib_d1(3), s6);
  const auto e6 = analytic_measure(AnalyticKind::Ev1, s6);
  CHECK(std::abs(relative_d_efficiency(p1, e6, 0.0) - 0.9927) <= 5e-5);
  auto s10 = enumerate_binary(10);
  const auto p10 = measure_from_incidence(bib_d1(5), s10);
  const auto e10 = analytic_measure(AnalyticKind::Ev1, s10);
  CHECK(std::abs(relative_d_efficiency(p10, e10, 0.9) - 0.9911) <= 5e-5);

  std::vector<double> m(s4->size(), 0.0);
  m[0] = 1.0;
  CHECK_THROWS_AS(efficiency(DesignMeasure(s4, m), ev1, 0.2, Criterion::D),
                  SingularityError);
  CHECK_THROWS_AS(efficiency(ev1, uniform_measure(enumerate_binary(3)), 0.2, Criterion::D),
                  DomainError);
}

TEST_CASE("running out of iterations is reported, not thrown") {
  SolverConfig cfg;
  cfg.max_iterations = 5;
  const auto r = solve(enumerate_binary(6), 0.9, Criterion::A, cfg);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 5);
  CHECK(r.final_gap > cfg.delta);
}

TEST_CASE("argument validation") {
  auto s = enumerate_binary(3);
  CHECK_THROWS_AS(solve(s, 1.0, Criterion::D), DomainError);
  CHECK_THROWS_AS(solve(s, -0.1, Criterion::D), DomainError);
  SolverConfig bad;
  bad.delta = 0.0;
  CHECK_THROWS_AS(solve(s, 0.1, Criterion::D, bad), DomainError);
  bad = {};
  bad.max_iterations = 0;
  CHECK_THROWS_AS(solve(s, 0.1, Criterion::D, bad), DomainError);
}

TEST_CASE("chemical balance spaces are solved on the full space") {
  auto s = enumerate_chemical_balance(3);
  const auto r = solve(s, 0.5, Criterion::D);
  CHECK(r.converged);
  // The Hadamard-based measure attains log det H = 0 here.
  CHECK(r.phi == doctest::Approx(0.0).epsilon(1e-9));
}
