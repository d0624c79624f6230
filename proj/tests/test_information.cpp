#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "slsdesign/analytic.hpp"
#include "slsdesign/combinatorics.hpp"
#include "slsdesign/errors.hpp"
#include "slsdesign/information.hpp"

using namespace slsdesign;

namespace {

std::vector<std::vector<int>> points_of(const DesignSpace& s) {
  std::vector<std::vector<int>> pts;
  for (const auto& p : s.points()) pts.push_back(p.coords);
  return pts;
}

DesignMeasure random_measure(const SpacePtr& s, std::mt19937_64& rng) {
  return DesignMeasure(s, oracle::dirichlet(rng, s->size()));
}

// Central moment of order k of the unit exponential, by composite Simpson.
double exponential_central_moment(int k) {
  const int n = 200000;
  const double upper = 80.0;
  const double h = upper / n;
  auto f = [k](double x) { return std::pow(x - 1.0, k) * std::exp(-x); };
  double s = f(0.0) + f(upper);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return s * h / 3.0;
}

}  // namespace

TEST_CASE("t from moments") {
  CHECK(moments_to_t(1.0, 0.0, 3.0) == 0.0);
  CHECK(moments_to_t(2.5, 0.0, 7.0) == 0.0);

  const double mu2 = exponential_central_moment(2);
  const double mu3 = exponential_central_moment(3);
  const double mu4 = exponential_central_moment(4);
  CHECK(mu2 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(mu3 == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(mu4 == doctest::Approx(9.0).epsilon(1e-9));
  CHECK(moments_to_t(mu2, mu3, mu4) == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(moments_to_t(1.0, 2.0, 9.0) == doctest::Approx(0.5).epsilon(1e-15));

  // 0.5^2 / (1 * (2 - 1))
  CHECK(moments_to_t(1.0, 0.5, 2.0) == doctest::Approx(0.25).epsilon(1e-15));
  const auto prof = ErrorMomentProfile::from_moments(1.0, 0.5, 2.0);
  CHECK(prof.t == doctest::Approx(0.25));

  CHECK_THROWS_AS(moments_to_t(0.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(moments_to_t(1.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(moments_to_t(1.0, 2.0, 2.0), DegenerateDistributionError);
}

TEST_CASE("q = 2 uniform measure has the published inverse") {
  auto s = enumerate_binary(2);
  auto p = uniform_measure(s);
  for (double t : {0.0, 0.3, 0.7, 0.95}) {
    const auto info = information(p, t);
    REQUIRE(info.inv_H);
    const double diag = 3.0 * (6.0 - 4.0 * t) / (9.0 - 8.0 * t);
    const double off = -3.0 * (3.0 - 4.0 * t) / (9.0 - 8.0 * t);
    CHECK((*info.inv_H)(0, 0) == doctest::Approx(diag).epsilon(1e-12));
    CHECK((*info.inv_H)(1, 1) == doctest::Approx(diag).epsilon(1e-12));
    CHECK((*info.inv_H)(0, 1) == doctest::Approx(off).epsilon(1e-12));
    const auto rep = psi_values(p, info, Criterion::D);
    for (double v : rep.psi) CHECK(v == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("t = 0 gives H = G and the matrices match a plain-loop oracle") {
  std::mt19937_64 rng(7);
  for (int q = 2; q <= 5; ++q) {
    auto s = enumerate_binary(q);
    const auto pts = points_of(*s);
    for (int rep = 0; rep < 5; ++rep) {
      auto p = random_measure(s, rng);
      const std::vector<double> m(p.masses().begin(), p.masses().end());
      CHECK((information(p, 0.0).H - information(p, 0.0).G).norm() == 0.0);
      for (double t : {0.0, 0.4, 0.9}) {
        const auto info = information(p, t);
        const auto ref = oracle::information(pts, m, t);
        for (int a = 0; a < q; ++a) {
          CHECK(info.g(a) == doctest::Approx(ref.g[a]).epsilon(1e-13));
          for (int b = 0; b < q; ++b) {
            CHECK(std::abs(info.H(a, b) - ref.H[a][b]) < 1e-13);
          }
        }
        for (auto c : {Criterion::D, Criterion::A}) {
          const bool is_a = c == Criterion::A;
          CHECK(phi(info, c) == doctest::Approx(oracle::phi(ref, is_a)).epsilon(1e-10));
          const auto r = psi_values(p, info, c);
          for (std::size_t i = 0; i < s->size(); ++i) {
            CHECK(r.psi[i] ==
                  doctest::Approx(oracle::psi(ref, pts[i], t, is_a)).epsilon(1e-10));
          }
        }
      }
    }
  }
}

TEST_CASE("identity information") {
  for (int q : {2, 5}) {
    const auto info =
        summarize(Eigen::MatrixXd::Identity(q, q), Eigen::VectorXd::Zero(q), 0.4);
    CHECK(phi(info, Criterion::D) == doctest::Approx(0.0));
    CHECK(phi(info, Criterion::A) == doctest::Approx(-q));
    CHECK(psi_bound(info, Criterion::D) == q);
    CHECK(psi_bound(info, Criterion::A) == doctest::Approx(q));
  }
}

TEST_CASE("singular information uses the sentinel") {
  auto s = enumerate_binary(3);
  std::vector<double> m(s->size(), 0.0);
  m[s->size() - 1] = 1.0;  // all mass on (1,1,1)
  DesignMeasure p(s, m);
  const auto info = information(p, 0.3);
  CHECK(info.singular);
  CHECK_FALSE(info.inv_H.has_value());
  CHECK(phi(info, Criterion::D) == -std::numeric_limits<double>::infinity());
  CHECK(phi(info, Criterion::A) == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(psi_values(p, info, Criterion::D), SingularityError);
  const auto chk = check_optimal(p, 0.3, Criterion::D);
  CHECK_FALSE(chk.optimal);
  CHECK_FALSE(chk.report.has_value());
  CHECK_THROWS_AS(directional_derivative(p, uniform_measure(s), 0.3, Criterion::A),
                  SingularityError);
}

TEST_CASE("class closed forms match enumeration") {
  std::mt19937_64 rng(11);
  for (int q = 2; q <= 8; ++q) {
    auto s = enumerate_binary(q);
    for (int rep = 0; rep < 3; ++rep) {
      auto w = oracle::dirichlet(rng, q);
      std::vector<double> pi(q);
      for (int j = 1; j <= q; ++j) pi[j - 1] = w[j - 1] / binomial(q, j);
      for (double t : {0.0, 0.5, 0.9}) {
        const auto a = information_from_classes(q, pi, t);
        const auto b = information(class_measure(s, pi), t);
        CHECK((a.G - b.G).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((a.g - b.g).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((a.H - b.H).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
  }
  const auto ev2 = information_from_classes(4, std::vector<double>{0, 1.0 / 6, 0, 0}, 0.3);
  CHECK((ev2.g - Eigen::VectorXd::Constant(4, 0.5)).norm() < 1e-15);
  const auto odd =
      information_from_classes(5, std::vector<double>{0, 0, 0.1, 0, 0}, 0.3);
  CHECK((odd.g - Eigen::VectorXd::Constant(5, 0.6)).norm() < 1e-15);
  CHECK_THROWS_AS(information_from_classes(4, std::vector<double>{0.5, 0, 0, 0}, 0.0),
                  InvalidMeasureError);
}

TEST_CASE("mass-weighted psi identities") {
  std::mt19937_64 rng(3);
  for (int q = 2; q <= 6; ++q) {
    auto s = enumerate_binary(q);
    for (int rep = 0; rep < 10; ++rep) {
      auto p = random_measure(s, rng);
      for (double t : {0.0, 0.25, 0.6, 0.95}) {
        const auto info = information(p, t);
        for (auto c : {Criterion::D, Criterion::A}) {
          const auto r = psi_values(p, info, c);
          double sum = 0.0;
          for (std::size_t i = 0; i < p.size(); ++i) sum += p.mass(i) * r.psi[i];
          CHECK(std::abs(sum - r.bound) <= 1e-9 * std::max(1.0, r.bound));
          CHECK(std::abs(directional_derivative(p, p, t, c)) <= 1e-9 * r.bound);
        }
      }
    }
  }
}

TEST_CASE("criteria are concave") {
  std::mt19937_64 rng(5);
  for (int q = 2; q <= 4; ++q) {
    auto s = enumerate_binary(q);
    for (int rep = 0; rep < 100; ++rep) {
      auto p = random_measure(s, rng);
      auto pt = random_measure(s, rng);
      const double t = std::uniform_real_distribution<double>(0.0, 0.99)(rng);
      for (auto c : {Criterion::D, Criterion::A}) {
        const double a = phi(information(p, t), c);
        const double b = phi(information(pt, t), c);
        for (int k = 1; k <= 9; ++k) {
          const double eps = k / 10.0;
          const double mid = phi(information(p.mix(pt, eps), t), c);
          CHECK(mid >= (1 - eps) * a + eps * b - 1e-9);
        }
      }
    }
  }
}

TEST_CASE("mixing adds a rank-one term to H") {
  std::mt19937_64 rng(9);
  for (int q = 2; q <= 5; ++q) {
    auto s = enumerate_binary(q);
    for (int rep = 0; rep < 20; ++rep) {
      auto p = random_measure(s, rng);
      auto pt = random_measure(s, rng);
      const double t = 0.7;
      const double eps = 0.3;
      const auto hp = information(p, t);
      const auto ht = information(pt, t);
      const auto hm = information(p.mix(pt, eps), t);
      const Eigen::VectorXd g0 = ht.g - hp.g;
      const Eigen::MatrixXd lhs = hm.H - (1 - eps) * hp.H - eps * ht.H;
      const Eigen::MatrixXd rhs = t * eps * (1 - eps) * g0 * g0.transpose();
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("directional derivative matches forward differences") {
  std::mt19937_64 rng(13);
  auto s = enumerate_binary(3);
  const double t = 0.4;
  for (int rep = 0; rep < 10; ++rep) {
    auto p = random_measure(s, rng);
    auto pt = random_measure(s, rng);
    for (auto c : {Criterion::D, Criterion::A}) {
      const double d = directional_derivative(p, pt, t, c);
      const double f0 = phi(information(p, t), c);
      auto fd = [&](double eps) {
        return (phi(information(p.mix(pt, eps), t), c) - f0) / eps;
      };
      const double scale = std::max(std::abs(d), 1e-3);
      CHECK(std::abs(fd(1e-4) - d) / scale < 1e-2);
      CHECK(std::abs(fd(1e-5) - d) / scale < 1e-3);
      CHECK(std::abs(fd(1e-6) - d) / scale < 1e-3);
      // Richardson: the O(eps) error cancels.
      const double rich = 2.0 * fd(5e-5) - fd(1e-4);
      CHECK(std::abs(rich - d) / scale < 1e-5);
    }
  }
}

TEST_CASE("optimality checks") {
  auto s2 = enumerate_binary(2);
  CHECK(check_optimal(uniform_measure(s2), 0.7, Criterion::D).optimal);

  auto s4 = enumerate_binary(4);
  const auto ev1 = analytic_measure(AnalyticKind::Ev1, s4);
  CHECK_FALSE(check_optimal(ev1, 0.9, Criterion::D).optimal);
  CHECK(check_optimal(ev1, 0.5, Criterion::D).optimal);

  auto s5 = enumerate_binary(5);
  const auto odd = analytic_measure(AnalyticKind::Odd, s5);
  for (auto c : {Criterion::D, Criterion::A}) {
    const auto chk = check_optimal(odd, 0.5, c);
    CHECK(chk.optimal);
    REQUIRE(chk.report);
    CHECK(chk.report->delta_certificate == doctest::Approx(0.0).epsilon(1e-9));
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 5; ++rep) {
      CHECK(directional_derivative(odd, random_measure(s5, rng), 0.5, c) <= 1e-9);
    }
  }
}

TEST_CASE("Hadamard-based measure has psi equal to squared norm") {
  auto [space, p] = example1_measure(6);
  for (double t : {0.0, 0.5, 0.9}) {
    const auto info = information(p, t);
    CHECK(info.g.norm() < 1e-15);
    CHECK((info.H - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(phi(info, Criterion::D) == doctest::Approx(0.0).epsilon(1e-12));
    for (auto c : {Criterion::D, Criterion::A}) {
      const auto r = psi_values(p, info, c);
      for (std::size_t i = 0; i < space->size(); ++i) {
        const double xx = space->matrix().col(static_cast<Eigen::Index>(i)).squaredNorm();
        CHECK(std::abs(r.psi[i] - xx) < 1e-10);
        CHECK(r.psi[i] <= 6.0 + 1e-10);
      }
    }
  }
}

TEST_CASE("criterion names") {
  CHECK(parse_criterion("D") == Criterion::D);
  CHECK(parse_criterion("A") == Criterion::A);
  CHECK(to_string(Criterion::A) == "A");
  CHECK_THROWS_AS(parse_criterion("E"), DomainError);
}
