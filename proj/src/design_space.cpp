#include "slsdesign/design_space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "slsdesign/errors.hpp"

namespace slsdesign {

namespace {

constexpr double kMassSumTol = 1e-12;
constexpr double kClassSumTol = 1e-9;

std::string coord_key(std::span<const int> coords) {
  std::string key(coords.size(), '\0');
  for (std::size_t i = 0; i < coords.size(); ++i) {
    key[i] = static_cast<char>(coords[i] + 1);
  }
  return key;
}

// Calls visit(positions) for every j-subset of {0..q-1}, in lexicographic
// order of the sorted position lists.
template <typename Visit>
void for_each_combination(int q, int j, Visit&& visit) {
  std::vector<bool> chosen(q, false);
  std::fill(chosen.begin(), chosen.begin() + j, true);
  std::vector<int> positions;
  positions.reserve(j);
  do {
    positions.clear();
    for (int i = 0; i < q; ++i) {
      if (chosen[i]) positions.push_back(i);
    }
    visit(positions);
  } while (std::prev_permutation(chosen.begin(), chosen.end()));
}

}  // namespace

std::string_view to_string(SpaceKind kind) {
  return kind == SpaceKind::Binary ? "binary" : "chemical_balance";
}

int DesignPoint::weight() const {
  return static_cast<int>(
      std::count_if(coords.begin(), coords.end(), [](int c) { return c != 0; }));
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

DesignSpace::DesignSpace(int q, SpaceKind kind, std::vector<DesignPoint> points)
    : q_(q), kind_(kind), points_(std::move(points)) {
  const auto n = points_.size();
  matrix_.resize(q_, static_cast<Eigen::Index>(n));
  class_of_.resize(n);
  class_sizes_.assign(q_, 0);
  class_begin_.assign(q_, n);
  index_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = points_[i].coords;
    for (int r = 0; r < q_; ++r) matrix_(r, static_cast<Eigen::Index>(i)) = c[r];
    const int j = points_[i].weight();
    class_of_[i] = j;
    if (class_sizes_[j - 1] == 0) class_begin_[j - 1] = i;
    ++class_sizes_[j - 1];
    index_.emplace(coord_key(c), i);
  }
}

DesignSpace DesignSpace::binary(int q) {
  if (q < 2 || q > kMaxBinaryQ) {
    throw CapacityError("binary design space requires 2 <= q <= " +
                        std::to_string(kMaxBinaryQ) + ", got q = " +
                        std::to_string(q));
  }
  std::vector<DesignPoint> points;
  points.reserve((std::size_t{1} << q) - 1);
  for (int j = 1; j <= q; ++j) {
    for_each_combination(q, j, [&](const std::vector<int>& pos) {
      DesignPoint x{std::vector<int>(q, 0)};
      for (int p : pos) x.coords[p] = 1;
      points.push_back(std::move(x));
    });
  }
  return DesignSpace(q, SpaceKind::Binary, std::move(points));
}

DesignSpace DesignSpace::chemical_balance(int q) {
  if (q < 1 || q > kMaxChemicalBalanceQ) {
    throw CapacityError("chemical-balance design space requires 1 <= q <= " +
                        std::to_string(kMaxChemicalBalanceQ) + ", got q = " +
                        std::to_string(q));
  }
  std::vector<DesignPoint> points;
  for (int j = 1; j <= q; ++j) {
    for_each_combination(q, j, [&](const std::vector<int>& pos) {
      // +1 sorts before -1 at each position.
      for (unsigned s = 0; s < (1u << j); ++s) {
        DesignPoint x{std::vector<int>(q, 0)};
        for (int k = 0; k < j; ++k) {
          const bool negative = (s >> (j - 1 - k)) & 1u;
          x.coords[pos[k]] = negative ? -1 : 1;
        }
        points.push_back(std::move(x));
      }
    });
  }
  return DesignSpace(q, SpaceKind::ChemicalBalance, std::move(points));
}

std::optional<std::size_t> DesignSpace::index_of(std::span<const int> coords) const {
  if (static_cast<int>(coords.size()) != q_) return std::nullopt;
  auto it = index_.find(coord_key(coords));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SpacePtr enumerate_binary(int q) {
  return std::make_shared<const DesignSpace>(DesignSpace::binary(q));
}

SpacePtr enumerate_chemical_balance(int q) {
  return std::make_shared<const DesignSpace>(DesignSpace::chemical_balance(q));
}

DesignMeasure::DesignMeasure(SpacePtr space, std::vector<double> masses)
    : space_(std::move(space)), masses_(std::move(masses)) {
  if (!space_) throw InvalidMeasureError("design measure needs a design space");
  if (masses_.size() != space_->size()) {
    throw InvalidMeasureError("expected " + std::to_string(space_->size()) +
                              " masses, got " + std::to_string(masses_.size()));
  }
  double total = 0.0;
  for (double m : masses_) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw InvalidMeasureError("masses must be finite and nonnegative");
    }
    total += m;
  }
  if (std::abs(total - 1.0) > kMassSumTol) {
    throw InvalidMeasureError("masses sum to " + std::to_string(total) +
                              ", expected 1");
  }
}

DesignMeasure::DesignMeasure(SpacePtr space, std::vector<double> masses,
                             std::vector<double> class_masses)
    : space_(std::move(space)),
      masses_(std::move(masses)),
      class_masses_(std::move(class_masses)) {}

std::size_t DesignMeasure::support_size(double tol) const {
  return static_cast<std::size_t>(std::count_if(
      masses_.begin(), masses_.end(), [tol](double m) { return m > tol; }));
}

DesignMeasure DesignMeasure::mix(const DesignMeasure& other, double eps) const {
  if (other.space_ != space_) {
    throw DomainError("cannot mix measures defined on different design spaces");
  }
  std::vector<double> m(masses_.size());
  double total = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    m[i] = (1.0 - eps) * masses_[i] + eps * other.masses_[i];
    total += m[i];
  }
  for (double& v : m) v /= total;
  if (class_masses_ && other.class_masses_) {
    std::vector<double> pi(class_masses_->size());
    for (std::size_t j = 0; j < pi.size(); ++j) {
      pi[j] = ((1.0 - eps) * (*class_masses_)[j] + eps * (*other.class_masses_)[j]) /
              total;
    }
    return DesignMeasure(space_, std::move(m), std::move(pi));
  }
  return DesignMeasure(space_, std::move(m));
}

DesignMeasure uniform_measure(const SpacePtr& space) {
  const auto n = space->size();
  const double w = 1.0 / static_cast<double>(n);
  if (space->kind() == SpaceKind::Binary) {
    return class_measure(space, std::vector<double>(space->q(), w));
  }
  return DesignMeasure(space, std::vector<double>(n, w));
}

double class_mass_total(int q, std::span<const double> pi) {
  double total = 0.0;
  for (int j = 1; j <= q; ++j) total += binomial(q, j) * pi[j - 1];
  return total;
}

DesignMeasure class_measure(const SpacePtr& space, std::vector<double> pi) {
  if (space->kind() != SpaceKind::Binary) {
    throw InvalidMeasureError("class masses are defined for binary spaces only");
  }
  const int q = space->q();
  if (static_cast<int>(pi.size()) != q) {
    throw InvalidMeasureError("expected " + std::to_string(q) +
                              " class masses, got " + std::to_string(pi.size()));
  }
  for (double v : pi) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidMeasureError("class masses must be finite and nonnegative");
    }
  }
  const double total = class_mass_total(q, pi);
  if (std::abs(total - 1.0) > kClassSumTol) {
    throw InvalidMeasureError("sum_j n_j pi_j = " + std::to_string(total) +
                              ", expected 1");
  }
  std::vector<double> masses(space->size());
  for (std::size_t i = 0; i < masses.size(); ++i) {
    masses[i] = pi[space->class_of(i) - 1];
  }
  return DesignMeasure(space, std::move(masses), std::move(pi));
}

std::optional<std::vector<double>> collapse_to_classes(const DesignMeasure& measure,
                                                       double tol) {
  const auto& space = measure.space();
  if (space.kind() != SpaceKind::Binary) return std::nullopt;
  if (measure.class_masses()) return measure.class_masses();
  const int q = space.q();
  std::vector<double> pi(q);
  for (int j = 1; j <= q; ++j) {
    const auto begin = space.class_begin(j);
    const auto end = begin + space.class_sizes()[j - 1];
    double lo = measure.mass(begin);
    double hi = lo;
    double sum = 0.0;
    for (auto i = begin; i < end; ++i) {
      lo = std::min(lo, measure.mass(i));
      hi = std::max(hi, measure.mass(i));
      sum += measure.mass(i);
    }
    if (hi - lo > tol) return std::nullopt;
    pi[j - 1] = sum / static_cast<double>(end - begin);
  }
  return pi;
}

}  // namespace slsdesign
