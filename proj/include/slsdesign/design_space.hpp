#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace slsdesign {

enum class SpaceKind { Binary, ChemicalBalance };

std::string_view to_string(SpaceKind kind);

// A single design point x_i. Coordinates are 0/1 (binary) or -1/0/1
// (chemical balance) and never all zero.
struct DesignPoint {
  std::vector<int> coords;

  // Number of nonzero coordinates; the weight class j for binary points.
  int weight() const;
  bool operator==(const DesignPoint&) const = default;
};

inline constexpr int kMaxBinaryQ = 20;
inline constexpr int kMaxChemicalBalanceQ = 12;

// A finite design space. Points are grouped by weight ascending and, inside
// a weight class, ordered lexicographically by the positions of their
// nonzero entries (so for q = 2 the order is (1,0), (0,1), (1,1)).
// Immutable after construction; shared by measures through SpacePtr.
class DesignSpace {
 public:
  static DesignSpace binary(int q);
  static DesignSpace chemical_balance(int q);

  int q() const { return q_; }
  SpaceKind kind() const { return kind_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<DesignPoint>& points() const { return points_; }
  const DesignPoint& point(std::size_t i) const { return points_[i]; }

  // q x n matrix whose i-th column is x_i.
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  // Weight class (1..q) of point i.
  int class_of(std::size_t i) const { return class_of_[i]; }

  // n_j for j = 1..q, stored at index j - 1.
  const std::vector<std::size_t>& class_sizes() const { return class_sizes_; }

  // Index of the first point of class j (1..q); points of class j occupy
  // [class_begin(j), class_begin(j) + n_j).
  std::size_t class_begin(int j) const { return class_begin_[j - 1]; }

  std::optional<std::size_t> index_of(std::span<const int> coords) const;

 private:
  DesignSpace(int q, SpaceKind kind, std::vector<DesignPoint> points);

  int q_;
  SpaceKind kind_;
  std::vector<DesignPoint> points_;
  Eigen::MatrixXd matrix_;
  std::vector<int> class_of_;
  std::vector<std::size_t> class_sizes_;
  std::vector<std::size_t> class_begin_;
  std::unordered_map<std::string, std::size_t> index_;
};

using SpacePtr = std::shared_ptr<const DesignSpace>;

// All 2^q - 1 nonnull binary q-vectors. Throws CapacityError unless
// 2 <= q <= 20.
SpacePtr enumerate_binary(int q);

// All 3^q - 1 nonnull {-1, 0, 1} q-vectors. Throws CapacityError unless
// 1 <= q <= 12.
SpacePtr enumerate_chemical_balance(int q);

// Nonnegative masses on the points of a space, summing to one.
class DesignMeasure {
 public:
  // Validates nonnegativity and |sum - 1| <= 1e-12.
  DesignMeasure(SpacePtr space, std::vector<double> masses);

  const DesignSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  std::span<const double> masses() const { return masses_; }
  double mass(std::size_t i) const { return masses_[i]; }
  std::size_t size() const { return masses_.size(); }

  // Per-class masses pi_j when the measure is known to be class-symmetric.
  const std::optional<std::vector<double>>& class_masses() const {
    return class_masses_;
  }

  // Number of points carrying mass strictly above tol.
  std::size_t support_size(double tol = 0.0) const;

  // (1 - eps) * this + eps * other. Both must live on the same space.
  DesignMeasure mix(const DesignMeasure& other, double eps) const;

 private:
  friend DesignMeasure class_measure(const SpacePtr&, std::vector<double>);
  DesignMeasure(SpacePtr space, std::vector<double> masses,
                std::vector<double> class_masses);

  SpacePtr space_;
  std::vector<double> masses_;
  std::optional<std::vector<double>> class_masses_;
};

// Mass 1/n on every point.
DesignMeasure uniform_measure(const SpacePtr& space);

// Mass pi[j-1] on every point of class j. Requires a binary space, pi >= 0
// and sum_j n_j pi_j = 1 within 1e-9; throws InvalidMeasureError otherwise.
DesignMeasure class_measure(const SpacePtr& space, std::vector<double> pi);

// Returns pi when masses agree within tol inside every class, and nullopt
// when the measure is not class-symmetric.
std::optional<std::vector<double>> collapse_to_classes(
    const DesignMeasure& measure, double tol);

// sum_j n_j pi_j for a binary space of dimension q.
double class_mass_total(int q, std::span<const double> pi);

// Binomial coefficient C(n, k) as a double; exact for the sizes used here.
double binomial(int n, int k);

}  // namespace slsdesign
