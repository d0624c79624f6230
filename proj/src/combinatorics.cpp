#include "slsdesign/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "slsdesign/errors.hpp"
#include "slsdesign/information.hpp"

namespace slsdesign {

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

bool is_prime_power(int n) {
  if (n < 2) return false;
  int p = 2;
  while (n % p != 0) ++p;
  while (n % p == 0) n /= p;
  return n == 1;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Quadratic character modulo an odd prime p.
int legendre(int a, int p) {
  a = ((a % p) + p) % p;
  if (a == 0) return 0;
  std::int64_t r = 1;
  std::int64_t base = a;
  int e = (p - 1) / 2;
  while (e > 0) {
    if (e & 1) r = r * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

// Jacobsthal matrix Q_ij = chi(j - i).
Eigen::MatrixXi jacobsthal(int p) {
  Eigen::MatrixXi q(p, p);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) q(i, j) = legendre(j - i, p);
  }
  return q;
}

Eigen::MatrixXi sylvester(int order) {
  Eigen::MatrixXi h = Eigen::MatrixXi::Ones(1, 1);
  while (h.rows() < order) h = [&] {
    const auto n = h.rows();
    Eigen::MatrixXi d(2 * n, 2 * n);
    d << h, h, h, -h;
    return d;
  }();
  return h;
}

Eigen::MatrixXi paley1(int p) {
  // H = I + S with S = [[0, 1^T], [-1, Q]] skew-symmetric.
  const int n = p + 1;
  Eigen::MatrixXi s = Eigen::MatrixXi::Zero(n, n);
  s.block(0, 1, 1, p).setOnes();
  s.block(1, 0, p, 1).setConstant(-1);
  s.block(1, 1, p, p) = jacobsthal(p);
  return Eigen::MatrixXi::Identity(n, n) + s;
}

Eigen::MatrixXi paley2(int p) {
  // Symmetric conference matrix C; H = C (x) [[1,1],[1,-1]] + I (x) [[1,-1],[-1,-1]].
  const int n = p + 1;
  Eigen::MatrixXi c = Eigen::MatrixXi::Zero(n, n);
  c.block(0, 1, 1, p).setOnes();
  c.block(1, 0, p, 1).setOnes();
  c.block(1, 1, p, p) = jacobsthal(p);
  Eigen::MatrixXi h(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int v = c(i, j);
      if (v == 0) {
        h(2 * i, 2 * j) = 1;
        h(2 * i, 2 * j + 1) = -1;
        h(2 * i + 1, 2 * j) = -1;
        h(2 * i + 1, 2 * j + 1) = -1;
      } else {
        h(2 * i, 2 * j) = v;
        h(2 * i, 2 * j + 1) = v;
        h(2 * i + 1, 2 * j) = v;
        h(2 * i + 1, 2 * j + 1) = -v;
      }
    }
  }
  return h;
}

std::optional<Eigen::MatrixXi> construct(int order) {
  if (order < 1 || order > kMaxHadamardOrder) return std::nullopt;
  if (order > 2 && order % 4 != 0) return std::nullopt;
  if (is_power_of_two(order)) return sylvester(order);
  if (is_prime(order - 1) && (order - 1) % 4 == 3) return paley1(order - 1);
  if (order % 2 == 0) {
    const int p = order / 2 - 1;
    if (is_prime(p) && p % 4 == 1) return paley2(p);
    if (auto half = construct(order / 2)) {
      const auto n = half->rows();
      Eigen::MatrixXi d(2 * n, 2 * n);
      d << *half, *half, *half, -*half;
      return d;
    }
  }
  return std::nullopt;
}

void normalize(Eigen::MatrixXi& h) {
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    if (h(i, 0) < 0) h.row(i) *= -1;
  }
  for (Eigen::Index j = 0; j < h.cols(); ++j) {
    if (h(0, j) < 0) h.col(j) *= -1;
  }
}

// Base blocks {0} u QR and {0} u NR for prime v = 1 mod 4.
std::vector<std::vector<int>> residue_base_blocks(int v) {
  std::vector<int> qr{0};
  std::vector<int> nr{0};
  for (int a = 1; a < v; ++a) (legendre(a, v) == 1 ? qr : nr).push_back(a);
  return {qr, nr};
}

// Depth-first search for two k-subsets of Z_v, both containing 0, whose
// differences cover every nonzero residue exactly lambda times.
class BaseBlockSearch {
 public:
  BaseBlockSearch(int v, int k, int lambda, std::int64_t budget)
      : v_(v), k_(k), lambda_(lambda), budget_(budget), count_(v, 0) {}

  std::optional<std::vector<std::vector<int>>> run() {
    blocks_.assign(2, std::vector<int>{0});
    if (extend(0, 1)) return blocks_;
    return std::nullopt;
  }

 private:
  bool add(int b, int x) {
    bool ok = true;
    for (int y : blocks_[b]) {
      const int d1 = ((x - y) % v_ + v_) % v_;
      const int d2 = v_ - d1;
      count_[d1] += 1;
      count_[d2] += 1;
      ok = ok && count_[d1] <= lambda_ && count_[d2] <= lambda_;
    }
    blocks_[b].push_back(x);
    return ok;
  }

  void remove(int b) {
    const int x = blocks_[b].back();
    blocks_[b].pop_back();
    for (int y : blocks_[b]) {
      const int d1 = ((x - y) % v_ + v_) % v_;
      count_[d1] -= 1;
      count_[v_ - d1] -= 1;
    }
  }

  bool complete() const {
    for (int d = 1; d < v_; ++d) {
      if (count_[d] != lambda_) return false;
    }
    return true;
  }

  bool extend(int b, int next) {
    if (--budget_ < 0) return false;
    if (static_cast<int>(blocks_[b].size()) == k_) {
      if (b == 1) return complete();
      return extend(1, 1);
    }
    const int remaining = k_ - static_cast<int>(blocks_[b].size());
    for (int x = next; x <= v_ - remaining; ++x) {
      const bool ok = add(b, x);
      if (ok && extend(b, x + 1)) return true;
      remove(b);
      if (budget_ < 0) return false;
    }
    return false;
  }

  int v_;
  int k_;
  int lambda_;
  std::int64_t budget_;
  std::vector<int> count_;
  std::vector<std::vector<int>> blocks_;
};

Eigen::MatrixXi develop(int v, const std::vector<std::vector<int>>& base) {
  const int b = v * static_cast<int>(base.size());
  Eigen::MatrixXi n = Eigen::MatrixXi::Zero(v, b);
  int col = 0;
  for (const auto& block : base) {
    for (int shift = 0; shift < v; ++shift, ++col) {
      for (int x : block) n((x + shift) % v, col) = 1;
    }
  }
  return n;
}

std::optional<IncidenceMatrix> try_certify(Eigen::MatrixXi entries) {
  try {
    return IncidenceMatrix::certify(std::move(entries));
  } catch (const ConstructionError&) {
    return std::nullopt;
  }
}

void expect_params(const IncidenceMatrix& n, int q, int b, int r, int k,
                   int lambda) {
  if (n.q != q || n.b != b || n.r != r || n.k != k || n.lambda != lambda) {
    throw ConstructionError("constructed design has unexpected parameters");
  }
}

}  // namespace

bool is_hadamard(const Eigen::MatrixXi& h) {
  if (h.rows() != h.cols()) return false;
  if ((h.array().abs() != 1).any()) return false;
  const Eigen::MatrixXi gram = h * h.transpose();
  const auto w = static_cast<int>(h.rows());
  return gram == w * Eigen::MatrixXi::Identity(w, w);
}

HadamardMatrix hadamard(int order) {
  auto h = construct(order);
  if (!h) {
    throw UnsupportedOrderError("no Hadamard construction for order " +
                                std::to_string(order));
  }
  normalize(*h);
  if (!is_hadamard(*h)) {
    throw ConstructionError("Hadamard construction of order " +
                            std::to_string(order) + " failed verification");
  }
  return {order, std::move(*h), true};
}

bool hadamard_supported(int order) { return construct(order).has_value(); }

IncidenceMatrix IncidenceMatrix::certify(Eigen::MatrixXi entries) {
  const auto q = static_cast<int>(entries.rows());
  const auto b = static_cast<int>(entries.cols());
  if (q < 2 || b < 1) throw ConstructionError("incidence matrix is empty");
  if (((entries.array() != 0) && (entries.array() != 1)).any()) {
    throw ConstructionError("incidence matrix entries must be 0 or 1");
  }
  const Eigen::VectorXi col_sums = entries.colwise().sum().transpose();
  const Eigen::VectorXi row_sums = entries.rowwise().sum();
  const int k = col_sums(0);
  const int r = row_sums(0);
  if ((col_sums.array() != k).any()) throw ConstructionError("block sizes differ");
  if ((row_sums.array() != r).any()) throw ConstructionError("replications differ");
  const Eigen::MatrixXi concurrence = entries * entries.transpose();
  const int lambda = concurrence(0, 1);
  for (int i = 0; i < q; ++i) {
    for (int j = 0; j < q; ++j) {
      if (i != j && concurrence(i, j) != lambda) {
        throw ConstructionError("pairwise concurrences differ");
      }
    }
  }
  if (q * r != b * k || r * (k - 1) != lambda * (q - 1)) {
    throw ConstructionError("BIB parameter relations fail");
  }
  IncidenceMatrix n;
  n.q = q;
  n.b = b;
  n.r = r;
  n.k = k;
  n.lambda = lambda;
  n.entries = std::move(entries);
  return n;
}

IncidenceMatrix bib_d1(int m) {
  if (m < 2) throw DomainError("d1 requires m >= 2");
  const auto h = hadamard(4 * m).entries;
  // Symbols are the columns where the second row is -1; each later row
  // gives one block from its +1 positions on those columns.
  std::vector<int> symbols;
  for (int c = 0; c < 4 * m; ++c) {
    if (h(1, c) < 0) symbols.push_back(c);
  }
  const int q = 2 * m;
  const int b = 4 * m - 2;
  Eigen::MatrixXi n(q, b);
  for (int blk = 0; blk < b; ++blk) {
    for (int s = 0; s < q; ++s) n(s, blk) = h(blk + 2, symbols[s]) > 0 ? 1 : 0;
  }
  auto out = IncidenceMatrix::certify(std::move(n));
  expect_params(out, 2 * m, 4 * m - 2, 2 * m - 1, m, m - 1);
  return out;
}

IncidenceMatrix bib_d2(int s) {
  if (s < 1 || s > 4) throw DomainError("d2 requires 1 <= s <= 4");
  const int v = 4 * s + 1;
  if (!is_prime_power(v)) throw DomainError("d2 requires 4s+1 to be a prime power");
  const int k = 2 * s + 1;
  const int lambda = 2 * s + 1;
  std::optional<IncidenceMatrix> out;
  if (is_prime(v)) out = try_certify(develop(v, residue_base_blocks(v)));
  if (!out) {
    if (auto base = BaseBlockSearch(v, k, lambda, 50'000'000).run()) {
      out = try_certify(develop(v, *base));
    }
  }
  if (!out) {
    throw ConstructionError("no cyclic base blocks found for d2 with s = " +
                            std::to_string(s));
  }
  expect_params(*out, v, 8 * s + 2, 4 * s + 2, k, lambda);
  return std::move(*out);
}

IncidenceMatrix bib_d3(int s) {
  if (s < 0 || s > 4) throw DomainError("d3 requires 0 <= s <= 4");
  const auto h = hadamard(4 * s + 4).entries;
  const int v = 4 * s + 3;
  Eigen::MatrixXi n(v, v);
  for (int i = 0; i < v; ++i) {
    for (int j = 0; j < v; ++j) n(i, j) = h(i + 1, j + 1) < 0 ? 1 : 0;
  }
  auto out = IncidenceMatrix::certify(std::move(n));
  expect_params(out, v, v, 2 * s + 2, 2 * s + 2, s + 1);
  return out;
}

DesignMeasure measure_from_incidence(const IncidenceMatrix& n,
                                     const SpacePtr& space) {
  if (space->q() != n.q) {
    throw DomainError("incidence matrix has " + std::to_string(n.q) +
                      " rows but the space has q = " + std::to_string(space->q()));
  }
  std::vector<double> masses(space->size(), 0.0);
  std::vector<int> coords(n.q);
  for (int c = 0; c < n.b; ++c) {
    for (int r = 0; r < n.q; ++r) coords[r] = n.entries(r, c);
    const auto idx = space->index_of(coords);
    if (!idx) {
      throw DomainError("column " + std::to_string(c) + " is not a design point");
    }
    masses[*idx] += 1.0;
  }
  for (double& m : masses) m /= n.b;
  return DesignMeasure(space, std::move(masses));
}

HEquivalence verify_h_equivalence(const DesignMeasure& p_reduced,
                                  const DesignMeasure& p_full, double t) {
  if (p_reduced.space().q() != p_full.space().q()) {
    throw DomainError("measures must share the dimension q");
  }
  const auto a = information(p_reduced, t);
  const auto b = information(p_full, t);
  HEquivalence out;
  out.max_abs_diff = (a.H - b.H).cwiseAbs().maxCoeff();
  out.equivalent = out.max_abs_diff <= 1e-12;
  return out;
}

int example1_order(int q) {
  for (int w = q + 1; w <= kMaxHadamardOrder; ++w) {
    if (hadamard_supported(w)) return w;
  }
  throw UnsupportedOrderError("no supported Hadamard order >= " +
                              std::to_string(q + 1));
}

std::pair<SpacePtr, DesignMeasure> example1_measure(int q) {
  const int w = example1_order(q);
  const auto h = hadamard(w).entries;
  auto space = enumerate_chemical_balance(q);
  std::vector<double> masses(space->size(), 0.0);
  std::vector<int> coords(q);
  for (int c = 0; c < w; ++c) {
    for (int r = 0; r < q; ++r) coords[r] = h(r + 1, c);
    masses[*space->index_of(coords)] += 1.0 / w;
  }
  DesignMeasure p(space, std::move(masses));
  return {std::move(space), std::move(p)};
}

}  // namespace slsdesign
