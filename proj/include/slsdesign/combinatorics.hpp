#pragma once

#include <utility>

#include <Eigen/Dense>

#include "slsdesign/design_space.hpp"

namespace slsdesign {

inline constexpr int kMaxHadamardOrder = 48;

struct HadamardMatrix {
  int order = 0;
  Eigen::MatrixXi entries;  // +-1
  bool normalized = false;  // first row and first column all +1
};

// True when entries are +-1 and H H^T = w I exactly.
bool is_hadamard(const Eigen::MatrixXi& h);

// A normalized Hadamard matrix of the given order, from Sylvester doubling,
// Paley I (prime p = 3 mod 4, order p + 1), Paley II (prime p = 1 mod 4,
// order 2(p + 1)) or doubling of a smaller constructed matrix. Throws
// UnsupportedOrderError when no construction applies or order > 48.
HadamardMatrix hadamard(int order);

// True when hadamard(order) succeeds.
bool hadamard_supported(int order);

// q x b incidence matrix of a BIB(q, b, r, k, lambda) design; columns are
// blocks.
struct IncidenceMatrix {
  int q = 0;
  int b = 0;
  int r = 0;
  int k = 0;
  int lambda = 0;
  Eigen::MatrixXi entries;

  // Reads the parameters off a 0/1 matrix and checks every BIB axiom
  // (constant column sums k, row sums r, pairwise row products lambda,
  // qr = bk, r(k-1) = lambda(q-1)). Throws ConstructionError on failure.
  static IncidenceMatrix certify(Eigen::MatrixXi entries);
};

// BIB(2m, 4m-2, 2m-1, m, m-1) from a Hadamard matrix of order 4m, m >= 2.
IncidenceMatrix bib_d1(int m);

// BIB(4s+1, 8s+2, 4s+2, 2s+1, 2s+1) by cyclic development of two base
// blocks modulo 4s+1, 1 <= s <= 4.
IncidenceMatrix bib_d2(int s);

// BIB(4s+3, 4s+3, 2s+2, 2s+2, s+1) from the core of a Hadamard matrix of
// order 4s+4, 0 <= s <= 4.
IncidenceMatrix bib_d3(int s);

// Mass (multiplicity)/b on each distinct column of N. Throws DomainError
// when a column is not a point of the space.
DesignMeasure measure_from_incidence(const IncidenceMatrix& n,
                                     const SpacePtr& space);

struct HEquivalence {
  bool equivalent = false;
  double max_abs_diff = 0.0;
};

// H(p_reduced) against H(p_full), entrywise within 1e-12.
HEquivalence verify_h_equivalence(const DesignMeasure& p_reduced,
                                  const DesignMeasure& p_full, double t);

// Smallest w >= q + 1 with a supported Hadamard order.
int example1_order(int q);

// The chemical-balance space of dimension q and the measure with mass 1/w
// on each column of rows 2..q+1 of the normalized Hadamard matrix of
// order w. H of this measure is I_q for every t.
std::pair<SpacePtr, DesignMeasure> example1_measure(int q);

}  // namespace slsdesign
