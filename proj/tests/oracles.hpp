#pragma once

// Reference computations for the tests. These use plain loops and Gaussian
// elimination so they share no code path with the library.

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

inline Mat zeros(int q) { return Mat(q, Vec(q, 0.0)); }

inline Mat identity(int q) {
  Mat m = zeros(q);
  for (int i = 0; i < q; ++i) m[i][i] = 1.0;
  return m;
}

struct Info {
  Mat G;
  Vec g;
  Mat H;
};

inline Info information(const std::vector<std::vector<int>>& points, const Vec& p,
                        double t) {
  const int q = static_cast<int>(points.front().size());
  Info out{zeros(q), Vec(q, 0.0), zeros(q)};
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (int a = 0; a < q; ++a) {
      out.g[a] += p[i] * points[i][a];
      for (int b = 0; b < q; ++b) out.G[a][b] += p[i] * points[i][a] * points[i][b];
    }
  }
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) out.H[a][b] = out.G[a][b] - t * out.g[a] * out.g[b];
  }
  return out;
}

// Gauss-Jordan with partial pivoting; also returns log|det|.
inline Mat inverse(Mat a, double* log_det = nullptr) {
  const int n = static_cast<int>(a.size());
  Mat inv = identity(n);
  double ld = 0.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    }
    std::swap(a[c], a[piv]);
    std::swap(inv[c], inv[piv]);
    const double d = a[c][c];
    ld += std::log(std::abs(d));
    for (int k = 0; k < n; ++k) {
      a[c][k] /= d;
      inv[c][k] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a[r][c];
      for (int k = 0; k < n; ++k) {
        a[r][k] -= f * a[c][k];
        inv[r][k] -= f * inv[c][k];
      }
    }
  }
  if (log_det) *log_det = ld;
  return inv;
}

inline Mat multiply(const Mat& a, const Mat& b) {
  const std::size_t n = a.size();
  Mat c(n, Vec(b.front().size(), 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      for (std::size_t j = 0; j < b.front().size(); ++j) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

inline double quad(const Mat& m, const Vec& x) {
  double s = 0.0;
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = 0; b < x.size(); ++b) s += x[a] * m[a][b] * x[b];
  }
  return s;
}

inline double trace(const Mat& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) s += m[i][i];
  return s;
}

// psi_D (a = false) or psi_A (a = true) at one point.
inline double psi(const Info& info, const std::vector<int>& x, double t, bool a) {
  Mat m = inverse(info.H);
  if (a) m = multiply(m, m);
  Vec xv(x.begin(), x.end());
  Vec xc(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xc[i] = x[i] - info.g[i];
  return (1.0 - t) * quad(m, xv) + t * quad(m, xc);
}

inline double phi(const Info& info, bool a) {
  double ld = 0.0;
  Mat inv = inverse(info.H, &ld);
  return a ? -trace(inv) : ld;
}

// Uniform point on the simplex of dimension n.
inline Vec dirichlet(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  Vec p(n);
  double s = 0.0;
  for (auto& v : p) s += (v = e(rng));
  for (auto& v : p) v /= s;
  return p;
}

// Published table values.
inline const double kTable1[10] = {0.5774, 0.5858, 0.5950, 0.6051, 0.6162,
                                   0.6285, 0.6423, 0.6580, 0.6758, 0.6948};

}  // namespace oracle
