#pragma once

// Small dense numeric kernels used by the thermodynamic layer. Context spaces
// are tiny (|A|^k states, at most a few thousand entries), so a minimal
// self-contained matrix type beats pulling in a linear-algebra dependency.

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace recur {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

inline double log_sum_exp2(double a, double b) {
  if (a == neg_inf) return b;
  if (b == neg_inf) return a;
  double m = a > b ? a : b;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Pairwise-tree log-sum-exp. The reduction order depends only on the input
// order, so results are bit-stable no matter how the values were produced.
inline double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return neg_inf;
  if (xs.size() == 1) return xs[0];
  std::size_t half = xs.size() / 2;
  return log_sum_exp2(log_sum_exp(xs.first(half)), log_sum_exp(xs.subspan(half)));
}

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  double& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  std::vector<double> apply(const std::vector<double>& v) const {
    std::vector<double> out(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) s += at(i, j) * v[j];
      out[i] = s;
    }
    return out;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

// Strong connectivity of the positivity pattern (Perron theory needs an
// irreducible matrix; reducible inputs are rejected by callers).
inline bool irreducible(const Matrix& m) {
  const std::size_t n = m.rows();
  auto reach_all = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        double w = forward ? m.at(u, v) : m.at(v, u);
        if (w > 0.0 && !seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
      }
    }
    for (char s : seen)
      if (!s) return false;
    return true;
  };
  return reach_all(true) && reach_all(false);
}

struct PerronResult {
  double value = 0.0;            // dominant eigenvalue
  std::vector<double> right;     // positive right eigenvector, sums to 1
};

// Power iteration targeting the Perron root of a nonnegative irreducible
// matrix. A diagonal shift by the largest entry makes the iteration immune to
// periodicity; the shift is subtracted back out exactly. Convergence is
// declared on the eigenvector (L1 change), not on the eigenvalue estimate:
// for stochastic matrices the sum-based eigenvalue is exact from the first
// step while the vector may still be far off.
inline PerronResult perron(const Matrix& m, double tol = 1e-15,
                           std::size_t max_iter = 1000000) {
  const std::size_t n = m.rows();
  if (n == 0 || m.cols() != n) throw std::invalid_argument("perron: bad shape");
  if (!irreducible(m)) throw std::invalid_argument("perron: reducible matrix");

  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m.at(i, j) > shift) shift = m.at(i, j);

  std::vector<double> v(n, 1.0 / static_cast<double>(n));
  for (std::size_t it = 0; it < max_iter; ++it) {
    std::vector<double> w = m.apply(v);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] += shift * v[i];
      sum += w[i];
    }
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] /= sum;
      delta += std::abs(w[i] - v[i]);
    }
    v = std::move(w);
    if (delta <= tol) return {sum - shift, std::move(v)};
  }
  throw std::runtime_error("perron: power iteration did not converge");
}

inline PerronResult perron_left(const Matrix& m, double tol = 1e-15) {
  return perron(m.transposed(), tol);
}

// Partial-pivot Gaussian elimination; solves A x = b for tiny systems.
inline std::vector<double> lu_solve(Matrix a, std::vector<double> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw std::invalid_argument("lu_solve: bad shape");
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a.at(r, col)) > std::abs(a.at(piv, col))) piv = r;
    if (a.at(piv, col) == 0.0) throw std::runtime_error("lu_solve: singular matrix");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a.at(piv, j), a.at(col, j));
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      double f = a.at(r, col) / a.at(col, col);
      if (f == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a.at(r, j) -= f * a.at(col, j);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a.at(i, j) * x[j];
    x[i] = s / a.at(i, i);
  }
  return x;
}

}  // namespace recur
