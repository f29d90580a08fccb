#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cslab/errors.hpp"

namespace cslab {

using Vector = std::vector<double>;

/// Dense row-major matrix. Sized for desk-scale work (n <= a few
/// thousand); no view machinery, copies are cheap enough here.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  Vector column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  bool operator==(const Matrix& o) const = default;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

inline double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vector& a) { return std::sqrt(dot(a, a)); }

inline double norm1(const Vector& a) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  return s;
}

inline double norm_inf(const Vector& a) {
  double s = 0.0;
  for (double v : a) s = std::max(s, std::abs(v));
  return s;
}

/// y = M x
inline Vector matvec(const Matrix& m, const Vector& x) {
  Vector y(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

/// y = M^T x
inline Vector matvec_transposed(const Matrix& m, const Vector& x) {
  Vector y(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) y[j] += m(i, j) * x[i];
  return y;
}

/// Gram submatrix G[a][b] = <X_{E[a]}, X_{E[b]}> for 1-based column
/// indices E. Index sets crossing module boundaries are 1-based
/// throughout (they come from and go into reports as {1..N}).
inline Matrix gram_submatrix(const Matrix& a, const std::vector<int>& columns_1based) {
  if (columns_1based.empty()) throw std::invalid_argument("gram_submatrix: empty index set");
  const std::size_t m = columns_1based.size();
  for (int c : columns_1based)
    if (c < 1 || static_cast<std::size_t>(c) > a.cols())
      throw std::out_of_range("gram_submatrix: column index out of range");
  Matrix g(m, m);
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t q = p; q < m; ++q) {
      double s = 0.0;
      const std::size_t cp = static_cast<std::size_t>(columns_1based[p]) - 1;
      const std::size_t cq = static_cast<std::size_t>(columns_1based[q]) - 1;
      for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, cp) * a(i, cq);
      g(p, q) = s;
      g(q, p) = s;
    }
  }
  return g;
}

struct SymEigenResult {
  Vector eigenvalues;    // sorted descending
  Matrix eigenvectors;   // columns, aligned with eigenvalues
  int sweeps = 0;
};

/// Cyclic Jacobi eigendecomposition for symmetric dense matrices.
/// Sweeps until the off-diagonal Frobenius mass is <= 1e-12 * ||M||_F,
/// sweep cap 100. Input must be symmetric within 1e-12 * ||M||_F.
inline SymEigenResult jacobi_symmetric_eigen(const Matrix& m_in, bool want_vectors = true) {
  const std::size_t n = m_in.rows();
  if (n != m_in.cols()) throw std::invalid_argument("jacobi_symmetric_eigen: matrix not square");
  const double fro = m_in.frobenius_norm();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(m_in(i, j) - m_in(j, i)) > 1e-12 * std::max(fro, 1e-300))
        throw std::invalid_argument("jacobi_symmetric_eigen: matrix not symmetric");

  Matrix a = m_in;
  Matrix v = want_vectors ? Matrix::identity(n) : Matrix();
  const double off_tol = 1e-12 * fro;

  auto off_mass = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_mass() > off_tol) {
    if (++sweep > 100)
      throw ConvergenceError("jacobi_symmetric_eigen: sweep cap (100) exceeded");
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = a(r, p), arq = a(r, q);
            a(r, p) = arp - s * (arq + tau * arp);
            a(p, r) = a(r, p);
            a(r, q) = arq + s * (arp - tau * arq);
            a(q, r) = a(r, q);
          }
          if (want_vectors) {
            const double vrp = v(r, p), vrq = v(r, q);
            v(r, p) = vrp - s * (vrq + tau * vrp);
            v(r, q) = vrq + s * (vrp - tau * vrq);
          }
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  SymEigenResult res;
  res.sweeps = sweep;
  res.eigenvalues.resize(n);
  if (want_vectors) res.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    res.eigenvalues[k] = a(order[k], order[k]);
    if (want_vectors)
      for (std::size_t r = 0; r < n; ++r) res.eigenvectors(r, k) = v(r, order[k]);
  }
  return res;
}

/// Spectral norm max |eigenvalue| of a symmetric matrix.
inline double operator_norm_sym(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  const auto eig = jacobi_symmetric_eigen(m, /*want_vectors=*/false);
  return std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
}

struct NullspaceResult {
  std::vector<Vector> basis;   // orthonormal vectors spanning ker(A)
  std::size_t rank = 0;
  double sigma_max = 0.0;
  bool near_threshold_warning = false;  // some singular value within 10x of the rank cutoff
};

/// Orthonormal basis of ker(A) via Householder QR with column pivoting
/// applied to A^T; kernel = orthogonal complement of the row space. Rank
/// is decided at 1e-10 * sigma_max, with sigma_max taken from the Jacobi
/// spectrum of the smaller Gram matrix.
inline NullspaceResult nullspace_basis(const Matrix& a) {
  const std::size_t n = a.rows(), N = a.cols();
  NullspaceResult out;
  if (N == 0) return out;
  if (n == 0) {
    for (std::size_t j = 0; j < N; ++j) {
      Vector e(N, 0.0);
      e[j] = 1.0;
      out.basis.push_back(std::move(e));
    }
    return out;
  }

  {  // sigma_max via the smaller Gram
    const bool use_rows = n <= N;
    const std::size_t d = use_rows ? n : N;
    Matrix g(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i; j < d; ++j) {
        double s = 0.0;
        if (use_rows)
          for (std::size_t k = 0; k < N; ++k) s += a(i, k) * a(j, k);
        else
          for (std::size_t k = 0; k < n; ++k) s += a(k, i) * a(k, j);
        g(i, j) = s;
        g(j, i) = s;
      }
    const auto eig = jacobi_symmetric_eigen(g, false);
    out.sigma_max = std::sqrt(std::max(0.0, eig.eigenvalues.front()));
  }
  if (out.sigma_max == 0.0) {  // zero matrix
    for (std::size_t j = 0; j < N; ++j) {
      Vector e(N, 0.0);
      e[j] = 1.0;
      out.basis.push_back(std::move(e));
    }
    return out;
  }

  // Householder QR with column pivoting on T = A^T (N x n).
  Matrix t(N, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < N; ++j) t(j, i) = a(i, j);
  Matrix q = Matrix::identity(N);

  const std::size_t kmax = std::min(n, N);
  std::vector<std::size_t> col_of(n);
  std::iota(col_of.begin(), col_of.end(), 0);

  const double rank_tol = 1e-10 * out.sigma_max;
  std::size_t rank = 0;
  bool warn = false;

  for (std::size_t k = 0; k < kmax; ++k) {
    // pivot: remaining column with largest trailing norm
    std::size_t best = k;
    double best_norm = -1.0;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < N; ++i) s += t(i, j) * t(i, j);
      if (s > best_norm) {
        best_norm = s;
        best = j;
      }
    }
    if (best != k) {
      for (std::size_t i = 0; i < N; ++i) std::swap(t(i, k), t(i, best));
      std::swap(col_of[k], col_of[best]);
    }
    const double col_norm = std::sqrt(std::max(0.0, best_norm));
    if (col_norm <= rank_tol) {
      if (col_norm > 0.1 * rank_tol) warn = true;
      break;
    }
    if (col_norm <= 10.0 * rank_tol) warn = true;
    ++rank;

    // Householder reflector for column k below row k
    Vector w(N - k, 0.0);
    for (std::size_t i = k; i < N; ++i) w[i - k] = t(i, k);
    const double alpha = (w[0] >= 0.0 ? -1.0 : 1.0) * col_norm;
    w[0] -= alpha;
    double wn = 0.0;
    for (double x : w) wn += x * x;
    if (wn == 0.0) continue;

    for (std::size_t j = k; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < N; ++i) s += w[i - k] * t(i, j);
      const double f = 2.0 * s / wn;
      for (std::size_t i = k; i < N; ++i) t(i, j) -= f * w[i - k];
    }
    for (std::size_t j = 0; j < N; ++j) {
      double s = 0.0;
      for (std::size_t i = k; i < N; ++i) s += w[i - k] * q(j, i);
      const double f = 2.0 * s / wn;
      for (std::size_t i = k; i < N; ++i) q(j, i) -= f * w[i - k];
    }
  }

  out.rank = rank;
  out.near_threshold_warning = warn;
  for (std::size_t j = rank; j < N; ++j) out.basis.push_back(q.column(j));
  return out;
}

} // namespace cslab
