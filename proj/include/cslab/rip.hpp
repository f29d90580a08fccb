#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cslab/ensembles.hpp"
#include "cslab/errors.hpp"
#include "cslab/linalg.hpp"
#include "cslab/support.hpp"

namespace cslab {

inline constexpr double kDefaultSupportBudget = 2e6;

enum class WitnessSide { Upper, Lower };

struct RipEntry {
  int m = 0;
  double delta = 0.0;
  std::vector<int> witness_support;   // 1-based
  WitnessSide witness_side = WitnessSide::Upper;
  bool exact = false;                 // exact scan vs sampled lower bound
  double supports_examined = 0.0;
};

/// Per-m isometry constants of A/sqrt(n) with witness supports. Exact
/// entries are nondecreasing in m by eigenvalue interlacing; the insert
/// path asserts it.
struct RipReport {
  std::size_t n = 0, N = 0;
  std::string spec;
  std::uint64_t seed = 0;
  std::string algorithm_id;
  std::map<int, RipEntry> entries;

  void insert(const RipEntry& e) {
    if (e.exact) {
      for (const auto& [m, prev] : entries) {
        if (!prev.exact) continue;
        if (m < e.m && prev.delta > e.delta + 1e-12)
          throw std::logic_error("RipReport: exact delta decreased in m");
        if (m > e.m && prev.delta + 1e-12 < e.delta)
          throw std::logic_error("RipReport: exact delta decreased in m");
      }
    }
    entries[e.m] = e;
  }
};

struct ChaosStats {
  int m = 0;
  double a_m = 0.0;                  // sup over unit m-sparse z of |Az|
  double b_m = 0.0;                  // sup |  |Az|^2 - sum z_i^2 |X_i|^2  |^(1/2)
  double c_m = 0.0;                  // max column norm, independent of m
  std::vector<int> witness_a;        // 1-based supports
  std::vector<int> witness_b;
};

namespace detail {

/// Full Gram table when affordable; per-support submatrices then cost
/// O(m^2) lookups instead of O(m^2 n) dot products.
class GramTable {
public:
  explicit GramTable(const Matrix& a) : a_(a) {
    if (a.cols() <= 2048) {
      full_ = Matrix(a.cols(), a.cols());
      for (std::size_t i = 0; i < a.cols(); ++i)
        for (std::size_t j = i; j < a.cols(); ++j) {
          double s = 0.0;
          for (std::size_t r = 0; r < a.rows(); ++r) s += a(r, i) * a(r, j);
          (*full_)(i, j) = s;
          (*full_)(j, i) = s;
        }
    }
  }

  Matrix submatrix(const std::vector<int>& e_1based) const {
    if (full_) {
      const std::size_t m = e_1based.size();
      Matrix g(m, m);
      for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = 0; q < m; ++q)
          g(p, q) = (*full_)(e_1based[p] - 1, e_1based[q] - 1);
      return g;
    }
    return gram_submatrix(a_, e_1based);
  }

  double diagonal(int i_1based) const {
    if (full_) return (*full_)(i_1based - 1, i_1based - 1);
    double s = 0.0;
    for (std::size_t r = 0; r < a_.rows(); ++r)
      s += a_(r, i_1based - 1) * a_(r, i_1based - 1);
    return s;
  }

private:
  const Matrix& a_;
  std::optional<Matrix> full_;
};

inline void require_support_budget(int N, int m, double budget, const char* who) {
  const double needed = binomial(N, m);
  if (needed > budget)
    throw BudgetError(std::string(who) + ": C(N,m) exceeds budget (required " +
                          std::to_string(needed) + ")",
                      needed, budget);
}

struct DeltaScanResult {
  double delta = 0.0;
  std::vector<int> witness;
  WitnessSide side = WitnessSide::Upper;
  double examined = 0.0;
};

inline void scan_delta_support(const GramTable& grams, double n, const std::vector<int>& e,
                               DeltaScanResult& best) {
  const auto eig = jacobi_symmetric_eigen(grams.submatrix(e), /*want_vectors=*/false);
  const double up = eig.eigenvalues.front() / n - 1.0;
  const double lo = 1.0 - eig.eigenvalues.back() / n;
  const double d = std::max(up, lo);
  best.examined += 1.0;
  if (d > best.delta || best.witness.empty()) {
    best.delta = d;
    best.witness = e;
    best.side = up >= lo ? WitnessSide::Upper : WitnessSide::Lower;
  }
}

} // namespace detail

/// Exact isometry constant of A/sqrt(n) at sparsity m: the maximum over
/// all size-m supports E of max(lmax(G_E)/n - 1, 1 - lmin(G_E)/n).
/// Supports of size < m need no separate scan: by Cauchy interlacing the
/// eigenvalue extremes of any principal submatrix lie inside those of the
/// containing size-m Gram, so the size-m maxima dominate.
inline RipEntry isometry_constant_exact(const SensingMatrix& a, int m,
                                        double budget = kDefaultSupportBudget) {
  if (m < 1 || static_cast<std::size_t>(m) > std::min(a.n, a.N))
    throw std::invalid_argument("isometry_constant_exact: need 1 <= m <= min(n,N)");
  detail::require_support_budget(static_cast<int>(a.N), m, budget, "isometry_constant_exact");

  detail::GramTable grams(a.entries);
  detail::DeltaScanResult best;
  for_each_support(static_cast<int>(a.N), m, [&](const std::vector<int>& e) {
    detail::scan_delta_support(grams, static_cast<double>(a.n), e, best);
    return true;
  });

  RipEntry entry;
  entry.m = m;
  entry.delta = best.delta;
  entry.witness_support = best.witness;
  entry.witness_side = best.side;
  entry.exact = true;
  entry.supports_examined = best.examined;
  return entry;
}

/// Monte Carlo lower bound: the same per-support maximum over `trials`
/// uniformly random supports. Never exceeds the exact value. When the
/// trial budget covers the whole support family the scan switches to
/// exhaustive enumeration, so the result then equals the exact constant.
inline RipEntry isometry_constant_sampled(const SensingMatrix& a, int m, long trials,
                                          RngStream& stream) {
  if (m < 1 || static_cast<std::size_t>(m) > std::min(a.n, a.N))
    throw std::invalid_argument("isometry_constant_sampled: need 1 <= m <= min(n,N)");
  if (trials < 1) throw std::invalid_argument("isometry_constant_sampled: trials must be >= 1");

  detail::GramTable grams(a.entries);
  detail::DeltaScanResult best;
  const double total = binomial(static_cast<int>(a.N), m);
  if (static_cast<double>(trials) >= total) {
    for_each_support(static_cast<int>(a.N), m, [&](const std::vector<int>& e) {
      detail::scan_delta_support(grams, static_cast<double>(a.n), e, best);
      return true;
    });
  } else {
    for (long t = 0; t < trials; ++t) {
      const auto e = sample_support(stream, static_cast<int>(a.N), m);
      detail::scan_delta_support(grams, static_cast<double>(a.n), e, best);
    }
  }

  RipEntry entry;
  entry.m = m;
  entry.delta = best.delta;
  entry.witness_support = best.witness;
  entry.witness_side = best.side;
  entry.exact = false;
  entry.supports_examined = best.examined;
  return entry;
}

/// A_m, B_m, C_m by exhaustive scan over size-m supports.
///
/// For z supported on E, |Az|^2 - sum_i z_i^2 |X_i|^2 = z^T (G_E - diag G_E) z,
/// and the supremum of |quadratic form| over the unit sphere is the
/// spectral norm, so B_m^2 = max_E || G_E - diag(G_E) ||. A_m^2 is the
/// max top eigenvalue of G_E; both maxima over size-m supports dominate
/// smaller supports (principal submatrices cannot enlarge either norm).
inline ChaosStats chaos_statistics(const SensingMatrix& a, int m,
                                   double budget = kDefaultSupportBudget) {
  if (m < 1 || static_cast<std::size_t>(m) > a.N)
    throw std::invalid_argument("chaos_statistics: need 1 <= m <= N");
  detail::require_support_budget(static_cast<int>(a.N), m, budget, "chaos_statistics");

  detail::GramTable grams(a.entries);
  ChaosStats st;
  st.m = m;
  double best_a = -1.0, best_b = -1.0;
  for_each_support(static_cast<int>(a.N), m, [&](const std::vector<int>& e) {
    Matrix g = grams.submatrix(e);
    const auto eig = jacobi_symmetric_eigen(g, false);
    if (eig.eigenvalues.front() > best_a) {
      best_a = eig.eigenvalues.front();
      st.witness_a = e;
    }
    for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) = 0.0;
    const double hollow = operator_norm_sym(g);
    if (hollow > best_b) {
      best_b = hollow;
      st.witness_b = e;
    }
    return true;
  });
  st.a_m = std::sqrt(std::max(0.0, best_a));
  st.b_m = std::sqrt(std::max(0.0, best_b));
  double cmax = 0.0;
  for (std::size_t i = 1; i <= a.N; ++i)
    cmax = std::max(cmax, a.column_sq_norm(static_cast<int>(i)));
  st.c_m = std::sqrt(cmax);
  return st;
}

/// Monte Carlo lower bound for B_m^2 evaluating the defining expression
/// | |Az|^2 - sum z_i^2 |X_i|^2 | directly from the columns (independent
/// of the spectral route used by chaos_statistics).
inline double sampled_bm_squared(const SensingMatrix& a, int m, long draws, RngStream& stream) {
  if (m < 1 || static_cast<std::size_t>(m) > a.N)
    throw std::invalid_argument("sampled_bm_squared: need 1 <= m <= N");
  double best = 0.0;
  Vector combo(a.n);
  for (long t = 0; t < draws; ++t) {
    const auto e = sample_support(stream, static_cast<int>(a.N), m);
    Vector z(e.size());
    double nrm = 0.0;
    do {
      for (auto& v : z) v = sample_gaussian(stream);
      nrm = norm2(z);
    } while (nrm == 0.0);
    for (auto& v : z) v /= nrm;

    std::fill(combo.begin(), combo.end(), 0.0);
    double diag_part = 0.0;
    for (std::size_t k = 0; k < e.size(); ++k) {
      const std::size_t col = static_cast<std::size_t>(e[k]) - 1;
      for (std::size_t i = 0; i < a.n; ++i) combo[i] += z[k] * a.entries(i, col);
      diag_part += z[k] * z[k] * a.column_sq_norm(e[k]);
    }
    best = std::max(best, std::abs(dot(combo, combo) - diag_part));
  }
  return best;
}

struct DecompositionCheck {
  int m = 0;
  double delta = 0.0;            // exact delta_m(A/sqrt(n))
  double bm_squared_over_n = 0.0;
  double h2_max_deviation = 0.0;
  double rhs = 0.0;              // bm_squared_over_n + h2_max_deviation
  bool holds = false;            // delta <= rhs + 1e-10
};

/// delta_m(A/sqrt n) <= B_m^2/n + max_i | |X_i|^2/n - 1 |.
inline DecompositionCheck rip_decomposition_check(const SensingMatrix& a, int m,
                                                  double budget = kDefaultSupportBudget) {
  DecompositionCheck chk;
  chk.m = m;
  chk.delta = isometry_constant_exact(a, m, budget).delta;
  const ChaosStats st = chaos_statistics(a, m, budget);
  chk.bm_squared_over_n = st.b_m * st.b_m / static_cast<double>(a.n);
  chk.h2_max_deviation = check_h2(a).h2_max_deviation;
  chk.rhs = chk.bm_squared_over_n + chk.h2_max_deviation;
  chk.holds = chk.delta <= chk.rhs + 1e-10;
  return chk;
}

/// Both sides of the half-split identity
///   sum_{i != j} <x_i, x_j> = 4 * 2^-K * sum_{E subset {1..K}} sum_{i in E, j notin E} <x_i, x_j>
/// by exhaustive enumeration; returns |lhs - rhs|.
inline double halfsplit_identity_check(const std::vector<Vector>& xs) {
  const std::size_t k = xs.size();
  if (k > 16) throw std::invalid_argument("halfsplit_identity_check: at most 16 vectors (2^K enumeration)");
  if (k == 0) return 0.0;

  Matrix pair(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) pair(i, j) = dot(xs[i], xs[j]);

  double lhs = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j) lhs += pair(i, j);

  double rhs_sum = 0.0;
  const std::uint64_t subsets = std::uint64_t{1} << k;
  for (std::uint64_t mask = 0; mask < subsets; ++mask)
    for (std::size_t i = 0; i < k; ++i) {
      if (!((mask >> i) & 1)) continue;
      for (std::size_t j = 0; j < k; ++j)
        if (!((mask >> j) & 1)) rhs_sum += pair(i, j);
    }
  const double rhs = 4.0 * rhs_sum / static_cast<double>(subsets);
  return std::abs(lhs - rhs);
}

/// Sufficient condition for exact m-sparse recovery: delta_2m(A/sqrt n)
/// strictly below sqrt(2) - 1. The boundary itself does not qualify.
inline bool candes_criterion(double delta_2m) {
  if (!(delta_2m >= 0.0)) throw std::invalid_argument("candes_criterion: delta must be >= 0");
  return delta_2m < std::sqrt(2.0) - 1.0;
}

} // namespace cslab
