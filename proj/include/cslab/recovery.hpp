#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cslab/ensembles.hpp"
#include "cslab/errors.hpp"
#include "cslab/linalg.hpp"
#include "cslab/rng.hpp"
#include "cslab/simplex.hpp"
#include "cslab/support.hpp"

namespace cslab {

inline constexpr double kDefaultSignedBudget = 1e6;
inline constexpr double kRecoveryTol = 1e-7;

struct RecoveryOutcome {
  Vector solution;               // N-vector returned by the program
  bool success = false;          // linf_error <= kRecoveryTol * max(1, ||z||_inf)
  double linf_error = 0.0;
  double l1_objective = 0.0;
  bool l1_minimality_ok = true;  // ||t||_1 <= ||z||_1 + 1e-8 whenever y = Az
  LpStatus lp_status = LpStatus::NumericalBreakdown;
  int lp_iterations = 0;
  double lp_residual = 0.0;
};

/// Program (P): min ||t||_1 subject to A t = y, encoded as t = u - v with
/// u, v >= 0. Infeasibility (y outside the range of A) surfaces in
/// lp_status rather than as an exception.
inline RecoveryOutcome basis_pursuit(const SensingMatrix& a, const Vector& y) {
  if (y.size() != a.n) throw std::invalid_argument("basis_pursuit: y must have n entries");
  const std::size_t N = a.N;
  LinearProgram lp;
  lp.constraints = Matrix(a.n, 2 * N);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      lp.constraints(i, j) = a.entries(i, j);
      lp.constraints(i, N + j) = -a.entries(i, j);
    }
  lp.rhs = y;
  lp.objective.assign(2 * N, 1.0);

  const LpSolution sol = solve_lp(lp);
  RecoveryOutcome out;
  out.lp_status = sol.status;
  out.lp_iterations = sol.iterations;
  out.lp_residual = sol.max_primal_residual;
  out.solution.assign(N, 0.0);
  if (sol.status != LpStatus::Optimal) return out;
  for (std::size_t j = 0; j < N; ++j) out.solution[j] = sol.x[j] - sol.x[N + j];
  out.l1_objective = sol.objective;
  return out;
}

/// Runs (P) on y = A z and declares success iff the minimizer returns to
/// z in sup norm. Also verifies the sanity bound ||t||_1 <= ||z||_1 + 1e-8
/// (z itself is feasible, so a larger objective means a solver defect).
inline RecoveryOutcome exact_recovery_trial(const SensingMatrix& a, const Vector& z) {
  if (z.size() != a.N) throw std::invalid_argument("exact_recovery_trial: z must have N entries");
  const Vector y = matvec(a.entries, z);
  RecoveryOutcome out = basis_pursuit(a, y);
  if (out.lp_status != LpStatus::Optimal) {
    out.success = false;
    return out;
  }
  double err = 0.0;
  for (std::size_t j = 0; j < a.N; ++j) err = std::max(err, std::abs(out.solution[j] - z[j]));
  out.linf_error = err;
  out.success = err <= kRecoveryTol * std::max(1.0, norm_inf(z));
  out.l1_minimality_ok = out.l1_objective <= norm1(z) + 1e-8;
  if (!out.l1_minimality_ok) out.success = false;
  return out;
}

struct DecodeResult {
  Vector x;                // n-vector
  double residual_l1 = 0.0;
  LpStatus lp_status = LpStatus::NumericalBreakdown;
  int lp_iterations = 0;
};

/// Program (P'): min over t in R^n of || y - A^T t ||_1, the l1 decoder
/// for measurements y_i = <X_i, x0> corrupted in a few coordinates.
/// Encoded with residual splits: A^T t + r+ - r- = y, minimize sum(r+ + r-).
inline DecodeResult decode_l1(const SensingMatrix& a, const Vector& y) {
  if (y.size() != a.N) throw std::invalid_argument("decode_l1: y must have N entries");
  const std::size_t n = a.n, N = a.N;
  LinearProgram lp;
  lp.constraints = Matrix(N, 2 * n + 2 * N);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      lp.constraints(i, j) = a.entries(j, i);        // (A^T)_{ij}
      lp.constraints(i, n + j) = -a.entries(j, i);
    }
    lp.constraints(i, 2 * n + i) = 1.0;
    lp.constraints(i, 2 * n + N + i) = -1.0;
  }
  lp.rhs = y;
  lp.objective.assign(2 * n + 2 * N, 0.0);
  for (std::size_t i = 0; i < 2 * N; ++i) lp.objective[2 * n + i] = 1.0;

  const LpSolution sol = solve_lp(lp);
  DecodeResult out;
  out.lp_status = sol.status;
  out.lp_iterations = sol.iterations;
  out.x.assign(n, 0.0);
  if (sol.status != LpStatus::Optimal) return out;
  for (std::size_t j = 0; j < n; ++j) out.x[j] = sol.x[j] - sol.x[n + j];
  out.residual_l1 = sol.objective;
  return out;
}

enum class CertificateClass { Certified, Failed, Indeterminate, RankDeficient };

inline const char* to_string(CertificateClass c) {
  switch (c) {
    case CertificateClass::Certified: return "certified";
    case CertificateClass::Failed: return "failed";
    case CertificateClass::Indeterminate: return "indeterminate";
    case CertificateClass::RankDeficient: return "rank_deficient";
  }
  return "?";
}

struct DualCertificate {
  double gamma = 0.0;   // min over w with (A_E)^T w = s of ||(A_{E^c})^T w||_inf
  CertificateClass classification = CertificateClass::Indeterminate;
  Vector w;             // optimal functional
  LpStatus lp_status = LpStatus::NumericalBreakdown;
  int lp_iterations = 0;
};

/// gamma < 1 certifies that every vector with sign pattern S is the
/// unique minimizer of (P); gamma > 1 certifies failure. The measure-zero
/// boundary is declared Indeterminate and left to direct trials.
/// Rank deficiency of A_E (checked through the Gram spectrum at the
/// 1e-10 relative threshold) already implies non-uniqueness.
inline DualCertificate dual_certificate_value(const SensingMatrix& a, const SignedSupport& s) {
  validate(s, static_cast<int>(a.N));
  DualCertificate cert;

  {  // columns A_E must be linearly independent
    const Matrix g = gram_submatrix(a.entries, s.indices);
    const auto eig = jacobi_symmetric_eigen(g, false);
    const double lmax = std::max(0.0, eig.eigenvalues.front());
    if (eig.eigenvalues.back() <= 1e-20 * lmax || lmax == 0.0) {
      cert.classification = CertificateClass::RankDeficient;
      return cert;
    }
  }

  const std::size_t n = a.n, N = a.N, k = s.size();
  std::vector<int> off;  // 1-based complement
  {
    std::size_t pos = 0;
    for (int j = 1; j <= static_cast<int>(N); ++j) {
      if (pos < k && s.indices[pos] == j) {
        ++pos;
        continue;
      }
      off.push_back(j);
    }
  }

  // Variables: w (free, 2n), gamma (1), slacks (2 |off|).
  // Rows: (A_E)^T w = s, then <X_j,w> - gamma + slack = 0 and
  // -<X_j,w> - gamma + slack = 0 for off-support j.
  const std::size_t rows = k + 2 * off.size();
  const std::size_t cols = 2 * n + 1 + 2 * off.size();
  LinearProgram lp;
  lp.constraints = Matrix(rows, cols);
  lp.rhs.assign(rows, 0.0);
  lp.objective.assign(cols, 0.0);
  lp.objective[2 * n] = 1.0;

  for (std::size_t e = 0; e < k; ++e) {
    const std::size_t col = static_cast<std::size_t>(s.indices[e]) - 1;
    for (std::size_t i = 0; i < n; ++i) {
      lp.constraints(e, i) = a.entries(i, col);
      lp.constraints(e, n + i) = -a.entries(i, col);
    }
    lp.rhs[e] = static_cast<double>(s.signs[e]);
  }
  for (std::size_t t = 0; t < off.size(); ++t) {
    const std::size_t col = static_cast<std::size_t>(off[t]) - 1;
    const std::size_t r1 = k + 2 * t, r2 = k + 2 * t + 1;
    for (std::size_t i = 0; i < n; ++i) {
      lp.constraints(r1, i) = a.entries(i, col);
      lp.constraints(r1, n + i) = -a.entries(i, col);
      lp.constraints(r2, i) = -a.entries(i, col);
      lp.constraints(r2, n + i) = a.entries(i, col);
    }
    lp.constraints(r1, 2 * n) = -1.0;
    lp.constraints(r2, 2 * n) = -1.0;
    lp.constraints(r1, 2 * n + 1 + 2 * t) = 1.0;
    lp.constraints(r2, 2 * n + 1 + 2 * t + 1) = 1.0;
  }

  const LpSolution sol = solve_lp(lp);
  cert.lp_status = sol.status;
  cert.lp_iterations = sol.iterations;
  if (sol.status != LpStatus::Optimal) return cert;  // Indeterminate stands

  cert.gamma = sol.objective;
  cert.w.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) cert.w[i] = sol.x[i] - sol.x[n + i];
  if (cert.gamma < 1.0 - lp_tolerances::kReducedCost)
    cert.classification = CertificateClass::Certified;
  else if (cert.gamma > 1.0 + lp_tolerances::kReducedCost)
    cert.classification = CertificateClass::Failed;
  else
    cert.classification = CertificateClass::Indeterminate;
  return cert;
}

struct SparseRecoveryFailure {
  SignedSupport support;
  CertificateClass classification = CertificateClass::Failed;
  double gamma = 0.0;
  std::string reason;
};

struct SparseRecoveryReport {
  bool pass = false;
  int m = 0;
  double signed_supports_examined = 0.0;
  long certified = 0;
  long indeterminate_resolved = 0;
  std::vector<SparseRecoveryFailure> failures;
};

namespace detail {

inline double signed_budget_total(int N, int m, bool with_signs) {
  double total = 0.0;
  for (int k = 1; k <= m; ++k)
    total += binomial(N, k) * (with_signs ? std::pow(2.0, k) : 1.0);
  return total;
}

/// 20 randomized direct trials with magnitudes log-uniform over
/// [1e-3, 1e3]; used to resolve boundary certificates.
inline bool resolve_by_trials(const SensingMatrix& a, const SignedSupport& s,
                              RngStream& stream) {
  for (int t = 0; t < 20; ++t) {
    Vector z(a.N, 0.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double mag = std::pow(10.0, stream.uniform01() * 6.0 - 3.0);
      z[static_cast<std::size_t>(s.indices[i]) - 1] = s.signs[i] * mag;
    }
    if (!exact_recovery_trial(a, z).success) return false;
  }
  return true;
}

} // namespace detail

/// Iterates every signed support of size <= m; each must be certified
/// (indeterminate entries fall back to randomized trials). Exhaustive
/// and deterministic; the failure list keeps enumeration order.
inline SparseRecoveryReport all_sparse_recovery_check(const SensingMatrix& a, int m,
                                                      double budget = kDefaultSignedBudget,
                                                      std::uint64_t trial_seed = 0x7261111) {
  if (m < 0) throw std::invalid_argument("all_sparse_recovery_check: m must be >= 0");
  SparseRecoveryReport rep;
  rep.m = m;
  if (m == 0) {
    rep.pass = true;
    return rep;
  }
  const double total = detail::signed_budget_total(static_cast<int>(a.N), m, true);
  if (total > budget)
    throw BudgetError("all_sparse_recovery_check: signed-support budget exceeded (required " +
                          std::to_string(total) + ")",
                      total, budget);

  std::uint64_t trial_counter = 0;
  for (int k = 1; k <= m; ++k) {
    for_each_signed_support(static_cast<int>(a.N), k, [&](const SignedSupport& s) {
      rep.signed_supports_examined += 1.0;
      const DualCertificate cert = dual_certificate_value(a, s);
      switch (cert.classification) {
        case CertificateClass::Certified:
          ++rep.certified;
          break;
        case CertificateClass::Failed:
          rep.failures.push_back({s, cert.classification, cert.gamma, "dual certificate failed"});
          break;
        case CertificateClass::RankDeficient:
          rep.failures.push_back({s, cert.classification, cert.gamma,
                                  "columns on the support are linearly dependent"});
          break;
        case CertificateClass::Indeterminate: {
          RngStream st(trial_seed, trial_counter++);
          if (detail::resolve_by_trials(a, s, st))
            ++rep.indeterminate_resolved;
          else
            rep.failures.push_back({s, cert.classification, cert.gamma,
                                    "boundary certificate; randomized trials failed"});
          break;
        }
      }
      return true;
    });
  }
  rep.pass = rep.failures.empty();
  return rep;
}

struct NspSliceResult {
  bool pass = false;       // min ||v_{E^c}||_1 over the slice exceeds 1
  bool boundary = false;   // within tolerance of 1
  bool feasible = true;    // slice nonempty
  double min_off_l1 = 0.0; // +inf reported as infeasible instead
  LpStatus lp_status = LpStatus::Optimal;
};

/// Signed null-space certificate for support/sign pattern (E, s):
/// minimizes ||v_{E^c}||_1 over kernel vectors normalized to
/// sum_i s_i v_i = 1. Recovery of the pattern holds iff the minimum
/// exceeds 1 (an infeasible slice passes vacuously).
inline NspSliceResult nsp_signed_slice(const std::vector<Vector>& kernel_basis,
                                       const SignedSupport& s, std::size_t N) {
  NspSliceResult out;
  const std::size_t d = kernel_basis.size();
  if (d == 0) {  // injective A: nothing in the kernel
    out.pass = true;
    out.feasible = false;
    return out;
  }
  std::vector<int> off;
  {
    std::size_t pos = 0;
    for (int j = 1; j <= static_cast<int>(N); ++j) {
      if (pos < s.size() && s.indices[pos] == j) {
        ++pos;
        continue;
      }
      off.push_back(j);
    }
  }

  // Variables: alpha (free, 2d), t (|off|), slacks (2 |off|).
  // Rows: t_j - v_j - u1 = 0, t_j + v_j - u2 = 0 per off-support j, and
  // the normalization sum_i s_i v_i = 1, where v = sum alpha_k basis_k.
  const std::size_t rows = 2 * off.size() + 1;
  const std::size_t cols = 2 * d + off.size() + 2 * off.size();
  LinearProgram lp;
  lp.constraints = Matrix(rows, cols);
  lp.rhs.assign(rows, 0.0);
  lp.objective.assign(cols, 0.0);

  auto basis_entry = [&](std::size_t k, int idx_1based) {
    return kernel_basis[k][static_cast<std::size_t>(idx_1based) - 1];
  };

  for (std::size_t t = 0; t < off.size(); ++t) {
    const std::size_t r1 = 2 * t, r2 = 2 * t + 1;
    for (std::size_t k = 0; k < d; ++k) {
      const double b = basis_entry(k, off[t]);
      lp.constraints(r1, k) = -b;
      lp.constraints(r1, d + k) = b;
      lp.constraints(r2, k) = b;
      lp.constraints(r2, d + k) = -b;
    }
    lp.constraints(r1, 2 * d + t) = 1.0;
    lp.constraints(r2, 2 * d + t) = 1.0;
    lp.constraints(r1, 2 * d + off.size() + 2 * t) = -1.0;
    lp.constraints(r2, 2 * d + off.size() + 2 * t + 1) = -1.0;
    lp.objective[2 * d + t] = 1.0;
  }
  const std::size_t norm_row = 2 * off.size();
  for (std::size_t k = 0; k < d; ++k) {
    double c = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
      c += s.signs[i] * basis_entry(k, s.indices[i]);
    lp.constraints(norm_row, k) = c;
    lp.constraints(norm_row, d + k) = -c;
  }
  lp.rhs[norm_row] = 1.0;

  const LpSolution sol = solve_lp(lp);
  out.lp_status = sol.status;
  if (sol.status == LpStatus::Infeasible) {
    out.pass = true;
    out.feasible = false;
    return out;
  }
  if (sol.status != LpStatus::Optimal) return out;
  out.min_off_l1 = sol.objective;
  if (sol.objective > 1.0 + lp_tolerances::kReducedCost)
    out.pass = true;
  else if (sol.objective < 1.0 - lp_tolerances::kReducedCost)
    out.pass = false;
  else {
    out.pass = false;  // conservative at the boundary
    out.boundary = true;
  }
  return out;
}

struct NspFailure {
  SignedSupport support;
  double min_off_l1 = 0.0;
  bool boundary = false;
};

struct NspReport {
  bool pass = false;
  bool exhaustive = true;
  int m = 0;
  std::size_t kernel_dim = 0;
  std::vector<NspFailure> failures;
  double slices_examined = 0.0;
};

/// Null-space property up to order m: every nonzero kernel vector puts
/// less than half of its l1 mass on any m coordinates. Exhaustive per
/// signed slice when dim ker <= 12 and N <= 24; beyond that, a sampled
/// one-sided search for violations (flagged non-exhaustive).
inline NspReport nullspace_property_check(const SensingMatrix& a, int m,
                                          std::uint64_t sample_seed = 0x5a3f) {
  NspReport rep;
  rep.m = m;
  const auto ns = nullspace_basis(a.entries);
  rep.kernel_dim = ns.basis.size();
  if (ns.basis.empty()) {  // trivially true for injective A
    rep.pass = true;
    return rep;
  }
  if (m < 1) {
    rep.pass = true;
    return rep;
  }

  if (rep.kernel_dim <= 12 && a.N <= 24) {
    for (int k = 1; k <= m; ++k) {
      for_each_signed_support(static_cast<int>(a.N), k, [&](const SignedSupport& s) {
        rep.slices_examined += 1.0;
        const auto slice = nsp_signed_slice(ns.basis, s, a.N);
        if (!slice.pass)
          rep.failures.push_back({s, slice.min_off_l1, slice.boundary});
        return true;
      });
    }
    rep.pass = rep.failures.empty();
    return rep;
  }

  // Sampled mode: random kernel vectors, worst support = top-m magnitudes.
  rep.exhaustive = false;
  RngStream stream(sample_seed, 0);
  bool violated = false;
  for (int t = 0; t < 2000 && !violated; ++t) {
    Vector v(a.N, 0.0);
    for (const auto& b : ns.basis) {
      const double c = sample_gaussian(stream);
      for (std::size_t i = 0; i < a.N; ++i) v[i] += c * b[i];
    }
    std::vector<double> mags(a.N);
    for (std::size_t i = 0; i < a.N; ++i) mags[i] = std::abs(v[i]);
    std::sort(mags.begin(), mags.end(), std::greater<>());
    double on = 0.0;
    for (int i = 0; i < m; ++i) on += mags[i];
    const double offmass = norm1(v) - on;
    rep.slices_examined += 1.0;
    if (on >= offmass) {
      violated = true;
      SignedSupport s;  // indices of the top-m magnitudes, signs of v
      std::vector<std::pair<double, int>> order;
      for (std::size_t i = 0; i < a.N; ++i) order.push_back({std::abs(v[i]), static_cast<int>(i) + 1});
      std::sort(order.begin(), order.end(), std::greater<>());
      for (int i = 0; i < m; ++i) s.indices.push_back(order[i].second);
      std::sort(s.indices.begin(), s.indices.end());
      for (int idx : s.indices) s.signs.push_back(v[idx - 1] >= 0 ? 1 : -1);
      rep.failures.push_back({s, offmass / std::max(on, 1e-300), false});
    }
  }
  rep.pass = !violated;
  return rep;
}

} // namespace cslab
