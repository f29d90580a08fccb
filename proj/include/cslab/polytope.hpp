#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cslab/ensembles.hpp"
#include "cslab/errors.hpp"
#include "cslab/recovery.hpp"
#include "cslab/simplex.hpp"
#include "cslab/support.hpp"

namespace cslab {

enum class PolytopeMode { Central, Positive };

inline const char* to_string(PolytopeMode m) {
  return m == PolytopeMode::Central ? "central" : "positive";
}

struct FaceQueryResult {
  bool is_face = false;
  double margin = 0.0;     // optimal slack delta*; +inf when unbounded
  Vector witness;          // functional y with <y, s_i X_i> = 1 on the selection
  LpStatus lp_status = LpStatus::NumericalBreakdown;
  int lp_iterations = 0;
  std::string reason;      // set when the equalities are inconsistent
};

/// Decides whether conv{ s_i X_i : i in S } is the vertex set of a face
/// of K(A) (central mode) or K+(A) (positive mode) by maximizing the
/// separation slack delta subject to <y, s_i X_i> = 1 on the selection
/// and <y, +-X_j> <= 1 - delta off it. Strict exposure cannot be posed
/// as an open LP condition, so the decision is the sign of the optimal
/// slack against the 1e-8 feasibility tolerance.
inline FaceQueryResult is_face(const SensingMatrix& a, const SignedSupport& s,
                               PolytopeMode mode) {
  validate(s, static_cast<int>(a.N));
  if (mode == PolytopeMode::Positive)
    for (int sg : s.signs)
      if (sg != 1)
        throw std::invalid_argument("is_face: positive mode requires all-plus signs");

  const std::size_t n = a.n, N = a.N, k = s.size();
  std::vector<int> off;
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
  const std::size_t per_off = mode == PolytopeMode::Central ? 2 : 1;
  const std::size_t rows = k + per_off * off.size();
  // Variables: y (free, 2n), delta (free, 2), slacks (per_off * |off|).
  const std::size_t cols = 2 * n + 2 + per_off * off.size();

  LinearProgram lp;
  lp.constraints = Matrix(rows, cols);
  lp.rhs.assign(rows, 0.0);
  lp.objective.assign(cols, 0.0);
  lp.objective[2 * n] = -1.0;   // maximize delta
  lp.objective[2 * n + 1] = 1.0;

  for (std::size_t e = 0; e < k; ++e) {
    const std::size_t col = static_cast<std::size_t>(s.indices[e]) - 1;
    const double sign = static_cast<double>(s.signs[e]);
    for (std::size_t i = 0; i < n; ++i) {
      lp.constraints(e, i) = sign * a.entries(i, col);
      lp.constraints(e, n + i) = -sign * a.entries(i, col);
    }
    lp.rhs[e] = 1.0;
  }
  for (std::size_t t = 0; t < off.size(); ++t) {
    const std::size_t col = static_cast<std::size_t>(off[t]) - 1;
    for (std::size_t dup = 0; dup < per_off; ++dup) {
      const std::size_t row = k + per_off * t + dup;
      const double sign = dup == 0 ? 1.0 : -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        lp.constraints(row, i) = sign * a.entries(i, col);
        lp.constraints(row, n + i) = -sign * a.entries(i, col);
      }
      lp.constraints(row, 2 * n) = 1.0;        // + delta
      lp.constraints(row, 2 * n + 1) = -1.0;
      lp.constraints(row, 2 * n + 2 + per_off * t + dup) = 1.0;  // slack
      lp.rhs[row] = 1.0;
    }
  }

  const LpSolution sol = solve_lp(lp);
  FaceQueryResult out;
  out.lp_status = sol.status;
  out.lp_iterations = sol.iterations;
  if (sol.status == LpStatus::Infeasible) {
    out.is_face = false;
    out.margin = -std::numeric_limits<double>::infinity();
    out.reason = "selection equalities are inconsistent";
    return out;
  }
  if (sol.status == LpStatus::Unbounded) {
    // No off-support point caps the slack; separation is arbitrarily strict.
    out.is_face = true;
    out.margin = std::numeric_limits<double>::infinity();
    return out;
  }
  if (sol.status != LpStatus::Optimal) return out;
  out.margin = sol.x[2 * n] - sol.x[2 * n + 1];
  out.is_face = out.margin > lp_tolerances::kFeasibility;
  out.witness.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) out.witness[i] = sol.x[i] - sol.x[n + i];
  return out;
}

struct VertexCensusReport {
  PolytopeMode mode = PolytopeMode::Central;
  bool all_vertices = false;
  long expected_count = 0;   // 2N central, N positive
  long vertex_count = 0;
  std::vector<SignedSupport> non_vertices;
};

/// Checks that each generator point is strictly exposed, i.e. actually a
/// vertex: all 2N signed singletons in central mode, the N plain ones in
/// positive mode.
inline VertexCensusReport vertex_census(const SensingMatrix& a, PolytopeMode mode) {
  VertexCensusReport rep;
  rep.mode = mode;
  rep.expected_count = static_cast<long>(mode == PolytopeMode::Central ? 2 * a.N : a.N);
  for (int i = 1; i <= static_cast<int>(a.N); ++i) {
    for (int sign : {1, -1}) {
      if (mode == PolytopeMode::Positive && sign < 0) continue;
      SignedSupport s{{i}, {sign}};
      if (is_face(a, s, mode).is_face)
        ++rep.vertex_count;
      else
        rep.non_vertices.push_back(s);
    }
  }
  rep.all_vertices = rep.vertex_count == rep.expected_count;
  return rep;
}

struct NeighborlinessReport {
  PolytopeMode mode = PolytopeMode::Central;
  int m_star = 0;                      // largest size with every selection a face
  bool vertex_count_full = false;      // size-1 scan passed completely
  std::vector<SignedSupport> failures_at_next;  // complete failure list at m_star + 1
  double budget_consumed = 0.0;
  bool budget_exhausted = false;       // stopped by budget, not by a failure
  int m_max_requested = 0;
};

/// Verifies all selections by increasing size (size, colex support, sign
/// code order) and stops at the first failing size. Partial results due
/// to the budget are flagged rather than refused.
inline NeighborlinessReport neighborliness_order(const SensingMatrix& a, int m_max,
                                                 double budget, PolytopeMode mode) {
  if (m_max < 1) throw std::invalid_argument("neighborliness_order: m_max must be >= 1");
  NeighborlinessReport rep;
  rep.mode = mode;
  rep.m_max_requested = m_max;

  for (int k = 1; k <= std::min<int>(m_max, static_cast<int>(a.N)); ++k) {
    const double size_cost =
        binomial(static_cast<int>(a.N), k) *
        (mode == PolytopeMode::Central ? std::pow(2.0, k) : 1.0);
    if (rep.budget_consumed + size_cost > budget) {
      rep.budget_exhausted = true;
      break;
    }
    std::vector<SignedSupport> failures;
    auto body = [&](const SignedSupport& s) {
      rep.budget_consumed += 1.0;
      if (!is_face(a, s, mode).is_face) failures.push_back(s);
      return true;
    };
    if (mode == PolytopeMode::Central) {
      for_each_signed_support(static_cast<int>(a.N), k, body);
    } else {
      for_each_support(static_cast<int>(a.N), k, [&](const std::vector<int>& e) {
        SignedSupport s{e, std::vector<int>(e.size(), 1)};
        return body(s);
      });
    }
    if (k == 1) rep.vertex_count_full = failures.empty();
    if (!failures.empty()) {
      rep.failures_at_next = std::move(failures);
      return rep;
    }
    rep.m_star = k;
  }
  return rep;
}

struct CrossCheckReport {
  int m = 0;
  bool polytope_verdict = false;   // vertex census and all selections <= m are faces
  bool recovery_verdict = false;   // all_sparse_recovery_check pass
  bool agree = false;              // aggregate verdicts match
  bool per_support_agree = true;   // face and certificate verdicts match support by support
  std::optional<SignedSupport> witness;  // minimal disagreeing selection, if any
  // transcripts for the witness
  FaceQueryResult witness_face;
  DualCertificate witness_certificate;
  // minimal failing selection on each side (when the verdict is false)
  std::optional<SignedSupport> first_polytope_failure;
  std::optional<SignedSupport> first_recovery_failure;
  double selections_examined = 0.0;
};

/// The equivalence keystone: polytope-side verdict (2N vertices and all
/// selections up to size m are faces of K(A)) against the recovery-side
/// verdict (every signed support of size <= m certified). Disagreement is
/// reported with the minimal witness and both LP transcripts, never
/// thrown.
inline CrossCheckReport donoho_cross_check(const SensingMatrix& a, int m,
                                           double budget = kDefaultSignedBudget,
                                           std::uint64_t trial_seed = 0x7261111) {
  CrossCheckReport rep;
  rep.m = m;
  const double total = detail::signed_budget_total(static_cast<int>(a.N), m, true);
  if (total > budget)
    throw BudgetError("donoho_cross_check: signed-support budget exceeded (required " +
                          std::to_string(total) + ")",
                      total, budget);

  bool polytope_all = true, recovery_all = true;
  std::uint64_t trial_counter = 0;
  for (int k = 1; k <= m; ++k) {
    for_each_signed_support(static_cast<int>(a.N), k, [&](const SignedSupport& s) {
      rep.selections_examined += 1.0;
      const FaceQueryResult face = is_face(a, s, PolytopeMode::Central);
      const DualCertificate cert = dual_certificate_value(a, s);
      bool cert_ok = false;
      switch (cert.classification) {
        case CertificateClass::Certified: cert_ok = true; break;
        case CertificateClass::Failed:
        case CertificateClass::RankDeficient: cert_ok = false; break;
        case CertificateClass::Indeterminate: {
          RngStream st(trial_seed, trial_counter++);
          cert_ok = detail::resolve_by_trials(a, s, st);
          break;
        }
      }
      if (!face.is_face && !rep.first_polytope_failure) rep.first_polytope_failure = s;
      if (!cert_ok && !rep.first_recovery_failure) rep.first_recovery_failure = s;
      polytope_all = polytope_all && face.is_face;
      recovery_all = recovery_all && cert_ok;
      if (face.is_face != cert_ok && rep.per_support_agree) {
        rep.per_support_agree = false;
        rep.witness = s;
        rep.witness_face = face;
        rep.witness_certificate = cert;
      }
      return true;
    });
  }
  rep.polytope_verdict = polytope_all;
  rep.recovery_verdict = recovery_all;
  rep.agree = rep.polytope_verdict == rep.recovery_verdict && rep.per_support_agree;
  return rep;
}

} // namespace cslab
