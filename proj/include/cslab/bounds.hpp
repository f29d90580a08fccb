#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cslab/rng.hpp"

namespace cslab {

/// Configuration for every bound calculator. The source results leave the
/// universal constants C, c unspecified; they are user-supplied here and
/// default to 1, which the CLI flags loudly. All logarithms are natural.
struct BoundConstants {
  double C_big = 1.0;     // leading multiplicative constant
  double c_small = 1.0;   // exponent constant
  double c0 = 3.33;       // thin-shell exponent on theta
  double c1 = 0.33;       // thin-shell exponent on n
  double C0_max = 1.0;    // max-column-norm constant
  double theta = 0.2;     // in (0, 1/4)
  double theta_prime = 0.20710678118654752;  // (sqrt(2)-1)/2
  double K = 1.0;         // >= 1
  double K_prime = 1.0;   // >= 1
  double psi = 1.0;       // > 0
  double r = 1.0;         // in [1, 2]

  double xi() const { return psi * K + K_prime; }

  void validate() const {
    if (!(theta > 0.0 && theta < 0.25))
      throw std::invalid_argument("BoundConstants: theta must lie in (0, 1/4)");
    if (!(theta_prime > 0.0 && theta_prime < 1.0))
      throw std::invalid_argument("BoundConstants: theta_prime must lie in (0, 1)");
    if (!(K >= 1.0 && K_prime >= 1.0))
      throw std::invalid_argument("BoundConstants: K and K_prime must be >= 1");
    if (!(psi > 0.0)) throw std::invalid_argument("BoundConstants: psi must be > 0");
    if (!(r >= 1.0 && r <= 2.0)) throw std::invalid_argument("BoundConstants: r must be in [1,2]");
    if (!(C_big > 0.0 && c_small > 0.0 && c0 > 0.0 && c1 > 0.0 && C0_max > 0.0))
      throw std::invalid_argument("BoundConstants: constants must be positive");
  }
};

struct UupBound {
  bool admissible = false;      // m log^(2/r)(2N/(theta m)) <= theta^2 n
  double sparsity_lhs = 0.0;    // the left side above
  double sparsity_rhs = 0.0;    // theta^2 n
  double bound_on_bm2 = 0.0;    // C xi^2 theta n
  double failure_prob = 0.0;    // exp(-c K^r sqrt(m) log(2N/(theta m))) + p_max_norm
};

/// B_m^2 <= C xi^2 theta n under the sparsity condition; the probability
/// term P(max |X_i| >= K' sqrt n) is the caller's to supply.
inline UupBound uup_bound(double n, double N, double m, const BoundConstants& k,
                          double p_max_norm_exceed = 0.0) {
  k.validate();
  if (!(m >= 1.0)) throw std::invalid_argument("uup_bound: m must be >= 1");
  UupBound out;
  const double lg = std::log(2.0 * N / (k.theta * m));
  out.sparsity_lhs = m * std::pow(lg, 2.0 / k.r);
  out.sparsity_rhs = k.theta * k.theta * n;
  out.admissible = out.sparsity_lhs <= out.sparsity_rhs;
  out.bound_on_bm2 = k.C_big * k.xi() * k.xi() * k.theta * n;
  out.failure_prob =
      std::exp(-k.c_small * std::pow(k.K, k.r) * std::sqrt(m) * lg) + p_max_norm_exceed;
  return out;
}

struct RipBound {
  double rhs = 0.0;             // C xi^2 sqrt(m/n) log^(1/r)(eN / (m sqrt(m/n))) + theta'
  double log_argument = 0.0;
  bool vacuous = false;         // log argument <= 1 or rhs >= 1
  double failure_prob_term = 0.0;  // C exp(-c K^r sqrt(m) log(...))
};

/// Right-hand side of the isometry-constant estimate, with the companion
/// probability term alongside. Flagged vacuous when it cannot bind.
inline RipBound rip_bound_rhs(double n, double N, double m, const BoundConstants& k) {
  k.validate();
  if (!(m >= 1.0 && m <= std::min(n, N)))
    throw std::invalid_argument("rip_bound_rhs: need 1 <= m <= min(n, N)");
  RipBound out;
  const double ratio = std::sqrt(m / n);
  out.log_argument = std::exp(1.0) * N / (m * ratio);
  if (out.log_argument <= 1.0) {
    out.vacuous = true;
    return out;
  }
  const double lg = std::log(out.log_argument);
  out.rhs = k.C_big * k.xi() * k.xi() * ratio * std::pow(lg, 1.0 / k.r) + k.theta_prime;
  out.failure_prob_term =
      k.C_big * std::exp(-k.c_small * std::pow(k.K, k.r) * std::sqrt(m) * lg);
  if (out.rhs >= 1.0) out.vacuous = true;
  return out;
}

struct NeighborlinessThreshold {
  double m_bar = 0.0;        // floor(c n / (psi^4 log^(2/r)(C psi^6 N / n)))
  double log_argument = 0.0;
  bool log_vacuous = false;  // log argument <= 1
};

/// Guaranteed neighborliness order. With psi = 1 and r = 1 this is the
/// log-concave form c n / log^2(C N / n).
inline NeighborlinessThreshold neighborliness_threshold(double n, double N,
                                                        const BoundConstants& k) {
  k.validate();
  if (!(N >= n && n >= 1.0))
    throw std::invalid_argument("neighborliness_threshold: need N >= n >= 1");
  NeighborlinessThreshold out;
  out.log_argument = k.C_big * std::pow(k.psi, 6.0) * N / n;
  if (out.log_argument <= 1.0) {
    out.log_vacuous = true;
    out.m_bar = std::floor(k.c_small * n);  // denominator degenerates; report the cap
    return out;
  }
  const double denom = std::pow(k.psi, 4.0) * std::pow(std::log(out.log_argument), 2.0 / k.r);
  out.m_bar = std::floor(k.c_small * n / denom);
  return out;
}

/// 2 exp(-t^2 / (4 sum ||Y_i||_psi1^2 + 2 t psi)).
inline double bernstein_tail(double t, const std::vector<double>& psi1_norms, double psi) {
  if (!(t > 0.0)) throw std::invalid_argument("bernstein_tail: t must be > 0");
  double sumsq = 0.0, maxn = 0.0;
  for (double v : psi1_norms) {
    sumsq += v * v;
    maxn = std::max(maxn, v);
  }
  if (!(psi >= maxn)) throw std::invalid_argument("bernstein_tail: psi must dominate the norms");
  return 2.0 * std::exp(-t * t / (4.0 * sumsq + 2.0 * t * psi));
}

/// 2 exp(-c min(t^2/||a||_2^2, t^r/||a||_{r*}^r)), 1/r + 1/r* = 1.
/// r = 1 uses the sup norm (r* = infinity).
inline double weibull_tail_bound(double t, const std::vector<double>& a, double r, double c) {
  if (!(r >= 1.0 && r <= 2.0)) throw std::invalid_argument("weibull_tail_bound: r must be in [1,2]");
  if (!(t >= 0.0)) throw std::invalid_argument("weibull_tail_bound: t must be >= 0");
  if (!(c > 0.0)) throw std::invalid_argument("weibull_tail_bound: c must be > 0");
  double l2 = 0.0, linf = 0.0;
  for (double v : a) {
    l2 += v * v;
    linf = std::max(linf, std::abs(v));
  }
  if (l2 == 0.0) return 2.0;  // degenerate zero sum: trivial bound
  double term_r;
  if (r == 1.0) {
    term_r = t / linf;
  } else {
    const double rstar = r / (r - 1.0);
    double lrs = 0.0;
    for (double v : a) lrs += std::pow(std::abs(v), rstar);
    lrs = std::pow(lrs, 1.0 / rstar);
    term_r = std::pow(t / lrs, r);
  }
  return 2.0 * std::exp(-c * std::min(t * t / l2, term_r));
}

/// 2 exp(-c min(t^2/(n b^2), (t/b)^s)) for sums of n variables with
/// psi_s control b, s in [1/2, 1].
inline double mixed_tail_bound(double t, double n, double b, double s, double c) {
  if (!(s >= 0.5 && s <= 1.0)) throw std::invalid_argument("mixed_tail_bound: s must be in [1/2,1]");
  if (!(t >= 0.0)) throw std::invalid_argument("mixed_tail_bound: t must be >= 0");
  if (!(b > 0.0 && n >= 1.0 && c > 0.0))
    throw std::invalid_argument("mixed_tail_bound: b, n, c must be positive");
  return 2.0 * std::exp(-c * std::min(t * t / (n * b * b), std::pow(t / b, s)));
}

enum class ThinShellExponent {
  Proven,       // c theta^c0 n^c1, defaults c0 = 3.33, c1 = 0.33
  Conjectured,  // c(theta) n^(1/2); the theta dependence folds into c_small
};

struct ThinShellProb {
  double prob = 0.0;
  double exponent = 0.0;
  bool n_range_ok = true;   // N <= exp(exponent)
  ThinShellExponent mode = ThinShellExponent::Proven;
};

/// C exp(-c theta^c0 n^c1): probability that some |X_i|^2/n strays theta
/// from 1. The Conjectured mode swaps in the n^(1/2) exponent and is
/// labeled as such everywhere it surfaces.
inline ThinShellProb thin_shell_prob(double n, double N, double theta, const BoundConstants& k,
                                     ThinShellExponent mode = ThinShellExponent::Proven) {
  if (!(theta > 0.0 && theta < 1.0))
    throw std::invalid_argument("thin_shell_prob: theta must lie in (0,1)");
  ThinShellProb out;
  out.mode = mode;
  out.exponent = mode == ThinShellExponent::Proven
                     ? k.c_small * std::pow(theta, k.c0) * std::pow(n, k.c1)
                     : k.c_small * std::sqrt(n);
  out.prob = k.C_big * std::exp(-out.exponent);
  out.n_range_ok = N <= std::exp(out.exponent);
  return out;
}

struct MaxNormProb {
  double threshold = 0.0;     // C0 K sqrt(n)
  double failure_prob = 0.0;  // exp(-K sqrt(n))
  bool n_range_ok = true;     // N <= exp(sqrt(n))
};

/// max_i |X_i| <= C0 K sqrt(n) outside probability exp(-K sqrt n).
inline MaxNormProb max_norm_prob(double n, double N, double K, double C0 = 1.0) {
  if (!(K >= 1.0)) throw std::invalid_argument("max_norm_prob: K must be >= 1");
  MaxNormProb out;
  out.threshold = C0 * K * std::sqrt(n);
  out.failure_prob = std::exp(-K * std::sqrt(n));
  out.n_range_ok = N <= std::exp(std::sqrt(n));
  return out;
}

struct AmLowerBound {
  double threshold = 0.0;   // c (sqrt n + sqrt m log(2N/m) + t)
  double prob_floor = 0.0;  // min(c, e^-t)
};

/// P(A_m >= c(sqrt n + sqrt m log(2N/m) + t)) >= min(c, e^-t) for t >= 1.
inline AmLowerBound am_lower_bound(double n, double N, double m, double t, double c) {
  if (!(t >= 1.0)) throw std::invalid_argument("am_lower_bound: t must be >= 1");
  if (!(m >= 1.0 && m <= N)) throw std::invalid_argument("am_lower_bound: need 1 <= m <= N");
  AmLowerBound out;
  out.threshold = c * (std::sqrt(n) + std::sqrt(m) * std::log(2.0 * N / m) + t);
  out.prob_floor = std::min(c, std::exp(-t));
  return out;
}

struct MomentGrowthReport {
  std::vector<int> p_grid;
  std::vector<double> moments;      // || sum a_i Z_i ||_p estimates
  std::vector<double> references;   // sqrt(p) ||a||_2 + p^(1/r) ||a||_{r*}
  std::vector<double> ratios;
  double max_ratio = 0.0;
};

/// Estimates || sum a_i Z_i ||_p for p in {2,4,6,8} with Z_i the
/// variance-one symmetric Weibull(r) and reports the ratios against the
/// moment-growth reference sqrt(p)||a||_2 + p^(1/r)||a||_{r*}.
inline MomentGrowthReport moment_growth_check(double r, const std::vector<double>& a,
                                              RngStream& stream, long samples) {
  if (samples < 10000) throw std::invalid_argument("moment_growth_check: samples must be >= 1e4");
  if (!(r >= 1.0 && r <= 2.0)) throw std::invalid_argument("moment_growth_check: r must be in [1,2]");
  MomentGrowthReport rep;
  rep.p_grid = {2, 4, 6, 8};

  double l2 = 0.0, linf = 0.0, lrs = 0.0;
  const double rstar = r == 1.0 ? 0.0 : r / (r - 1.0);
  for (double v : a) {
    l2 += v * v;
    linf = std::max(linf, std::abs(v));
    if (r != 1.0) lrs += std::pow(std::abs(v), rstar);
  }
  l2 = std::sqrt(l2);
  const double dual_norm = r == 1.0 ? linf : std::pow(lrs, 1.0 / rstar);

  const double scale = 1.0 / std::sqrt(weibull_variance(r));
  std::vector<double> acc(rep.p_grid.size(), 0.0);
  for (long s = 0; s < samples; ++s) {
    double sum = 0.0;
    for (double ai : a) sum += ai * scale * sample_symmetric_weibull(stream, r);
    const double a2 = sum * sum;
    double pw = a2;
    for (std::size_t k = 0; k < rep.p_grid.size(); ++k) {
      acc[k] += pw;
      pw *= a2;
    }
  }
  for (std::size_t k = 0; k < rep.p_grid.size(); ++k) {
    const double p = rep.p_grid[k];
    const double moment = std::pow(acc[k] / static_cast<double>(samples), 1.0 / p);
    const double ref = std::sqrt(p) * l2 + std::pow(p, 1.0 / r) * dual_norm;
    rep.moments.push_back(moment);
    rep.references.push_back(ref);
    rep.ratios.push_back(moment / ref);
    rep.max_ratio = std::max(rep.max_ratio, moment / ref);
  }
  return rep;
}

} // namespace cslab
