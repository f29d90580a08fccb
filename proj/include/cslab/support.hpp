#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cslab/rng.hpp"

namespace cslab {

/// Ordered index set E subset of {1..N} with a sign pattern. Indices are
/// 1-based everywhere they cross a module or serialization boundary.
struct SignedSupport {
  std::vector<int> indices;   // strictly increasing, 1-based
  std::vector<int> signs;     // +1 / -1, aligned with indices

  std::size_t size() const { return indices.size(); }

  SignedSupport negated() const {
    SignedSupport s = *this;
    for (int& v : s.signs) v = -v;
    return s;
  }

  bool operator==(const SignedSupport& o) const = default;

  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(indices[i]);
      s += signs[i] > 0 ? ":+" : ":-";
    }
    return s;
  }
};

inline void validate(const SignedSupport& s, int n_columns) {
  if (s.indices.empty()) throw std::invalid_argument("SignedSupport: empty support");
  if (s.indices.size() != s.signs.size())
    throw std::invalid_argument("SignedSupport: indices/signs size mismatch");
  for (std::size_t i = 0; i < s.indices.size(); ++i) {
    if (s.indices[i] < 1 || s.indices[i] > n_columns)
      throw std::out_of_range("SignedSupport: index out of range");
    if (i > 0 && s.indices[i] <= s.indices[i - 1])
      throw std::invalid_argument("SignedSupport: indices not strictly increasing");
    if (s.signs[i] != 1 && s.signs[i] != -1)
      throw std::invalid_argument("SignedSupport: signs must be +1/-1");
  }
}

/// Binomial coefficient as a double; saturates to +inf on overflow, which
/// is all the budget guards need.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) {
    r *= static_cast<double>(n - k + i) / static_cast<double>(i);
    if (!std::isfinite(r)) return r;
  }
  return r;
}

/// Enumerates all m-subsets of {1..N} in colexicographic order and calls
/// fn on each. Colex is the fixed enumeration order of the whole project:
/// witnesses reported by any exhaustive scan are colex-minimal.
/// fn returning false stops the enumeration early.
inline void for_each_support(int n_columns, int m,
                             const std::function<bool(const std::vector<int>&)>& fn) {
  if (m < 1 || m > n_columns) return;
  std::vector<int> c(m);
  for (int i = 0; i < m; ++i) c[i] = i + 1;
  for (;;) {
    if (!fn(c)) return;
    int i = 0;
    while (i < m) {
      const int limit = (i + 1 < m) ? c[i + 1] - 1 : n_columns;
      if (c[i] + 1 <= limit) break;
      ++i;
    }
    if (i == m) return;
    ++c[i];
    for (int j = 0; j < i; ++j) c[j] = j + 1;
  }
}

/// Enumerates signed supports of size m: supports in colex order, then
/// sign patterns ordered by their binary code (bit j set <=> sign of the
/// j-th index is minus), so the all-plus pattern comes first.
inline void for_each_signed_support(int n_columns, int m,
                                    const std::function<bool(const SignedSupport&)>& fn) {
  for_each_support(n_columns, m, [&](const std::vector<int>& e) {
    SignedSupport s;
    s.indices = e;
    s.signs.assign(e.size(), 1);
    const std::uint64_t patterns = std::uint64_t{1} << m;
    for (std::uint64_t code = 0; code < patterns; ++code) {
      for (int j = 0; j < m; ++j) s.signs[j] = (code >> j) & 1 ? -1 : 1;
      if (!fn(s)) return false;
    }
    return true;
  });
}

/// Uniform random m-subset of {1..N} (Floyd's algorithm), sorted.
inline std::vector<int> sample_support(RngStream& stream, int n_columns, int m) {
  if (m < 0 || m > n_columns) throw std::invalid_argument("sample_support: bad m");
  std::vector<int> chosen;
  chosen.reserve(m);
  for (int j = n_columns - m + 1; j <= n_columns; ++j) {
    const int t = 1 + static_cast<int>(stream.uniform01() * j);
    if (std::find(chosen.begin(), chosen.end(), t) == chosen.end())
      chosen.push_back(t);
    else
      chosen.push_back(j);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

} // namespace cslab
