#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace cslab {

/// Deterministic pseudorandom stream: xoshiro256++ seeded through
/// splitmix64 from a (seed, stream_id) pair.
///
/// Identical (seed, stream_id) always reproduce the same sequence within
/// one build. Distinct stream_ids give independent streams, which is how
/// the ensemble generators parallelize column generation (column j draws
/// from stream_id j) without sharing state.
class RngStream {
public:
  static constexpr const char* kAlgorithmId = "xoshiro256++";

  RngStream() : RngStream(0, 0) {}

  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id) {
    std::uint64_t x = seed + 0x9E3779B97F4A7C15ull * (stream_id + 1);
    for (auto& s : state_) s = splitmix64(x);
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Next variate, uniform on [0, 1). 53 mantissa bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_;
  std::uint64_t stream_id_;
};

inline double uniform01(RngStream& stream) { return stream.uniform01(); }

/// Standard normal variate by the Marsaglia polar method. Only ln and
/// sqrt are involved, so within one build the output is bit-reproducible;
/// cross-platform reproducibility is not promised.
inline double sample_gaussian(RngStream& stream) {
  for (;;) {
    const double u = 2.0 * stream.uniform01() - 1.0;
    const double v = 2.0 * stream.uniform01() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

inline double sample_rademacher(RngStream& stream) {
  return stream.uniform01() < 0.5 ? -1.0 : 1.0;
}

/// Symmetric variate with survival function P(|Y| >= t) = exp(-t^r),
/// generated as |Y| = (-ln U)^(1/r) with an independent sign. Not
/// variance-normalized; callers rescale by 1/sqrt(weibull_variance(r)).
inline double sample_symmetric_weibull(RngStream& stream, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("sample_symmetric_weibull: r must be > 0");
  const double u = stream.uniform01();          // 1-u is uniform on (0,1]
  const double mag = std::pow(-std::log1p(-u), 1.0 / r);
  const double sign = sample_rademacher(stream);
  return sign * mag;
}

/// E Y^2 = Gamma(1 + 2/r) for the unnormalized symmetric Weibull above.
inline double weibull_variance(double r) {
  if (!(r > 0.0)) throw std::invalid_argument("weibull_variance: r must be > 0");
  return std::tgamma(1.0 + 2.0 / r);
}

/// Exponential variate with mean 1/rate.
inline double sample_exponential(RngStream& stream, double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("sample_exponential: rate must be > 0");
  return -std::log1p(-stream.uniform01()) / rate;
}

/// Gamma(shape, 1) variate, Marsaglia-Tsang squeeze; shape < 1 is boosted
/// through G(shape) = G(shape+1) * U^(1/shape). Used by the l_p-ball
/// sampler, which needs shape = 1/p <= 1.
inline double sample_gamma(RngStream& stream, double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("sample_gamma: shape must be > 0");
  if (shape < 1.0) {
    const double u = stream.uniform01();
    return sample_gamma(stream, shape + 1.0) * std::pow(1.0 - u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = sample_gaussian(stream);
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = stream.uniform01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

} // namespace cslab
