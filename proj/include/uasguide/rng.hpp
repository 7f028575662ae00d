#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace uasguide {

// Deterministic random source with an explicit, engine-pinned mapping from bits
// to doubles. std::uniform_real_distribution and friends are
// implementation-defined, so every draw here is spelled out by hand; two builds
// with the same seed produce the same stream on any conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // splitmix64 finalizer; used to derive independent child streams from a
  // master seed without overlapping the parent sequence.
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  static std::uint64_t derive(std::uint64_t master, std::uint64_t stream) {
    return mix(master ^ mix(stream + 0x9e3779b97f4a7c15ULL));
  }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1): top 53 bits scaled by 2^-53.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    if (!(lo <= hi)) throw std::invalid_argument("uniform: lo > hi");
    if (lo == hi) return lo;
    return lo + (hi - lo) * uniform();
  }

  // Uniform integer in [lo, hi], rejection-sampled to remove modulo bias.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw std::invalid_argument("uniform_int: lo > hi");
    const std::uint64_t n =
        static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1ULL;
    if (n == 0) return static_cast<std::int64_t>(gen_());  // full 64-bit range
    const std::uint64_t bound = (UINT64_MAX / n) * n;
    std::uint64_t v = gen_();
    while (v >= bound) v = gen_();
    return lo + static_cast<std::int64_t>(v % n);
  }

  // Standard normal via Box-Muller. No cached second value: every call consumes
  // exactly two uniforms, which keeps parallel streams trivially alignable.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]: keeps log() finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPiInternal * u2);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  static constexpr double kTwoPiInternal = 6.283185307179586476925286766559;
  std::mt19937_64 gen_;
};

}  // namespace uasguide
