#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace relaylab {

// SplitMix64 finalizer. Bijective on 64-bit words, used to hash counter
// tuples into stream seeds.
std::uint64_t mix64(std::uint64_t x);

// Derive a child seed from a base seed plus up to three counters. Distinct
// counter tuples give statistically unrelated streams, so sub-systems
// (fields, fades, policies, replications) can each own an independent
// stream that does not shift when an unrelated consumer changes.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b);
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c);

// Deterministic random stream. The engine is mt19937_64 (bit-exact by
// standard) and every distribution below is hand-rolled on top of the raw
// 64-bit output, so sequences replay identically across platforms and
// standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double u01() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

  // Unit-mean exponential; -log1p(-u) keeps precision near u = 0.
  double exponential() { return -std::log1p(-u01()); }

  // Poisson via inversion-by-multiplication, chunked so the running product
  // never underflows even for means in the thousands.
  std::uint64_t poisson(double mean);

  // Uniform on {0, ..., n-1} without modulo bias.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return u01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace relaylab
