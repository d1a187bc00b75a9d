#include "relaylab/rng.hpp"

#include <cmath>

#include "relaylab/errors.hpp"

namespace relaylab {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a) {
  return mix64(mix64(base) ^ mix64(a + 0x1ull));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return mix64(derive_seed(base, a) ^ mix64(b + 0x2ull));
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  return mix64(derive_seed(base, a, b) ^ mix64(c + 0x3ull));
}

std::uint64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0)) throw NumericError("poisson mean must be >= 0");
  if (mean == 0.0) return 0;
  // Split the mean into chunks small enough that exp(chunk) stays far from
  // the underflow edge, then sum independent draws.
  constexpr double kChunk = 500.0;
  std::uint64_t total = 0;
  double remaining = mean;
  while (remaining > 0.0) {
    const double lambda = remaining > kChunk ? kChunk : remaining;
    remaining -= lambda;
    const double floor = std::exp(-lambda);
    std::uint64_t k = 0;
    double prod = u01();
    while (prod > floor) {
      ++k;
      prod *= u01();
    }
    total += k;
  }
  return total;
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw NumericError("below(0) is undefined");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
  for (;;) {
    const std::uint64_t x = u64();
    if (x <= limit) return x % n;
  }
}

}  // namespace relaylab
