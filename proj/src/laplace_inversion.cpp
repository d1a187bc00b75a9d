#include "relaylab/laplace_inversion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include "relaylab/errors.hpp"

namespace relaylab {

double talbot_invert(
    const std::function<std::complex<double>(std::complex<double>)>& transform,
    double t, int m) {
  if (!(t > 0.0)) throw NumericError("inversion time must be > 0");
  if (m < 8) throw NumericError("talbot node count must be >= 8");
  const double r = 2.0 * m / (5.0 * t);
  double sum = 0.5 * std::exp(r * t) * transform(std::complex<double>(r, 0.0)).real();
  for (int k = 1; k < m; ++k) {
    const double theta = k * std::numbers::pi / m;
    const double cot = std::cos(theta) / std::sin(theta);
    const std::complex<double> s(r * theta * cot, r * theta);
    const double sigma = theta + (theta * cot - 1.0) * cot;
    const std::complex<double> term =
        std::exp(t * s) * transform(s) * std::complex<double>(1.0, sigma);
    sum += term.real();
  }
  return sum * r / m;
}

double talbot_invert_logf(
    const std::function<std::complex<double>(std::complex<double>)>& log_transform,
    double t, int m) {
  if (!(t > 0.0)) throw NumericError("inversion time must be > 0");
  if (m < 8) throw NumericError("talbot node count must be >= 8");
  // exp() overflows past ~709; beyond that a node value cannot be represented
  // and the cancellation the rule depends on is already lost.
  constexpr double kExpCap = 700.0;
  const double r = 2.0 * m / (5.0 * t);
  auto node_value = [&](const std::complex<double>& s) {
    const std::complex<double> z = t * s + log_transform(s);
    if (z.real() > kExpCap)
      throw NumericError(
          "inverse transform node overflowed: the transform leaves the Talbot "
          "contour's decay region for this argument");
    return std::exp(z);
  };
  double sum = 0.5 * node_value(std::complex<double>(r, 0.0)).real();
  for (int k = 1; k < m; ++k) {
    const double theta = k * std::numbers::pi / m;
    const double cot = std::cos(theta) / std::sin(theta);
    const std::complex<double> s(r * theta * cot, r * theta);
    const double sigma = theta + (theta * cot - 1.0) * cot;
    sum += (node_value(s) * std::complex<double>(1.0, sigma)).real();
  }
  return sum * r / m;
}

namespace {

// Stehfest summation coefficients; they alternate in sign and grow roughly
// like 4^n, hence the extended-precision build.
const std::vector<long double>& stehfest_coeffs(int n) {
  static std::map<int, std::vector<long double>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  const int half = n / 2;
  auto fact = [](int k) {
    long double f = 1.0L;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
  };
  std::vector<long double> coeffs(n + 1, 0.0L);
  for (int k = 1; k <= n; ++k) {
    long double sum = 0.0L;
    const int j_lo = (k + 1) / 2;
    const int j_hi = std::min(k, half);
    for (int j = j_lo; j <= j_hi; ++j) {
      long double term = std::pow((long double)j, half) * fact(2 * j);
      term /= fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k);
      sum += term;
    }
    coeffs[k] = ((k + half) % 2 == 0 ? 1.0L : -1.0L) * sum;
  }
  return cache.emplace(n, std::move(coeffs)).first->second;
}

}  // namespace

double gaver_stehfest_invert(const std::function<double(double)>& transform,
                             double t, int n) {
  if (!(t > 0.0)) throw NumericError("inversion time must be > 0");
  if (n < 2 || n > 20 || n % 2 != 0)
    throw NumericError("stehfest term count must be even and in [2, 20]");
  const auto& coeffs = stehfest_coeffs(n);
  const long double ln2_t = std::numbers::ln2_v<long double> / t;
  long double sum = 0.0L;
  for (int k = 1; k <= n; ++k)
    sum += coeffs[k] * (long double)transform((double)(k * ln2_t));
  return (double)(ln2_t * sum);
}

}  // namespace relaylab
