#include "pnrmzi/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace pnrmzi {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

constexpr std::array<double, 21> make_factorial_logs_seed() {
  std::array<double, 21> out{};
  double f = 1.0;
  out[0] = 1.0;
  for (int n = 1; n <= 20; ++n) {
    f *= n;
    out[n] = f;
  }
  return out;
}

// 20! < 2^63, so each entry is an exact double-representable integer up to 18!,
// and correctly rounded beyond.
constexpr std::array<double, 21> kFactorials = make_factorial_logs_seed();

double stirling_log_factorial(double n) {
  // ln n! = n ln n - n + ln(2 pi n)/2 + sum B_2k / (2k (2k-1) n^(2k-1))
  const double inv = 1.0 / n;
  const double inv2 = inv * inv;
  const double series =
      inv * (1.0 / 12.0 -
             inv2 * (1.0 / 360.0 -
                     inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 * (1.0 / 1188.0)))));
  return n * std::log(n) - n + 0.5 * std::log(2.0 * std::numbers::pi * n) + series;
}

double erf_series(double x) {
  // erf(x) = 2/sqrt(pi) e^{-x^2} sum_n 2^n x^(2n+1) / (1*3*...*(2n+1)); all terms positive.
  const double x2 = x * x;
  double term = x;
  double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= 2.0 * x2 / (2.0 * n + 1.0);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return 2.0 / std::sqrt(std::numbers::pi) * std::exp(-x2) * sum;
}

double erfc_continued_fraction(double x) {
  // erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  // evaluated with the modified Lentz algorithm.
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int n = 1; n < 5000; ++n) {
    const double a = 0.5 * n;
    d = x + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = x + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x * x) / std::sqrt(std::numbers::pi) / f;
}

}  // namespace

LogSigned LogSigned::from_log(double log_magnitude, int sign) {
  if (sign == 0 || log_magnitude == kNegInf) return zero();
  return LogSigned{log_magnitude, sign > 0 ? 1 : -1};
}

LogSigned LogSigned::from_value(double value) {
  if (value == 0.0) return zero();
  return LogSigned{std::log(std::abs(value)), value > 0 ? 1 : -1};
}

double LogSigned::value() const {
  if (sign_ == 0) return 0.0;
  return sign_ * std::exp(log_magnitude_);
}

LogSigned operator*(LogSigned a, LogSigned b) {
  if (a.is_zero() || b.is_zero()) return LogSigned::zero();
  return LogSigned{a.log_magnitude_ + b.log_magnitude_, a.sign_ * b.sign_};
}

LogSigned operator/(LogSigned a, LogSigned b) {
  if (a.is_zero()) return LogSigned::zero();
  if (b.is_zero()) return LogSigned{-kNegInf, a.sign_};
  return LogSigned{a.log_magnitude_ - b.log_magnitude_, a.sign_ * b.sign_};
}

LogSigned LogSigned::scaled_by_log(double log_factor) const {
  if (is_zero()) return zero();
  return from_log(log_magnitude_ + log_factor, sign_);
}

double log_factorial(std::uint64_t n) {
  if (n <= 20) return std::log(kFactorials[n]);
  return stirling_log_factorial(static_cast<double>(n));
}

double erfc(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 - erfc(-x);
  if (x < 2.5) return 1.0 - erf_series(x);
  if (x > 27.3) return 0.0;  // below the smallest subnormal
  return erfc_continued_fraction(x);
}

LogSigned log_sum_exp(std::span<const LogSigned> terms) {
  double max_log = kNegInf;
  for (const auto& t : terms) {
    if (!t.is_zero()) max_log = std::max(max_log, t.log_magnitude());
  }
  if (max_log == kNegInf) return LogSigned::zero();

  CompensatedSum positive;
  CompensatedSum negative;
  for (const auto& t : terms) {
    if (t.is_zero()) continue;
    const double scaled = std::exp(t.log_magnitude() - max_log);
    (t.sign() > 0 ? positive : negative).add(scaled);
  }
  const double net = positive.value() - negative.value();
  // Cancellation below the working precision of the larger partial sum is zero.
  if (std::abs(net) <= 4.0 * std::numeric_limits<double>::epsilon() *
                           std::max(positive.value(), negative.value())) {
    return LogSigned::zero();
  }
  return LogSigned::from_log(max_log + std::log(std::abs(net)), net > 0 ? 1 : -1);
}

double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

}  // namespace pnrmzi
