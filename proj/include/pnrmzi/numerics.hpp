#pragma once

#include <cstdint>
#include <limits>
#include <span>

namespace pnrmzi {

/// A real number stored as (ln|x|, sign(x)).
///
/// Fock amplitudes at a few hundred mean photons drop far below the smallest
/// representable double, so every amplitude is kept in this form until a
/// final materialization step. The zero element is (-inf, 0).
class LogSigned {
 public:
  constexpr LogSigned() = default;

  /// Builds from a log-magnitude and sign. A sign of 0 or a log-magnitude of
  /// -inf both produce the canonical zero.
  static LogSigned from_log(double log_magnitude, int sign);
  static LogSigned from_value(double value);
  static constexpr LogSigned zero() { return LogSigned{}; }
  static constexpr LogSigned one() { return LogSigned{0.0, 1}; }

  double log_magnitude() const { return log_magnitude_; }
  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }

  /// exp(log_magnitude) * sign; underflows to 0 and overflows to +-inf.
  double value() const;
  /// ln(x^2); -inf for zero.
  double log_square() const { return is_zero() ? -infinity() : 2.0 * log_magnitude_; }

  friend LogSigned operator*(LogSigned a, LogSigned b);
  friend LogSigned operator/(LogSigned a, LogSigned b);
  LogSigned scaled_by_log(double log_factor) const;

 private:
  constexpr LogSigned(double lm, int s) : log_magnitude_(lm), sign_(s) {}
  static constexpr double infinity() { return std::numeric_limits<double>::infinity(); }

  double log_magnitude_ = -std::numeric_limits<double>::infinity();
  int sign_ = 0;
};

/// ln(n!). Exact table for n <= 20, Stirling series with five correction
/// terms beyond.
double log_factorial(std::uint64_t n);

/// Complementary error function for real x. Power series for erf below
/// x = 2.5, Lentz continued fraction above; erfc(-x) = 2 - erfc(x).
double erfc(double x);

/// Signed sum of log-encoded terms, shifted by the largest magnitude.
LogSigned log_sum_exp(std::span<const LogSigned> terms);

/// Numerically stable ln(cosh x).
double log_cosh(double x);

/// Kahan-Babuska (Neumaier) running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace pnrmzi
