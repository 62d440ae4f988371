#include "pnrmzi/states.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "pnrmzi/errors.hpp"

namespace pnrmzi {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMinReportable = 1e-300;

double log_tail_bound_coherent(double mean_a, std::size_t n) {
  // Terms past the mode shrink by at least mean_a / (n + 2), so the tail beyond n is
  // bounded by a geometric series starting at p_{n+1}.
  const double ratio = mean_a / static_cast<double>(n + 2);
  if (ratio >= 1.0) return std::numeric_limits<double>::infinity();
  return coherent_amplitude(std::sqrt(mean_a), n + 1).log_square() - std::log1p(-ratio);
}

double log_tail_bound_squeezed(double xi, std::size_t n) {
  // p(2m+2)/p(2m) < tanh^2 xi, hence tail beyond 2m <= p(2m+2) cosh^2 xi.
  const std::size_t next_even = (n % 2 == 0) ? n + 2 : n + 1;
  return squeezed_amplitude(xi, next_even).log_square() + 2.0 * log_cosh(xi);
}

}  // namespace

Threshold Threshold::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "Inf") return infinite();
  std::size_t value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw std::invalid_argument("threshold must be a non-negative integer or \"inf\": " + text);
  }
  return finite(value);
}

std::size_t Threshold::resolve(std::size_t cap) const {
  return is_infinite() ? cap : std::min(*value_, cap);
}

std::string Threshold::to_string() const {
  return is_infinite() ? std::string("inf") : std::to_string(*value_);
}

LightSource LightSource::from_means(double mean_a, double mean_b) {
  if (!(mean_a >= 0.0) || !(mean_b >= 0.0)) {
    throw DomainError("mean photon numbers must be non-negative");
  }
  LightSource src;
  src.alpha_mag = std::sqrt(mean_a);
  src.xi_mag = std::asinh(std::sqrt(mean_b));
  return src;
}

LightSource LightSource::from_split(double n_bar, double alpha2) {
  if (!(alpha2 >= 0.0) || alpha2 > n_bar * (1.0 + 1e-12)) {
    throw DomainError("alpha^2 must lie in [0, n_bar]");
  }
  return from_means(alpha2, std::max(0.0, n_bar - alpha2));
}

double LightSource::mean_b() const {
  const double s = std::sinh(xi_mag);
  return s * s;
}

bool LightSource::phase_matched() const {
  return std::abs(std::cos(theta_b - 2.0 * theta_a) - 1.0) <= 1e-12;
}

AmplitudeTable AmplitudeTable::with_cutoff(const LightSource& src, std::size_t cutoff) {
  AmplitudeTable t;
  t.cutoff = cutoff;
  t.alpha_mag = src.alpha_mag;
  t.xi_mag = src.xi_mag;
  t.coherent.reserve(cutoff + 1);
  t.squeezed.reserve(cutoff + 1);
  for (std::size_t n = 0; n <= cutoff; ++n) {
    t.coherent.push_back(coherent_amplitude(src.alpha_mag, n));
    t.squeezed.push_back(squeezed_amplitude(src.xi_mag, n));
  }
  return t;
}

LogSigned AmplitudeTable::coherent_at(std::size_t n) const {
  return n < coherent.size() ? coherent[n] : LogSigned::zero();
}

LogSigned AmplitudeTable::squeezed_at(std::size_t k) const {
  return k < squeezed.size() ? squeezed[k] : LogSigned::zero();
}

double AmplitudeTable::coherent_probability(std::size_t n) const {
  return std::exp(coherent_at(n).log_square());
}

double AmplitudeTable::squeezed_probability(std::size_t k) const {
  return std::exp(squeezed_at(k).log_square());
}

LogSigned coherent_amplitude(double alpha_mag, std::size_t n) {
  if (alpha_mag == 0.0) return n == 0 ? LogSigned::one() : LogSigned::zero();
  const double log_mag = -0.5 * alpha_mag * alpha_mag +
                         static_cast<double>(n) * std::log(alpha_mag) - 0.5 * log_factorial(n);
  return LogSigned::from_log(log_mag, 1);
}

LogSigned squeezed_amplitude(double xi_mag, std::size_t k) {
  if (k % 2 == 1) return LogSigned::zero();
  const std::size_t m = k / 2;
  const double lc = log_cosh(xi_mag);
  if (m == 0) return LogSigned::from_log(-0.5 * lc, 1);
  if (xi_mag == 0.0) return LogSigned::zero();
  // H_{2m}(0) = (-1)^m (2m)!/m!  =>  |s_2m| = sqrt((2m)!)/m! (tanh xi / 2)^m / sqrt(cosh xi)
  const double log_mag = 0.5 * log_factorial(k) - log_factorial(m) +
                         static_cast<double>(m) * (std::log(std::tanh(xi_mag)) - std::numbers::ln2) -
                         0.5 * lc;
  return LogSigned::from_log(log_mag, m % 2 == 0 ? 1 : -1);
}

std::vector<double> squeezed_number_distribution(double xi_mag, std::size_t k_max,
                                                 DistributionMode mode) {
  std::vector<double> p(k_max + 1, 0.0);
  for (std::size_t n = 0; n <= k_max; n += 2) {
    if (mode == DistributionMode::exact || n == 0) {
      p[n] = std::exp(squeezed_amplitude(xi_mag, n).log_square());
      continue;
    }
    if (xi_mag == 0.0) continue;
    const double k = static_cast<double>(n / 2);
    const double log_p = -log_cosh(xi_mag) + 2.0 * k * std::log(std::tanh(xi_mag)) -
                         0.5 * std::log(std::numbers::pi * k);
    p[n] = std::exp(log_p);
  }
  return p;
}

LogSigned log_generation_probability(const AmplitudeTable& amps, std::size_t total_n) {
  std::vector<LogSigned> terms;
  terms.reserve(total_n / 2 + 1);
  for (std::size_t k = 0; k <= total_n; k += 2) {
    const LogSigned c = amps.coherent_at(total_n - k);
    const LogSigned s = amps.squeezed_at(k);
    if (c.is_zero() || s.is_zero()) continue;
    terms.push_back(LogSigned::from_log(c.log_square() + s.log_square(), 1));
  }
  return log_sum_exp(terms);
}

double generation_probability(const AmplitudeTable& amps, std::size_t total_n) {
  const double g = log_generation_probability(amps, total_n).value();
  return g < kMinReportable ? 0.0 : g;
}

NPhotonState postselect(const AmplitudeTable& amps, std::size_t total_n) {
  const LogSigned log_g = log_generation_probability(amps, total_n);
  if (log_g.is_zero()) {
    throw ZeroProbability("N = " + std::to_string(total_n) + " has zero generation probability");
  }
  NPhotonState state;
  state.total_n = total_n;
  state.gen_prob = generation_probability(amps, total_n);
  state.coeffs.assign(total_n + 1, 0.0);
  const double half_log_g = 0.5 * log_g.log_magnitude();
  for (std::size_t k = 0; k <= total_n; k += 2) {
    const LogSigned term = amps.coherent_at(total_n - k) * amps.squeezed_at(k);
    state.coeffs[k] = term.scaled_by_log(-half_log_g).value();
  }
  return state;
}

std::vector<std::complex<double>> postselect_general(const LightSource& src,
                                                     std::size_t total_n) {
  std::vector<std::complex<double>> out(total_n + 1, {0.0, 0.0});
  for (std::size_t k = 0; k <= total_n; k += 2) {
    const LogSigned mag = coherent_amplitude(src.alpha_mag, total_n - k) *
                          squeezed_amplitude(src.xi_mag, k);
    if (mag.is_zero()) continue;
    const double phase = static_cast<double>(total_n - k) * src.theta_a +
                         0.5 * static_cast<double>(k) * src.theta_b;
    out[k] = std::polar(mag.value(), phase);
  }
  return out;
}

AmplitudeTable build_amplitude_table(const LightSource& src, double tail_tol,
                                     std::size_t cutoff_max) {
  if (!(tail_tol > 0.0) || tail_tol > 1e-3) {
    throw DomainError("tail_tol must lie in (0, 1e-3]");
  }
  const double log_tol = std::log(tail_tol);
  const double mean_a = src.mean_a();

  auto first_passing = [&](auto&& log_bound) -> std::size_t {
    for (std::size_t n = 0; n <= cutoff_max; ++n) {
      if (log_bound(n) < log_tol) return n;
    }
    throw CutoffOverflow("amplitude cutoff would exceed " + std::to_string(cutoff_max) +
                         " for tail_tol " + std::to_string(tail_tol));
  };

  const std::size_t coherent_cut =
      mean_a == 0.0 ? 0 : first_passing([&](std::size_t n) { return log_tail_bound_coherent(mean_a, n); });
  const std::size_t squeezed_cut =
      src.xi_mag == 0.0 ? 0
                        : first_passing([&](std::size_t n) { return log_tail_bound_squeezed(src.xi_mag, n); });
  return AmplitudeTable::with_cutoff(src, std::max(coherent_cut, squeezed_cut));
}

}  // namespace pnrmzi
