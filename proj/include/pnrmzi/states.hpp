#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pnrmzi/numerics.hpp"

namespace pnrmzi {

/// Detector number-resolution threshold: a finite N_res or "inf" (perfect resolution).
class Threshold {
 public:
  constexpr Threshold() = default;
  static constexpr Threshold finite(std::size_t n) { return Threshold{n}; }
  static constexpr Threshold infinite() { return Threshold{}; }
  /// Accepts a non-negative integer or the literal "inf".
  static Threshold parse(const std::string& text);

  bool is_infinite() const { return !value_.has_value(); }
  std::size_t value() const { return value_.value(); }
  /// The finite threshold, or `cap` when infinite; never above `cap`.
  std::size_t resolve(std::size_t cap) const;
  std::string to_string() const;

  friend bool operator==(const Threshold&, const Threshold&) = default;

 private:
  constexpr explicit Threshold(std::size_t n) : value_(n) {}
  std::optional<std::size_t> value_;
};

/// Product input |alpha> (x) |xi> of the interferometer.
struct LightSource {
  double alpha_mag = 0.0;  ///< |alpha|
  double theta_a = 0.0;    ///< arg alpha (rad)
  double xi_mag = 0.0;     ///< |xi|
  double theta_b = 0.0;    ///< arg xi (rad)

  /// Real (phase-matched) source with alpha^2 = mean_a and sinh^2 xi = mean_b.
  static LightSource from_means(double mean_a, double mean_b);
  /// Real source with total mean n_bar, alpha^2 = alpha2 and sinh^2 xi = n_bar - alpha2.
  static LightSource from_split(double n_bar, double alpha2);

  double mean_a() const { return alpha_mag * alpha_mag; }
  double mean_b() const;
  double mean_photons() const { return mean_a() + mean_b(); }
  /// cos(theta_b - 2 theta_a) = +1 within 1e-12.
  bool phase_matched() const;
};

/// Fock amplitudes c_n and s_k of both inputs at theta_a = theta_b = 0.
struct AmplitudeTable {
  std::vector<LogSigned> coherent;
  std::vector<LogSigned> squeezed;
  std::size_t cutoff = 0;
  double alpha_mag = 0.0;
  double xi_mag = 0.0;

  /// Table holding exactly indices [0, cutoff] regardless of tail mass.
  static AmplitudeTable with_cutoff(const LightSource& src, std::size_t cutoff);

  /// |c_n|^2 and |s_k|^2; zero beyond the cutoff.
  double coherent_probability(std::size_t n) const;
  double squeezed_probability(std::size_t k) const;
  LogSigned coherent_at(std::size_t n) const;
  LogSigned squeezed_at(std::size_t k) const;
};

/// Normalized post-selected N-photon state; coeffs[k] multiplies |N-k>_a |k>_b.
struct NPhotonState {
  std::size_t total_n = 0;
  std::vector<double> coeffs;
  double gen_prob = 0.0;
};

inline constexpr double kDefaultTailTol = 1e-12;
inline constexpr std::size_t kDefaultCutoffMax = 32768;

/// <n|alpha> for real alpha >= 0: e^{-alpha^2/2} alpha^n / sqrt(n!).
LogSigned coherent_amplitude(double alpha_mag, std::size_t n);

/// <k|xi> for real xi >= 0: H_k(0) / sqrt(k! cosh xi) (tanh xi / 2)^{k/2}; zero for odd k.
LogSigned squeezed_amplitude(double xi_mag, std::size_t k);

enum class DistributionMode { exact, stirling };

/// p(n) for n in [0, k_max] of the squeezed vacuum; odd entries are zero.
/// Stirling mode uses (1/cosh xi) tanh^{2k} xi / sqrt(pi k) for n = 2k >= 2 and
/// the exact 1/cosh xi at n = 0.
std::vector<double> squeezed_number_distribution(double xi_mag, std::size_t k_max,
                                                 DistributionMode mode);

/// G_N = sum_k |c_{N-k} s_k|^2. Values below 1e-300 are reported as 0.
double generation_probability(const AmplitudeTable& amps, std::size_t total_n);
LogSigned log_generation_probability(const AmplitudeTable& amps, std::size_t total_n);

/// Throws ZeroProbability when G_N = 0.
NPhotonState postselect(const AmplitudeTable& amps, std::size_t total_n);

/// Unnormalized complex post-selection coefficients c_{N-k}(theta_a) s_k(theta_b)
/// for an arbitrary (not necessarily phase-matched) source.
std::vector<std::complex<double>> postselect_general(const LightSource& src,
                                                     std::size_t total_n);

/// Smallest cutoff such that each marginal tail holds less than tail_tol.
/// Throws DomainError for tail_tol outside (0, 1e-3] and CutoffOverflow past cutoff_max.
AmplitudeTable build_amplitude_table(const LightSource& src, double tail_tol = kDefaultTailTol,
                                     std::size_t cutoff_max = kDefaultCutoffMax);

}  // namespace pnrmzi
