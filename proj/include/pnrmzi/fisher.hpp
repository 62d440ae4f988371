#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pnrmzi/rotation.hpp"
#include "pnrmzi/states.hpp"

namespace pnrmzi {

/// P below this is treated as an impossible outcome in CFI sums; for the smooth
/// families here (dP)^2/P -> 0 at such points.
inline constexpr double kProbabilityFloor = 1e-300;

struct PerNFisher {
  std::size_t total_n = 0;
  double fisher = 0.0;    ///< F_N = F_{Q,N}
  double gen_prob = 0.0;  ///< G_N
  double weighted = 0.0;  ///< G_N F_N
  std::optional<double> cfi_numeric;  ///< brute-force CFI at FisherReport::phi, small N only
};

struct FisherReport {
  double n_bar = 0.0;
  double n_bar_a = 0.0;
  double n_bar_b = 0.0;
  Threshold n_res;
  std::size_t effective_n_res = 0;
  std::size_t cutoff = 0;
  double phi = 0.0;
  std::vector<PerNFisher> per_n;
  double total_exact = 0.0;   ///< double sum over (N_a, N_b)
  double total_per_n = 0.0;   ///< sum_N G_N F_N, the independent route
  double total_ideal = 0.0;
  std::optional<double> total_approx;  ///< empty where the erfc form is undefined
};

struct FisherOptions {
  double phi = 0.7;
  std::size_t cfi_max_n = 40;  ///< numeric CFI is evaluated for N <= this
  unsigned threads = 0;
};

struct ApproxParams {
  double a_value = 0.0;
  double b_value = 0.0;
};

/// Both algebraic forms of the perfect-detector QFI.
struct IdealFisher {
  double closed_form = 0.0;  ///< alpha^2 e^{2 xi} + sinh^2 xi
  double mean_form = 0.0;    ///< n + 2 n_a n_b (1 + sqrt(1 + 1/n_b))
  double value() const { return closed_form; }
};

struct AsymptoticConstants {
  double leading = 0.0;                ///< 1 - erfc(1/sqrt 2) - sqrt(2/(e pi))
  double erfc_limit = 0.0;             ///< erfc(1/sqrt 2)
  double gaussian_limit = 0.0;         ///< sqrt(2/(e pi))
  double erfc_first_order = 0.0;       ///< coefficient of 1/n_b in erfc(A)
  double gaussian_second_order = 0.0;  ///< coefficient of 1/n_b^2 in 2A e^{-A^2}/sqrt(pi)
};

/// sum_mu (dP/dphi)^2 / P with analytic derivatives.
double cfi_per_n_numeric(const NPhotonState& state, double phi);
double cfi_per_n_numeric(const YRotation& rot, std::span<const double> coeffs, double phi);

/// CFI of the N-photon component of an arbitrary (possibly phase-mismatched) source,
/// using complex amplitudes.
double cfi_per_n_general(const LightSource& src, std::size_t total_n, double phi);

/// Closed form sum_k [N + 2k(N-k) + 2k alpha^2 / tanh xi] coeffs_k^2.
/// The tanh term is dropped when xi = 0, where it multiplies s_k = 0.
double cfi_per_n_analytic(const NPhotonState& state, double alpha_mag, double xi_mag);

/// 4<J_y^2> built from the number-operator and a^dag^2 b^2 matrix elements.
double qfi_per_n_operator_oracle(const NPhotonState& state);

/// 4(<J_y^2> - <J_y>^2) for any pure N-photon vector (normalized internally).
double qfi_pure_state(std::span<const std::complex<double>> coeffs);
/// <J_y> for a pure N-photon vector (normalized internally).
double mean_jy(std::span<const std::complex<double>> coeffs);

/// Truncated total QFI as a double sum over N_a + N_b <= n_res, evaluated with
/// compensated prefix sums over the squeezed marginal.
double total_fisher_exact_value(const AmplitudeTable& amps, const LightSource& src,
                                Threshold n_res);

/// Full report: double-sum total, per-N breakdown, ideal and erfc approximation.
/// Throws DomainError for a phase-mismatched source.
FisherReport total_fisher_exact(const AmplitudeTable& amps, const LightSource& src,
                                Threshold n_res, const FisherOptions& options = {});

IdealFisher total_fisher_ideal(const LightSource& src);

/// Throws DomainError when mean_b <= 0 or n_res < mean_a - 1.
ApproxParams approx_params(Threshold n_res, double mean_a, double mean_b);

/// Closed-form erfc approximation of the truncated total QFI. Same errors as approx_params.
double total_fisher_approx(const LightSource& src, Threshold n_res);

AsymptoticConstants asymptotic_constant();

}  // namespace pnrmzi
