#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "pnrmzi/states.hpp"

namespace pnrmzi {

/// Largest total photon number for which rotation blocks are built.
inline constexpr std::size_t kRotationCeiling = 512;

/// Dicke state |J, mu> = |J+mu>_a |J-mu>_b with N = 2J.
struct DickeIndex {
  std::size_t total_n = 0;
  int mu_twice = 0;

  static DickeIndex from_counts(std::size_t n_a, std::size_t n_b);
  std::size_t n_a() const { return (total_n + mu_twice) / 2; }
  std::size_t n_b() const { return (total_n - mu_twice) / 2; }
  bool valid() const;
};

/// d^J(phi) = exp(-i phi J_y) restricted to total photon number N.
/// Rows and columns are indexed by n_b = J - mu, so index 0 is mu = +J.
struct RotationBlock {
  std::size_t total_n = 0;
  double phi = 0.0;
  std::vector<double> d;  ///< row-major (N+1) x (N+1)

  std::size_t dim() const { return total_n + 1; }
  double operator()(std::size_t row, std::size_t col) const { return d[row * dim() + col]; }
};

/// Spectral form of exp(-i phi J_y) for one N, reusable across phi.
///
/// J_y is diagonally similar to the real symmetric tridiagonal J_x through
/// diag(i^k), so d(phi) = D V exp(-i phi Lambda) V^T D^-1 with real orthogonal V
/// and Lambda = {-J, ..., +J}. Applying it to a vector costs O(N^2).
class YRotation {
 public:
  /// Throws SizeExceeded above kRotationCeiling.
  explicit YRotation(std::size_t total_n);

  std::size_t total_n() const { return total_n_; }
  std::size_t dim() const { return total_n_ + 1; }

  RotationBlock block(double phi) const;
  std::vector<double> apply(std::span<const double> coeffs, double phi) const;
  std::vector<std::complex<double>> apply(std::span<const std::complex<double>> coeffs,
                                          double phi) const;

 private:
  std::size_t total_n_;
  std::vector<double> eigenvectors_;  ///< column-major dim x dim, column m <-> eigenvalue m - J
  std::vector<double> eigenvalues_;
};

RotationBlock wigner_d_block(std::size_t total_n, double phi);

/// out = G v with G = -i J_y = (b^dag a - a^dag b)/2, a real antisymmetric tridiagonal matrix.
template <class T>
void apply_generator(std::span<const T> v, std::span<T> out);

/// P_N(mu | phi) indexed by n_b.
std::vector<double> conditional_probabilities(const NPhotonState& state, double phi);
std::vector<double> conditional_probabilities(const YRotation& rot, std::span<const double> coeffs,
                                              double phi);

/// dP_N(mu | phi)/dphi = 2 <J,mu|psi(phi)> <J,mu|(-i J_y)|psi(phi)>, indexed by n_b.
std::vector<double> probability_derivatives(const NPhotonState& state, double phi);
std::vector<double> probability_derivatives(const YRotation& rot, std::span<const double> coeffs,
                                            double phi);

/// Probabilities and derivatives for a general complex N-photon vector
/// (normalized or not); dP = 2 Re(conj(z) G z).
struct ComplexProbabilities {
  std::vector<double> probability;
  std::vector<double> derivative;
};
ComplexProbabilities complex_probabilities(const YRotation& rot,
                                           std::span<const std::complex<double>> coeffs,
                                           double phi);

struct Outcome {
  std::size_t total_n = 0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  double probability = 0.0;
};

/// Joint P(N, mu | phi) = G_N P_N(mu | phi) over every detectable event with
/// N <= n_res, ordered by N then n_b, plus the single overflow outcome.
struct OutcomeDistribution {
  std::vector<Outcome> outcomes;
  double overflow = 0.0;
  std::size_t n_res = 0;
  double phi = 0.0;

  static std::size_t flat_index(std::size_t n_a, std::size_t n_b) {
    const std::size_t n = n_a + n_b;
    return n * (n + 1) / 2 + n_b;
  }
};

/// The effective finite threshold used for an amplitude table: n_res capped at
/// the cutoff-complete value 2 * cutoff.
std::size_t effective_threshold(const AmplitudeTable& amps, Threshold n_res);

/// Throws SizeExceeded if the effective threshold exceeds kRotationCeiling.
OutcomeDistribution full_outcome_distribution(const AmplitudeTable& amps, Threshold n_res,
                                              double phi);

}  // namespace pnrmzi
