#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "pnrmzi/rotation.hpp"
#include "pnrmzi/states.hpp"

namespace pnrmzi {

struct DetectedCounts {
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  friend bool operator==(const DetectedCounts&, const DetectedCounts&) = default;
};

/// One detection event: resolved counts, or the overflow marker when N_a + N_b > N_res.
struct ClickRecord {
  std::optional<DetectedCounts> counts;

  static ClickRecord detected(std::size_t n_a, std::size_t n_b) {
    return ClickRecord{DetectedCounts{n_a, n_b}};
  }
  static ClickRecord overflow_marker() { return ClickRecord{}; }
  bool is_overflow() const { return !counts.has_value(); }
  friend bool operator==(const ClickRecord&, const ClickRecord&) = default;
};

/// 64-bit Mersenne Twister seeded from (seed, stream) through std::seed_seq.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0);

/// Inverse-CDF sampling over the outcome list (ordered by N then n_b) with the
/// overflow outcome last.
std::vector<ClickRecord> sample_clicks(const OutcomeDistribution& dist, std::size_t count,
                                       std::uint64_t seed);
std::vector<ClickRecord> sample_clicks(const OutcomeDistribution& dist, std::size_t count,
                                       std::mt19937_64& rng);

/// Log-likelihood table ln P(N, mu | phi) over a uniform phi grid strictly inside
/// (0, pi/2). Rows are computed on first use and cached; safe for concurrent readers.
class LikelihoodModel {
 public:
  LikelihoodModel(const AmplitudeTable& amps, Threshold n_res, double phi_step = 1e-4);

  std::size_t n_res() const { return n_res_; }
  std::size_t outcome_count() const { return (n_res_ + 1) * (n_res_ + 2) / 2; }
  double phi_step() const { return phi_step_; }
  /// Grid points are phi_i = i * step for i in [1, grid_size()].
  std::size_t grid_size() const { return grid_size_; }
  double phi_at(std::size_t i) const { return static_cast<double>(i) * phi_step_; }

  /// ln P for every detectable outcome at grid point i (flat outcome order).
  const std::vector<double>& log_probabilities(std::size_t i) const;
  /// ln P at an arbitrary phi, not cached.
  std::vector<double> log_probabilities_at(double phi) const;

  /// Relative cost of one grid row, sum over N of (N+1)^2.
  double row_cost() const;

 private:
  std::size_t n_res_;
  double phi_step_;
  std::size_t grid_size_;
  std::vector<YRotation> rotations_;
  std::vector<std::vector<double>> coeffs_;
  std::vector<double> log_gen_prob_;  ///< -inf where G_N = 0
  mutable std::vector<std::vector<double>> rows_;
  mutable std::unique_ptr<std::once_flag[]> row_ready_;
};

/// Histogram of records over the flat outcome index; overflow records are dropped.
std::vector<std::uint64_t> count_outcomes(std::span<const ClickRecord> records, std::size_t n_res);

/// Maximum-likelihood phase on (0, pi/2): grid argmax, then a parabola through the
/// winner and its neighbours. Overflow and vacuum records are phase-blind and do not
/// move the estimate. Throws DegenerateLikelihood when no record carries phase information.
double mle_estimate(std::span<const ClickRecord> records, const LikelihoodModel& model);
double mle_estimate(std::span<const std::uint64_t> counts, const LikelihoodModel& model);

struct EstimationRun {
  double true_phi = 0.0;
  std::size_t trials = 0;       ///< nu, detection events per experiment
  std::size_t repetitions = 0;
  std::vector<double> estimates;
  double mean_estimate = 0.0;
  double empirical_variance = 0.0;
  double fisher = 0.0;  ///< total Fisher information of the sampled model
  double crb = 0.0;     ///< 1 / (nu F)
  std::size_t n_res = 0;
  double ratio() const { return empirical_variance / crb; }
};

struct SimulationOptions {
  double tail_tol = kDefaultTailTol;
  double phi_step = 1e-4;
  /// For an infinite threshold the sampler resolves every N up to the point where
  /// the remaining generation probability falls below this.
  double overflow_tol = 1e-9;
  unsigned threads = 0;
};

/// The finite threshold used to simulate `n_res`; infinite thresholds are cut where
/// sum_{N > L} G_N < overflow_tol.
std::size_t simulation_threshold(const AmplitudeTable& amps, Threshold n_res,
                                 double overflow_tol);

/// Repeats a nu-trial experiment `repetitions` times with per-repetition seeds
/// (seed, repetition) and records the MLE spread against 1/(nu F).
EstimationRun crb_experiment(const LightSource& src, Threshold n_res, double true_phi,
                             std::size_t trials, std::size_t repetitions, std::uint64_t seed,
                             const SimulationOptions& options = {});

}  // namespace pnrmzi
