#include "pnrmzi/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pnrmzi/errors.hpp"
#include "pnrmzi/fisher.hpp"
#include "pnrmzi/parallel.hpp"

namespace pnrmzi {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Above this many complex multiply-adds a full-grid scan is replaced by a coarse
// pass plus a full-resolution pass around the coarse winner.
constexpr double kFullScanBudget = 3e8;
constexpr double kCoarseSpacing = 1e-2;

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double log_likelihood(std::span<const std::size_t> support, std::span<const std::uint64_t> counts,
                      const std::vector<double>& row) {
  double total = 0.0;
  for (std::size_t j : support) {
    const double lp = row[j];
    if (lp == kNegInf) return kNegInf;
    total += static_cast<double>(counts[j]) * lp;
  }
  return total;
}

}  // namespace

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

std::vector<ClickRecord> sample_clicks(const OutcomeDistribution& dist, std::size_t count,
                                       std::mt19937_64& rng) {
  std::vector<double> cdf(dist.outcomes.size());
  CompensatedSum running;
  for (std::size_t j = 0; j < dist.outcomes.size(); ++j) {
    running.add(dist.outcomes[j].probability);
    cdf[j] = running.value();
  }
  std::vector<ClickRecord> out;
  out.reserve(count);
  for (std::size_t t = 0; t < count; ++t) {
    const double u = uniform01(rng);
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) {
      out.push_back(ClickRecord::overflow_marker());
      continue;
    }
    const Outcome& o = dist.outcomes[static_cast<std::size_t>(it - cdf.begin())];
    out.push_back(ClickRecord::detected(o.n_a, o.n_b));
  }
  return out;
}

std::vector<ClickRecord> sample_clicks(const OutcomeDistribution& dist, std::size_t count,
                                       std::uint64_t seed) {
  auto rng = make_rng(seed);
  return sample_clicks(dist, count, rng);
}

LikelihoodModel::LikelihoodModel(const AmplitudeTable& amps, Threshold n_res, double phi_step)
    : n_res_(effective_threshold(amps, n_res)), phi_step_(phi_step) {
  if (!(phi_step > 0.0) || phi_step >= std::numbers::pi / 4.0) {
    throw DomainError("phi grid step must lie in (0, pi/4)");
  }
  auto m = static_cast<std::size_t>(std::floor(0.5 * std::numbers::pi / phi_step));
  while (m > 0 && static_cast<double>(m) * phi_step >= 0.5 * std::numbers::pi) --m;
  grid_size_ = m;

  rotations_.reserve(n_res_ + 1);
  coeffs_.resize(n_res_ + 1);
  log_gen_prob_.assign(n_res_ + 1, kNegInf);
  for (std::size_t n = 0; n <= n_res_; ++n) {
    rotations_.emplace_back(n);
    const LogSigned log_g = log_generation_probability(amps, n);
    if (log_g.is_zero()) continue;
    log_gen_prob_[n] = log_g.log_magnitude();
    coeffs_[n] = postselect(amps, n).coeffs;
  }
  rows_.resize(grid_size_ + 1);
  row_ready_ = std::make_unique<std::once_flag[]>(grid_size_ + 1);
}

double LikelihoodModel::row_cost() const {
  double cost = 0.0;
  for (std::size_t n = 0; n <= n_res_; ++n) cost += static_cast<double>((n + 1) * (n + 1));
  return cost;
}

std::vector<double> LikelihoodModel::log_probabilities_at(double phi) const {
  std::vector<double> row(outcome_count(), kNegInf);
  for (std::size_t n = 0; n <= n_res_; ++n) {
    if (log_gen_prob_[n] == kNegInf) continue;
    const auto probs = conditional_probabilities(rotations_[n], coeffs_[n], phi);
    const std::size_t offset = n * (n + 1) / 2;
    for (std::size_t k = 0; k <= n; ++k) {
      row[offset + k] = probs[k] > 0.0 ? log_gen_prob_[n] + std::log(probs[k]) : kNegInf;
    }
  }
  return row;
}

const std::vector<double>& LikelihoodModel::log_probabilities(std::size_t i) const {
  std::call_once(row_ready_[i], [&] { rows_[i] = log_probabilities_at(phi_at(i)); });
  return rows_[i];
}

std::vector<std::uint64_t> count_outcomes(std::span<const ClickRecord> records, std::size_t n_res) {
  std::vector<std::uint64_t> counts((n_res + 1) * (n_res + 2) / 2, 0);
  for (const auto& r : records) {
    if (r.is_overflow()) continue;
    if (r.counts->n_a + r.counts->n_b > n_res) {
      throw std::invalid_argument("detected record exceeds the model threshold");
    }
    ++counts[OutcomeDistribution::flat_index(r.counts->n_a, r.counts->n_b)];
  }
  return counts;
}

double mle_estimate(std::span<const std::uint64_t> counts, const LikelihoodModel& model) {
  std::vector<std::size_t> support;
  bool informative = false;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] == 0) continue;
    support.push_back(j);
    if (j > 0) informative = true;  // index 0 is the vacuum outcome
  }
  if (!informative) {
    throw DegenerateLikelihood("no detected record carries phase information");
  }

  const std::size_t m = model.grid_size();
  auto value = [&](std::size_t i) {
    return log_likelihood(support, counts, model.log_probabilities(i));
  };

  std::size_t lo = 1;
  std::size_t hi = m;
  if (model.row_cost() * static_cast<double>(m) > kFullScanBudget) {
    const std::size_t stride =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(kCoarseSpacing / model.phi_step())));
    std::size_t coarse_best = 1;
    double coarse_value = kNegInf;
    for (std::size_t i = 1; i <= m; i += stride) {
      const double v = value(i);
      if (v > coarse_value) {
        coarse_value = v;
        coarse_best = i;
      }
    }
    lo = coarse_best > 2 * stride ? coarse_best - 2 * stride : 1;
    hi = std::min(m, coarse_best + 2 * stride);
  }

  std::size_t best = lo;
  double best_value = kNegInf;
  for (std::size_t i = lo; i <= hi; ++i) {
    const double v = value(i);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }

  double phi = model.phi_at(best);
  if (best > 1 && best < m) {
    const double left = value(best - 1);
    const double right = value(best + 1);
    const double curvature = left - 2.0 * best_value + right;
    if (std::isfinite(left) && std::isfinite(right) && curvature < 0.0) {
      const double offset = std::clamp(0.5 * (left - right) / curvature, -0.5, 0.5);
      phi += offset * model.phi_step();
    }
  }
  return phi;
}

double mle_estimate(std::span<const ClickRecord> records, const LikelihoodModel& model) {
  if (records.empty()) throw DegenerateLikelihood("no records");
  const auto counts = count_outcomes(records, model.n_res());
  return mle_estimate(counts, model);
}

std::size_t simulation_threshold(const AmplitudeTable& amps, Threshold n_res,
                                 double overflow_tol) {
  const std::size_t cap = effective_threshold(amps, n_res);
  if (!n_res.is_infinite()) return cap;
  CompensatedSum detected;
  for (std::size_t n = 0; n <= cap; ++n) {
    detected.add(generation_probability(amps, n));
    if (1.0 - detected.value() < overflow_tol) return n;
  }
  return cap;
}

EstimationRun crb_experiment(const LightSource& src, Threshold n_res, double true_phi,
                             std::size_t trials, std::size_t repetitions, std::uint64_t seed,
                             const SimulationOptions& options) {
  if (trials == 0 || repetitions < 2) {
    throw DomainError("need trials >= 1 and repetitions >= 2");
  }
  const AmplitudeTable amps = build_amplitude_table(src, options.tail_tol);
  const Threshold threshold =
      Threshold::finite(simulation_threshold(amps, n_res, options.overflow_tol));
  const OutcomeDistribution dist = full_outcome_distribution(amps, threshold, true_phi);
  const LikelihoodModel model(amps, threshold, options.phi_step);

  EstimationRun run;
  run.true_phi = true_phi;
  run.trials = trials;
  run.repetitions = repetitions;
  run.n_res = threshold.value();
  run.fisher = total_fisher_exact_value(amps, src, threshold);
  run.crb = 1.0 / (static_cast<double>(trials) * run.fisher);
  run.estimates.assign(repetitions, 0.0);

  parallel_for(repetitions, options.threads, [&](std::size_t r) {
    auto rng = make_rng(seed, r);
    const auto records = sample_clicks(dist, trials, rng);
    run.estimates[r] = mle_estimate(records, model);
  });

  CompensatedSum mean;
  for (double e : run.estimates) mean.add(e);
  run.mean_estimate = mean.value() / static_cast<double>(repetitions);
  CompensatedSum var;
  for (double e : run.estimates) var.add((e - run.mean_estimate) * (e - run.mean_estimate));
  run.empirical_variance = var.value() / static_cast<double>(repetitions - 1);
  return run;
}

}  // namespace pnrmzi
