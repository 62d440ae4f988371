#include "pnrmzi/fisher.hpp"

#include <cmath>
#include <numbers>

#include "pnrmzi/errors.hpp"
#include "pnrmzi/parallel.hpp"

namespace pnrmzi {

namespace {

using cplx = std::complex<double>;

double sum_fisher_terms(std::span<const double> probs, std::span<const double> derivs) {
  CompensatedSum total;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    if (probs[j] < kProbabilityFloor) continue;
    total.add(derivs[j] * derivs[j] / probs[j]);
  }
  return total.value();
}

// 2 alpha^2 / tanh xi, or 0 when xi = 0 (it only ever multiplies k s_k^2 with k >= 1).
double cross_coefficient(double alpha_mag, double xi_mag) {
  if (xi_mag == 0.0) return 0.0;
  return 2.0 * alpha_mag * alpha_mag / std::tanh(xi_mag);
}

// G_N F_N accumulated directly from the amplitude table in log domain.
LogSigned log_weighted_fisher(const AmplitudeTable& amps, std::size_t n, double cross) {
  std::vector<LogSigned> terms;
  terms.reserve(n / 2 + 1);
  const double nd = static_cast<double>(n);
  for (std::size_t k = 0; k <= n && k <= amps.cutoff; k += 2) {
    if (n - k > amps.cutoff) continue;
    const LogSigned c = amps.coherent_at(n - k);
    const LogSigned s = amps.squeezed_at(k);
    if (c.is_zero() || s.is_zero()) continue;
    const double kd = static_cast<double>(k);
    const double weight = nd + 2.0 * kd * (nd - kd) + cross * kd;
    if (weight == 0.0) continue;
    terms.push_back(LogSigned::from_log(c.log_square() + s.log_square() + std::log(weight), 1));
  }
  return log_sum_exp(terms);
}

}  // namespace

double cfi_per_n_numeric(const YRotation& rot, std::span<const double> coeffs, double phi) {
  const auto probs = conditional_probabilities(rot, coeffs, phi);
  const auto derivs = probability_derivatives(rot, coeffs, phi);
  return sum_fisher_terms(probs, derivs);
}

double cfi_per_n_numeric(const NPhotonState& state, double phi) {
  return cfi_per_n_numeric(YRotation(state.total_n), state.coeffs, phi);
}

double cfi_per_n_general(const LightSource& src, std::size_t total_n, double phi) {
  auto coeffs = postselect_general(src, total_n);
  double norm = 0.0;
  for (const auto& c : coeffs) norm += std::norm(c);
  if (norm == 0.0) {
    throw ZeroProbability("N = " + std::to_string(total_n) + " has zero generation probability");
  }
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& c : coeffs) c *= scale;
  const auto cp = complex_probabilities(YRotation(total_n), coeffs, phi);
  return sum_fisher_terms(cp.probability, cp.derivative);
}

double cfi_per_n_analytic(const NPhotonState& state, double alpha_mag, double xi_mag) {
  const double n = static_cast<double>(state.total_n);
  CompensatedSum number_part;
  CompensatedSum k_weighted;
  for (std::size_t k = 0; k < state.coeffs.size(); ++k) {
    const double w = state.coeffs[k] * state.coeffs[k];
    if (w == 0.0) continue;
    const double kd = static_cast<double>(k);
    number_part.add((n + 2.0 * kd * (n - kd)) * w);
    k_weighted.add(kd * w);
  }
  const double ks = k_weighted.value();
  const double cross = ks == 0.0 ? 0.0 : cross_coefficient(alpha_mag, xi_mag) * ks;
  return number_part.value() + cross;
}

double qfi_per_n_operator_oracle(const NPhotonState& state) {
  std::vector<cplx> c(state.coeffs.begin(), state.coeffs.end());
  return qfi_pure_state(c);
}

double mean_jy(std::span<const cplx> coeffs) {
  const std::size_t size = coeffs.size();
  const double n = static_cast<double>(size - 1);
  double norm = 0.0;
  for (const auto& x : coeffs) norm += std::norm(x);
  cplx a_dag_b{0.0, 0.0};
  for (std::size_t k = 1; k < size; ++k) {
    const double kd = static_cast<double>(k);
    a_dag_b += std::conj(coeffs[k - 1]) * coeffs[k] * std::sqrt(kd * (n - kd + 1.0));
  }
  // J_y = (a^dag b - b^dag a)/(2i)  =>  <J_y> = Im <a^dag b>
  return a_dag_b.imag() / norm;
}

double qfi_pure_state(std::span<const cplx> coeffs) {
  const std::size_t size = coeffs.size();
  const double n = static_cast<double>(size - 1);
  double norm = 0.0;
  for (const auto& x : coeffs) norm += std::norm(x);
  if (norm == 0.0) throw ZeroProbability("QFI of a zero vector");

  // 4 J_y^2 = 2 a^dag a b^dag b + a^dag a + b^dag b - (a^dag^2 b^2 + h.c.)
  double diagonal = 0.0;
  for (std::size_t k = 0; k < size; ++k) {
    const double kd = static_cast<double>(k);
    diagonal += (2.0 * (n - kd) * kd + n) * std::norm(coeffs[k]);
  }
  cplx pair_hop{0.0, 0.0};
  for (std::size_t k = 2; k < size; ++k) {
    const double kd = static_cast<double>(k);
    const double me = std::sqrt(kd * (kd - 1.0) * (n - kd + 1.0) * (n - kd + 2.0));
    pair_hop += std::conj(coeffs[k - 2]) * coeffs[k] * me;
  }
  const double jy2 = (diagonal - 2.0 * pair_hop.real()) / norm;
  const double jy = mean_jy(coeffs);
  return jy2 - 4.0 * jy * jy;
}

double total_fisher_exact_value(const AmplitudeTable& amps, const LightSource& src,
                                Threshold n_res) {
  const std::size_t limit = effective_threshold(amps, n_res);
  const double cross = cross_coefficient(src.alpha_mag, src.xi_mag);

  // Prefix sums S0(M) = sum_{k<=M} s_k^2 and S1(M) = sum_{k<=M} k s_k^2.
  const std::size_t s_len = std::min(limit, amps.cutoff) + 1;
  std::vector<double> s0(s_len);
  std::vector<double> s1(s_len);
  CompensatedSum acc0;
  CompensatedSum acc1;
  for (std::size_t k = 0; k < s_len; ++k) {
    const double p = amps.squeezed_probability(k);
    acc0.add(p);
    acc1.add(static_cast<double>(k) * p);
    s0[k] = acc0.value();
    s1[k] = acc1.value();
  }

  CompensatedSum total;
  const std::size_t a_max = std::min(limit, amps.cutoff);
  for (std::size_t na = 0; na <= a_max; ++na) {
    const double pa = amps.coherent_probability(na);
    if (pa == 0.0) continue;
    const std::size_t m = std::min(limit - na, s_len - 1);
    const double nad = static_cast<double>(na);
    total.add(pa * (nad * s0[m] + (1.0 + 2.0 * nad + cross) * s1[m]));
  }
  return total.value();
}

FisherReport total_fisher_exact(const AmplitudeTable& amps, const LightSource& src,
                                Threshold n_res, const FisherOptions& options) {
  if (!src.phase_matched()) {
    throw DomainError("exact total Fisher information requires a phase-matched source");
  }
  FisherReport report;
  report.n_bar_a = src.mean_a();
  report.n_bar_b = src.mean_b();
  report.n_bar = report.n_bar_a + report.n_bar_b;
  report.n_res = n_res;
  report.effective_n_res = effective_threshold(amps, n_res);
  report.cutoff = amps.cutoff;
  report.phi = options.phi;
  report.total_exact = total_fisher_exact_value(amps, src, n_res);
  report.total_ideal = total_fisher_ideal(src).value();
  try {
    report.total_approx = total_fisher_approx(src, n_res);
  } catch (const DomainError&) {
    report.total_approx.reset();
  }

  const double cross = cross_coefficient(src.alpha_mag, src.xi_mag);
  report.per_n.resize(report.effective_n_res + 1);
  parallel_for(report.per_n.size(), options.threads, [&](std::size_t n) {
    PerNFisher rec;
    rec.total_n = n;
    const LogSigned log_g = log_generation_probability(amps, n);
    if (!log_g.is_zero()) {
      const LogSigned log_w = log_weighted_fisher(amps, n, cross);
      rec.gen_prob = generation_probability(amps, n);
      rec.weighted = log_w.value();
      rec.fisher = (log_w / log_g).value();
      if (n <= options.cfi_max_n && n <= kRotationCeiling) {
        rec.cfi_numeric = cfi_per_n_numeric(postselect(amps, n), options.phi);
      }
    }
    report.per_n[n] = rec;
  });
  CompensatedSum per_n_total;
  for (const auto& rec : report.per_n) per_n_total.add(rec.weighted);
  report.total_per_n = per_n_total.value();
  return report;
}

IdealFisher total_fisher_ideal(const LightSource& src) {
  const double na = src.mean_a();
  const double nb = src.mean_b();
  IdealFisher out;
  out.closed_form = na * std::exp(2.0 * src.xi_mag) + nb;
  out.mean_form = na + nb;
  if (nb > 0.0) out.mean_form += 2.0 * na * nb * (1.0 + std::sqrt(1.0 + 1.0 / nb));
  return out;
}

ApproxParams approx_params(Threshold n_res, double mean_a, double mean_b) {
  if (!(mean_b > 0.0)) throw DomainError("erfc approximation needs a squeezed input (n_b > 0)");
  ApproxParams p;
  p.b_value = std::log1p(1.0 / mean_b);
  if (n_res.is_infinite()) {
    p.a_value = std::numeric_limits<double>::infinity();
    return p;
  }
  const double span = static_cast<double>(n_res.value()) - mean_a + 1.0;
  if (span < 0.0) throw DomainError("erfc approximation needs n_res >= n_a - 1");
  p.a_value = std::sqrt(0.5 * span * p.b_value);
  return p;
}

double total_fisher_approx(const LightSource& src, Threshold n_res) {
  const double na = src.mean_a();
  const double nb = src.mean_b();
  const ApproxParams p = approx_params(n_res, na, nb);
  const double ideal = total_fisher_ideal(src).value();
  if (std::isinf(p.a_value)) return ideal;
  const double a = p.a_value;
  const double tail = pnrmzi::erfc(a) + 2.0 * a / std::sqrt(std::numbers::pi) * std::exp(-a * a);
  const double prefactor = std::sqrt(nb / (1.0 + nb)) * std::pow(nb * p.b_value, -1.5);
  return ideal * (1.0 - prefactor * tail);
}

AsymptoticConstants asymptotic_constant() {
  const double root_2e_pi = std::sqrt(2.0 * std::numbers::e * std::numbers::pi);
  AsymptoticConstants c;
  c.erfc_limit = pnrmzi::erfc(1.0 / std::numbers::sqrt2);
  c.gaussian_limit = std::sqrt(2.0 / (std::numbers::e * std::numbers::pi));
  c.leading = 1.0 - c.erfc_limit - c.gaussian_limit;
  c.erfc_first_order = -1.0 / (2.0 * root_2e_pi);
  c.gaussian_second_order = -1.0 / (8.0 * root_2e_pi);
  return c;
}

}  // namespace pnrmzi
