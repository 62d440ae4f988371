// Acceptance suite: one PASS/FAIL line per criterion.
//   pnrmzi_acceptance                 run every criterion
//   pnrmzi_acceptance --criterion 7   run one
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "pnrmzi/fisher.hpp"
#include "pnrmzi/optimize.hpp"
#include "pnrmzi/rotation.hpp"
#include "pnrmzi/simulate.hpp"
#include "pnrmzi/states.hpp"

using namespace pnrmzi;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Verdict equivalence_identity() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const double n_bar = 0.5 + 19.5 * u(rng);
    const LightSource src = LightSource::from_split(n_bar, n_bar * (0.05 + 0.9 * u(rng)));
    const auto amps = build_amplitude_table(src);
    for (std::size_t n = 0; n <= 40; ++n) {
      const auto st = postselect(amps, n);
      const double analytic = cfi_per_n_analytic(st, src.alpha_mag, src.xi_mag);
      const YRotation rot(n);
      for (double phi : {0.3, 0.7, 1.2}) {
        const double numeric = cfi_per_n_numeric(rot, st.coeffs, phi);
        const double err = n == 0 ? std::abs(numeric - analytic) : std::abs(numeric / analytic - 1.0);
        worst = std::max(worst, err);
      }
    }
  }
  return {worst <= 1e-8, fmt("max |F_num/F_analytic - 1| = %.3g over 10 sources, N <= 40, 3 phases", worst)};
}

Verdict ideal_limit() {
  double worst = 0.0;
  for (double n_bar : {2.0, 10.0, 50.0}) {
    for (double frac : {0.25, 0.5, 0.75}) {
      const LightSource src = LightSource::from_split(n_bar, frac * n_bar);
      const auto amps = build_amplitude_table(src, 1e-14);
      const double exact = total_fisher_exact_value(amps, src, Threshold::infinite());
      const double ideal = src.mean_a() * std::exp(2.0 * src.xi_mag) + src.mean_b();
      worst = std::max(worst, std::abs(exact / ideal - 1.0));
    }
  }
  return {worst <= 1e-8, fmt("max relative deviation from alpha^2 e^{2 xi} + sinh^2 xi = %.3g", worst)};
}

Verdict single_component_point() {
  const auto opt = optimize_single_component(8.0, 0.01, default_single_component_n_max(8.0));
  const double ratio = opt.alpha2_opt / 8.0;
  return {opt.n_opt == 10 && std::abs(ratio - 0.75) <= 0.02 + 1e-12,
          fmt("N* = %zu, alpha^2*/n = %.4f, G_N F_N = %.6g", opt.n_opt, ratio, opt.max_value)};
}

Verdict single_component_fit() {
  const auto ns = log_spaced(1.0, 200.0, 40);
  OptimizeOptions opt;
  opt.refine = false;
  const auto rows = single_component_scan(ns, opt);
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows) pts.emplace_back(r.n_bar, r.max_value);
  const auto fit = fit_power_law(pts);
  const bool pass = std::abs(fit.exponent - 1.08) <= 0.06 && std::abs(fit.prefactor - 0.52) <= 0.08;
  return {pass, fmt("fit c = %.4f, p = %.4f (rms %.3g) over 40 log-spaced n in [1, 200]", fit.prefactor,
                    fit.exponent, fit.residual)};
}

std::vector<ScanResult> threshold_equals_n(const std::vector<double>& ns) {
  std::vector<ScanResult> out;
  OptimizeOptions opt;
  opt.refine = false;
  for (double n_bar : ns) {
    out.push_back(optimize_alpha(n_bar, Threshold::finite(static_cast<std::size_t>(n_bar)), Engine::exact, opt));
  }
  return out;
}

Verdict half_split_limit() {
  std::vector<double> ns;
  for (int n = 50; n <= 100; ++n) ns.push_back(n);
  const auto scans = threshold_equals_n(ns);
  double lo = 1.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double r = scans[i].argmax / ns[i];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo >= 0.45 && hi <= 0.55, fmt("alpha^2_opt/n in [%.3f, %.3f] for integer n in [50, 100]", lo, hi)};
}

Verdict quadratic_scaling() {
  const std::vector<double> ns = {50.0, 80.0, 100.0};
  const auto scans = threshold_equals_n(ns);
  bool pass = true;
  std::string detail = "F_opt/n^2 =";
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const double r = scans[i].max_value / (ns[i] * ns[i]);
    pass = pass && r >= 0.17 && r <= 0.23;
    detail += fmt(" %.4f (n=%g)", r, ns[i]);
  }
  const double c = asymptotic_constant().leading;
  pass = pass && std::abs(c - 0.1987) <= 1e-4;
  return {pass, detail + fmt("; constant = %.10f", c)};
}

Verdict classical_crossing() {
  OptimizeOptions opt;
  opt.refine = false;
  int crossing = -1;
  double value = 0.0;
  for (int n = 1; n <= 40 && crossing < 0; ++n) {
    const auto scan = optimize_alpha(n, Threshold::finite(static_cast<std::size_t>(n)), Engine::exact, opt);
    if (scan.max_value > n) {
      crossing = n;
      value = scan.max_value;
    }
  }
  if (crossing < 0) return {false, "no crossing for n <= 40"};
  // Independent route at the crossing: sum_N G_N F_N with brute-force CFIs.
  OptimizeOptions fine;
  const auto scan = optimize_alpha(crossing, Threshold::finite(static_cast<std::size_t>(crossing)), Engine::exact, fine);
  const LightSource src = LightSource::from_split(crossing, scan.argmax);
  const auto amps = build_amplitude_table(src);
  const auto rep = total_fisher_exact(amps, src, Threshold::finite(static_cast<std::size_t>(crossing)));
  double via_cfi = 0.0;
  for (const auto& rec : rep.per_n) via_cfi += rec.gen_prob * rec.cfi_numeric.value_or(0.0);
  // Below the crossing the best total stays under the classical line.
  const auto below = optimize_alpha(crossing - 1, Threshold::finite(static_cast<std::size_t>(crossing - 1)),
                                    Engine::exact, fine);
  return {crossing >= 8 && crossing <= 13,
          fmt("smallest integer n with F_opt > n is %d (F_opt = %.4f; CFI route %.4f; at n = %d F_opt = %.4f)",
              crossing, value, via_cfi, crossing - 1, below.refined_max)};
}

Verdict approximation_fidelity() {
  const double n_bar = 10.0;
  OptimizeOptions opt;
  opt.refine = false;
  bool pass = true;
  std::string detail;
  for (std::size_t k : {2u, 5u}) {
    const Threshold th = Threshold::finite(k * 10);
    const auto exact = optimize_alpha(n_bar, th, Engine::exact, opt);
    const auto approx = optimize_alpha(n_bar, th, Engine::approx, opt);
    const double steps = std::abs(exact.argmax - approx.argmax) / exact.resolution;
    pass = pass && steps <= 2.0 + 1e-9;
    // relative error of the closed form at the exact optimum
    const double at_opt = total_fisher_approx(LightSource::from_split(n_bar, exact.argmax), th);
    detail += fmt("N_res=%zu: alpha^2 exact %.2f approx %.2f (%.0f steps, value error %.2f%%); ", k * 10,
                  exact.argmax, approx.argmax, steps, 100.0 * (at_opt / exact.max_value - 1.0));
  }
  return {pass, detail};
}

Verdict overflow_invariance() {
  const LightSource src = LightSource::from_split(10.0, 5.0);
  const auto amps = build_amplitude_table(src);
  const Threshold th = Threshold::finite(10);
  double spread = 0.0;
  const double ref = full_outcome_distribution(amps, th, 0.3).overflow;
  for (double phi : {0.0, 0.3, 0.6, 1.1, 1.5, 2.4}) {
    spread = std::max(spread, std::abs(full_outcome_distribution(amps, th, phi).overflow - ref));
  }
  // dP_add/dphi = -sum_N G_N sum_mu dP_N(mu)/dphi, and the information it carries.
  double worst_deriv = 0.0;
  double worst_info = 0.0;
  double info_gap = 0.0;
  for (double phi : {0.3, 0.7, 1.1}) {
    double d_add = 0.0;
    double detected_info = 0.0;
    for (std::size_t n = 0; n <= 10; ++n) {
      const double g = generation_probability(amps, n);
      if (g == 0.0) continue;
      const auto st = postselect(amps, n);
      const auto dp = probability_derivatives(st, phi);
      const auto p = conditional_probabilities(st, phi);
      for (std::size_t k = 0; k <= n; ++k) {
        d_add -= g * dp[k];
        if (p[k] > 1e-300) detected_info += g * dp[k] * dp[k] / p[k];
      }
    }
    worst_deriv = std::max(worst_deriv, std::abs(d_add));
    worst_info = std::max(worst_info, d_add * d_add / ref);
    info_gap = std::max(info_gap, std::abs(detected_info / total_fisher_exact_value(amps, src, th) - 1.0));
  }
  return {spread <= 1e-12 && worst_deriv <= 1e-12 && worst_info <= 1e-12 && info_gap <= 1e-8,
          fmt("P_add spread %.2g, |dP_add/dphi| <= %.2g, overflow information <= %.2g, detected CFI vs total %.2g",
              spread, worst_deriv, worst_info, info_gap)};
}

Verdict crb_saturation() {
  const double n_bar = 10.0;
  const Threshold th = Threshold::finite(20);
  OptimizeOptions opt;
  opt.refine = false;
  const double alpha2 = optimize_alpha(n_bar, th, Engine::exact, opt).argmax;
  const auto run = crb_experiment(LightSource::from_split(n_bar, alpha2), th, 0.6, 10000, 200, 2718281828);
  const double r = run.ratio();
  return {r >= 0.8 && r <= 1.5,
          fmt("alpha^2 = %.2f, F = %.4f, var = %.4g, 1/(nu F) = %.4g, ratio = %.4f, mean = %.5f", alpha2, run.fisher,
              run.empirical_variance, run.crb, r, run.mean_estimate)};
}

Verdict numerical_hygiene() {
  std::vector<std::string> failures;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  // amplitude normalizations and mean-number identities
  for (int trial = 0; trial < 8; ++trial) {
    const double n_bar = 200.0 * u(rng);
    const LightSource src = LightSource::from_split(n_bar, n_bar * u(rng));
    const auto amps = build_amplitude_table(src, 1e-12);
    CompensatedSum c0, c1, s0, s1;
    for (std::size_t n = 0; n <= amps.cutoff; ++n) {
      c0.add(amps.coherent_probability(n));
      c1.add(n * amps.coherent_probability(n));
      s0.add(amps.squeezed_probability(n));
      s1.add(n * amps.squeezed_probability(n));
    }
    if (c0.value() * s0.value() < 1.0 - 1e-11 || c0.value() > 1.0 + 1e-12 || s0.value() > 1.0 + 1e-12) {
      failures.push_back(fmt("normalization n=%.1f", n_bar));
    }
    if (src.mean_a() > 0 && std::abs(c1.value() / src.mean_a() - 1.0) > 1e-8) failures.push_back("coherent mean");
    if (src.mean_b() > 0 && std::abs(s1.value() / src.mean_b() - 1.0) > 1e-8) failures.push_back("squeezed mean");
  }
  {
    const LightSource src = LightSource::from_means(6.0, 2.0);
    const auto amps = build_amplitude_table(src, 1e-12);
    CompensatedSum g;
    for (std::size_t n = 0; n <= 2 * amps.cutoff; ++n) g.add(generation_probability(amps, n));
    if (g.value() < 1.0 - 1e-10) failures.push_back("sum of G_N");
  }

  // parity zeros
  for (std::size_t k = 1; k < 200; k += 2) {
    if (!squeezed_amplitude(1.3, k).is_zero()) failures.push_back("odd squeezed amplitude");
  }
  {
    const auto amps = build_amplitude_table(LightSource::from_means(0.0, 4.0));
    for (std::size_t n = 1; n < 60; n += 2) {
      if (generation_probability(amps, n) != 0.0) failures.push_back("odd G_N of squeezed vacuum");
    }
  }

  // d-matrix orthogonality and composition
  double ortho = 0.0;
  for (std::size_t n : {1u, 2u, 9u, 30u, 64u, 100u}) {
    const auto d = wigner_d_block(n, 0.83);
    for (std::size_t i = 0; i < d.dim(); ++i) {
      for (std::size_t j = 0; j < d.dim(); ++j) {
        double dot = 0.0;
        for (std::size_t k = 0; k < d.dim(); ++k) dot += d(i, k) * d(j, k);
        ortho = std::max(ortho, std::abs(dot - (i == j ? 1.0 : 0.0)));
      }
    }
  }
  if (ortho > 1e-10) failures.push_back("orthogonality");
  double compose = 0.0;
  for (std::size_t n : {1u, 2u, 10u, 40u}) {
    const auto a = wigner_d_block(n, 0.4);
    const auto b = wigner_d_block(n, 0.9);
    const auto ab = wigner_d_block(n, 1.3);
    for (std::size_t i = 0; i < a.dim(); ++i) {
      for (std::size_t j = 0; j < a.dim(); ++j) {
        double x = 0.0;
        for (std::size_t k = 0; k < a.dim(); ++k) x += a(i, k) * b(k, j);
        compose = std::max(compose, std::abs(x - ab(i, j)));
      }
    }
  }
  if (compose > 1e-9) failures.push_back("composition");

  // analytic derivatives against central differences
  double fd = 0.0;
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    std::vector<double> v(n + 1);
    double norm = 0.0;
    for (auto& x : v) {
      x = gauss(rng);
      norm += x * x;
    }
    for (auto& x : v) x /= std::sqrt(norm);
    const YRotation rot(n);
    const double phi = 0.1 + 1.4 * u(rng);
    const double h = 1e-5;
    const auto dp = probability_derivatives(rot, v, phi);
    const auto plus = conditional_probabilities(rot, v, phi + h);
    const auto minus = conditional_probabilities(rot, v, phi - h);
    for (std::size_t k = 0; k <= n; ++k) fd = std::max(fd, std::abs(dp[k] - (plus[k] - minus[k]) / (2 * h)));
  }
  if (fd > 1e-7) failures.push_back("finite-difference derivative");

  std::string detail = fmt("orthogonality %.2g, composition %.2g, derivative vs FD %.2g", ortho, compose, fd);
  for (const auto& f : failures) detail += "; FAILED " + f;
  return {failures.empty(), detail};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Verdict()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list = {
      {1, "CFI equals QFI per N", equivalence_identity},
      {2, "ideal limit", ideal_limit},
      {3, "single-component optimum at n = 8", single_component_point},
      {4, "single-component power law", single_component_fit},
      {5, "alpha^2_opt/n -> 1/2 at N_res = n", half_split_limit},
      {6, "F_opt/n^2 near 0.2 at N_res = n", quadratic_scaling},
      {7, "classical-limit crossing at N_res = n", classical_crossing},
      {8, "erfc approximation locates the optimum", approximation_fidelity},
      {9, "overflow outcome carries no phase information", overflow_invariance},
      {10, "MLE saturates the Cramer-Rao bound", crb_saturation},
      {11, "numerical hygiene", numerical_hygiene},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  int failed = 0;
  int ran = 0;
  for (const auto& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %d (%s): %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", c.id, c.title, v.detail.c_str(),
                secs);
    std::fflush(stdout);
    if (!v.pass) ++failed;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
