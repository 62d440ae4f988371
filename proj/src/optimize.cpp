#include "pnrmzi/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pnrmzi/errors.hpp"
#include "pnrmzi/fisher.hpp"
#include "pnrmzi/parallel.hpp"

namespace pnrmzi {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::size_t grid_count(double grid_step) {
  if (!(grid_step > 0.0) || grid_step > 1.0) {
    throw DomainError("grid step must lie in (0, 1]");
  }
  return static_cast<std::size_t>(std::llround(1.0 / grid_step));
}

// Objective wrapper that maps undefined points to -inf.
double guarded(const std::function<double(double)>& f, double x) {
  try {
    return f(x);
  } catch (const DomainError&) {
    return kNegInf;
  }
}

}  // namespace

Engine parse_engine(const std::string& text) {
  if (text == "exact") return Engine::exact;
  if (text == "approx") return Engine::approx;
  throw std::invalid_argument("unknown engine: " + text);
}

std::string to_string(Engine engine) { return engine == Engine::exact ? "exact" : "approx"; }

NResRule NResRule::parse(const std::string& text) {
  if (text == "inf") return infinite();
  std::size_t used = 0;
  const double k = std::stod(text, &used);
  if (used != text.size() || !(k > 0.0)) {
    throw std::invalid_argument("n_res rule must be \"inf\" or a positive multiplier: " + text);
  }
  return proportional(k);
}

Threshold NResRule::apply(double n_bar) const {
  if (!factor) return Threshold::infinite();
  return Threshold::finite(static_cast<std::size_t>(std::llround(*factor * n_bar)));
}

std::string NResRule::to_string() const {
  if (!factor) return "inf";
  std::string s = std::to_string(*factor);
  s.erase(s.find_last_not_of('0') + 1);
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::pair<double, double> golden_section_maximize(const std::function<double(double)>& f,
                                                  double lo, double hi, double x_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < 200 && (b - a) > x_tol; ++iter) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

double single_component_objective(double n_bar, double alpha2, std::size_t total_n) {
  const LightSource src = LightSource::from_split(n_bar, alpha2);
  const AmplitudeTable amps = AmplitudeTable::with_cutoff(src, total_n);
  const LogSigned log_g = log_generation_probability(amps, total_n);
  if (log_g.is_zero()) return 0.0;
  const NPhotonState state = postselect(amps, total_n);
  return std::exp(log_g.log_magnitude()) * qfi_per_n_operator_oracle(state);
}

std::size_t default_single_component_n_max(double n_bar) {
  return static_cast<std::size_t>(std::ceil(2.0 * n_bar + 20.0 * std::sqrt(n_bar) + 10.0));
}

SingleComponentOptimum optimize_single_component(double n_bar, double grid_step,
                                                 std::size_t n_max,
                                                 const OptimizeOptions& options) {
  const std::size_t steps = grid_count(grid_step);
  const double d_alpha = n_bar / static_cast<double>(steps);

  // best (N, objective) per alpha^2 grid point
  struct Cell {
    std::size_t n = 0;
    double value = kNegInf;
  };
  std::vector<Cell> cells(steps + 1);
  parallel_for(steps + 1, options.threads, [&](std::size_t i) {
    const double alpha2 = std::min(n_bar, d_alpha * static_cast<double>(i));
    const LightSource src = LightSource::from_split(n_bar, alpha2);
    const AmplitudeTable amps = AmplitudeTable::with_cutoff(src, n_max);
    Cell best;
    for (std::size_t n = 0; n <= n_max; ++n) {
      const LogSigned log_g = log_generation_probability(amps, n);
      const double value =
          log_g.is_zero() ? 0.0
                          : std::exp(log_g.log_magnitude()) * qfi_per_n_operator_oracle(postselect(amps, n));
      if (value > best.value) best = Cell{n, value};
    }
    cells[i] = best;
  });

  SingleComponentOptimum out;
  out.n_bar = n_bar;
  double best = kNegInf;
  for (std::size_t i = 0; i <= steps; ++i) {
    const Cell& c = cells[i];
    const bool better = c.value > best || (c.value == best && c.n < out.n_opt);
    if (better) {
      best = c.value;
      out.n_opt = c.n;
      out.alpha2_opt = std::min(n_bar, d_alpha * static_cast<double>(i));
    }
  }
  out.max_value = best;
  out.refined_n = out.n_opt;
  out.refined_alpha2 = out.alpha2_opt;
  out.refined_max = out.max_value;
  if (!options.refine) return out;

  const double lo = std::max(0.0, out.alpha2_opt - d_alpha);
  const double hi = std::min(n_bar, out.alpha2_opt + d_alpha);
  const std::size_t n_lo = out.n_opt == 0 ? 0 : out.n_opt - 1;
  for (std::size_t n = n_lo; n <= std::min(n_max, out.n_opt + 1); ++n) {
    auto f = [&](double a2) { return single_component_objective(n_bar, a2, n); };
    const auto [x, fx] = golden_section_maximize(f, lo, hi, 1e-6 * n_bar);
    if (fx > out.refined_max) {
      out.refined_max = fx;
      out.refined_alpha2 = x;
      out.refined_n = n;
    }
  }
  return out;
}

double total_fisher_objective(double n_bar, double alpha2, Threshold n_res, Engine engine,
                              double tail_tol) {
  const LightSource src = LightSource::from_split(n_bar, alpha2);
  if (engine == Engine::approx) return total_fisher_approx(src, n_res);
  const AmplitudeTable amps = n_res.is_infinite()
                                  ? build_amplitude_table(src, tail_tol)
                                  : AmplitudeTable::with_cutoff(src, n_res.value());
  return total_fisher_exact_value(amps, src, n_res);
}

ScanResult optimize_alpha(double n_bar, Threshold n_res, Engine engine,
                          const OptimizeOptions& options) {
  const std::size_t steps = grid_count(options.grid_step);
  const double d_alpha = n_bar / static_cast<double>(steps);
  auto objective = [&](double a2) {
    return total_fisher_objective(n_bar, a2, n_res, engine, options.tail_tol);
  };

  std::vector<double> values(steps + 1, kNegInf);
  parallel_for(steps + 1, options.threads, [&](std::size_t i) {
    values[i] = guarded(objective, std::min(n_bar, d_alpha * static_cast<double>(i)));
  });

  ScanResult out;
  out.resolution = d_alpha;
  out.max_value = kNegInf;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i <= steps; ++i) {
    if (values[i] == kNegInf) continue;
    const double a2 = std::min(n_bar, d_alpha * static_cast<double>(i));
    out.grid.push_back(GridPoint{a2, values[i]});
    if (values[i] > out.max_value) {
      out.max_value = values[i];
      out.argmax = a2;
      best_index = i;
    }
  }
  if (out.grid.empty()) throw DomainError("engine is undefined on the whole alpha^2 grid");

  out.refined_argmax = out.argmax;
  out.refined_max = out.max_value;
  if (options.refine && steps > 1) {
    const double lo = best_index == 0 ? 0.0 : d_alpha * static_cast<double>(best_index - 1);
    const double hi = std::min(n_bar, d_alpha * static_cast<double>(best_index + 1));
    const auto [x, fx] = golden_section_maximize(
        [&](double a2) { return guarded(objective, a2); }, lo, hi, 1e-6 * std::max(1.0, n_bar));
    if (fx > out.refined_max) {
      out.refined_argmax = x;
      out.refined_max = fx;
    }
  }
  return out;
}

std::vector<ScalingRow> scaling_scan(std::span<const double> n_values, const NResRule& rule,
                                     Engine engine, const OptimizeOptions& options) {
  if (!std::is_sorted(n_values.begin(), n_values.end())) {
    throw std::invalid_argument("n_values must be sorted ascending");
  }
  std::vector<ScalingRow> rows(n_values.size());
  OptimizeOptions inner = options;
  inner.threads = 1;
  parallel_for(n_values.size(), options.threads, [&](std::size_t i) {
    const double n_bar = n_values[i];
    const Threshold n_res = rule.apply(n_bar);
    const ScanResult best = optimize_alpha(n_bar, n_res, engine, inner);
    ScalingRow row;
    row.n_bar = n_bar;
    row.n_res = n_res;
    row.alpha2_opt = best.argmax;
    row.fq_opt = best.max_value;
    double ideal = 0.0;
    for (const auto& g : best.grid) {
      ideal = std::max(ideal, total_fisher_ideal(LightSource::from_split(n_bar, g.control)).value());
    }
    row.fq_ideal = ideal;
    rows[i] = row;
  });
  return rows;
}

std::vector<SingleComponentOptimum> single_component_scan(std::span<const double> n_values,
                                                          const OptimizeOptions& options) {
  std::vector<SingleComponentOptimum> out(n_values.size());
  OptimizeOptions inner = options;
  inner.threads = 1;
  parallel_for(n_values.size(), options.threads, [&](std::size_t i) {
    out[i] = optimize_single_component(n_values[i], options.grid_step,
                                       default_single_component_n_max(n_values[i]), inner);
  });
  return out;
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 5) {
    throw InsufficientData("power-law fit needs at least 5 points, got " +
                           std::to_string(points.size()));
  }
  const double count = static_cast<double>(points.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  PowerLawFit fit;
  fit.n_min = std::numeric_limits<double>::infinity();
  fit.n_max = -std::numeric_limits<double>::infinity();
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("power-law fit needs positive coordinates");
    mean_x += std::log(x);
    mean_y += std::log(y);
    fit.n_min = std::min(fit.n_min, x);
    fit.n_max = std::max(fit.n_max, x);
  }
  mean_x /= count;
  mean_y /= count;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mean_x;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - mean_y);
  }
  if (sxx == 0.0) throw InsufficientData("power-law fit needs at least two distinct x values");
  fit.exponent = sxy / sxx;
  const double log_c = mean_y - fit.exponent * mean_x;
  fit.prefactor = std::exp(log_c);
  double ss = 0.0;
  for (const auto& [x, y] : points) {
    const double r = std::log(y) - (log_c + fit.exponent * std::log(x));
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / count);
  return fit;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace pnrmzi
