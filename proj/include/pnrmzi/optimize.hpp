#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pnrmzi/states.hpp"

namespace pnrmzi {

enum class Engine { exact, approx };

Engine parse_engine(const std::string& text);
std::string to_string(Engine engine);

struct GridPoint {
  double control = 0.0;
  double objective = 0.0;
};

/// Grid maximization of an objective over alpha^2, with the grid winner and a
/// golden-section refinement inside the neighbouring grid cells.
struct ScanResult {
  std::vector<GridPoint> grid;
  double argmax = 0.0;
  double max_value = 0.0;
  double resolution = 0.0;
  double refined_argmax = 0.0;
  double refined_max = 0.0;
};

struct SingleComponentOptimum {
  double n_bar = 0.0;
  std::size_t n_opt = 0;       ///< grid winner N*
  double alpha2_opt = 0.0;     ///< grid winner alpha^2*
  double max_value = 0.0;      ///< G_N F_{Q,N} at the grid winner
  std::size_t refined_n = 0;
  double refined_alpha2 = 0.0;
  double refined_max = 0.0;
};

struct PowerLawFit {
  double prefactor = 0.0;
  double exponent = 0.0;
  double residual = 0.0;  ///< RMS of log residuals
  double n_min = 0.0;
  double n_max = 0.0;
};

/// n_res as a function of n_bar: round(factor * n_bar), or infinite.
struct NResRule {
  std::optional<double> factor;

  static NResRule infinite() { return {}; }
  static NResRule proportional(double k) { return NResRule{k}; }
  /// "inf" or a multiplier such as "1", "2", "5".
  static NResRule parse(const std::string& text);
  Threshold apply(double n_bar) const;
  std::string to_string() const;
};

struct ScalingRow {
  double n_bar = 0.0;
  Threshold n_res;
  double alpha2_opt = 0.0;
  double fq_opt = 0.0;
  double fq_ideal = 0.0;  ///< best perfect-detector QFI for this n_bar (same alpha^2 grid)
};

struct OptimizeOptions {
  double grid_step = 0.01;  ///< alpha^2 grid step as a fraction of n_bar
  bool refine = true;
  double tail_tol = kDefaultTailTol;
  unsigned threads = 0;
};

/// G_N F_{Q,N} for the real source alpha^2 = alpha2, sinh^2 xi = n_bar - alpha2,
/// evaluated through the operator form of the QFI.
double single_component_objective(double n_bar, double alpha2, std::size_t total_n);

/// Default N search range for the single-component optimization.
std::size_t default_single_component_n_max(double n_bar);

/// Joint maximization of G_N F_{Q,N} over N in [0, n_max] and the alpha^2 grid.
/// Ties go to the smaller N, then the smaller alpha^2.
SingleComponentOptimum optimize_single_component(double n_bar, double grid_step,
                                                 std::size_t n_max,
                                                 const OptimizeOptions& options = {});

/// Total Fisher information at one alpha^2. Throws DomainError where the engine
/// is undefined (approx with n_b = 0 or n_res < n_a - 1).
double total_fisher_objective(double n_bar, double alpha2, Threshold n_res, Engine engine,
                              double tail_tol = kDefaultTailTol);

/// Maximize the total Fisher information over alpha^2 in [0, n_bar]. Grid points
/// where the engine is undefined are left out of the grid.
ScanResult optimize_alpha(double n_bar, Threshold n_res, Engine engine,
                          const OptimizeOptions& options = {});

/// One optimize_alpha per n_bar; n_values must be sorted ascending.
std::vector<ScalingRow> scaling_scan(std::span<const double> n_values, const NResRule& rule,
                                     Engine engine, const OptimizeOptions& options = {});

/// optimize_single_component for each n_bar.
std::vector<SingleComponentOptimum> single_component_scan(std::span<const double> n_values,
                                                          const OptimizeOptions& options = {});

/// Least-squares fit of ln y = ln c + p ln x. Throws InsufficientData below five
/// points and DomainError for non-positive coordinates.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points);

/// `count` log-spaced values in [lo, hi].
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

/// Golden-section search for the maximum of a unimodal f on [lo, hi].
std::pair<double, double> golden_section_maximize(const std::function<double(double)>& f,
                                                  double lo, double hi, double x_tol);

}  // namespace pnrmzi
