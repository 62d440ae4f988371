#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "config_file.hpp"
#include "json.hpp"
#include "pnrmzi/errors.hpp"
#include "pnrmzi/fisher.hpp"
#include "pnrmzi/optimize.hpp"
#include "pnrmzi/serialize.hpp"
#include "pnrmzi/simulate.hpp"
#include "pnrmzi/states.hpp"

namespace {

using namespace pnrmzi;
using nlohmann::json;

constexpr int kExitUsage = 2;
constexpr int kExitBadInput = 3;
constexpr int kExitRuntime = 4;

/// Raised for flag combinations CLI11 cannot check on its own.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Globals {
  unsigned threads = 0;
};

struct Output {
  std::string path = "-";
  std::string format;

  void write(const std::string& text) const {
    if (path == "-") {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
  }
};

void add_output(CLI::App* app, Output& out, const std::string& default_format) {
  out.format = default_format;
  app->add_option("-o,--output", out.path, "Output file, '-' for stdout")->capture_default_str();
  app->add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

Threshold parse_threshold(const std::string& text) {
  try {
    return Threshold::parse(text);
  } catch (const std::exception&) {
    throw UsageError("--n-res must be a non-negative integer or \"inf\", got \"" + text + "\"");
  }
}

LightSource source_from(double n_bar, std::optional<double> alpha2) {
  const double a2 = alpha2.value_or(0.5 * n_bar);
  if (a2 > n_bar) throw UsageError("--alpha2 must not exceed --n-bar");
  return LightSource::from_split(n_bar, a2);
}

std::string with_newline(std::string s) {
  if (s.empty() || s.back() != '\n') s += '\n';
  return s;
}

std::string n_max_help() { return "Largest photon number N considered (photons)"; }

// ---------------------------------------------------------------- dist

struct DistArgs {
  double alpha2 = 10.0;
  double n_b = 5.0;
  std::size_t n_max = 40;
  Output out;
};

void run_dist(const DistArgs& a) {
  if (a.alpha2 < 0.0 || a.n_b < 0.0) throw UsageError("mean photon numbers must be >= 0");
  const double alpha = std::sqrt(a.alpha2);
  const double xi = std::asinh(std::sqrt(a.n_b));
  const auto exact = squeezed_number_distribution(xi, a.n_max, DistributionMode::exact);
  const auto stirling = squeezed_number_distribution(xi, a.n_max, DistributionMode::stirling);
  std::vector<double> coherent(a.n_max + 1);
  for (std::size_t n = 0; n <= a.n_max; ++n) {
    coherent[n] = std::exp(2.0 * coherent_amplitude(alpha, n).log_magnitude());
  }
  // Number variances of the two inputs: alpha^2 and 2 sinh^2 xi cosh^2 xi.
  const double var_coherent = a.alpha2;
  const double var_squeezed = 2.0 * a.n_b * (1.0 + a.n_b);
  std::cerr << "# number variance: coherent " << format_number(var_coherent) << ", squeezed "
            << format_number(var_squeezed) << '\n';

  std::ostringstream os;
  if (a.out.format == "json") {
    json rows = json::array();
    for (std::size_t n = 0; n <= a.n_max; ++n) {
      rows.push_back({{"n", n},
                      {"p_coherent", round12(coherent[n])},
                      {"p_squeezed_exact", round12(exact[n])},
                      {"p_squeezed_stirling", round12(stirling[n])}});
    }
    json j = {{"alpha2", round12(a.alpha2)},
              {"n_b", round12(a.n_b)},
              {"variance_coherent", round12(var_coherent)},
              {"variance_squeezed", round12(var_squeezed)},
              {"rows", rows}};
    os << j.dump(2);
  } else {
    os << "n,p_coherent,p_squeezed_exact,p_squeezed_stirling\n";
    for (std::size_t n = 0; n <= a.n_max; ++n) {
      os << n << ',' << format_number(coherent[n]) << ',' << format_number(exact[n]) << ','
         << format_number(stirling[n]) << '\n';
    }
  }
  a.out.write(with_newline(os.str()));
}

// ---------------------------------------------------------------- fisher

struct FisherArgs {
  double n_bar = 10.0;
  std::optional<double> alpha2;
  std::vector<std::string> n_res = {"inf"};
  double phi = 0.7;
  double tail_tol = kDefaultTailTol;
  std::string engine = "exact";
  bool sweep = false;
  double grid_step = 0.01;
  std::size_t cfi_max_n = 40;
  Output out;
};

void run_fisher(const FisherArgs& a, const Globals& g) {
  const Engine engine = parse_engine(a.engine);
  std::vector<Threshold> thresholds;
  for (const auto& t : a.n_res) thresholds.push_back(parse_threshold(t));

  if (a.sweep) {
    // One alpha^2 curve per threshold.
    OptimizeOptions opt;
    opt.grid_step = a.grid_step;
    opt.tail_tol = a.tail_tol;
    opt.threads = g.threads;
    opt.refine = false;
    std::ostringstream os;
    json curves = json::array();
    if (a.out.format == "csv") os << "alpha2,alpha2_over_nbar,n_res,fq\n";
    for (const Threshold th : thresholds) {
      const ScanResult scan = optimize_alpha(a.n_bar, th, engine, opt);
      if (a.out.format == "csv") {
        std::ostringstream part;
        write_scan_csv(part, scan, a.n_bar, th);
        const std::string body = part.str();
        os << body.substr(body.find('\n') + 1);
      } else {
        curves.push_back(json::parse(to_json(scan, a.n_bar, th, engine)));
      }
    }
    if (a.out.format == "json") os << curves.dump(2);
    a.out.write(with_newline(os.str()));
    return;
  }

  if (thresholds.size() != 1) throw UsageError("--n-res takes one value unless --sweep is given");
  const LightSource src = source_from(a.n_bar, a.alpha2);
  const Threshold th = thresholds.front();
  FisherOptions opt;
  opt.phi = a.phi;
  opt.cfi_max_n = a.cfi_max_n;
  opt.threads = g.threads;

  if (engine == Engine::approx) {
    const double value = total_fisher_approx(src, th);
    const ApproxParams p = approx_params(th, src.mean_a(), src.mean_b());
    std::ostringstream os;
    if (a.out.format == "json") {
      json j = {{"n_bar", round12(src.mean_photons())},
                {"n_bar_a", round12(src.mean_a())},
                {"n_bar_b", round12(src.mean_b())},
                {"n_res", th.is_infinite() ? json("inf") : json(th.value())},
                {"engine", "approx"},
                {"A", std::isinf(p.a_value) ? json(nullptr) : json(round12(p.a_value))},
                {"B", round12(p.b_value)},
                {"total_approx", round12(value)},
                {"total_ideal", round12(total_fisher_ideal(src).value())}};
      os << j.dump(2);
    } else {
      os << "n_bar,n_bar_a,n_bar_b,n_res,total_approx,total_ideal\n"
         << format_number(src.mean_photons()) << ',' << format_number(src.mean_a()) << ','
         << format_number(src.mean_b()) << ',' << th.to_string() << ',' << format_number(value)
         << ',' << format_number(total_fisher_ideal(src).value()) << '\n';
    }
    a.out.write(with_newline(os.str()));
    return;
  }

  const AmplitudeTable amps = build_amplitude_table(src, a.tail_tol);
  const FisherReport rep = total_fisher_exact(amps, src, th, opt);
  if (a.out.format == "json") {
    a.out.write(with_newline(to_json(rep)));
    return;
  }
  std::ostringstream os;
  os << "N,G_N,F_N,weighted,cfi_numeric\n";
  for (const auto& rec : rep.per_n) {
    os << rec.total_n << ',' << format_number(rec.gen_prob) << ',' << format_number(rec.fisher) << ','
       << format_number(rec.weighted) << ',' << (rec.cfi_numeric ? format_number(*rec.cfi_numeric) : "")
       << '\n';
  }
  a.out.write(os.str());
}

// ---------------------------------------------------------------- optimize

struct OptimizeArgs {
  std::string mode = "alpha";
  double n_bar = 10.0;
  std::string n_res = "inf";
  std::string engine = "exact";
  double grid_step = 0.01;
  std::optional<std::size_t> n_max;
  double tail_tol = kDefaultTailTol;
  Output out;
};

void run_optimize(const OptimizeArgs& a, const Globals& g) {
  OptimizeOptions opt;
  opt.grid_step = a.grid_step;
  opt.tail_tol = a.tail_tol;
  opt.threads = g.threads;
  if (!(a.n_bar > 0.0)) throw UsageError("--n-bar must be positive");
  std::ostringstream os;
  if (a.mode == "single") {
    const auto best = optimize_single_component(
        a.n_bar, a.grid_step, a.n_max.value_or(default_single_component_n_max(a.n_bar)), opt);
    if (a.out.format == "json") {
      os << to_json(best);
    } else {
      write_single_component_csv(os, std::span(&best, 1));
    }
  } else {
    const Threshold th = parse_threshold(a.n_res);
    const Engine engine = parse_engine(a.engine);
    const auto scan = optimize_alpha(a.n_bar, th, engine, opt);
    if (a.out.format == "json") {
      os << to_json(scan, a.n_bar, th, engine);
    } else {
      write_scan_csv(os, scan, a.n_bar, th);
    }
  }
  a.out.write(with_newline(os.str()));
}

// ---------------------------------------------------------------- scan

struct ScanArgs {
  std::string kind = "alpha";
  double n_min = 1.0;
  double n_max = 100.0;
  std::size_t count = 100;
  std::string spacing = "linear";
  std::string n_res_rule = "1";
  std::string engine = "exact";
  double grid_step = 0.01;
  double tail_tol = kDefaultTailTol;
  Output out;
};

std::vector<double> scan_points(const ScanArgs& a) {
  if (!(a.n_min > 0.0) || a.n_max < a.n_min || a.count == 0) {
    throw UsageError("need 0 < --n-min <= --n-max and --count >= 1");
  }
  if (a.spacing == "log") return log_spaced(a.n_min, a.n_max, a.count);
  std::vector<double> v(a.count);
  for (std::size_t i = 0; i < a.count; ++i) {
    v[i] = a.count == 1 ? a.n_min
                        : a.n_min + (a.n_max - a.n_min) * static_cast<double>(i) /
                                        static_cast<double>(a.count - 1);
  }
  return v;
}

void run_scan(const ScanArgs& a, const Globals& g) {
  OptimizeOptions opt;
  opt.grid_step = a.grid_step;
  opt.tail_tol = a.tail_tol;
  opt.threads = g.threads;
  const auto points = scan_points(a);
  std::ostringstream os;
  if (a.kind == "single") {
    const auto rows = single_component_scan(points, opt);
    if (a.out.format == "json") {
      json arr = json::array();
      for (const auto& r : rows) arr.push_back(json::parse(to_json(r)));
      os << arr.dump(2);
    } else {
      write_single_component_csv(os, rows);
    }
  } else {
    NResRule rule;
    try {
      rule = NResRule::parse(a.n_res_rule);
    } catch (const std::exception&) {
      throw UsageError("--n-res-rule must be \"inf\" or a positive multiplier");
    }
    const auto rows = scaling_scan(points, rule, parse_engine(a.engine), opt);
    for (const auto& r : rows) {
      if (r.fq_opt > r.n_bar) {
        std::cerr << "# classical limit first exceeded at n_bar = " << format_number(r.n_bar) << '\n';
        break;
      }
    }
    if (a.out.format == "json") {
      os << to_json(std::span<const ScalingRow>(rows));
    } else {
      write_scaling_csv(os, rows);
    }
  }
  a.out.write(with_newline(os.str()));
}

// ---------------------------------------------------------------- fit

struct FitArgs {
  std::string input;
  std::string x_column = "n_bar";
  std::string y_column = "fq_opt";
  std::optional<double> x_min;
  std::optional<double> x_max;
  Output out;
};

void run_fit(const FitArgs& a) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (a.input != "-") {
    file.open(a.input);
    if (!file) throw MalformedInput("cannot read " + a.input);
    in = &file;
  }
  const CsvTable table = read_csv(*in);
  const auto xs = table.numeric_column(a.x_column);
  const auto ys = table.numeric_column(a.y_column);
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (a.x_min && xs[i] < *a.x_min) continue;
    if (a.x_max && xs[i] > *a.x_max) continue;
    pts.emplace_back(xs[i], ys[i]);
  }
  a.out.write(with_newline(to_json(fit_power_law(pts))));
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  double n_bar = 10.0;
  std::optional<double> alpha2;
  std::string n_res = "20";
  double phi = 0.6;
  std::size_t trials = 10000;
  std::size_t repetitions = 200;
  std::uint64_t seed = 0;
  double phi_step = 1e-4;
  double tail_tol = kDefaultTailTol;
  std::string estimates_csv;
  Output out;
};

void run_simulate(const SimulateArgs& a, const Globals& g) {
  const LightSource src = source_from(a.n_bar, a.alpha2);
  if (!(a.phi > 0.0 && a.phi < 1.5707963267948966)) {
    throw UsageError("--phi must lie in (0, pi/2)");
  }
  SimulationOptions opt;
  opt.phi_step = a.phi_step;
  opt.tail_tol = a.tail_tol;
  opt.threads = g.threads;
  const auto run =
      crb_experiment(src, parse_threshold(a.n_res), a.phi, a.trials, a.repetitions, a.seed, opt);
  if (!a.estimates_csv.empty()) {
    std::ofstream est(a.estimates_csv);
    if (!est) throw std::runtime_error("cannot write " + a.estimates_csv);
    write_estimates_csv(est, run);
  }
  a.out.write(with_newline(to_json(run)));
}

// ---------------------------------------------------------------- export-amplitudes

struct AmplitudeArgs {
  std::string field = "coherent";
  double n_bar = 10.0;
  std::optional<double> alpha2;
  std::optional<std::size_t> cutoff;
  double tail_tol = kDefaultTailTol;
  Output out;
};

void run_export_amplitudes(const AmplitudeArgs& a) {
  const LightSource src = source_from(a.n_bar, a.alpha2);
  const AmplitudeTable amps =
      a.cutoff ? AmplitudeTable::with_cutoff(src, *a.cutoff) : build_amplitude_table(src, a.tail_tol);
  std::ostringstream os;
  write_amplitudes_csv(os, a.field == "coherent" ? amps.coherent : amps.squeezed);
  a.out.write(os.str());
}

// ---------------------------------------------------------------- outcomes

struct OutcomeArgs {
  double n_bar = 10.0;
  std::optional<double> alpha2;
  std::string n_res = "20";
  double phi = 0.6;
  double tail_tol = kDefaultTailTol;
  Output out;
};

void run_outcomes(const OutcomeArgs& a) {
  const LightSource src = source_from(a.n_bar, a.alpha2);
  const AmplitudeTable amps = build_amplitude_table(src, a.tail_tol);
  std::ostringstream os;
  write_outcomes_csv(os, full_outcome_distribution(amps, parse_threshold(a.n_res), a.phi));
  a.out.write(os.str());
}

void add_source(CLI::App* app, double& n_bar, std::optional<double>& alpha2) {
  app->add_option("--n-bar", n_bar, "Total mean photon number n = alpha^2 + sinh^2 xi (photons)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  app->add_option("--alpha2", alpha2,
                  "Coherent mean photon number alpha^2 (photons, default n/2); the squeezed "
                  "input carries the rest")
      ->check(CLI::NonNegativeNumber);
}

void add_tail_tol(CLI::App* app, double& tail_tol) {
  app->add_option("--tail-tol", tail_tol, "Fock-space truncation: tail probability per input (dimensionless)")
      ->capture_default_str();
}

const char* kNResHelp = "Detector resolution threshold N_res (photons) or \"inf\"";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-counting Mach-Zehnder phase estimation with finite number resolution"};
  app.name("pnrmzi");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  Globals globals;
  std::string config_path;
  app.add_option("--threads", globals.threads, "Worker threads (0 = all available cores)")
      ->capture_default_str();
  app.add_option("--config", config_path,
                 "File of key = value lines mirroring long flag names; explicit flags win");

  DistArgs dist;
  auto* c_dist = app.add_subcommand("dist", "Photon-number distributions of both inputs");
  c_dist->add_option("--alpha2", dist.alpha2, "Coherent mean photon number alpha^2 (photons)")
      ->capture_default_str();
  c_dist->add_option("--n-b", dist.n_b, "Squeezed-vacuum mean photon number sinh^2 xi (photons)")
      ->capture_default_str();
  c_dist->add_option("--n-max", dist.n_max, n_max_help())->capture_default_str();
  add_output(c_dist, dist.out, "csv");

  FisherArgs fisher;
  auto* c_fisher = app.add_subcommand("fisher", "Total Fisher information of one source");
  add_source(c_fisher, fisher.n_bar, fisher.alpha2);
  c_fisher->add_option("--n-res", fisher.n_res, std::string(kNResHelp) + "; repeat with --sweep")
      ->capture_default_str();
  c_fisher->add_option("--phi", fisher.phi, "Phase for the brute-force CFI cross-check (rad)")
      ->capture_default_str();
  c_fisher->add_option("--engine", fisher.engine, "exact (double sum) or approx (erfc closed form)")
      ->check(CLI::IsMember({"exact", "approx"}))
      ->capture_default_str();
  c_fisher->add_flag("--sweep", fisher.sweep, "Sweep alpha^2 over [0, n] for every --n-res");
  c_fisher->add_option("--grid-step", fisher.grid_step, "alpha^2 sweep step as a fraction of n")
      ->capture_default_str();
  c_fisher->add_option("--cfi-max-n", fisher.cfi_max_n,
                       "Largest N with a brute-force CFI cross-check (photons)")
      ->capture_default_str();
  add_tail_tol(c_fisher, fisher.tail_tol);
  add_output(c_fisher, fisher.out, "json");

  OptimizeArgs optimize;
  auto* c_opt = app.add_subcommand("optimize", "Optimal input split for one n");
  c_opt->add_option("--mode", optimize.mode,
                    "single: maximize G_N F_N over {N, alpha^2}; alpha: maximize the total over alpha^2")
      ->check(CLI::IsMember({"single", "alpha"}))
      ->capture_default_str();
  c_opt->add_option("--n-bar", optimize.n_bar, "Total mean photon number (photons)")->capture_default_str();
  c_opt->add_option("--n-res", optimize.n_res, kNResHelp)->capture_default_str();
  c_opt->add_option("--engine", optimize.engine, "exact or approx")
      ->check(CLI::IsMember({"exact", "approx"}))
      ->capture_default_str();
  c_opt->add_option("--grid-step", optimize.grid_step, "alpha^2 grid step as a fraction of n")
      ->capture_default_str();
  c_opt->add_option("--n-max", optimize.n_max, n_max_help() + " in single mode");
  add_tail_tol(c_opt, optimize.tail_tol);
  add_output(c_opt, optimize.out, "json");

  ScanArgs scan;
  auto* c_scan = app.add_subcommand("scan", "Optima over a range of n");
  c_scan->add_option("--kind", scan.kind, "alpha: total-Fisher optimum per n; single: G_N F_N optimum per n")
      ->check(CLI::IsMember({"single", "alpha"}))
      ->capture_default_str();
  c_scan->add_option("--n-min", scan.n_min, "Smallest n (photons)")->capture_default_str();
  c_scan->add_option("--n-max", scan.n_max, "Largest n (photons)")->capture_default_str();
  c_scan->add_option("--count", scan.count, "Number of n values")->capture_default_str();
  c_scan->add_option("--spacing", scan.spacing, "linear or log spacing of n")
      ->check(CLI::IsMember({"linear", "log"}))
      ->capture_default_str();
  c_scan->add_option("--n-res-rule", scan.n_res_rule, "N_res = round(k n) for multiplier k, or \"inf\"")
      ->capture_default_str();
  c_scan->add_option("--engine", scan.engine, "exact or approx")
      ->check(CLI::IsMember({"exact", "approx"}))
      ->capture_default_str();
  c_scan->add_option("--grid-step", scan.grid_step, "alpha^2 grid step as a fraction of n")
      ->capture_default_str();
  add_tail_tol(c_scan, scan.tail_tol);
  add_output(c_scan, scan.out, "csv");

  FitArgs fit;
  auto* c_fit = app.add_subcommand("fit", "Power-law fit y = c x^p of a scan CSV");
  c_fit->add_option("-i,--input", fit.input, "Scan CSV with a header row, '-' for stdin")->required();
  c_fit->add_option("--x-column", fit.x_column, "Column holding x (photons)")->capture_default_str();
  c_fit->add_option("--y-column", fit.y_column, "Column holding y (rad^-2)")->capture_default_str();
  c_fit->add_option("--x-min", fit.x_min, "Ignore rows with x below this (photons)");
  c_fit->add_option("--x-max", fit.x_max, "Ignore rows with x above this (photons)");
  add_output(c_fit, fit.out, "json");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Monte-Carlo maximum-likelihood estimation against the Cramer-Rao bound");
  add_source(c_sim, sim.n_bar, sim.alpha2);
  c_sim->add_option("--n-res", sim.n_res, kNResHelp)->capture_default_str();
  c_sim->add_option("--phi", sim.phi, "True phase, inside (0, pi/2) (rad)")->capture_default_str();
  c_sim->add_option("--trials", sim.trials, "Detection events per experiment (count)")->capture_default_str();
  c_sim->add_option("--repetitions", sim.repetitions, "Independent experiments (count)")->capture_default_str();
  c_sim->add_option("--seed", sim.seed, "Random seed (integer)")->required();
  c_sim->add_option("--phi-step", sim.phi_step, "Likelihood grid spacing (rad)")->capture_default_str();
  c_sim->add_option("--estimates-csv", sim.estimates_csv, "Also write every estimate to this CSV file");
  add_tail_tol(c_sim, sim.tail_tol);
  add_output(c_sim, sim.out, "json");

  AmplitudeArgs amp;
  auto* c_amp = app.add_subcommand("export-amplitudes", "Log-encoded Fock amplitudes of one input");
  c_amp->add_option("--field", amp.field, "coherent or squeezed")
      ->check(CLI::IsMember({"coherent", "squeezed"}))
      ->capture_default_str();
  add_source(c_amp, amp.n_bar, amp.alpha2);
  c_amp->add_option("--cutoff", amp.cutoff, "Fixed Fock cutoff (photons) instead of --tail-tol");
  add_tail_tol(c_amp, amp.tail_tol);
  add_output(c_amp, amp.out, "csv");

  OutcomeArgs outc;
  auto* c_out = app.add_subcommand("outcomes", "Joint detection probabilities P(N_a, N_b | phi) and overflow");
  add_source(c_out, outc.n_bar, outc.alpha2);
  c_out->add_option("--n-res", outc.n_res, kNResHelp)->capture_default_str();
  c_out->add_option("--phi", outc.phi, "Phase (rad)")->capture_default_str();
  add_tail_tol(c_out, outc.tail_tol);
  add_output(c_out, outc.out, "csv");

  std::vector<std::string> args(argv, argv + argc);
  try {
    std::vector<std::string> names;
    for (const auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
      names.push_back(sub->get_name());
    }
    args = pnrmzi::cli::merge_config(args, names, {"threads"});
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*c_dist) run_dist(dist);
    if (*c_fisher) run_fisher(fisher, globals);
    if (*c_opt) run_optimize(optimize, globals);
    if (*c_scan) run_scan(scan, globals);
    if (*c_fit) run_fit(fit);
    if (*c_sim) run_simulate(sim, globals);
    if (*c_amp) run_export_amplitudes(amp);
    if (*c_out) run_outcomes(outc);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const MalformedInput& e) {
    std::cerr << "malformed input: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const DegenerateLikelihood& e) {
    std::cerr << "DegenerateLikelihood: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const InsufficientData& e) {
    std::cerr << "InsufficientData: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
