#include "pnrmzi/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace pnrmzi {

namespace {

using nlohmann::json;

json number(double x) {
  if (std::isnan(x) || std::isinf(x)) return nullptr;
  return round12(x);
}

json threshold_json(Threshold t) {
  if (t.is_infinite()) return "inf";
  return t.value();
}

Threshold threshold_from_json(const json& j) {
  if (j.is_string()) return Threshold::parse(j.get<std::string>());
  return Threshold::finite(j.get<std::size_t>());
}

double double_or_nan(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    cells.push_back(first == std::string::npos ? std::string{} : cell.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format_number(x).c_str(), nullptr);
}

std::string to_json(const FisherReport& r) {
  json per_n = json::array();
  for (const auto& rec : r.per_n) {
    json e = {{"N", rec.total_n},
              {"F_N", number(rec.fisher)},
              {"G_N", number(rec.gen_prob)},
              {"weighted", number(rec.weighted)}};
    if (rec.cfi_numeric) e["cfi_numeric"] = number(*rec.cfi_numeric);
    per_n.push_back(std::move(e));
  }
  json j = {{"n_bar", number(r.n_bar)},
            {"n_bar_a", number(r.n_bar_a)},
            {"n_bar_b", number(r.n_bar_b)},
            {"n_res", threshold_json(r.n_res)},
            {"effective_n_res", r.effective_n_res},
            {"cutoff", r.cutoff},
            {"phi", number(r.phi)},
            {"per_n", std::move(per_n)},
            {"total_exact", number(r.total_exact)},
            {"total_per_n", number(r.total_per_n)},
            {"total_ideal", number(r.total_ideal)},
            {"total_approx", r.total_approx ? number(*r.total_approx) : json(nullptr)}};
  return j.dump(2);
}

FisherReport fisher_report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    FisherReport r;
    r.n_bar = j.at("n_bar").get<double>();
    r.n_bar_a = j.at("n_bar_a").get<double>();
    r.n_bar_b = j.at("n_bar_b").get<double>();
    r.n_res = threshold_from_json(j.at("n_res"));
    r.effective_n_res = j.at("effective_n_res").get<std::size_t>();
    r.cutoff = j.at("cutoff").get<std::size_t>();
    r.phi = j.at("phi").get<double>();
    for (const auto& e : j.at("per_n")) {
      PerNFisher rec;
      rec.total_n = e.at("N").get<std::size_t>();
      rec.fisher = double_or_nan(e.at("F_N"));
      rec.gen_prob = double_or_nan(e.at("G_N"));
      rec.weighted = double_or_nan(e.at("weighted"));
      if (e.contains("cfi_numeric")) rec.cfi_numeric = double_or_nan(e.at("cfi_numeric"));
      r.per_n.push_back(rec);
    }
    r.total_exact = j.at("total_exact").get<double>();
    r.total_per_n = j.at("total_per_n").get<double>();
    r.total_ideal = j.at("total_ideal").get<double>();
    if (!j.at("total_approx").is_null()) r.total_approx = j.at("total_approx").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("invalid Fisher report JSON: ") + e.what());
  }
}

std::string to_json(const ScanResult& scan, double n_bar, Threshold n_res, Engine engine) {
  json grid = json::array();
  for (const auto& g : scan.grid) grid.push_back({{"alpha2", number(g.control)}, {"fq", number(g.objective)}});
  json j = {{"n_bar", number(n_bar)},
            {"n_res", threshold_json(n_res)},
            {"engine", to_string(engine)},
            {"resolution", number(scan.resolution)},
            {"alpha2_opt", number(scan.argmax)},
            {"fq_opt", number(scan.max_value)},
            {"alpha2_refined", number(scan.refined_argmax)},
            {"fq_refined", number(scan.refined_max)},
            {"grid", std::move(grid)}};
  return j.dump(2);
}

std::string to_json(const SingleComponentOptimum& o) {
  json j = {{"n_bar", number(o.n_bar)},
            {"n_opt", o.n_opt},
            {"alpha2_opt", number(o.alpha2_opt)},
            {"alpha2_over_nbar", number(o.n_bar > 0 ? o.alpha2_opt / o.n_bar : 0.0)},
            {"max_value", number(o.max_value)},
            {"n_refined", o.refined_n},
            {"alpha2_refined", number(o.refined_alpha2)},
            {"max_refined", number(o.refined_max)}};
  return j.dump(2);
}

std::string to_json(const PowerLawFit& fit) {
  json j = {{"c", number(fit.prefactor)},
            {"p", number(fit.exponent)},
            {"rms", number(fit.residual)},
            {"n_min", number(fit.n_min)},
            {"n_max", number(fit.n_max)}};
  return j.dump(2);
}

std::string to_json(const EstimationRun& run) {
  json j = {{"true_phi", number(run.true_phi)},
            {"trials", run.trials},
            {"repetitions", run.repetitions},
            {"n_res", run.n_res},
            {"mean_estimate", number(run.mean_estimate)},
            {"empirical_variance", number(run.empirical_variance)},
            {"fisher", number(run.fisher)},
            {"crb", number(run.crb)},
            {"ratio", number(run.ratio())}};
  return j.dump(2);
}

std::string to_json(std::span<const ScalingRow> rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"n_bar", number(r.n_bar)},
                   {"n_res", threshold_json(r.n_res)},
                   {"alpha2_opt", number(r.alpha2_opt)},
                   {"fq_opt", number(r.fq_opt)},
                   {"fq_ideal", number(r.fq_ideal)}});
  }
  return arr.dump(2);
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw MalformedInput("CSV has no column \"" + name + "\"");
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
  const std::size_t c = column(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::string& cell = rows[r][c];
    if (cell == "inf") {
      out.push_back(std::numeric_limits<double>::infinity());
      continue;
    }
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size()) {
      throw MalformedInput("row " + std::to_string(r + 1) + ", column \"" + name +
                           "\": not a number: \"" + cell + "\"");
    }
    out.push_back(v);
  }
  return out;
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto cells = split_csv_line(line);
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw MalformedInput("CSV row " + std::to_string(t.rows.size() + 1) + " has " +
                           std::to_string(cells.size()) + " cells, header has " +
                           std::to_string(t.header.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  if (!have_header) throw MalformedInput("CSV input has no header row");
  return t;
}

void write_scaling_csv(std::ostream& out, std::span<const ScalingRow> rows) {
  out << "n_bar,n_res,alpha2_opt,fq_opt,fq_ideal\n";
  for (const auto& r : rows) {
    out << format_number(r.n_bar) << ',' << r.n_res.to_string() << ',' << format_number(r.alpha2_opt)
        << ',' << format_number(r.fq_opt) << ',' << format_number(r.fq_ideal) << '\n';
  }
}

void write_single_component_csv(std::ostream& out, std::span<const SingleComponentOptimum> rows) {
  out << "n_bar,n_opt,alpha2_opt,fq_opt,alpha2_refined,fq_refined\n";
  for (const auto& r : rows) {
    out << format_number(r.n_bar) << ',' << r.refined_n << ',' << format_number(r.alpha2_opt) << ','
        << format_number(r.max_value) << ',' << format_number(r.refined_alpha2) << ','
        << format_number(r.refined_max) << '\n';
  }
}

void write_scan_csv(std::ostream& out, const ScanResult& scan, double n_bar, Threshold n_res) {
  out << "alpha2,alpha2_over_nbar,n_res,fq\n";
  for (const auto& g : scan.grid) {
    out << format_number(g.control) << ',' << format_number(n_bar > 0 ? g.control / n_bar : 0.0)
        << ',' << n_res.to_string() << ',' << format_number(g.objective) << '\n';
  }
}

void write_amplitudes_csv(std::ostream& out, std::span<const LogSigned> amplitudes) {
  out << "index,log_magnitude,sign\n";
  for (std::size_t i = 0; i < amplitudes.size(); ++i) {
    out << i << ',' << format_number(amplitudes[i].log_magnitude()) << ',' << amplitudes[i].sign()
        << '\n';
  }
}

void write_outcomes_csv(std::ostream& out, const OutcomeDistribution& dist) {
  out << "N,N_a,N_b,probability\n";
  for (const auto& o : dist.outcomes) {
    out << o.total_n << ',' << o.n_a << ',' << o.n_b << ',' << format_number(o.probability) << '\n';
  }
  out << "overflow,,," << format_number(dist.overflow) << '\n';
}

void write_estimates_csv(std::ostream& out, const EstimationRun& run) {
  out << "repetition,estimate\n";
  for (std::size_t r = 0; r < run.estimates.size(); ++r) {
    out << r << ',' << format_number(run.estimates[r]) << '\n';
  }
}

}  // namespace pnrmzi
