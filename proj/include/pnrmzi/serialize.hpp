#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pnrmzi/errors.hpp"
#include "pnrmzi/fisher.hpp"
#include "pnrmzi/optimize.hpp"
#include "pnrmzi/rotation.hpp"
#include "pnrmzi/simulate.hpp"
#include "pnrmzi/states.hpp"

namespace pnrmzi {

/// Malformed CSV/JSON input. The CLI maps it to exit code 3.
class MalformedInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Every number written by this module has 12 significant digits.
std::string format_number(double x);
/// x rounded to 12 significant digits.
double round12(double x);

std::string to_json(const FisherReport& report);
FisherReport fisher_report_from_json(const std::string& text);
std::string to_json(const ScanResult& scan, double n_bar, Threshold n_res, Engine engine);
std::string to_json(const SingleComponentOptimum& opt);
std::string to_json(const PowerLawFit& fit);
std::string to_json(const EstimationRun& run);
std::string to_json(std::span<const ScalingRow> rows);

/// A parsed CSV table: header names and rows of raw cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  /// Numeric column; "inf" parses as +infinity. Throws MalformedInput.
  std::vector<double> numeric_column(const std::string& name) const;
};

/// Throws MalformedInput on a missing header or ragged rows. Lines starting with '#'
/// are skipped.
CsvTable read_csv(std::istream& in);

void write_scaling_csv(std::ostream& out, std::span<const ScalingRow> rows);
void write_single_component_csv(std::ostream& out, std::span<const SingleComponentOptimum> rows);
void write_scan_csv(std::ostream& out, const ScanResult& scan, double n_bar, Threshold n_res);
void write_amplitudes_csv(std::ostream& out, std::span<const LogSigned> amplitudes);
void write_outcomes_csv(std::ostream& out, const OutcomeDistribution& dist);
void write_estimates_csv(std::ostream& out, const EstimationRun& run);

}  // namespace pnrmzi
