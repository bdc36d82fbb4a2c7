#pragma once

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cprsim/config.hpp"
#include "cprsim/sweep.hpp"

namespace cprsim {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitComputation = 2, kExitIo = 3 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// In-memory result file; `name` is relative to the output directory.
struct OutputFile {
  std::string name;
  std::string contents;
};

/// ode, abm, ensemble, density, critical-map, equilibria, compare
const std::vector<std::string>& subcommand_names();

/// Computes the result files of one subcommand without touching the disk.
/// Throws ConfigError for an unknown name; computation errors propagate.
std::vector<OutputFile> compute_subcommand(const std::string& name, const RunConfig& config);

/// Runs a subcommand, writes its CSV files plus metadata.json into
/// config.output.directory and returns an ExitCode. Diagnostics go to `diag`.
int run_subcommand(const std::string& name, const RunConfig& config, std::ostream& diag);

// CSV building blocks. Numbers use format_double(); NaN is written as "nan".

/// One header line (col_0, col_1, ...) then one row per matrix row.
std::string matrix_csv(const GridMatrix<double>& m);
/// Single-column file with a header.
std::string axis_csv(const std::string& header, const std::vector<double>& axis);

struct SeriesRow {
  double time;
  std::string series;
  double mean;
  double stderr_;
};
/// Long format: time,series,mean,stderr.
std::string series_csv(const std::vector<SeriesRow>& rows);

/// Writes `files` under `directory`, creating it when needed. Throws IoError.
void write_files(const std::string& directory, const std::vector<OutputFile>& files);

}  // namespace cprsim
