#pragma once

#include "wkde/estimator.hpp"
#include "wkde/risk.hpp"
#include "wkde/sample.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace wkde {

//! A rectangular numeric table read from CSV with a header row.
struct DataSet
{
  std::vector<std::string> column_names;
  std::vector<std::vector<double>> rows;
  std::string source_path;

  //! Throws Errc::unknown_column.
  std::vector<double> column(const std::string& name) const;
};

//! Every cell must parse as a real. Errors: Errc::file_not_found,
//! Errc::parse_error (with the 1-based data row).
DataSet read_csv(const std::string& path);

//! One column of a CSV file as a univariate sample; other columns are not
//! parsed. Errors: Errc::file_not_found, Errc::unknown_column,
//! Errc::parse_error (with the 1-based data row).
Sample ingest_csv(const std::string& path, const std::string& column);

//! Line-oriented `key = value` experiment config with `#` comments and
//! comma-separated lists. Keys: density, sizes, kernels, selectors, reps,
//! seed, grid (lo,hi,count), pilot_alpha, tau, dim. Errors carry the line
//! number and use Errc::config_error (Errc::unknown_name for bad kernel or
//! selector names).
ExperimentConfig parse_config(std::istream& in, const std::string& source = "config");
ExperimentConfig load_config(const std::string& path);

//! 17 significant digits, enough to read back the same double.
std::string format_real(double v);

//! CSV with header n,kernel,selector,bandwidth_mean,mean_ise,se_ise,median_h_ratio.
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);

//! CSV x,f,f_second_ae for a density spec; the second-derivative cell is
//! empty at kink points.
void emit_density_grid(const std::string& spec, const EvaluationGrid& grid, std::ostream& out);

} // namespace wkde
