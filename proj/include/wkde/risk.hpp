#pragma once

#include "wkde/densities.hpp"
#include "wkde/estimator.hpp"
#include "wkde/kernels.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wkde {

//! Trapezoid integral of (estimate - truth)^2 on the grid.
double ise(std::span<const double> estimate, std::span<const double> truth, const EvaluationGrid& grid);

//! ||K_h * f||_2^2 by Simpson over the model's domain widened by the kernel reach.
double convolution_norm_sq(const DensityModel& model, const Kernel& kernel, double h);

//! R(K) / (n h) - ||K_h * f||^2 / n.
double integrated_variance(const DensityModel& model, const Kernel& kernel, double h, std::size_t n);

//! int (E f_h - f)^2 over the model's domain.
double integrated_squared_bias(const DensityModel& model, const Kernel& kernel, double h);

//! (h^4 / 4) (int u^2 |K|)^2 ||f''||^2 + R(K) / (n h).
double mise_upper_bound(const DensityModel& model, const Kernel& kernel, double h, std::size_t n);

//! Least-squares slope of log(ise) against log(n).
double rate_slope(std::span<const double> ns, std::span<const double> ises);

struct ExperimentConfig
{
  std::string density = "kinked:eps=0.5";
  std::vector<std::size_t> sizes;
  std::vector<std::string> kernels;
  //! amise_oracle, gcpi, silverman, lscv.
  std::vector<std::string> selectors;
  std::size_t reps = 500;
  std::uint64_t master_seed = 123;
  EvaluationGrid grid;
  double pilot_alpha = 1.0 / 6.0;
  double tau = 1e-8;
  std::size_t dim = 1;

  //! Throws Errc::config_error / Errc::unknown_name for anything that
  //! would fail later.
  void validate() const;
};

struct ResultRow
{
  std::size_t n = 0;
  std::string kernel;
  std::string selector;
  double bandwidth_mean = 0.0;
  double mean_ise = 0.0;
  double se_ise = 0.0;
  //! Lower median of h / h_AMISE; data-driven selectors only.
  std::optional<double> median_h_ratio;
  //! Replications dropped because the selector raised an error.
  std::size_t failures = 0;
};

//! Seed of replication r at sample size n. Every kernel and selector sees
//! the same sample, so the comparisons between them are paired.
std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t n, std::size_t r);

//! Runs the experiment. Rows are ordered by size, then kernel, then selector,
//! and do not depend on `threads`.
std::vector<ResultRow> monte_carlo_mise(const ExperimentConfig& config, unsigned threads = 1);

} // namespace wkde
