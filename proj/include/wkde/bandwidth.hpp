#pragma once

#include "wkde/curvature.hpp"
#include "wkde/kernels.hpp"
#include "wkde/sample.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace wkde {

struct BandwidthResult
{
  std::string selector;
  double h = 0.0;
  //! Named side results, e.g. "raw", "truncated", "b", "truncation_hit"
  //! for GCPI or "objective" for LSCV.
  std::map<std::string, double> diagnostics;
};

//! (R(K) / (mu2^2 R(f'') n))^(1/5). Throws Errc::degenerate_curvature when
//! curvature <= 0 and Errc::degenerate_kernel when mu2 = 0.
double amise_bandwidth(double roughness, double mu2, double curvature, std::size_t n);
double amise_bandwidth(const Kernel& kernel, double curvature, std::size_t n);

//! (h^4 / 4) mu2^2 R(f'') + R(K) / (n h).
double amise_value(double h, double roughness, double mu2, double curvature, std::size_t n);

//! AMISE(a h*) / AMISE(h*) = (4 / a + a^4) / 5.
double amise_ratio(double a);

//! Oracle selector using the true curvature.
BandwidthResult oracle_bandwidth(const Kernel& kernel, double curvature, std::size_t n);

//! Plug-in bandwidth from an already computed curvature estimate.
BandwidthResult gcpi_from_estimate(const Kernel& kernel, const CurvatureEstimate& est);

BandwidthResult gcpi_bandwidth(const Sample& sample,
                               const Kernel& kernel,
                               const PilotSpec& pilot,
                               const PilotRule& rule,
                               double tau = default_tau,
                               std::size_t blocks = 1,
                               unsigned threads = 1);

//! 0.9 min(s, IQR / 1.34) n^(-1/5). Throws Errc::zero_spread when the
//! robust spread is zero.
double silverman_bandwidth(const Sample& sample);

//! `count` log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t count);

//! 200 log-spaced values on [0.05 s_rob, 2 s_rob].
std::vector<double> default_lscv_grid(const Sample& sample);

//! int f_h^2 - (2 / n) sum_i f_{h,-i}(X_i), with int f_h^2 from the
//! kernel's self-convolution.
double lscv_objective(const Sample& sample, const Kernel& kernel, double h);

//! Grid minimizer of lscv_objective; ties go to the smallest h.
BandwidthResult lscv_bandwidth(const Sample& sample,
                               const Kernel& kernel,
                               std::span<const double> h_grid,
                               unsigned threads = 1);

//! (d R / (||L_K f||^2 n))^(1/(d+4)), with R the roughness of the d-variate
//! kernel and L_K f = tr(M2(K) D^2 f).
double multivariate_amise_bandwidth(double roughness, double lk_norm_sq, std::size_t d, std::size_t n);

} // namespace wkde
