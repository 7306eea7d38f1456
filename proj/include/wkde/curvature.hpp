#pragma once

#include "wkde/sample.hpp"

#include <cstddef>
#include <string>

namespace wkde {

//! Pilot kernel L for curvature estimation. Only the Gaussian is shipped.
struct PilotSpec
{
  std::string name;
  double (*second_derivative)(double);
  //! R(L'') = int (L'')^2.
  double roughness_second;
  //! G_L(z) = int L''(y) L''(y + z) dy.
  double (*autocorrelation)(double);
  //! |z| beyond which G_L(z) is negligible against G_L(0) in double precision.
  double autocorrelation_reach;

  static PilotSpec gaussian();
};

struct CurvatureEstimate
{
  double raw = 0.0;
  double truncated = 0.0;
  double pilot_bandwidth = 0.0;
  bool truncation_hit = false;
  std::size_t n = 0;
};

struct TruncatedCurvature
{
  double value;
  bool hit;
};

inline constexpr double default_tau = 1e-8;

//! (1 / (n b^3)) sum_i L''((x - X_i) / b).
double pilot_second_derivative(const Sample& sample, const PilotSpec& pilot, double b, double x);

double pilot_autocorrelation(const PilotSpec& pilot, double z);

//! Leave-one-out U-statistic (1 / (n (n-1) b^5)) sum_{i != j} G_L((X_i - X_j) / b).
//! The pairs are split into `blocks` contiguous ranges of the first index,
//! evaluated on up to `threads` workers and reduced in block order, so the
//! value depends on `blocks` but never on `threads`. Throws
//! Errc::insufficient_sample for n < 2.
double u_stat_curvature(const Sample& sample,
                        const PilotSpec& pilot,
                        double b,
                        std::size_t blocks = 1,
                        unsigned threads = 1);

//! max(raw, tau); hit when raw < tau.
TruncatedCurvature truncate_curvature(double raw, double tau);

//! True iff 0 < alpha < 2/9, the range in which b = n^-alpha meets the pilot
//! bandwidth conditions.
bool validate_pilot_rate(double alpha);

//! How the pilot bandwidth is chosen.
struct PilotRule
{
  //! b = scale * n^-alpha, where scale is 1 or the robust spread s_rob.
  double alpha = 1.0 / 6.0;
  bool scale_by_spread = false;
  //! Used as is when positive.
  double explicit_b = 0.0;

  static PilotRule simulation() { return { 1.0 / 6.0, false, 0.0 }; }
  static PilotRule data() { return { 1.0 / 9.0, true, 0.0 }; }
  static PilotRule fixed(double b) { return { 0.0, false, b }; }
};

double pilot_bandwidth(const Sample& sample, const PilotRule& rule);

//! U-statistic with truncation at tau.
CurvatureEstimate estimate_curvature(const Sample& sample,
                                     const PilotSpec& pilot,
                                     const PilotRule& rule,
                                     double tau = default_tau,
                                     std::size_t blocks = 1,
                                     unsigned threads = 1);

} // namespace wkde
