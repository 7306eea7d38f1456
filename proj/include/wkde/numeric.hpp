#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace wkde {

inline constexpr double pi = std::numbers::pi;
inline constexpr double inv_sqrt_2pi = 0.3989422804014327;

//! Running sum with Neumaier's error compensation.
class CompensatedSum
{
public:
  void add(double x) noexcept
  {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) noexcept
  {
    add(x);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double normal_pdf(double x) noexcept
{
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) noexcept
{
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

//! Density of N(0, s^2) at x.
inline double normal_pdf(double x, double s) noexcept
{
  return normal_pdf(x / s) / s;
}

std::vector<double> linspace(double lo, double hi, std::size_t count);

//! Trapezoid rule for samples on an equally spaced grid.
double trapezoid(std::span<const double> values, double spacing);

//! Composite Simpson rule with `intervals` subintervals (rounded up to even).
double simpson(const std::function<double(double)>& f,
               double lo,
               double hi,
               std::size_t intervals);

//! Composite Simpson with interval doubling until two successive estimates
//! differ by less than `tol`. Returns NaN if no convergence by `max_intervals`.
double simpson_to_tolerance(const std::function<double(double)>& f,
                            double lo,
                            double hi,
                            double tol,
                            std::size_t max_intervals = std::size_t{1} << 22);

//! Simpson integration of f over [lo, hi] split at the given breakpoints,
//! spending roughly `intervals` subintervals in total. Breakpoints outside
//! (lo, hi) are ignored. The integrand receives a side hint: the endpoint of
//! each piece is evaluated as a one-sided limit from inside the piece.
enum class Side
{
  none,
  left,
  right
};
double simpson_split(const std::function<double(double, Side)>& f,
                     double lo,
                     double hi,
                     std::span<const double> breaks,
                     std::size_t intervals);

double mean(std::span<const double> x);
//! Sample standard deviation (divisor n - 1).
double sample_sd(std::span<const double> x);
//! Quantile by linear interpolation of order statistics (the inclusive
//! scheme, R type 7). `sorted` must be ascending.
double quantile_sorted(std::span<const double> sorted, double p);
//! min(s, IQR / 1.34) with s the sample standard deviation and the quartiles
//! from quantile_sorted. Needs at least two values.
double robust_scale(std::span<const double> x);

} // namespace wkde
