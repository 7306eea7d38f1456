#pragma once

#include "wkde/densities.hpp"
#include "wkde/kernels.hpp"
#include "wkde/sample.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace wkde {

//! Equally spaced points lo, lo + spacing, ..., hi.
struct EvaluationGrid
{
  double lo = -6.0;
  double hi = 6.0;
  std::size_t count = 1201;

  //! Throws Errc::invalid_parameter unless lo < hi and count >= 2.
  void validate() const;
  double spacing() const noexcept { return (hi - lo) / static_cast<double>(count - 1); }
  //! lo + (hi - lo) i / (count - 1); exact at lo, hi and any point the
  //! ratio makes representable, e.g. 0 on a symmetric grid with odd count.
  double at(std::size_t i) const noexcept
  {
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  std::vector<double> points() const;
};

//! (1 / (n h^d)) sum_i K((x - X_i) / h). For d >= 2 the kernel is used in
//! product form and must be Gaussian or Epanechnikov.
double kde_eval(const Sample& sample, const Kernel& kernel, double h, std::span<const double> x);
double kde_eval(const Sample& sample, const Kernel& kernel, double h, double x);

//! kde_eval at every grid point (d = 1). Only observations within the
//! kernel's reach of a grid point are visited.
std::vector<double> kde_eval_grid(const Sample& sample,
                                  const Kernel& kernel,
                                  double h,
                                  const EvaluationGrid& grid);

//! Estimate on the tensor grid `grid` x `grid` (d = 2), row-major with the
//! first coordinate varying slowest.
std::vector<double> kde_eval_grid_2d(const Sample& sample,
                                     const Kernel& kernel,
                                     double h,
                                     const EvaluationGrid& grid);

//! E f_h(x) = (K_h * f)(x) = int K(u) f(x - h u) du by composite Simpson
//! (4001 points) over the kernel support, [-12, 12] for the Gaussian, split
//! where x - h u crosses a kink.
double kde_expectation(const DensityModel& model, const Kernel& kernel, double h, double x);

//! Number of local maxima whose prominence is at least `rel_prominence`
//! times the largest value. Diagnostic only.
std::size_t count_modes(std::span<const double> values, double rel_prominence = 1e-3);

} // namespace wkde
