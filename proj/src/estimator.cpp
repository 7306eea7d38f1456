#include "wkde/estimator.hpp"

#include "wkde/error.hpp"
#include "wkde/numeric.hpp"

#include <algorithm>

namespace wkde {

namespace {

void check_bandwidth(double h)
{
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw Error(Errc::invalid_parameter, "bandwidth must be positive and finite");
  }
}

void check_sample(const Sample& sample)
{
  if (sample.empty()) {
    throw Error(Errc::empty_sample, "sample has no observations");
  }
}

void check_product_kernel(const Kernel& kernel, std::size_t dim)
{
  if (dim < 2) {
    return;
  }
  const auto id = kernel.id();
  if (id != KernelId::gaussian && id != KernelId::epanechnikov &&
      id != KernelId::epanechnikov_sqrt5) {
    throw Error(Errc::invalid_parameter,
                "only product Gaussian and product Epanechnikov kernels are supported for d >= 2");
  }
}

} // namespace

void EvaluationGrid::validate() const
{
  if (!(lo < hi) || count < 2) {
    throw Error(Errc::invalid_parameter, "evaluation grid needs lo < hi and count >= 2");
  }
}

std::vector<double> EvaluationGrid::points() const
{
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = at(i);
  }
  return out;
}

double kde_eval(const Sample& sample, const Kernel& kernel, double h, std::span<const double> x)
{
  check_sample(sample);
  check_bandwidth(h);
  if (x.size() != sample.dim) {
    throw Error(Errc::dimension_mismatch,
                "point has dimension " + std::to_string(x.size()) + ", sample has " +
                  std::to_string(sample.dim));
  }
  check_product_kernel(kernel, sample.dim);

  const std::size_t n = sample.size();
  const std::size_t d = sample.dim;
  CompensatedSum s;
  if (d == 1) {
    for (double xi : sample.values) {
      s += kernel((x[0] - xi) / h);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = sample.point(i);
      double v = 1.0;
      for (std::size_t j = 0; j < d && v != 0.0; ++j) {
        v *= kernel((x[j] - p[j]) / h);
      }
      s += v;
    }
  }
  return s.value() / (static_cast<double>(n) * std::pow(h, static_cast<double>(d)));
}

double kde_eval(const Sample& sample, const Kernel& kernel, double h, double x)
{
  return kde_eval(sample, kernel, h, std::span<const double>(&x, 1));
}

std::vector<double> kde_eval_grid(const Sample& sample,
                                  const Kernel& kernel,
                                  double h,
                                  const EvaluationGrid& grid)
{
  check_sample(sample);
  check_bandwidth(h);
  grid.validate();
  if (sample.dim != 1) {
    throw Error(Errc::dimension_mismatch, "grid evaluation needs a univariate sample");
  }

  std::vector<double> sorted = sample.values;
  std::sort(sorted.begin(), sorted.end());
  const double reach = kernel.effective_radius() * h;
  const double norm = 1.0 / (static_cast<double>(sorted.size()) * h);

  std::vector<double> out(grid.count);
  auto first = sorted.begin();
  for (std::size_t g = 0; g < grid.count; ++g) {
    const double x = grid.at(g);
    first = std::lower_bound(first, sorted.end(), x - reach);
    CompensatedSum s;
    for (auto it = first; it != sorted.end() && *it <= x + reach; ++it) {
      s += kernel((x - *it) / h);
    }
    out[g] = s.value() * norm;
  }
  return out;
}

std::vector<double> kde_eval_grid_2d(const Sample& sample,
                                     const Kernel& kernel,
                                     double h,
                                     const EvaluationGrid& grid)
{
  check_sample(sample);
  check_bandwidth(h);
  grid.validate();
  if (sample.dim != 2) {
    throw Error(Errc::dimension_mismatch, "tensor-grid evaluation needs a bivariate sample");
  }
  check_product_kernel(kernel, 2);

  const std::size_t n = sample.size();
  const std::size_t m = grid.count;
  // separable: f(x_a, y_b) = sum_i A[a][i] B[b][i] / (n h^2)
  std::vector<double> a(m * n), b(m * n);
  for (std::size_t g = 0; g < m; ++g) {
    const double x = grid.at(g);
    for (std::size_t i = 0; i < n; ++i) {
      a[g * n + i] = kernel((x - sample.values[2 * i]) / h);
      b[g * n + i] = kernel((x - sample.values[2 * i + 1]) / h);
    }
  }
  const double norm = 1.0 / (static_cast<double>(n) * h * h);
  std::vector<double> out(m * m);
  for (std::size_t p = 0; p < m; ++p) {
    const double* ra = a.data() + p * n;
    for (std::size_t q = 0; q < m; ++q) {
      const double* rb = b.data() + q * n;
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        s += ra[i] * rb[i];
      }
      out[p * m + q] = s * norm;
    }
  }
  return out;
}

double kde_expectation(const DensityModel& model, const Kernel& kernel, double h, double x)
{
  check_bandwidth(h);
  const double r = kernel.compact() ? kernel.support_radius() : 12.0;
  std::vector<double> breaks;
  for (double k : model.kink_points()) {
    breaks.push_back((x - k) / h);
  }
  // f is continuous; the split only keeps Simpson nodes off the kinks of f''
  auto integrand = [&](double u, Side) { return kernel(u) * model.pdf(x - h * u); };
  return simpson_split(integrand, -r, r, breaks, 4000);
}

std::size_t count_modes(std::span<const double> values, double rel_prominence)
{
  const std::size_t m = values.size();
  if (m == 0) {
    return 0;
  }
  const double top = *std::max_element(values.begin(), values.end());
  if (!(top > 0.0)) {
    return 0;
  }
  const double need = rel_prominence * top;
  std::size_t modes = 0;
  std::size_t i = 0;
  while (i < m) {
    // plateau [i, j)
    std::size_t j = i + 1;
    while (j < m && values[j] == values[i]) {
      ++j;
    }
    const bool rise = i == 0 || values[i - 1] < values[i];
    const bool fall = j == m || values[j] < values[i];
    if (rise && fall) {
      const double peak = values[i];
      double left = peak;
      for (std::size_t k = i; k-- > 0 && values[k] <= peak;) {
        left = std::min(left, values[k]);
      }
      double right = peak;
      for (std::size_t k = j; k < m && values[k] <= peak; ++k) {
        right = std::min(right, values[k]);
      }
      if (peak - std::max(left, right) >= need) {
        ++modes;
      }
    }
    i = j;
  }
  return modes;
}

} // namespace wkde
