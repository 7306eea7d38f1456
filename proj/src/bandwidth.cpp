#include "wkde/bandwidth.hpp"

#include "wkde/error.hpp"
#include "wkde/numeric.hpp"

#include <algorithm>
#include <thread>

namespace wkde {

double amise_bandwidth(double roughness, double mu2, double curvature, std::size_t n)
{
  if (!(curvature > 0.0)) {
    throw Error(Errc::degenerate_curvature, "curvature must be positive");
  }
  if (mu2 == 0.0) {
    throw Error(Errc::degenerate_kernel, "kernel second moment is zero");
  }
  if (n == 0) {
    throw Error(Errc::invalid_parameter, "sample size must be positive");
  }
  return std::pow(roughness / (mu2 * mu2 * curvature * static_cast<double>(n)), 0.2);
}

double amise_bandwidth(const Kernel& kernel, double curvature, std::size_t n)
{
  return amise_bandwidth(kernel.roughness(), kernel.mu2(), curvature, n);
}

double amise_value(double h, double roughness, double mu2, double curvature, std::size_t n)
{
  const double h2 = h * h;
  return 0.25 * h2 * h2 * mu2 * mu2 * curvature + roughness / (static_cast<double>(n) * h);
}

double amise_ratio(double a)
{
  const double a2 = a * a;
  return (4.0 / a + a2 * a2) / 5.0;
}

BandwidthResult oracle_bandwidth(const Kernel& kernel, double curvature, std::size_t n)
{
  return { "amise_oracle", amise_bandwidth(kernel, curvature, n), { { "curvature", curvature } } };
}

BandwidthResult gcpi_from_estimate(const Kernel& kernel, const CurvatureEstimate& est)
{
  BandwidthResult r;
  r.selector = "gcpi";
  r.h = amise_bandwidth(kernel, est.truncated, est.n);
  r.diagnostics = { { "raw", est.raw },
                    { "truncated", est.truncated },
                    { "b", est.pilot_bandwidth },
                    { "truncation_hit", est.truncation_hit ? 1.0 : 0.0 } };
  return r;
}

BandwidthResult gcpi_bandwidth(const Sample& sample,
                               const Kernel& kernel,
                               const PilotSpec& pilot,
                               const PilotRule& rule,
                               double tau,
                               std::size_t blocks,
                               unsigned threads)
{
  if (kernel.mu2() == 0.0) {
    throw Error(Errc::degenerate_kernel, "kernel second moment is zero");
  }
  return gcpi_from_estimate(kernel, estimate_curvature(sample, pilot, rule, tau, blocks, threads));
}

double silverman_bandwidth(const Sample& sample)
{
  const std::size_t n = sample.values.size();
  if (n < 2) {
    throw Error(Errc::insufficient_sample, "Silverman's rule needs at least two observations");
  }
  const double s = robust_scale(sample.values);
  if (!(s > 0.0)) {
    throw Error(Errc::zero_spread, "sample has zero spread");
  }
  return 0.9 * s * std::pow(static_cast<double>(n), -0.2);
}

std::vector<double> log_grid(double lo, double hi, std::size_t count)
{
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
    throw Error(Errc::invalid_parameter, "log grid needs 0 < lo <= hi and count >= 1");
  }
  if (count == 1) {
    return { lo };
  }
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double step = (std::log(hi) - a) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(a + step * static_cast<double>(i));
  }
  out.back() = hi;
  return out;
}

std::vector<double> default_lscv_grid(const Sample& sample)
{
  const double s = robust_scale(sample.values);
  if (!(s > 0.0)) {
    throw Error(Errc::zero_spread, "sample has zero spread");
  }
  return log_grid(0.05 * s, 2.0 * s, 200);
}

double lscv_objective(const Sample& sample, const Kernel& kernel, double h)
{
  const std::size_t n = sample.values.size();
  std::vector<double> x = sample.values;
  std::sort(x.begin(), x.end());
  const double reach = 2.0 * kernel.effective_radius() * h;

  // pairs i < j: self-convolution for the square, K for leave-one-out
  CompensatedSum conv, loo;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n && x[j] - x[i] <= reach; ++j) {
      const double u = (x[j] - x[i]) / h;
      conv += kernel.self_convolution(u);
      loo += kernel(u);
    }
  }
  const double nn = static_cast<double>(n);
  const double square = (nn * kernel.self_convolution(0.0) + 2.0 * conv.value()) / (nn * nn * h);
  const double cv = 2.0 * loo.value() / ((nn - 1.0) * h) * 2.0 / nn;
  return square - cv;
}

BandwidthResult lscv_bandwidth(const Sample& sample,
                               const Kernel& kernel,
                               std::span<const double> h_grid,
                               unsigned threads)
{
  if (sample.values.size() < 3) {
    throw Error(Errc::insufficient_sample, "cross-validation needs at least three observations");
  }
  if (h_grid.empty()) {
    throw Error(Errc::invalid_parameter, "bandwidth grid is empty");
  }
  for (double h : h_grid) {
    if (!(h > 0.0) || !std::isfinite(h)) {
      throw Error(Errc::invalid_parameter, "bandwidth grid values must be positive");
    }
  }

  std::vector<double> obj(h_grid.size());
  const unsigned workers =
    std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(h_grid.size())));
  if (workers == 1) {
    for (std::size_t k = 0; k < h_grid.size(); ++k) {
      obj[k] = lscv_objective(sample, kernel, h_grid[k]);
    }
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < h_grid.size(); k += workers) {
          obj[k] = lscv_objective(sample, kernel, h_grid[k]);
        }
      });
    }
    for (auto& t : pool) {
      t.join();
    }
  }

  std::size_t best = 0;
  for (std::size_t k = 1; k < h_grid.size(); ++k) {
    if (obj[k] < obj[best] || (obj[k] == obj[best] && h_grid[k] < h_grid[best])) {
      best = k;
    }
  }
  return { "lscv", h_grid[best], { { "objective", obj[best] } } };
}

double multivariate_amise_bandwidth(double roughness, double lk_norm_sq, std::size_t d, std::size_t n)
{
  if (!(lk_norm_sq > 0.0)) {
    throw Error(Errc::degenerate_curvature, "bias operator norm must be positive");
  }
  if (d == 0 || n == 0) {
    throw Error(Errc::invalid_parameter, "dimension and sample size must be positive");
  }
  const double dd = static_cast<double>(d);
  return std::pow(dd * roughness / (lk_norm_sq * static_cast<double>(n)), 1.0 / (dd + 4.0));
}

} // namespace wkde
