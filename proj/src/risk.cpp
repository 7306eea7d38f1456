#include "wkde/risk.hpp"

#include "wkde/bandwidth.hpp"
#include "wkde/curvature.hpp"
#include "wkde/error.hpp"
#include "wkde/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace wkde {

namespace {

constexpr const char* known_selectors[] = { "amise_oracle", "gcpi", "silverman", "lscv" };

double kernel_reach(const Kernel& kernel)
{
  return kernel.compact() ? kernel.support_radius() : 12.0;
}

// int g^2 over [lo, hi] with Simpson, split at the given breaks
double integrate_square(const std::function<double(double)>& g,
                        double lo,
                        double hi,
                        std::span<const double> breaks,
                        std::size_t intervals)
{
  return simpson_split(
    [&](double x, Side) {
      const double v = g(x);
      return v * v;
    },
    lo,
    hi,
    breaks,
    intervals);
}

// runs body(r) for r in [0, count) on up to `threads` workers
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body)
{
  const unsigned workers =
    std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (workers == 1) {
    for (std::size_t r = 0; r < count; ++r) {
      body(r);
    }
    return;
  }
  std::atomic<std::size_t> next{ 0 };
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t r = next++; r < count; r = next++) {
        try {
          body(r);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) {
            failure = std::current_exception();
          }
          next = count;
        }
      }
    });
  }
  for (auto& t : pool) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

double lower_median(std::vector<double> v)
{
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

// per-cell replication results, filled by index
struct Cell
{
  std::vector<double> h, ise;
  std::vector<char> ok;

  explicit Cell(std::size_t reps)
    : h(reps, 0.0)
    , ise(reps, 0.0)
    , ok(reps, 0)
  {}
};

ResultRow summarize(std::size_t n,
                    const std::string& kernel,
                    const std::string& selector,
                    const Cell& cell,
                    double h_oracle)
{
  ResultRow row;
  row.n = n;
  row.kernel = kernel;
  row.selector = selector;
  CompensatedSum hs, is;
  std::vector<double> ratios;
  std::size_t m = 0;
  for (std::size_t r = 0; r < cell.ok.size(); ++r) {
    if (!cell.ok[r]) {
      ++row.failures;
      continue;
    }
    ++m;
    hs += cell.h[r];
    is += cell.ise[r];
    ratios.push_back(cell.h[r] / h_oracle);
  }
  if (m == 0) {
    row.bandwidth_mean = row.mean_ise = row.se_ise = std::numeric_limits<double>::quiet_NaN();
    return row;
  }
  const double md = static_cast<double>(m);
  row.bandwidth_mean = hs.value() / md;
  row.mean_ise = is.value() / md;
  if (m > 1) {
    CompensatedSum ss;
    for (std::size_t r = 0; r < cell.ok.size(); ++r) {
      if (cell.ok[r]) {
        const double d = cell.ise[r] - row.mean_ise;
        ss += d * d;
      }
    }
    row.se_ise = std::sqrt(ss.value() / (md - 1.0) / md);
  }
  if (selector != "amise_oracle") {
    row.median_h_ratio = lower_median(std::move(ratios));
  }
  return row;
}

std::vector<ResultRow> run_univariate(const ExperimentConfig& cfg, unsigned threads)
{
  const auto model = make_density(cfg.density);
  const double curvature = weak_curvature(*model);
  std::vector<Kernel> kernels;
  for (const auto& k : cfg.kernels) {
    kernels.push_back(kernel_by_name(k));
  }
  const auto xs = cfg.grid.points();
  std::vector<double> truth(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    truth[i] = model->pdf(xs[i]);
  }
  const auto pilot = PilotSpec::gaussian();
  const PilotRule rule{ cfg.pilot_alpha, false, 0.0 };
  const std::size_t ns = cfg.selectors.size();

  std::vector<ResultRow> rows;
  for (std::size_t n : cfg.sizes) {
    std::vector<double> h_oracle;
    for (const auto& k : kernels) {
      h_oracle.push_back(amise_bandwidth(k, curvature, n));
    }
    std::vector<Cell> cells(kernels.size() * ns, Cell(cfg.reps));

    parallel_for(cfg.reps, threads, [&](std::size_t r) {
      const auto sample = density_sample(*model, replication_seed(cfg.master_seed, n, r), n);
      // kernel-free pieces are computed at most once per replication
      std::optional<CurvatureEstimate> curv;
      std::optional<double> silverman;
      for (std::size_t ki = 0; ki < kernels.size(); ++ki) {
        const auto& k = kernels[ki];
        for (std::size_t si = 0; si < ns; ++si) {
          Cell& cell = cells[ki * ns + si];
          const auto& sel = cfg.selectors[si];
          try {
            double h = 0.0;
            if (sel == "amise_oracle") {
              h = h_oracle[ki];
            } else if (sel == "gcpi") {
              if (!curv) {
                curv = estimate_curvature(sample, pilot, rule, cfg.tau);
              }
              h = gcpi_from_estimate(k, *curv).h;
            } else if (sel == "silverman") {
              if (!silverman) {
                silverman = silverman_bandwidth(sample);
              }
              h = *silverman;
            } else {
              h = lscv_bandwidth(sample, k, default_lscv_grid(sample)).h;
            }
            const auto est = kde_eval_grid(sample, k, h, cfg.grid);
            cell.h[r] = h;
            cell.ise[r] = ise(est, truth, cfg.grid);
            cell.ok[r] = 1;
          } catch (const Error&) {
            cell.ok[r] = 0;
          }
        }
      }
    });

    for (std::size_t ki = 0; ki < kernels.size(); ++ki) {
      for (std::size_t si = 0; si < ns; ++si) {
        rows.push_back(
          summarize(n, kernels[ki].name(), cfg.selectors[si], cells[ki * ns + si], h_oracle[ki]));
      }
    }
  }
  return rows;
}

double ise_2d(std::span<const double> est, std::span<const double> truth, const EvaluationGrid& grid)
{
  const std::size_t m = grid.count;
  std::vector<double> row(m), col(m);
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t q = 0; q < m; ++q) {
      const double d = est[p * m + q] - truth[p * m + q];
      row[q] = d * d;
    }
    col[p] = trapezoid(row, grid.spacing());
  }
  return trapezoid(col, grid.spacing());
}

std::vector<ResultRow> run_bivariate(const ExperimentConfig& cfg, unsigned threads)
{
  const StandardNormalNd model{ 2 };
  const auto xs = cfg.grid.points();
  const std::size_t m = xs.size();
  std::vector<double> truth(m * m);
  for (std::size_t p = 0; p < m; ++p) {
    for (std::size_t q = 0; q < m; ++q) {
      const double pt[2] = { xs[p], xs[q] };
      truth[p * m + q] = model.pdf(pt);
    }
  }

  std::vector<ResultRow> rows;
  for (std::size_t n : cfg.sizes) {
    for (const auto& name : cfg.kernels) {
      const auto k = kernel_by_name(name);
      // product kernel: R = R(K)^2, M2 = mu2 I, so ||L_K f||^2 = mu2^2 ||Laplacian f||^2
      const double h = multivariate_amise_bandwidth(
        k.roughness() * k.roughness(), k.mu2() * k.mu2() * model.laplacian_norm_sq(), 2, n);
      Cell cell(cfg.reps);
      parallel_for(cfg.reps, threads, [&](std::size_t r) {
        const auto sample = model.sample(replication_seed(cfg.master_seed, n, r), n);
        const auto est = kde_eval_grid_2d(sample, k, h, cfg.grid);
        cell.h[r] = h;
        cell.ise[r] = ise_2d(est, truth, cfg.grid);
        cell.ok[r] = 1;
      });
      rows.push_back(summarize(n, k.name(), "amise_oracle", cell, h));
    }
  }
  return rows;
}

} // namespace

double ise(std::span<const double> estimate, std::span<const double> truth, const EvaluationGrid& grid)
{
  if (estimate.size() != truth.size() || estimate.size() != grid.count) {
    throw Error(Errc::length_mismatch, "estimate, truth and grid lengths differ");
  }
  std::vector<double> sq(estimate.size());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    const double d = estimate[i] - truth[i];
    sq[i] = d * d;
  }
  return trapezoid(sq, grid.spacing());
}

double convolution_norm_sq(const DensityModel& model, const Kernel& kernel, double h)
{
  const auto dom = model.quad_domain();
  const double pad = kernel_reach(kernel) * h;
  return integrate_square(
    [&](double x) { return kde_expectation(model, kernel, h, x); }, dom.lo - pad, dom.hi + pad, {}, 4000);
}

double integrated_variance(const DensityModel& model, const Kernel& kernel, double h, std::size_t n)
{
  const double nn = static_cast<double>(n);
  return kernel.roughness() / (nn * h) - convolution_norm_sq(model, kernel, h) / nn;
}

double integrated_squared_bias(const DensityModel& model, const Kernel& kernel, double h)
{
  const auto dom = model.quad_domain();
  const auto kinks = model.kink_points();
  return integrate_square(
    [&](double x) { return kde_expectation(model, kernel, h, x) - model.pdf(x); }, dom.lo, dom.hi, kinks, 4000);
}

double mise_upper_bound(const DensityModel& model, const Kernel& kernel, double h, std::size_t n)
{
  const double a = kernel.abs_second_moment();
  const double h2 = h * h;
  return 0.25 * h2 * h2 * a * a * weak_curvature(model) +
         kernel.roughness() / (static_cast<double>(n) * h);
}

double rate_slope(std::span<const double> ns, std::span<const double> ises)
{
  if (ns.size() != ises.size()) {
    throw Error(Errc::length_mismatch, "sizes and ISE lists differ in length");
  }
  if (ns.size() < 2) {
    throw Error(Errc::insufficient_points, "slope needs at least two points");
  }
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (!(ns[i] > 0.0) || !(ises[i] > 0.0)) {
      throw Error(Errc::invalid_parameter, "slope needs positive sizes and ISE values");
    }
    lx.push_back(std::log(ns[i]));
    ly.push_back(std::log(ises[i]));
  }
  const double mx = mean(lx);
  const double my = mean(ly);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  if (sxx == 0.0) {
    throw Error(Errc::insufficient_points, "slope needs at least two distinct sizes");
  }
  return sxy / sxx;
}

void ExperimentConfig::validate() const
{
  if (sizes.empty()) {
    throw Error(Errc::config_error, "sizes must not be empty");
  }
  for (std::size_t n : sizes) {
    if (n < 3) {
      throw Error(Errc::config_error, "every sample size must be at least 3");
    }
  }
  if (reps < 1) {
    throw Error(Errc::config_error, "reps must be at least 1");
  }
  if (kernels.empty()) {
    throw Error(Errc::config_error, "kernels must not be empty");
  }
  if (selectors.empty()) {
    throw Error(Errc::config_error, "selectors must not be empty");
  }
  for (const auto& k : kernels) {
    kernel_by_name(k);
  }
  for (const auto& s : selectors) {
    if (std::find(std::begin(known_selectors), std::end(known_selectors), s) ==
        std::end(known_selectors)) {
      throw Error(Errc::unknown_name, "unknown selector '" + s + "'");
    }
  }
  if (!(grid.lo < grid.hi) || grid.count < 2) {
    throw Error(Errc::config_error, "grid needs lo < hi and count >= 2");
  }
  if (!(tau > 0.0)) {
    throw Error(Errc::config_error, "tau must be positive");
  }
  if (std::find(selectors.begin(), selectors.end(), "gcpi") != selectors.end() &&
      !validate_pilot_rate(pilot_alpha)) {
    throw Error(Errc::config_error, "pilot_alpha must lie in (0, 2/9)");
  }
  if (dim == 1) {
    make_density(density);
  } else if (dim == 2) {
    if (density != "normal") {
      throw Error(Errc::config_error, "dim = 2 supports only the standard normal density");
    }
    for (const auto& k : kernels) {
      const auto id = kernel_by_name(k).id();
      if (id != KernelId::gaussian && id != KernelId::epanechnikov &&
          id != KernelId::epanechnikov_sqrt5) {
        throw Error(Errc::config_error, "dim = 2 supports product Gaussian and Epanechnikov kernels");
      }
    }
    for (const auto& s : selectors) {
      if (s != "amise_oracle") {
        throw Error(Errc::config_error, "dim = 2 supports only the amise_oracle selector");
      }
    }
  } else {
    throw Error(Errc::config_error, "dim must be 1 or 2");
  }
}

std::uint64_t replication_seed(std::uint64_t master_seed, std::size_t n, std::size_t r)
{
  return stream_seed({ master_seed, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r) });
}

std::vector<ResultRow> monte_carlo_mise(const ExperimentConfig& config, unsigned threads)
{
  config.validate();
  return config.dim == 2 ? run_bivariate(config, threads) : run_univariate(config, threads);
}

} // namespace wkde
