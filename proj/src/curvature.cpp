#include "wkde/curvature.hpp"

#include "wkde/error.hpp"
#include "wkde/numeric.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace wkde {

namespace {

double gaussian_second(double u)
{
  return (u * u - 1.0) * normal_pdf(u);
}

// fourth derivative of the N(0, 2) density
double gaussian_autocorrelation(double z)
{
  const double z2 = z * z;
  return normal_pdf(z, std::numbers::sqrt2) * ((z2 - 12.0) * z2 + 12.0) / 16.0;
}

void check_positive(double v, const char* what)
{
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(Errc::invalid_parameter, std::string(what) + " must be positive and finite");
  }
}

} // namespace

PilotSpec PilotSpec::gaussian()
{
  // G_L(40) / G_L(0) is about 1e-171
  return { "gaussian",
           &gaussian_second,
           3.0 / (8.0 * std::sqrt(pi)),
           &gaussian_autocorrelation,
           40.0 };
}

double pilot_second_derivative(const Sample& sample, const PilotSpec& pilot, double b, double x)
{
  if (sample.empty()) {
    throw Error(Errc::empty_sample, "sample has no observations");
  }
  check_positive(b, "pilot bandwidth");
  CompensatedSum s;
  for (double xi : sample.values) {
    s += pilot.second_derivative((x - xi) / b);
  }
  return s.value() / (static_cast<double>(sample.values.size()) * b * b * b);
}

double pilot_autocorrelation(const PilotSpec& pilot, double z)
{
  return pilot.autocorrelation(z);
}

double u_stat_curvature(const Sample& sample,
                        const PilotSpec& pilot,
                        double b,
                        std::size_t blocks,
                        unsigned threads)
{
  if (sample.dim != 1) {
    throw Error(Errc::dimension_mismatch, "curvature estimation needs a univariate sample");
  }
  const std::size_t n = sample.values.size();
  if (n < 2) {
    throw Error(Errc::insufficient_sample, "U-statistic needs at least two observations");
  }
  check_positive(b, "pilot bandwidth");

  // sorting fixes the summation order, so the value is permutation invariant
  std::vector<double> x = sample.values;
  std::sort(x.begin(), x.end());
  const double reach = pilot.autocorrelation_reach * b;

  blocks = std::clamp<std::size_t>(blocks, 1, n);
  std::vector<double> partial(blocks, 0.0);
  auto run_block = [&](std::size_t k) {
    const std::size_t lo = n * k / blocks;
    const std::size_t hi = n * (k + 1) / blocks;
    CompensatedSum s;
    for (std::size_t i = lo; i < hi; ++i) {
      const double xi = x[i];
      for (std::size_t j = i + 1; j < n && x[j] - xi <= reach; ++j) {
        s += pilot.autocorrelation((x[j] - xi) / b);
      }
    }
    partial[k] = s.value();
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(blocks)));
  if (workers == 1) {
    for (std::size_t k = 0; k < blocks; ++k) {
      run_block(k);
    }
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < blocks; k += workers) {
          run_block(k);
        }
      });
    }
    for (auto& t : pool) {
      t.join();
    }
  }

  CompensatedSum total;
  for (double p : partial) {
    total += p;
  }
  const double nn = static_cast<double>(n);
  const double b5 = b * b * b * b * b;
  // G_L is even: each unordered pair counts twice
  return 2.0 * total.value() / (nn * (nn - 1.0) * b5);
}

TruncatedCurvature truncate_curvature(double raw, double tau)
{
  check_positive(tau, "truncation level");
  if (raw < tau) {
    return { tau, true };
  }
  return { raw, false };
}

bool validate_pilot_rate(double alpha)
{
  return alpha > 0.0 && alpha < 2.0 / 9.0;
}

double pilot_bandwidth(const Sample& sample, const PilotRule& rule)
{
  if (rule.explicit_b > 0.0) {
    return rule.explicit_b;
  }
  const std::size_t n = sample.size();
  if (n < 2) {
    throw Error(Errc::insufficient_sample, "pilot bandwidth needs at least two observations");
  }
  double scale = 1.0;
  if (rule.scale_by_spread) {
    scale = robust_scale(sample.values);
    if (!(scale > 0.0)) {
      throw Error(Errc::zero_spread, "sample has zero robust spread");
    }
  }
  return scale * std::pow(static_cast<double>(n), -rule.alpha);
}

CurvatureEstimate estimate_curvature(const Sample& sample,
                                     const PilotSpec& pilot,
                                     const PilotRule& rule,
                                     double tau,
                                     std::size_t blocks,
                                     unsigned threads)
{
  CurvatureEstimate est;
  est.n = sample.size();
  est.pilot_bandwidth = pilot_bandwidth(sample, rule);
  est.raw = u_stat_curvature(sample, pilot, est.pilot_bandwidth, blocks, threads);
  const auto t = truncate_curvature(est.raw, tau);
  est.truncated = t.value;
  est.truncation_hit = t.hit;
  return est;
}

} // namespace wkde
