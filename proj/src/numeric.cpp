#include "wkde/numeric.hpp"

#include "wkde/error.hpp"

#include <algorithm>
#include <limits>

namespace wkde {

const char* errc_name(Errc code)
{
  switch (code) {
    case Errc::config_error:
      return "ConfigError";
    case Errc::invalid_parameter:
      return "InvalidParameter";
    case Errc::unknown_name:
      return "UnknownName";
    case Errc::file_not_found:
      return "FileNotFound";
    case Errc::unknown_column:
      return "UnknownColumn";
    case Errc::parse_error:
      return "ParseError";
    case Errc::empty_sample:
      return "EmptySample";
    case Errc::dimension_mismatch:
      return "DimensionMismatch";
    case Errc::insufficient_sample:
      return "InsufficientSample";
    case Errc::length_mismatch:
      return "LengthMismatch";
    case Errc::insufficient_points:
      return "InsufficientPoints";
    case Errc::at_kink_point:
      return "AtKinkPoint";
    case Errc::degenerate_curvature:
      return "DegenerateCurvature";
    case Errc::degenerate_kernel:
      return "DegenerateKernel";
    case Errc::zero_spread:
      return "ZeroSpread";
    case Errc::non_integrable:
      return "NonIntegrable";
  }
  return "Error";
}

ErrorCategory errc_category(Errc code)
{
  switch (code) {
    case Errc::config_error:
    case Errc::invalid_parameter:
    case Errc::unknown_name:
      return ErrorCategory::usage;
    case Errc::degenerate_curvature:
    case Errc::degenerate_kernel:
    case Errc::zero_spread:
    case Errc::non_integrable:
      return ErrorCategory::numeric;
    default:
      return ErrorCategory::data;
  }
}

std::vector<double> linspace(double lo, double hi, std::size_t count)
{
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + step * static_cast<double>(i);
  }
  out[count - 1] = hi;
  return out;
}

double trapezoid(std::span<const double> values, double spacing)
{
  if (values.size() < 2) {
    return 0.0;
  }
  CompensatedSum s;
  s += 0.5 * values.front();
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    s += values[i];
  }
  s += 0.5 * values.back();
  return s.value() * spacing;
}

double simpson(const std::function<double(double)>& f,
               double lo,
               double hi,
               std::size_t intervals)
{
  intervals = std::max<std::size_t>(2, intervals + (intervals % 2));
  const double step = (hi - lo) / static_cast<double>(intervals);
  CompensatedSum s;
  s += f(lo);
  s += f(hi);
  for (std::size_t i = 1; i < intervals; ++i) {
    const double x = lo + step * static_cast<double>(i);
    s += (i % 2 == 1 ? 4.0 : 2.0) * f(x);
  }
  return s.value() * step / 3.0;
}

double simpson_to_tolerance(const std::function<double(double)>& f,
                            double lo,
                            double hi,
                            double tol,
                            std::size_t max_intervals)
{
  std::size_t m = 64;
  double prev = simpson(f, lo, hi, m);
  while (m < max_intervals) {
    m *= 2;
    const double cur = simpson(f, lo, hi, m);
    if (!std::isfinite(cur)) {
      return std::numeric_limits<double>::quiet_NaN();
    }
    if (std::abs(cur - prev) < tol) {
      return cur;
    }
    prev = cur;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double simpson_split(const std::function<double(double, Side)>& f,
                     double lo,
                     double hi,
                     std::span<const double> breaks,
                     std::size_t intervals)
{
  if (hi <= lo) {
    return 0.0;
  }
  std::vector<double> edges{ lo };
  std::vector<double> inner;
  for (double b : breaks) {
    if (b > lo && b < hi) {
      inner.push_back(b);
    }
  }
  std::sort(inner.begin(), inner.end());
  edges.insert(edges.end(), inner.begin(), inner.end());
  edges.push_back(hi);

  CompensatedSum total;
  const double width = hi - lo;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p];
    const double b = edges[p + 1];
    if (b <= a) {
      continue;
    }
    auto m = static_cast<std::size_t>(
      std::ceil(static_cast<double>(intervals) * (b - a) / width));
    m = std::max<std::size_t>(2, m + (m % 2));
    const double step = (b - a) / static_cast<double>(m);
    CompensatedSum s;
    s += f(a, Side::right);
    s += f(b, Side::left);
    for (std::size_t i = 1; i < m; ++i) {
      const double x = a + step * static_cast<double>(i);
      s += (i % 2 == 1 ? 4.0 : 2.0) * f(x, Side::none);
    }
    total += s.value() * step / 3.0;
  }
  return total.value();
}

double mean(std::span<const double> x)
{
  CompensatedSum s;
  for (double v : x) {
    s += v;
  }
  return s.value() / static_cast<double>(x.size());
}

double sample_sd(std::span<const double> x)
{
  const double m = mean(x);
  CompensatedSum s;
  for (double v : x) {
    s += (v - m) * (v - m);
  }
  return std::sqrt(s.value() / static_cast<double>(x.size() - 1));
}

double quantile_sorted(std::span<const double> sorted, double p)
{
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double robust_scale(std::span<const double> x)
{
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  return std::min(sample_sd(x), iqr / 1.34);
}

} // namespace wkde
