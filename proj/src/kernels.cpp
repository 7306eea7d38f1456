#include "wkde/kernels.hpp"

#include "wkde/error.hpp"
#include "wkde/numeric.hpp"

#include <numbers>

namespace wkde {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double quadrature_or_throw(const std::function<double(double)>& f,
                           double radius,
                           const std::string& what)
{
  const double value = simpson_to_tolerance(f, -radius, radius, 1e-8);
  if (!std::isfinite(value)) {
    throw Error(Errc::non_integrable, what);
  }
  return value;
}

} // namespace

Kernel Kernel::epanechnikov()
{
  return Kernel(KernelId::epanechnikov, "epanechnikov", 1.0, 0.2, 0.6, 0.2, true);
}

Kernel Kernel::gaussian()
{
  return Kernel(KernelId::gaussian,
                "gaussian",
                inf,
                1.0,
                0.5 / std::sqrt(pi),
                1.0,
                true);
}

Kernel Kernel::biweight()
{
  return Kernel(
    KernelId::biweight, "biweight", 1.0, 1.0 / 7.0, 5.0 / 7.0, 1.0 / 7.0, true);
}

Kernel Kernel::epanechnikov_sqrt5()
{
  // rescaling u -> u / sqrt5 multiplies mu2 by 5 and R(K) by 1 / sqrt5
  return Kernel(KernelId::epanechnikov_sqrt5,
                "epanechnikov_sqrt5",
                sqrt5,
                1.0,
                0.6 / sqrt5,
                1.0,
                true);
}

Kernel Kernel::custom(std::string name,
                      std::function<double(double)> fn,
                      double support_radius)
{
  if (!(support_radius > 0.0)) {
    throw Error(Errc::invalid_parameter, "kernel support radius must be positive");
  }
  const double radius = std::isfinite(support_radius) ? support_radius : 40.0;
  auto mu2 = quadrature_or_throw(
    [&](double u) { return u * u * fn(u); }, radius, "second moment of " + name);
  // higher-order kernels: quadrature noise around an exact zero
  if (std::abs(mu2) < 1e-10) {
    mu2 = 0.0;
  }
  const auto abs_mu2 = quadrature_or_throw(
    [&](double u) { return u * u * std::abs(fn(u)); },
    radius,
    "absolute second moment of " + name);
  const auto rough = quadrature_or_throw(
    [&](double u) { return fn(u) * fn(u); }, radius, "square of " + name);

  bool nonneg = true;
  for (double u : linspace(-radius, radius, 4001)) {
    if (fn(u) < 0.0) {
      nonneg = false;
      break;
    }
  }
  Kernel k(KernelId::custom, std::move(name), support_radius, mu2, rough, abs_mu2, nonneg);
  k.fn_ = std::make_shared<const std::function<double(double)>>(std::move(fn));
  return k;
}

double Kernel::self_convolution(double t) const
{
  const double a = std::abs(t);
  switch (id_) {
    case KernelId::epanechnikov: {
      if (a >= 2.0) {
        return 0.0;
      }
      const double w = 2.0 - a;
      return 3.0 / 160.0 * w * w * w * (a * a + 6.0 * a + 4.0);
    }
    case KernelId::gaussian:
      return normal_pdf(t, std::numbers::sqrt2);
    case KernelId::biweight: {
      if (a >= 2.0) {
        return 0.0;
      }
      const double w = 2.0 - a;
      const double w5 = w * w * w * w * w;
      return 5.0 / 3584.0 * w5 * (((a + 10.0) * a + 36.0) * a * a + 40.0 * a + 16.0);
    }
    case KernelId::epanechnikov_sqrt5:
      return Kernel::epanechnikov().self_convolution(t / sqrt5) / sqrt5;
    case KernelId::custom: {
      const double r = effective_radius();
      if (a >= 2.0 * r) {
        return 0.0;
      }
      // overlap of [-r, r] and [t - r, t + r]
      const double lo = std::max(-r, t - r);
      const double hi = std::min(r, t + r);
      return simpson([&](double u) { return (*this)(u) * (*this)(u - t); },
                     lo,
                     hi,
                     2000);
    }
  }
  return 0.0;
}

Kernel kernel_by_name(std::string_view name)
{
  if (name == "epanechnikov" || name == "epanechnikov_std") {
    return Kernel::epanechnikov();
  }
  if (name == "gaussian") {
    return Kernel::gaussian();
  }
  if (name == "biweight") {
    return Kernel::biweight();
  }
  if (name == "epanechnikov_sqrt5") {
    return Kernel::epanechnikov_sqrt5();
  }
  throw Error(Errc::unknown_name, "unknown kernel '" + std::string(name) + "'");
}

std::vector<Kernel> registered_kernels()
{
  return { Kernel::epanechnikov(),
           Kernel::gaussian(),
           Kernel::biweight(),
           Kernel::epanechnikov_sqrt5() };
}

double kernel_eval(const Kernel& kernel, double u)
{
  return kernel(u);
}

double kernel_second_moment(const Kernel& kernel)
{
  return kernel.mu2();
}

double kernel_roughness(const Kernel& kernel)
{
  return kernel.roughness();
}

double amise_kernel_constant(const Kernel& kernel)
{
  if (kernel.mu2() == 0.0) {
    throw Error(Errc::degenerate_kernel,
                "kernel '" + kernel.name() + "' has zero second moment");
  }
  return std::pow(std::abs(kernel.mu2()), 0.4) * std::pow(kernel.roughness(), 0.8);
}

double product_kernel(const Kernel& kernel, std::span<const double> u)
{
  double v = 1.0;
  for (double x : u) {
    v *= kernel(x);
    if (v == 0.0) {
      break;
    }
  }
  return v;
}

} // namespace wkde
