#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "wkde/error.hpp"
#include "wkde/kernels.hpp"

#include <cmath>

using namespace wkde;

namespace {

double support_or(const Kernel& k, double r)
{
  return k.compact() ? k.support_radius() : r;
}

} // namespace

TEST_CASE("kernel_eval closed forms")
{
  CHECK(kernel_eval(Kernel::epanechnikov(), 0.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(kernel_eval(Kernel::epanechnikov(), 2.0) == 0.0);
  CHECK(kernel_eval(Kernel::epanechnikov(), -1.0000001) == 0.0);
  CHECK(kernel_eval(Kernel::epanechnikov_sqrt5(), 0.0) == doctest::Approx(0.335410).epsilon(1e-6));
  CHECK(kernel_eval(Kernel::gaussian(), 0.0) == doctest::Approx(0.3989422804).epsilon(1e-10));
  CHECK(kernel_eval(Kernel::biweight(), 0.0) == doctest::Approx(0.9375));
  CHECK(kernel_eval(Kernel::biweight(), 1.5) == 0.0);
}

TEST_CASE("stored constants")
{
  CHECK(kernel_second_moment(Kernel::gaussian()) == 1.0);
  CHECK(kernel_second_moment(Kernel::epanechnikov()) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(kernel_second_moment(Kernel::epanechnikov_sqrt5()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kernel_roughness(Kernel::epanechnikov()) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(kernel_roughness(Kernel::gaussian()) == doctest::Approx(0.282095).epsilon(1e-6));
  CHECK(kernel_roughness(Kernel::biweight()) == doctest::Approx(0.714286).epsilon(1e-6));
}

TEST_CASE("moment identities hold under quadrature for every registered kernel")
{
  for (const auto& k : registered_kernels()) {
    CAPTURE(k.name());
    const double r = support_or(k, 40.0);
    const int m = 200000;
    auto K = [&](double u) { return k(u); };
    CHECK(std::abs(oracle::simpson(K, -r, r, m) - 1.0) < 1e-8);
    CHECK(std::abs(oracle::simpson([&](double u) { return u * K(u); }, -r, r, m)) < 1e-8);
    CHECK(std::abs(oracle::simpson([&](double u) { return u * u * K(u); }, -r, r, m) - k.mu2()) < 1e-8);
    CHECK(std::abs(oracle::simpson([&](double u) { return K(u) * K(u); }, -r, r, m) - k.roughness()) < 1e-8);
    CHECK(std::abs(oracle::simpson([&](double u) { return u * u * std::abs(K(u)); }, -r, r, m) -
                   k.abs_second_moment()) < 1e-8);
    if (k.compact()) {
      CHECK(k(k.support_radius() * 1.0001) == 0.0);
      CHECK(k(-k.support_radius() * 1.5) == 0.0);
    }
    for (double u = -3.0; u <= 3.0; u += 0.137) {
      CHECK(k(u) == k(-u));
    }
  }
}

TEST_CASE("amise_kernel_constant")
{
  CHECK(amise_kernel_constant(Kernel::epanechnikov()) == doctest::Approx(0.3491).epsilon(1e-3));
  CHECK(amise_kernel_constant(Kernel::gaussian()) == doctest::Approx(0.3633).epsilon(1e-3));
  CHECK(amise_kernel_constant(Kernel::biweight()) == doctest::Approx(0.3508).epsilon(1e-3));
  // scale invariance: the sqrt5 parametrization has the same constant
  CHECK(amise_kernel_constant(Kernel::epanechnikov_sqrt5()) ==
        doctest::Approx(amise_kernel_constant(Kernel::epanechnikov())).epsilon(1e-12));
}

TEST_CASE("Epanechnikov minimizes the kernel constant among nonnegative kernels")
{
  const double ep = amise_kernel_constant(Kernel::epanechnikov());
  for (const auto& k : registered_kernels()) {
    if (k.nonnegative() && k.id() != KernelId::epanechnikov &&
        k.id() != KernelId::epanechnikov_sqrt5) {
      CAPTURE(k.name());
      CHECK(ep < amise_kernel_constant(k));
    }
  }
  auto tri = Kernel::custom("triangular", [](double u) { return 1.0 - std::abs(u); }, 1.0);
  CHECK(ep < amise_kernel_constant(tri));
}

TEST_CASE("unit-variance Epanechnikov is the rescaled standard form")
{
  const auto s = Kernel::epanechnikov();
  const auto p = Kernel::epanechnikov_sqrt5();
  for (double u = -3.0; u <= 3.0; u += 0.001) {
    CHECK(std::abs(p(u) - s(u / std::sqrt(5.0)) / std::sqrt(5.0)) <= 1e-12);
  }
}

TEST_CASE("self-convolution agrees with quadrature")
{
  for (const auto& k : registered_kernels()) {
    CAPTURE(k.name());
    const double r = support_or(k, 12.0);
    for (double t : { 0.0, 0.3, 0.9, 1.7, 2.5 }) {
      const double lo = std::max(-r, t - r);
      const double hi = std::min(r, t + r);
      const double ref =
        hi > lo ? oracle::simpson([&](double u) { return k(u) * k(u - t); }, lo, hi, 20000) : 0.0;
      CHECK(k.self_convolution(t) == doctest::Approx(ref).epsilon(1e-9));
      CHECK(k.self_convolution(-t) == k.self_convolution(t));
    }
    CHECK(k.self_convolution(0.0) == doctest::Approx(k.roughness()).epsilon(1e-12));
  }
}

TEST_CASE("custom kernels")
{
  auto tri = Kernel::custom("triangular", [](double u) { return 1.0 - std::abs(u); }, 1.0);
  CHECK(tri.mu2() == doctest::Approx(1.0 / 6.0).epsilon(1e-8));
  CHECK(tri.roughness() == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
  CHECK(tri(1.5) == 0.0);
  CHECK(tri.self_convolution(0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-6));

  // square-root singularity: integrable, but K is not in L2
  CHECK_THROWS_AS(Kernel::custom("spike", [](double u) { return 0.25 / std::sqrt(std::abs(u)); }, 1.0),
                  Error);

  // fourth-order kernel with vanishing second moment
  auto quartic = Kernel::custom(
    "fourth_order", [](double u) { return 15.0 / 32.0 * (3.0 - 10.0 * u * u + 7.0 * u * u * u * u); }, 1.0);
  CHECK_FALSE(quartic.nonnegative());
  try {
    amise_kernel_constant(quartic);
    FAIL("expected DegenerateKernel");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::degenerate_kernel);
  }
}

TEST_CASE("lookup by name")
{
  CHECK(kernel_by_name("epanechnikov").id() == KernelId::epanechnikov);
  CHECK(kernel_by_name("epanechnikov_std").id() == KernelId::epanechnikov);
  CHECK(kernel_by_name("epanechnikov_sqrt5").id() == KernelId::epanechnikov_sqrt5);
  CHECK(kernel_by_name("biweight").id() == KernelId::biweight);
  CHECK_THROWS_AS(kernel_by_name("triweight"), Error);
}

TEST_CASE("product kernel")
{
  const double u[2] = { 0.0, 0.0 };
  CHECK(product_kernel(Kernel::gaussian(), u) == doctest::Approx(1.0 / (2.0 * M_PI)).epsilon(1e-14));
  const double v[3] = { 0.5, 2.0, 0.1 };
  CHECK(product_kernel(Kernel::epanechnikov(), v) == 0.0);
}
