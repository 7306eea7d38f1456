#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "wkde/error.hpp"
#include "wkde/numeric.hpp"
#include "wkde/rng.hpp"

#include <algorithm>
#include <vector>

using namespace wkde;

TEST_CASE("compensated sum recovers cancelled terms")
{
  CompensatedSum s;
  s += 1.0;
  s += 1e100;
  s += 1.0;
  s += -1e100;
  CHECK(s.value() == 2.0);
}

TEST_CASE("trapezoid and simpson")
{
  const std::vector<double> ones(11, 1.0);
  CHECK(trapezoid(ones, 0.1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(simpson([](double x) { return x * x * x; }, 0.0, 2.0, 2) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(simpson_to_tolerance([](double x) { return std::exp(x); }, 0.0, 1.0, 1e-12) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
}

TEST_CASE("simpson_split integrates a kinked function exactly piecewise")
{
  // |x| on [-1, 2] with the kink at 0: Simpson is exact on each piece
  const double breaks[] = { 0.0 };
  const double v = simpson_split([](double x, Side) { return std::abs(x); }, -1.0, 2.0, breaks, 10);
  CHECK(v == doctest::Approx(2.5).epsilon(1e-14));

  // step function with the side hint honoured at the jump
  auto step = [](double x, Side side) {
    if (x == 0.5) {
      return side == Side::left ? 0.0 : 1.0;
    }
    return x < 0.5 ? 0.0 : 1.0;
  };
  const double jump[] = { 0.5 };
  CHECK(simpson_split(step, 0.0, 1.0, jump, 8) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("sample statistics")
{
  const std::vector<double> x{ 1.0, 2.0, 3.0, 4.0 };
  CHECK(mean(x) == 2.5);
  CHECK(sample_sd(x) == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(quantile_sorted(x, 0.25) == doctest::Approx(1.75));
  CHECK(quantile_sorted(x, 0.75) == doctest::Approx(3.25));
  CHECK(quantile_sorted(x, 0.0) == 1.0);
  CHECK(quantile_sorted(x, 1.0) == 4.0);
}

TEST_CASE("rng streams are deterministic and well spread")
{
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(a.normal() != c.normal());
  CHECK(stream_seed({ 1, 2, 3 }) != stream_seed({ 1, 3, 2 }));

  Rng r(7);
  CompensatedSum m1, m2;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    m1 += z;
    m2 += z * z;
  }
  CHECK(std::abs(m1.value() / n) < 0.01);
  CHECK(std::abs(m2.value() / n - 1.0) < 0.01);
}

TEST_CASE("error categories map to exit codes")
{
  CHECK(exit_code(Error(Errc::config_error, "x").category()) == 2);
  CHECK(exit_code(Error(Errc::parse_error, "x").category()) == 3);
  CHECK(exit_code(Error(Errc::degenerate_curvature, "x").category()) == 4);
  CHECK(std::string(Error(Errc::unknown_column, "foo").what()).find("UnknownColumn") == 0);
}
