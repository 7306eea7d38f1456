#pragma once

#include "wkde/numeric.hpp"
#include "wkde/rng.hpp"
#include "wkde/sample.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wkde {

struct Interval
{
  double lo;
  double hi;
};

//! Closed interval [lower, upper] of generalized second derivatives at a point.
struct CurvatureInterval
{
  double lower;
  double upper;

  bool singleton() const noexcept { return lower == upper; }
};

//! A univariate density in C^{1,1} whose weak second derivative is known in
//! closed form away from a finite set of kink points.
class DensityModel
{
public:
  virtual ~DensityModel() = default;

  //! Canonical spec string, e.g. "kinked:eps=0.5".
  virtual std::string name() const = 0;
  virtual double pdf(double x) const = 0;

  //! A.e. second derivative. At a kink point `side` selects the one-sided
  //! limit; with Side::none an arbitrary representative is returned.
  virtual double second(double x, Side side = Side::none) const = 0;

  virtual std::vector<double> kink_points() const = 0;
  virtual Interval quad_domain() const = 0;
  //! Normalizing constant Z of the unnormalized form (1 where not applicable).
  virtual double normalization() const = 0;

  //! Appends n draws to `out` and returns the number of proposals used.
  virtual std::size_t draw(Rng& rng, std::size_t n, std::vector<double>& out) const = 0;

  //! Lip(f'), certified numerically as 1.05 times the supremum of |f''| on
  //! a fine grid of quad_domain together with the one-sided kink limits.
  double lipschitz_fprime() const noexcept { return lipschitz_; }

  bool is_kink(double x) const;

protected:
  void certify();

private:
  double lipschitz_ = 0.0;
};

using DensityPtr = std::shared_ptr<const DensityModel>;

//! f_eps = phi (1 + eps psi), psi(x) = x|x| / (1 + x^2); |eps| < 1.
DensityPtr make_kinked(double eps);
//! exp(-U_c) / Z_c with the Huber potential; c > 0.
DensityPtr make_huber(double c);
//! exp(-x^2/2 - lambda (x - a)_+^2 / 2) / Z; lambda > 0.
DensityPtr make_threshold(double a, double lambda);
//! (b + eps q) on [-3, 3] with b a normalized mollifier and
//! q(x) = x|x| rho(x); |eps| < eps0.
DensityPtr make_compact_kinked(double eps);
//! Largest admissible |eps| for the compactly supported family.
double compact_kinked_eps0();

//! Parses "kinked:eps=0.5", "huber:c=1", "threshold:a=0.5,lambda=4",
//! "compact_kinked:eps=auto" (eps0 / 2) or "normal".
DensityPtr make_density(std::string_view spec);

double density_pdf(const DensityModel& model, double x);
//! Throws Errc::at_kink_point if x is exactly a kink.
double density_second_ae(const DensityModel& model, double x);

//! R(f'') by the trapezoid rule over quad_domain with `points` grid points,
//! the grid split at kink points (one-sided limits used at the split).
double weak_curvature(const DensityModel& model, std::size_t points = 200001);

Sample density_sample(const DensityModel& model, std::uint64_t seed, std::size_t n);

CurvatureInterval generalized_second_interval(const DensityModel& model, double x);

//! M_h(x): sup of |generalized second derivative| over [x - A h, x + A h].
double local_curvature_bound(const DensityModel& model,
                             double x,
                             double h,
                             double support_radius);

//! Standard normal in R^d; the only multivariate model shipped.
struct StandardNormalNd
{
  std::size_t dim;

  double pdf(std::span<const double> x) const;
  //! ||Laplacian f||_2^2 = d (d + 2) / (2^(d+2) pi^(d/2)).
  double laplacian_norm_sq() const;
  Sample sample(std::uint64_t seed, std::size_t n) const;
};

} // namespace wkde
