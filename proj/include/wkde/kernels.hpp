#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wkde {

enum class KernelId
{
  epanechnikov,
  gaussian,
  biweight,
  epanechnikov_sqrt5,
  custom
};

//! A univariate second-order kernel together with the constants that enter
//! the AMISE formulas. Immutable after construction.
class Kernel
{
public:
  //! (3/4)(1 - u^2) on [-1, 1].
  static Kernel epanechnikov();
  static Kernel gaussian();
  //! (15/16)(1 - u^2)^2 on [-1, 1].
  static Kernel biweight();
  //! Epanechnikov scaled to unit variance, supported on [-sqrt5, sqrt5].
  static Kernel epanechnikov_sqrt5();

  //! User kernel; constants are computed by composite Simpson on the support
  //! (or [-40, 40] if `support_radius` is infinite). Throws
  //! Errc::non_integrable if a quadrature fails to converge to 1e-8.
  static Kernel custom(std::string name,
                       std::function<double(double)> fn,
                       double support_radius);

  double operator()(double u) const noexcept
  {
    switch (id_) {
      case KernelId::epanechnikov:
        return std::abs(u) <= 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
      case KernelId::gaussian:
        return 0.3989422804014327 * std::exp(-0.5 * u * u);
      case KernelId::biweight: {
        if (std::abs(u) > 1.0) {
          return 0.0;
        }
        const double w = 1.0 - u * u;
        return 0.9375 * w * w;
      }
      case KernelId::epanechnikov_sqrt5:
        return std::abs(u) <= sqrt5 ? c_sqrt5 * (1.0 - u * u / 5.0) : 0.0;
      case KernelId::custom:
        return std::abs(u) > support_ ? 0.0 : (*fn_)(u);
    }
    return 0.0;
  }

  KernelId id() const noexcept { return id_; }
  const std::string& name() const noexcept { return name_; }
  //! Radius A with supp K in [-A, A]; infinity for the Gaussian.
  double support_radius() const noexcept { return support_; }
  bool compact() const noexcept { return std::isfinite(support_); }
  //! Radius beyond which K evaluates to zero in double precision.
  double effective_radius() const noexcept { return compact() ? support_ : 40.0; }
  double mu2() const noexcept { return mu2_; }
  double roughness() const noexcept { return roughness_; }
  double abs_second_moment() const noexcept { return abs_mu2_; }
  bool nonnegative() const noexcept { return nonnegative_; }

  //! (K * K)(t), the autoconvolution used by least-squares cross-validation.
  double self_convolution(double t) const;

private:
  static constexpr double sqrt5 = 2.23606797749979;
  static constexpr double c_sqrt5 = 0.75 / 2.23606797749979;

  Kernel(KernelId id,
         std::string name,
         double support,
         double mu2,
         double roughness,
         double abs_mu2,
         bool nonneg)
    : id_(id)
    , name_(std::move(name))
    , support_(support)
    , mu2_(mu2)
    , roughness_(roughness)
    , abs_mu2_(abs_mu2)
    , nonnegative_(nonneg)
  {}

  KernelId id_;
  std::string name_;
  double support_;
  double mu2_;
  double roughness_;
  double abs_mu2_;
  bool nonnegative_;
  std::shared_ptr<const std::function<double(double)>> fn_;
};

//! Looks up a registered kernel. Accepts "epanechnikov", "gaussian",
//! "biweight", "epanechnikov_sqrt5" and the alias "epanechnikov_std".
Kernel kernel_by_name(std::string_view name);
std::vector<Kernel> registered_kernels();

double kernel_eval(const Kernel& kernel, double u);
double kernel_second_moment(const Kernel& kernel);
double kernel_roughness(const Kernel& kernel);

//! |mu2|^(2/5) R(K)^(4/5), the kernel-dependent factor of the optimized
//! AMISE. Throws Errc::degenerate_kernel when mu2 = 0.
double amise_kernel_constant(const Kernel& kernel);

//! Product kernel prod_j K(u_j) in d dimensions.
double product_kernel(const Kernel& kernel, std::span<const double> u);

} // namespace wkde
