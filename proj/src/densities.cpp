#include "wkde/densities.hpp"

#include "wkde/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>

namespace wkde {

namespace {

std::string fmt_param(double v)
{
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double sign_at(double x, Side side)
{
  if (x > 0.0) {
    return 1.0;
  }
  if (x < 0.0) {
    return -1.0;
  }
  switch (side) {
    case Side::left:
      return -1.0;
    case Side::right:
      return 1.0;
    case Side::none:
      break;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Gaussian with a curvature kink at the origin

class KinkedDensity final : public DensityModel
{
public:
  explicit KinkedDensity(double eps, std::string label)
    : eps_(eps)
    , label_(std::move(label))
  {
    certify();
  }

  std::string name() const override { return label_; }

  double pdf(double x) const override
  {
    return normal_pdf(x) * (1.0 + eps_ * psi(x));
  }

  double second(double x, Side side) const override
  {
    const double s = sign_at(x, side);
    const double x2 = x * x;
    const double d = 1.0 + x2;
    const double psi1 = 2.0 * std::abs(x) / (d * d);
    const double psi2 = s * 2.0 * (1.0 - 3.0 * x2) / (d * d * d);
    return normal_pdf(x) *
           ((x2 - 1.0) * (1.0 + eps_ * psi(x)) - 2.0 * eps_ * x * psi1 + eps_ * psi2);
  }

  std::vector<double> kink_points() const override
  {
    if (eps_ == 0.0) {
      return {};
    }
    return { 0.0 };
  }

  Interval quad_domain() const override { return { -12.0, 12.0 }; }
  double normalization() const override { return 1.0; }

  std::size_t draw(Rng& rng, std::size_t n, std::vector<double>& out) const override
  {
    // rejection from N(0,1) with envelope constant 1 + |eps|
    const double envelope = 1.0 + std::abs(eps_);
    std::size_t proposals = 0;
    std::size_t accepted = 0;
    while (accepted < n) {
      const double z = rng.normal();
      const double u = rng.uniform();
      ++proposals;
      if (u * envelope < 1.0 + eps_ * psi(z)) {
        out.push_back(z);
        ++accepted;
      }
    }
    return proposals;
  }

private:
  static double psi(double x) { return x * std::abs(x) / (1.0 + x * x); }

  double eps_;
  std::string label_;
};

// ---------------------------------------------------------------------------
// Huber-type potential: Gaussian core, exponential tails

class HuberDensity final : public DensityModel
{
public:
  explicit HuberDensity(double c)
    : c_(c)
  {
    z_ = std::sqrt(2.0 * pi) * (2.0 * normal_cdf(c) - 1.0) +
         2.0 / c * std::exp(-0.5 * c * c);
    certify();
  }

  std::string name() const override { return "huber:c=" + fmt_param(c_); }

  double pdf(double x) const override { return std::exp(-potential(x)) / z_; }

  double second(double x, Side side) const override
  {
    const double a = std::abs(x);
    bool inside = a < c_;
    if (a == c_) {
      inside = side == Side::none || ((side == Side::left) == (x > 0.0));
    }
    const double u1 = inside ? x : c_ * (x > 0.0 ? 1.0 : -1.0);
    const double u2 = inside ? 1.0 : 0.0;
    return (u1 * u1 - u2) * pdf(x);
  }

  std::vector<double> kink_points() const override { return { -c_, c_ }; }

  // exponential tails with rate c: widen past 15 until the mass left outside
  // is below ~1e-12
  Interval quad_domain() const override
  {
    const double r = std::max(15.0, (30.0 + 0.5 * c_ * c_) / c_);
    return { -r, r };
  }
  double normalization() const override { return z_; }

  std::size_t draw(Rng& rng, std::size_t n, std::vector<double>& out) const override
  {
    // composition: truncated normal core or a shifted exponential tail
    const double core_mass = std::sqrt(2.0 * pi) * (2.0 * normal_cdf(c_) - 1.0) / z_;
    const double tail_mass = std::exp(-0.5 * c_ * c_) / (c_ * z_);
    std::size_t proposals = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = rng.uniform();
      if (u < core_mass) {
        double z;
        do {
          z = rng.normal();
          ++proposals;
        } while (std::abs(z) > c_);
        out.push_back(z);
      } else {
        const double t = c_ + rng.exponential() / c_;
        ++proposals;
        out.push_back(u < core_mass + tail_mass ? -t : t);
      }
    }
    return proposals;
  }

private:
  double potential(double x) const
  {
    const double a = std::abs(x);
    return a <= c_ ? 0.5 * x * x : c_ * a - 0.5 * c_ * c_;
  }

  double c_;
  double z_;
};

// ---------------------------------------------------------------------------
// Threshold regime: curvature of the potential jumps by lambda at a

class ThresholdDensity final : public DensityModel
{
public:
  ThresholdDensity(double a, double lambda)
    : a_(a)
    , lambda_(lambda)
  {
    const double k = 1.0 + lambda;
    z_ = std::sqrt(2.0 * pi) * normal_cdf(a) +
         std::exp(-0.5 * a * a * lambda / k) * std::sqrt(2.0 * pi / k) *
           normal_cdf(-a / std::sqrt(k));
    certify();
  }

  std::string name() const override
  {
    return "threshold:a=" + fmt_param(a_) + ",lambda=" + fmt_param(lambda_);
  }

  double pdf(double x) const override
  {
    const double t = std::max(x - a_, 0.0);
    return std::exp(-0.5 * x * x - 0.5 * lambda_ * t * t) / z_;
  }

  double second(double x, Side side) const override
  {
    const bool above = x > a_ || (x == a_ && side == Side::right);
    const double u1 = x + (above ? lambda_ * (x - a_) : 0.0);
    const double u2 = above ? 1.0 + lambda_ : 1.0;
    return (u1 * u1 - u2) * pdf(x);
  }

  std::vector<double> kink_points() const override { return { a_ }; }
  Interval quad_domain() const override { return { -15.0, 15.0 }; }
  double normalization() const override { return z_; }

  std::size_t draw(Rng& rng, std::size_t n, std::vector<double>& out) const override
  {
    // rejection from N(0,1); exp(-lambda (x - a)_+^2 / 2) <= 1
    std::size_t proposals = 0;
    std::size_t accepted = 0;
    while (accepted < n) {
      const double z = rng.normal();
      const double u = rng.uniform();
      ++proposals;
      const double t = std::max(z - a_, 0.0);
      if (u < std::exp(-0.5 * lambda_ * t * t)) {
        out.push_back(z);
        ++accepted;
      }
    }
    return proposals;
  }

private:
  double a_;
  double lambda_;
  double z_;
};

// ---------------------------------------------------------------------------
// Compactly supported variant: mollifier plus a localized x|x| perturbation

constexpr double mollifier_radius = 3.0;

// unnormalized mollifier exp(-1 / (1 - (x/3)^2)) and its first two derivatives
struct MollifierValue
{
  double v, d1, d2;
};

MollifierValue mollifier(double x)
{
  const double y = x / mollifier_radius;
  const double w = 1.0 - y * y;
  if (w <= 0.0) {
    return { 0.0, 0.0, 0.0 };
  }
  const double v = std::exp(-1.0 / w);
  if (v == 0.0) {
    return { 0.0, 0.0, 0.0 };
  }
  const double w2 = w * w;
  const double d1 = v * (-2.0 * y / 3.0) / w2;
  const double d2 =
    v * (4.0 * y * y / (9.0 * w2 * w2) - 2.0 / (9.0 * w2) - 8.0 * y * y / (9.0 * w2 * w));
  return { v, d1, d2 };
}

// g(t) = exp(-1/t) for t > 0, the standard smooth transition seed
struct Seed
{
  double v, d1, d2;
};

Seed transition_seed(double t)
{
  if (t <= 0.0) {
    return { 0.0, 0.0, 0.0 };
  }
  const double g = std::exp(-1.0 / t);
  if (g == 0.0) {
    return { 0.0, 0.0, 0.0 };
  }
  const double t2 = t * t;
  return { g, g / t2, g * (1.0 - 2.0 * t) / (t2 * t2) };
}

// s(t) = g(t) / (g(t) + g(1 - t)): 0 for t <= 0, 1 for t >= 1
Seed smooth_step(double t)
{
  if (t <= 0.0) {
    return { 0.0, 0.0, 0.0 };
  }
  if (t >= 1.0) {
    return { 1.0, 0.0, 0.0 };
  }
  const Seed a = transition_seed(t);
  const Seed r = transition_seed(1.0 - t);
  const double b = r.v, b1 = -r.d1, b2 = r.d2;
  const double sum = a.v + b;
  const double num = a.d1 * b - a.v * b1;
  const double num1 = a.d2 * b - a.v * b2;
  const double s1 = num / (sum * sum);
  const double s2 = (num1 * sum - 2.0 * num * (a.d1 + b1)) / (sum * sum * sum);
  return { a.v / sum, s1, s2 };
}

// rho = 1 on [-1/2, 1/2], 0 outside [-1, 1]
Seed bump(double x)
{
  const double a = std::abs(x);
  const Seed s = smooth_step(2.0 * (1.0 - a));
  const double sg = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
  return { s.v, -2.0 * sg * s.d1, 4.0 * s.d2 };
}

double mollifier_mass()
{
  return simpson(
    [](double x) { return mollifier(x).v; }, -mollifier_radius, mollifier_radius, 20000);
}

double perturbation(double x)
{
  return x * std::abs(x) * bump(x).v;
}

class CompactKinkedDensity final : public DensityModel
{
public:
  CompactKinkedDensity(double eps, double mass, std::string label)
    : eps_(eps)
    , mass_(mass)
    , label_(std::move(label))
  {
    double peak = 0.0;
    for (double x : linspace(-mollifier_radius, mollifier_radius, 6001)) {
      peak = std::max(peak, pdf(x));
    }
    envelope_ = 1.05 * peak;
    certify();
  }

  std::string name() const override { return label_; }

  double pdf(double x) const override
  {
    if (std::abs(x) >= mollifier_radius) {
      return 0.0;
    }
    return std::max(0.0, mollifier(x).v / mass_ + eps_ * perturbation(x));
  }

  double second(double x, Side side) const override
  {
    const double s = sign_at(x, side);
    const Seed r = bump(x);
    const double a = std::abs(x);
    const double q2 = 2.0 * s * r.v + 4.0 * a * r.d1 + x * a * r.d2;
    return mollifier(x).d2 / mass_ + eps_ * q2;
  }

  std::vector<double> kink_points() const override
  {
    if (eps_ == 0.0) {
      return {};
    }
    return { 0.0 };
  }

  Interval quad_domain() const override
  {
    return { -mollifier_radius, mollifier_radius };
  }
  double normalization() const override { return mass_; }

  std::size_t draw(Rng& rng, std::size_t n, std::vector<double>& out) const override
  {
    std::size_t proposals = 0;
    std::size_t accepted = 0;
    while (accepted < n) {
      const double x = mollifier_radius * (2.0 * rng.uniform() - 1.0);
      const double u = rng.uniform();
      ++proposals;
      if (u * envelope_ < pdf(x)) {
        out.push_back(x);
        ++accepted;
      }
    }
    return proposals;
  }

private:
  double eps_;
  double mass_;
  double envelope_ = 0.0;
  std::string label_;
};

double parse_number(std::string_view text, std::string_view what)
{
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(Errc::invalid_parameter,
                "cannot parse " + std::string(what) + " value '" + std::string(text) + "'");
  }
  return v;
}

} // namespace

// ---------------------------------------------------------------------------

bool DensityModel::is_kink(double x) const
{
  const auto k = kink_points();
  return std::find(k.begin(), k.end(), x) != k.end();
}

void DensityModel::certify()
{
  const auto dom = quad_domain();
  double sup = 0.0;
  for (double x : linspace(dom.lo, dom.hi, 20001)) {
    sup = std::max(sup, std::abs(second(x)));
  }
  for (double k : kink_points()) {
    sup = std::max(sup, std::abs(second(k, Side::left)));
    sup = std::max(sup, std::abs(second(k, Side::right)));
  }
  lipschitz_ = 1.05 * sup;
}

DensityPtr make_kinked(double eps)
{
  if (!(std::abs(eps) < 1.0)) {
    throw Error(Errc::invalid_parameter, "kinked density requires |eps| < 1");
  }
  return std::make_shared<KinkedDensity>(eps, "kinked:eps=" + fmt_param(eps));
}

DensityPtr make_huber(double c)
{
  if (!(c > 0.0)) {
    throw Error(Errc::invalid_parameter, "huber density requires c > 0");
  }
  return std::make_shared<HuberDensity>(c);
}

DensityPtr make_threshold(double a, double lambda)
{
  if (!(lambda > 0.0) || !std::isfinite(a)) {
    throw Error(Errc::invalid_parameter, "threshold density requires lambda > 0");
  }
  return std::make_shared<ThresholdDensity>(a, lambda);
}

double compact_kinked_eps0()
{
  static const double eps0 = [] {
    const double mass = mollifier_mass();
    double best = std::numeric_limits<double>::infinity();
    for (double x : linspace(-1.0, 1.0, 20001)) {
      const double q = std::abs(perturbation(x));
      if (q > 0.0) {
        best = std::min(best, mollifier(x).v / mass / q);
      }
    }
    return best;
  }();
  return eps0;
}

DensityPtr make_compact_kinked(double eps)
{
  if (!(std::abs(eps) < compact_kinked_eps0())) {
    throw Error(Errc::invalid_parameter,
                "compact_kinked density requires |eps| < eps0 = " +
                  fmt_param(compact_kinked_eps0()));
  }
  return std::make_shared<CompactKinkedDensity>(
    eps, mollifier_mass(), "compact_kinked:eps=" + fmt_param(eps));
}

DensityPtr make_density(std::string_view spec)
{
  const auto colon = spec.find(':');
  const std::string family(spec.substr(0, colon));
  std::map<std::string, std::string, std::less<>> params;
  if (colon != std::string_view::npos) {
    std::string_view rest = spec.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = rest.substr(0, comma);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw Error(Errc::invalid_parameter,
                    "malformed density parameter '" + std::string(item) + "'");
      }
      params[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  }
  auto take = [&](const std::string& key, const char* fallback) -> std::string {
    auto it = params.find(key);
    if (it == params.end()) {
      if (fallback == nullptr) {
        throw Error(Errc::invalid_parameter,
                    "density '" + family + "' needs parameter '" + key + "'");
      }
      return fallback;
    }
    std::string v = it->second;
    params.erase(it);
    return v;
  };

  DensityPtr model;
  if (family == "kinked") {
    model = make_kinked(parse_number(take("eps", "0.5"), "eps"));
  } else if (family == "normal") {
    model = std::make_shared<KinkedDensity>(0.0, "normal");
  } else if (family == "huber") {
    model = make_huber(parse_number(take("c", "1"), "c"));
  } else if (family == "threshold") {
    const double a = parse_number(take("a", "0.5"), "a");
    model = make_threshold(a, parse_number(take("lambda", "4"), "lambda"));
  } else if (family == "compact_kinked") {
    const std::string e = take("eps", "auto");
    model = make_compact_kinked(e == "auto" ? 0.5 * compact_kinked_eps0()
                                            : parse_number(e, "eps"));
  } else {
    throw Error(Errc::unknown_name, "unknown density family '" + family + "'");
  }
  if (!params.empty()) {
    throw Error(Errc::invalid_parameter,
                "unknown parameter '" + params.begin()->first + "' for density '" +
                  family + "'");
  }
  return model;
}

double density_pdf(const DensityModel& model, double x)
{
  return model.pdf(x);
}

double density_second_ae(const DensityModel& model, double x)
{
  if (model.is_kink(x)) {
    throw Error(Errc::at_kink_point,
                "second derivative undefined at kink x = " + fmt_param(x));
  }
  return model.second(x);
}

double weak_curvature(const DensityModel& model, std::size_t points)
{
  const auto dom = model.quad_domain();
  std::vector<double> edges{ dom.lo };
  for (double k : model.kink_points()) {
    if (k > dom.lo && k < dom.hi) {
      edges.push_back(k);
    }
  }
  std::sort(edges.begin() + 1, edges.end());
  edges.push_back(dom.hi);

  const double total_intervals = static_cast<double>(std::max<std::size_t>(points, 2) - 1);
  CompensatedSum acc;
  std::vector<double> sq;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p];
    const double b = edges[p + 1];
    const auto m = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(total_intervals * (b - a) / (dom.hi - dom.lo))));
    const double step = (b - a) / static_cast<double>(m);
    sq.assign(m + 1, 0.0);
    for (std::size_t i = 0; i <= m; ++i) {
      const double x = i == m ? b : a + step * static_cast<double>(i);
      const Side side = i == 0 ? Side::right : (i == m ? Side::left : Side::none);
      const double v = model.second(x, side);
      sq[i] = v * v;
    }
    acc += trapezoid(sq, step);
  }
  return acc.value();
}

Sample density_sample(const DensityModel& model, std::uint64_t seed, std::size_t n)
{
  Rng rng(seed);
  std::vector<double> out;
  out.reserve(n);
  model.draw(rng, n, out);
  return Sample(std::move(out), 1, seed, model.name());
}

CurvatureInterval generalized_second_interval(const DensityModel& model, double x)
{
  if (model.is_kink(x)) {
    const double l = model.second(x, Side::left);
    const double r = model.second(x, Side::right);
    return { std::min(l, r), std::max(l, r) };
  }
  const double v = model.second(x);
  return { v, v };
}

double local_curvature_bound(const DensityModel& model,
                             double x,
                             double h,
                             double support_radius)
{
  const double lo = x - support_radius * h;
  const double hi = x + support_radius * h;
  double sup = 0.0;
  for (double y : linspace(lo, hi, 2001)) {
    sup = std::max(sup, std::abs(model.second(y)));
  }
  for (double k : model.kink_points()) {
    if (k >= lo && k <= hi) {
      sup = std::max(sup, std::abs(model.second(k, Side::left)));
      sup = std::max(sup, std::abs(model.second(k, Side::right)));
    }
  }
  return sup;
}

// ---------------------------------------------------------------------------

double StandardNormalNd::pdf(std::span<const double> x) const
{
  double r2 = 0.0;
  for (double v : x) {
    r2 += v * v;
  }
  return std::exp(-0.5 * r2) * std::pow(2.0 * pi, -0.5 * static_cast<double>(dim));
}

double StandardNormalNd::laplacian_norm_sq() const
{
  const double d = static_cast<double>(dim);
  return d * (d + 2.0) / (std::pow(2.0, d + 2.0) * std::pow(pi, 0.5 * d));
}

Sample StandardNormalNd::sample(std::uint64_t seed, std::size_t n) const
{
  Rng rng(seed);
  std::vector<double> v(n * dim);
  for (double& x : v) {
    x = rng.normal();
  }
  return Sample(std::move(v), dim, seed, "normal:d=" + std::to_string(dim));
}

} // namespace wkde
