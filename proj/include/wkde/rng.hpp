#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace wkde {

//! splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

//! Hash a sequence of words into one seed.
inline std::uint64_t stream_seed(std::initializer_list<std::uint64_t> parts)
{
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (auto p : parts) {
    h = mix64(h ^ mix64(p));
  }
  return h;
}

//! Random source with platform-independent output. std::mt19937_64 is fully
//! specified by the standard; the distributions are not, so the variates are
//! derived from the raw 64-bit words here.
class Rng
{
public:
  explicit Rng(std::uint64_t seed)
    : engine_(mix64(seed))
  {}

  //! Uniform on [0, 1) with 53 random bits.
  double uniform()
  {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  //! Uniform on (0, 1).
  double uniform_open()
  {
    double u;
    do {
      u = uniform();
    } while (u == 0.0);
    return u;
  }

  //! Standard normal via the Marsaglia polar method.
  double normal()
  {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  //! Standard exponential.
  double exponential() { return -std::log(uniform_open()); }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace wkde
