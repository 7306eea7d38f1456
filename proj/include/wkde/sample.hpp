#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wkde {

//! Observations X_1..X_n in R^d, stored row-major. For d = 1 `values` is the
//! sample itself.
struct Sample
{
  std::vector<double> values;
  std::size_t dim = 1;
  std::uint64_t seed = 0;
  std::string generator_id;

  Sample() = default;
  Sample(std::vector<double> v,
         std::size_t d = 1,
         std::uint64_t s = 0,
         std::string gen = {})
    : values(std::move(v))
    , dim(d)
    , seed(s)
    , generator_id(std::move(gen))
  {}

  std::size_t size() const noexcept { return dim == 0 ? 0 : values.size() / dim; }
  bool empty() const noexcept { return values.empty(); }

  std::span<const double> point(std::size_t i) const noexcept
  {
    return { values.data() + i * dim, dim };
  }
};

} // namespace wkde
