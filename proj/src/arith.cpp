#include "mpgen/arith.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace mpgen {

namespace {

__extension__ typedef unsigned __int128 u128;

// floor(sqrt(v)) for 128-bit v.
u128 isqrt(u128 v) {
  auto r = static_cast<u128>(std::sqrt(static_cast<long double>(v)));
  while (r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

}  // namespace

Code pair(Natural x, Natural y) {
  const u128 sum = static_cast<u128>(x) + y;
  const u128 code = sum * (sum + 1) / 2 + y;
  if (code > std::numeric_limits<Code>::max())
    throw ArithmeticOverflow("pair(" + std::to_string(x) + "," + std::to_string(y) + ") exceeds 64 bits");
  return static_cast<Code>(code);
}

std::pair<Natural, Natural> unpair(Code c) {
  // w = largest diagonal with w(w+1)/2 <= c
  const u128 w = (isqrt(static_cast<u128>(8) * c + 1) - 1) / 2;
  const u128 base = w * (w + 1) / 2;
  const auto y = static_cast<Natural>(c - base);
  const auto x = static_cast<Natural>(w - y);
  return {x, y};
}

std::optional<unsigned> r_index(Natural n) {
  if (n == 0) return std::nullopt;
  return static_cast<unsigned>(std::countr_zero(n));
}

std::string to_string(const PriorityIndex& p) { return "P(" + std::to_string(p.e) + "," + std::to_string(p.j) + ")"; }

Rational::Rational(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  const auto g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

std::string Rational::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

std::strong_ordering Rational::operator<=>(const Rational& o) const {
  return static_cast<u128>(num_) * o.den_ <=> static_cast<u128>(o.num_) * den_;
}

Rational partial_density(const std::set<Natural>& s, Natural n_bound) {
  if (n_bound == 0) throw std::invalid_argument("partial density needs N >= 1");
  const auto below = static_cast<std::uint64_t>(std::distance(s.begin(), s.lower_bound(n_bound)));
  return Rational(below, n_bound);
}

}  // namespace mpgen
