#pragma once

// Cantor pairing and the R_e partition of the naturals. Densities are exact rationals.

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace mpgen {

using Natural = std::uint64_t;
using Stage = std::uint64_t;
/// A natural number standing for an ordered pair under the Cantor coding.
using Code = std::uint64_t;
/// A value of a {0,1}-valued partial function.
using Bit = std::uint8_t;

class ArithmeticOverflow : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

/// Cantor pairing: (x+y)(x+y+1)/2 + y. Throws ArithmeticOverflow instead of wrapping.
Code pair(Natural x, Natural y);

/// Inverse of pair().
std::pair<Natural, Natural> unpair(Code c);

/// The unique e with n in R_e (the 2-adic valuation of n); nullopt for n = 0.
std::optional<unsigned> r_index(Natural n);

inline bool in_class(Natural n, unsigned e) {
  auto v = r_index(n);
  return v && *v == e;
}

/// A requirement P_{e,j}. Priority order is the order of index() = 2e + j.
struct PriorityIndex {
  Natural e = 0;
  unsigned j = 0;

  constexpr Natural index() const { return 2 * e + j; }
  static constexpr PriorityIndex from_index(Natural i) { return {i / 2, static_cast<unsigned>(i % 2)}; }

  constexpr bool operator==(const PriorityIndex&) const = default;
  constexpr auto operator<=>(const PriorityIndex& o) const { return index() <=> o.index(); }
};

std::string to_string(const PriorityIndex& p);

/// Nonnegative rational in lowest terms.
class Rational {
 public:
  Rational() = default;
  Rational(std::uint64_t num, std::uint64_t den);

  std::uint64_t num() const { return num_; }
  std::uint64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  bool operator==(const Rational&) const = default;
  std::strong_ordering operator<=>(const Rational& o) const;

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

/// |{m in S : m < N}| / N. N = 0 is rejected with std::invalid_argument.
Rational partial_density(const std::set<Natural>& s, Natural n_bound);

template <class Pred>
Rational partial_density_if(Pred&& member, Natural n_bound) {
  if (n_bound == 0) throw std::invalid_argument("partial density needs N >= 1");
  std::uint64_t count = 0;
  for (Natural m = 0; m < n_bound; ++m)
    if (member(m)) ++count;
  return Rational(count, n_bound);
}

}  // namespace mpgen
