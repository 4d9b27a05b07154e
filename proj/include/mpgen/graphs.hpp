#pragma once

// Graphs of {0,1}-valued partial functions. A graph is queried through the
// codes pair(n, v) so that enumeration operators can consume it directly.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <variant>
#include <vector>

#include "mpgen/arith.hpp"

namespace mpgen {

class PartialGraph {
 public:
  /// A finite function; keys are kept sorted.
  struct Explicit {
    std::map<Natural, Bit> points;
    bool operator==(const Explicit&) const = default;
  };
  /// Value 1 everywhere except on the finite exception set, where undefined.
  struct CofiniteOnes {
    std::set<Natural> exceptions;
    bool operator==(const CofiniteOnes&) const = default;
  };

  PartialGraph() : shape_(Explicit{}) {}

  static PartialGraph explicit_map(std::map<Natural, Bit> points);
  static PartialGraph cofinite_ones(std::set<Natural> exceptions);

  std::optional<Bit> at(Natural n) const;
  bool defined(Natural n) const { return at(n).has_value(); }

  /// True iff c = pair(n, v) with this function defined at n and equal to v.
  bool contains(Code c) const;

  bool is_cofinite() const { return std::holds_alternative<CofiniteOnes>(shape_); }
  const std::variant<Explicit, CofiniteOnes>& shape() const { return shape_; }

  bool operator==(const PartialGraph&) const = default;

 private:
  explicit PartialGraph(std::variant<Explicit, CofiniteOnes> s) : shape_(std::move(s)) {}
  std::variant<Explicit, CofiniteOnes> shape_;
};

/// graph(f) is a subset of graph(g).
bool extends(const PartialGraph& f, const PartialGraph& g);

/// partial_density(dom f, N).
Rational domain_density(const PartialGraph& f, Natural n_bound);

struct DescriptionReport {
  Natural checked_bound = 0;
  std::vector<Natural> error_points;  // f(n) defined and f(n) != X(n), n < checked_bound
  Rational domain_partial_density;

  bool clean() const { return error_points.empty(); }
};

/// Compares f against the bit sequence x on [0, N). Requires x.size() >= N.
DescriptionReport check_description(const PartialGraph& f, std::span<const Bit> x, Natural n_bound);

}  // namespace mpgen
