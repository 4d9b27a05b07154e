#pragma once

// Staged enumeration operators W[s] and their evaluation on partial graphs.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mpgen/graphs.hpp"

namespace mpgen {

/// An axiom (F, k): k is enumerated from any oracle containing every code of F.
struct Axiom {
  std::vector<Code> premise;  // sorted, no duplicates
  Natural output = 0;

  Axiom() = default;
  Axiom(std::vector<Code> premise_codes, Natural k);

  /// Least n with F contained in the codes below n.
  Natural use() const { return premise.empty() ? 0 : premise.back() + 1; }

  bool operator==(const Axiom&) const = default;
  auto operator<=>(const Axiom&) const = default;
};

struct StagedAxiom {
  Axiom axiom;
  Stage appears_at = 0;

  bool operator==(const StagedAxiom&) const = default;
};

/// A c.e. set of axioms observed through its stage approximations.
/// Axiom sets are monotone in the stage by construction: W[s] is every axiom
/// that appeared at a stage <= s.
class EnumOperator {
 public:
  EnumOperator() = default;
  /// Duplicated axioms keep their earliest stage of appearance.
  explicit EnumOperator(std::vector<StagedAxiom> axioms);

  /// All axioms, ordered by stage of appearance.
  const std::vector<StagedAxiom>& axioms() const { return axioms_; }
  std::span<const StagedAxiom> axioms_at(Stage s) const;
  bool empty() const { return axioms_.empty(); }

  /// First axiom whose use exceeds its stage of appearance, if any.
  std::optional<StagedAxiom> use_bound_violation() const;

  bool operator==(const EnumOperator&) const = default;

 private:
  std::vector<StagedAxiom> axioms_;
};

/// W^g[s].
std::set<Natural> eval(const EnumOperator& w, const PartialGraph& g, Stage s);

/// The use of k in W^g[s], or nullopt when k is not enumerated.
std::optional<Natural> use_of(const EnumOperator& w, const PartialGraph& g, Stage s, Natural k);

/// Every enumerated k with its use.
std::map<Natural, Natural> enumerate_outputs(const EnumOperator& w, const PartialGraph& g, Stage s);

}  // namespace mpgen
