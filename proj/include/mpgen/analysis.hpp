#pragma once

// What can be read off a finished trace: the sets X_j, the table Psi and the
// finite-horizon checkers. Also a brute-force reference for the stage rule.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpgen/engine.hpp"

namespace mpgen {

enum class Verdict { pass, fail, inconclusive };
std::string to_string(Verdict v);

/// Where a check failed. Fields that do not apply stay empty.
struct Counterexample {
  std::optional<Stage> stage;
  std::optional<Stage> later_stage;
  std::optional<Natural> element;
  std::optional<PriorityIndex> pair;
  std::string note;

  bool operator==(const Counterexample&) const = default;
};

struct CheckResult {
  std::string name;
  Verdict verdict = Verdict::pass;
  std::string detail;
  std::optional<Counterexample> counterexample;

  bool operator==(const CheckResult&) const = default;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool failed() const;
  const CheckResult* find(const std::string& name) const;
  void append(VerificationReport other);
  /// Orders checks by name so reports from concurrent checkers compare equal.
  void sort();
};

// ---------------------------------------------------------------------------
// X_j

struct DiagonalSet {
  unsigned side = 0;
  Stage horizon = 0;
  Natural bound = 0;
  std::vector<Bit> bits;
  /// n in A_j[T] with Phi_{r_index(n)}(n)[T] converged: the points where X_j was made to differ.
  std::vector<Natural> diagonal_witnesses;
  /// Every n < bound with Phi_{r_index(n)}(n)[T] converged and different from X_j(n).
  std::vector<Natural> disagreements;
};

DiagonalSet derive_x(const Trace& trace, const FunctionalSuite& suite, unsigned side, Natural bound);

// ---------------------------------------------------------------------------
// Psi

struct PsiEntry {
  Bit value = 0;
  Stage found_at = 0;
  bool operator==(const PsiEntry&) const = default;
};

struct PsiTable {
  Natural e0 = 0;
  Natural e1 = 0;
  Stage horizon = 0;
  std::map<Natural, PsiEntry> entries;
};

/// Searches s in [0, T] for pair(n, k), k <= 1, in W_{e0}^{f_{0,s}}[s] and
/// W_{e1}^{f_{1,s}}[s]; least s wins, then least k.
PsiTable synthesize_psi(const Trace& trace, const OperatorSuite& ops, Natural e0, Natural e1);

// ---------------------------------------------------------------------------
// Checkers

/// For every stage s <= T and every x in W_{e0}^{f_{0,s}}[s] and W_{e1}^{f_{1,s}}[s]:
/// some side keeps x enumerated at every stage from the protection stage to T.
/// The protection stage is one past the first stage >= s at which the
/// strongest pair acting at or after s acts (s itself when nothing acts).
CheckResult check_property3(const Trace& trace, const OperatorSuite& ops, Natural e0, Natural e1);

/// Finite form of: dom Phi_e infinite on R_e implies A_j meets it. Inconclusive
/// when the hypothesis cannot be established at this horizon.
CheckResult check_property2(const Trace& trace, const FunctionalSuite& suite, Natural e, unsigned j);

/// Every engine invariant, evaluated on the trace alone. With a suite, the
/// witness check also confirms the witness and condition (a) against Phi.
/// Throws MalformedTrace for schema violations.
VerificationReport check_structural(const Trace& trace, const FunctionalSuite* suite = nullptr);

/// Direct transcription of the stage rule that recomputes every set from the
/// insertion log at every stage. Quadratic or worse; meant for T <= 10'000.
Trace reference_run(const FunctionalSuite& suite, Stage horizon, Stage snapshot_every = 0);

struct EndToEndResult {
  CheckResult check;
  PsiTable psi;
  std::vector<Natural> disagreements;
  Rational domain_density;
};

/// Psi against the target Y on [0, bound): zero disagreements and domain
/// density at least `threshold`.
EndToEndResult end_to_end_check(const Trace& trace, const OperatorSuite& ops, Natural e0, Natural e1, TargetRule target,
                                Natural bound, Rational threshold);

}  // namespace mpgen
