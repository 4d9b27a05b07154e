#pragma once

// Effective listings at desk scale: staged partial functionals Phi_e and
// enumeration operators W_e, compiled from synthetic specs or from programs
// for a small register machine.

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mpgen/operators.hpp"

namespace mpgen {

// ---------------------------------------------------------------------------
// Micro register machine

struct Instruction {
  enum class Op { inc, decjz, halt };
  Op op = Op::halt;
  unsigned reg = 0;
  std::size_t target = 0;  // DECJZ jump address

  bool operator==(const Instruction&) const = default;
};

/// Parses "INC r", "DECJZ r addr" and "HALT".
Instruction parse_instruction(const std::string& text);
std::string to_string(const Instruction& ins);

/// Registers are unbounded naturals, all zero except register 0 which holds the
/// input. Each executed instruction costs one step; running off the end of the
/// program halts without an extra step.
class MicroMachine {
 public:
  struct Outcome {
    bool halted = false;
    std::uint64_t steps = 0;
    std::uint64_t output = 0;  // register 0 at halt
  };

  explicit MicroMachine(std::vector<Instruction> program);

  Outcome execute(Natural input, std::uint64_t step_limit) const;
  const std::vector<Instruction>& program() const { return program_; }

 private:
  std::vector<Instruction> program_;
  unsigned registers_ = 1;
};

// ---------------------------------------------------------------------------
// Functionals

/// A staged partial functional. query(n, s) is Phi(n)[s]: a bit, or nullopt
/// while divergent. Implementations must be stable in s and converge only for
/// n < s.
class Functional {
 public:
  virtual ~Functional() = default;
  virtual std::optional<Bit> query(Natural n, Stage s) const = 0;
};

struct FunctionalSpec;

enum class FillRule { zero, one, cycle, parity };
enum class ValueRule { zero, one, parity, random };

namespace spec {

struct TotalConst {
  Bit value = 0;
  bool operator==(const TotalConst&) const = default;
};

/// table[n] for n < table.size(), then the fill rule.
struct TotalFn {
  std::vector<Bit> table;
  FillRule fill = FillRule::zero;
  bool operator==(const TotalFn&) const = default;
};

/// Diverges on R_cls, constant elsewhere.
struct UndefinedOnClass {
  unsigned cls = 0;
  Bit value = 0;
  bool operator==(const UndefinedOnClass&) const = default;
};

/// Converges at s only when the inner spec does and s > slope * n + offset.
struct Delayed {
  std::shared_ptr<const FunctionalSpec> inner;
  Natural slope = 0;
  Natural offset = 0;
  bool operator==(const Delayed& o) const;
};

/// Domain is each n with a hashed coin below `density`; convergence on n is
/// held back by a hashed delay of at most max_delay stages.
struct RandomPartial {
  double density = 0.5;
  ValueRule values = ValueRule::random;
  std::optional<std::uint64_t> seed;  // falls back to the run seed mixed with the index
  Natural max_delay = 0;
  bool operator==(const RandomPartial&) const = default;
};

struct Empty {
  bool operator==(const Empty&) const = default;
};

/// Raw staged listing: n converges to value during [from, until).
/// Nothing here enforces stability; validation rejects unstable tables.
struct StagedEntry {
  Natural n = 0;
  Bit value = 0;
  Stage from = 0;
  std::optional<Stage> until;
  bool operator==(const StagedEntry&) const = default;
};
struct StagedTable {
  std::vector<StagedEntry> entries;
  bool operator==(const StagedTable&) const = default;
};

/// Phi(n)[s] converges iff the machine halts on n within s steps and n < s;
/// the value is register 0 mod 2.
struct Machine {
  std::vector<Instruction> program;
  bool operator==(const Machine&) const = default;
};

}  // namespace spec

struct FunctionalSpec {
  std::variant<spec::TotalConst, spec::TotalFn, spec::UndefinedOnClass, spec::Delayed, spec::RandomPartial, spec::Empty,
               spec::StagedTable, spec::Machine>
      kind;
  bool operator==(const FunctionalSpec&) const = default;
};

FunctionalSpec delayed(FunctionalSpec inner, Natural slope, Natural offset);

// ---------------------------------------------------------------------------
// Operator specs

enum class TargetRule { parity, ones, zeros };
enum class GuardRule { none, self, mod };

namespace spec {

struct AxiomSpec {
  std::vector<std::pair<Natural, Bit>> premise;               // points (n, v) of the oracle graph
  std::variant<Natural, std::pair<Natural, Natural>> output;  // raw k, or pair(n, b)
  std::optional<Stage> stage;                                 // defaults to the use
  bool operator==(const AxiomSpec&) const = default;
};

struct AxiomList {
  std::vector<AxiomSpec> axioms;
  bool operator==(const AxiomList&) const = default;
};

/// For n < bound, an axiom emitting pair(n, Y(n)) guarded by the oracle
/// taking value 1 at n (self) or at n mod modulus (mod). The axiom for n
/// appears at max(n + 1, use) + delay.
struct Reduction {
  TargetRule target = TargetRule::parity;
  Natural bound = 0;
  GuardRule guard = GuardRule::none;
  Natural modulus = 1;
  Stage delay = 0;
  bool operator==(const Reduction&) const = default;
};

struct EmptyOperator {
  bool operator==(const EmptyOperator&) const = default;
};

/// Machine-enumerated operator: code c is enumerated at the first stage s with
/// c < s at which the machine halts on c within s steps. c decodes as
/// pair(set code of F, k), where the set code is the bitmask of F.
struct MachineOperator {
  std::vector<Instruction> program;
  bool operator==(const MachineOperator&) const = default;
};

}  // namespace spec

struct OperatorSpec {
  std::variant<spec::AxiomList, spec::Reduction, spec::EmptyOperator, spec::MachineOperator> kind;
  bool operator==(const OperatorSpec&) const = default;
};

struct SuiteSpec {
  std::vector<FunctionalSpec> functionals;
  std::vector<OperatorSpec> operators;
  bool operator==(const SuiteSpec&) const = default;
};

Bit target_bit(TargetRule rule, Natural n);

// ---------------------------------------------------------------------------
// Suites

/// Phi_0, Phi_1, ...; indices beyond the listing are everywhere divergent.
class FunctionalSuite {
 public:
  FunctionalSuite() = default;
  explicit FunctionalSuite(std::vector<std::shared_ptr<const Functional>> entries) : entries_(std::move(entries)) {}

  std::size_t size() const { return entries_.size(); }
  std::optional<Bit> query(Natural e, Natural n, Stage s) const;
  /// dom Phi_e[s] as the sorted list of n < s that converged.
  std::vector<Natural> domain(Natural e, Stage s) const;
  /// dom Phi_e[s] intersected with R_e, ascending.
  std::vector<Natural> domain_in_class(Natural e, Stage s) const;

 private:
  std::vector<std::shared_ptr<const Functional>> entries_;
};

inline std::optional<Bit> phi_eval(const FunctionalSuite& suite, Natural e, Natural n, Stage s) {
  return suite.query(e, n, s);
}
std::set<Natural> phi_domain(const FunctionalSuite& suite, Natural e, Stage s);

/// W_0, W_1, ...; indices beyond the listing have no axioms.
class OperatorSuite {
 public:
  OperatorSuite() = default;
  explicit OperatorSuite(std::vector<EnumOperator> entries) : entries_(std::move(entries)) {}

  std::size_t size() const { return entries_.size(); }
  const EnumOperator& at(Natural e) const;

 private:
  std::vector<EnumOperator> entries_;
};

struct ProbeGrid {
  Natural indices = 0;  // 0 probes every listed functional
  Natural points = 64;
  Stage stages = 128;
  bool operator==(const ProbeGrid&) const = default;
};

struct BuildOptions {
  Stage horizon = 0;       // machine-enumerated operators are materialized up to here
  std::uint64_t seed = 0;  // default seed for random_partial specs
  ProbeGrid probe;
};

/// Names the first violated suite invariant with its witnessing (e, n, s, s').
class SuiteValidationError : public std::runtime_error {
 public:
  SuiteValidationError(std::string invariant, Natural e, Natural n, Stage s, Stage s2);

  const std::string& invariant() const { return invariant_; }
  Natural index() const { return e_; }
  Natural point() const { return n_; }
  Stage stage() const { return s_; }
  Stage later_stage() const { return s2_; }

 private:
  std::string invariant_;
  Natural e_, n_;
  Stage s_, s2_;
};

struct Suites {
  FunctionalSuite functionals;
  OperatorSuite operators;
};

std::shared_ptr<const Functional> compile_functional(const FunctionalSpec& spec, std::uint64_t seed);
EnumOperator compile_operator(const OperatorSpec& spec, Stage horizon);

/// Throws SuiteValidationError on the first stability or stage-bound violation.
void validate_functionals(const FunctionalSuite& suite, const ProbeGrid& probe);
/// Throws SuiteValidationError ("use-bound") for an axiom whose use exceeds its stage.
void validate_operators(const OperatorSuite& suite);

Suites build_suite(const SuiteSpec& spec, const BuildOptions& options);

}  // namespace mpgen
