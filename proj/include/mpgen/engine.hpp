#pragma once

// The finite-injury construction of A_0 and A_1, one stage at a time.
//
// Stage convention: a ConstructionState at stage s holds A_j[s], the sets as
// they stand when stage s begins. step() applies the stage-s rule and leaves
// the state at stage s + 1, so a run with horizon T executes stages 0..T-1 and
// ends holding A_j[T].

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "mpgen/graphs.hpp"
#include "mpgen/suites.hpp"

namespace mpgen {

/// One insertion of n into a side, with its eventual removal.
struct Membership {
  Natural n = 0;
  PriorityIndex inserted_by;
  Stage inserted_at = 0;
  std::optional<Stage> removed_at;

  bool operator==(const Membership&) const = default;
};

struct Action {
  PriorityIndex pair;
  Natural witness = 0;
  Natural restraint = 0;  // new value of r(e,j)

  bool operator==(const Action&) const = default;
};

struct Removal {
  Natural n = 0;
  unsigned side = 0;
  PriorityIndex inserted_by;
  Stage inserted_at = 0;

  bool operator==(const Removal&) const = default;
};

struct Snapshot {
  std::array<std::vector<Natural>, 2> members;
  bool operator==(const Snapshot&) const = default;
};

struct TraceEvent {
  Stage stage = 0;
  std::optional<Action> action;
  std::vector<Removal> removals;
  std::optional<Snapshot> snapshot;  // membership after this stage

  bool operator==(const TraceEvent&) const = default;
};

struct TraceSummary {
  Stage horizon = 0;
  std::array<std::vector<Natural>, 2> members;                // A_0[T], A_1[T]
  std::vector<std::pair<PriorityIndex, Natural>> restraints;  // nonzero r(e,j), by priority

  bool operator==(const TraceSummary&) const = default;
};

struct Trace {
  std::vector<TraceEvent> events;  // one per stage 0..T-1
  TraceSummary summary;

  Stage horizon() const { return summary.horizon; }
  bool operator==(const Trace&) const = default;
};

/// Deliberately broken variants of the stage rule, for mutation testing.
enum class Mutation { none, skip_removals, skip_restraints, wrong_removal_side };

struct EngineOptions {
  Stage snapshot_every = 0;  // 0 = never
  Mutation mutation = Mutation::none;
};

/// A trace that does not have the shape run() produces: stages out of
/// sequence, a side outside {0,1}, or a summary horizon that disagrees with
/// the event count.
class MalformedTrace : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void validate_trace_schema(const Trace& trace);

class ConstructionState {
 public:
  Stage stage() const { return stage_; }

  /// Current members of A_side.
  const std::set<Natural>& members(unsigned side) const { return current_[side]; }
  bool is_member(unsigned side, Natural n) const { return current_[side].contains(n); }
  /// Every insertion ever made into A_side, in order.
  const std::vector<Membership>& history(unsigned side) const { return history_[side]; }

  Natural restraint(PriorityIndex p) const;
  const std::map<PriorityIndex, Natural>& restraints() const { return restraints_; }

  TraceSummary summary() const;

 private:
  friend TraceEvent step(ConstructionState&, const FunctionalSuite&, const EngineOptions&);

  void insert(unsigned side, Natural n, PriorityIndex by);
  Removal remove(unsigned side, Natural n);

  Stage stage_ = 0;
  std::array<std::set<Natural>, 2> current_;
  std::array<std::vector<Membership>, 2> history_;
  std::array<std::map<Natural, std::size_t>, 2> live_record_;  // n -> index into history_
  std::map<PriorityIndex, Natural> restraints_;
};

/// Applies the stage rule at state.stage() and advances the state by one stage.
TraceEvent step(ConstructionState& state, const FunctionalSuite& suite, const EngineOptions& options = {});

struct RunOptions {
  Stage horizon = 0;
  EngineOptions engine;
};

/// Runs stages 0..horizon-1. The sink, when set, receives each event as it is produced.
Trace run(const FunctionalSuite& suite, const RunOptions& options,
          const std::function<void(const TraceEvent&)>& sink = {});

/// f_{j,s}: value 1 off A_j[s], undefined on it.
PartialGraph current_description(const ConstructionState& state, unsigned side);

/// A_0[s], A_1[s] for every s in [0, T], rebuilt from the events alone.
/// Removals of non-members are ignored here; the structural checker reports them.
class TraceReplay {
 public:
  explicit TraceReplay(const Trace& trace);

  Stage horizon() const { return horizon_; }
  const std::set<Natural>& members(unsigned side, Stage s) const { return states_.at(s)[side]; }
  PartialGraph description(unsigned side, Stage s) const;
  /// r(e,j) in force at the start of stage s.
  const std::map<PriorityIndex, Natural>& restraints(Stage s) const { return restraints_.at(s); }
  TraceSummary summary() const;

 private:
  Stage horizon_ = 0;
  std::vector<std::array<std::set<Natural>, 2>> states_;
  std::vector<std::map<PriorityIndex, Natural>> restraints_;
};

}  // namespace mpgen
