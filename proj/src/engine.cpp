#include "mpgen/engine.hpp"

#include <algorithm>

namespace mpgen {

Natural ConstructionState::restraint(PriorityIndex p) const {
  auto it = restraints_.find(p);
  return it == restraints_.end() ? 0 : it->second;
}

TraceSummary ConstructionState::summary() const {
  TraceSummary out;
  out.horizon = stage_;
  for (unsigned side = 0; side < 2; ++side) out.members[side].assign(current_[side].begin(), current_[side].end());
  out.restraints.assign(restraints_.begin(), restraints_.end());
  return out;
}

void ConstructionState::insert(unsigned side, Natural n, PriorityIndex by) {
  current_[side].insert(n);
  live_record_[side][n] = history_[side].size();
  history_[side].push_back({n, by, stage_, std::nullopt});
}

Removal ConstructionState::remove(unsigned side, Natural n) {
  const auto idx = live_record_[side].at(n);
  auto& rec = history_[side][idx];
  rec.removed_at = stage_;
  current_[side].erase(n);
  live_record_[side].erase(n);
  return {n, side, rec.inserted_by, rec.inserted_at};
}

TraceEvent step(ConstructionState& state, const FunctionalSuite& suite, const EngineOptions& options) {
  const Stage s = state.stage_;
  TraceEvent event;
  event.stage = s;

  // Scan pairs in priority order; stronger_restraint is the max r(e',j') over
  // every pair already passed.
  Natural stronger_restraint = 0;
  for (Natural idx = 0; idx < s; ++idx) {
    const auto p = PriorityIndex::from_index(idx);
    if (p.e >= suite.size()) break;  // no functional, so no candidates and no restraint
    const auto candidates = suite.domain_in_class(p.e, s);
    const bool satisfied =
        std::any_of(candidates.begin(), candidates.end(), [&](Natural n) { return state.is_member(p.j, n); });
    if (!satisfied) {
      auto it = std::upper_bound(candidates.begin(), candidates.end(), stronger_restraint);
      if (it != candidates.end()) {
        const Natural witness = *it;
        state.insert(p.j, witness, p);

        if (options.mutation != Mutation::skip_removals) {
          const unsigned other = options.mutation == Mutation::wrong_removal_side ? p.j : 1 - p.j;
          std::vector<Natural> doomed;
          for (const auto n : state.current_[other]) {
            const auto& rec = state.history_[other][state.live_record_[other].at(n)];
            if (rec.inserted_by.index() > p.index()) doomed.push_back(n);
          }
          for (const auto n : doomed) event.removals.push_back(state.remove(other, n));
        }
        if (options.mutation != Mutation::skip_restraints) state.restraints_[p] = s;
        event.action = Action{p, witness, state.restraint(p)};
        break;
      }
    }
    stronger_restraint = std::max(stronger_restraint, state.restraint(p));
  }

  ++state.stage_;
  if (options.snapshot_every != 0 && state.stage_ % options.snapshot_every == 0) {
    Snapshot snap;
    for (unsigned side = 0; side < 2; ++side)
      snap.members[side].assign(state.current_[side].begin(), state.current_[side].end());
    event.snapshot = std::move(snap);
  }
  return event;
}

Trace run(const FunctionalSuite& suite, const RunOptions& options, const std::function<void(const TraceEvent&)>& sink) {
  ConstructionState state;
  Trace trace;
  trace.events.reserve(options.horizon);
  for (Stage s = 0; s < options.horizon; ++s) {
    auto ev = step(state, suite, options.engine);
    if (sink) sink(ev);
    trace.events.push_back(std::move(ev));
  }
  trace.summary = state.summary();
  return trace;
}

PartialGraph current_description(const ConstructionState& state, unsigned side) {
  return PartialGraph::cofinite_ones(state.members(side));
}

TraceReplay::TraceReplay(const Trace& trace) : horizon_(trace.events.size()) {
  states_.reserve(trace.events.size() + 1);
  restraints_.reserve(trace.events.size() + 1);
  states_.emplace_back();
  restraints_.emplace_back();
  for (const auto& ev : trace.events) {
    auto next = states_.back();
    auto r = restraints_.back();
    if (ev.action && ev.action->pair.j < 2) {
      next[ev.action->pair.j].insert(ev.action->witness);
      r[ev.action->pair] = ev.action->restraint;
      if (ev.action->restraint == 0) r.erase(ev.action->pair);
    }
    for (const auto& rm : ev.removals)
      if (rm.side < 2) next[rm.side].erase(rm.n);
    states_.push_back(std::move(next));
    restraints_.push_back(std::move(r));
  }
}

PartialGraph TraceReplay::description(unsigned side, Stage s) const {
  return PartialGraph::cofinite_ones(members(side, s));
}

TraceSummary TraceReplay::summary() const {
  TraceSummary out;
  out.horizon = horizon_;
  for (unsigned side = 0; side < 2; ++side)
    out.members[side].assign(states_.back()[side].begin(), states_.back()[side].end());
  out.restraints.assign(restraints_.back().begin(), restraints_.back().end());
  return out;
}

}  // namespace mpgen

namespace mpgen {

void validate_trace_schema(const Trace& trace) {
  if (trace.summary.horizon != trace.events.size())
    throw MalformedTrace("summary horizon " + std::to_string(trace.summary.horizon) + " but " +
                         std::to_string(trace.events.size()) + " stage records");
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const auto& ev = trace.events[i];
    if (ev.stage != i)
      throw MalformedTrace("stage record " + std::to_string(i) + " carries stage " + std::to_string(ev.stage));
    if (ev.action && ev.action->pair.j > 1)
      throw MalformedTrace("stage " + std::to_string(i) + ": action side is not 0 or 1");
    for (const auto& rm : ev.removals)
      if (rm.side > 1 || rm.inserted_by.j > 1)
        throw MalformedTrace("stage " + std::to_string(i) + ": removal side is not 0 or 1");
  }
  for (const auto& [p, r] : trace.summary.restraints)
    if (p.j > 1) throw MalformedTrace("summary restraint with side not 0 or 1");
}

}  // namespace mpgen
