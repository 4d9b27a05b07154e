#include "mpgen/analysis.hpp"

#include <algorithm>
#include <sstream>

namespace mpgen {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass:
      return "pass";
    case Verdict::fail:
      return "fail";
    case Verdict::inconclusive:
      break;
  }
  return "inconclusive";
}

bool VerificationReport::failed() const {
  return std::any_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.verdict == Verdict::fail; });
}

const CheckResult* VerificationReport::find(const std::string& name) const {
  auto it = std::find_if(checks.begin(), checks.end(), [&](const CheckResult& c) { return c.name == name; });
  return it == checks.end() ? nullptr : &*it;
}

void VerificationReport::append(VerificationReport other) {
  for (auto& c : other.checks) checks.push_back(std::move(c));
}

void VerificationReport::sort() {
  std::stable_sort(checks.begin(), checks.end(),
                   [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
}

namespace {

CheckResult passed(std::string name, std::string detail = {}) {
  return {std::move(name), Verdict::pass, std::move(detail), std::nullopt};
}

CheckResult failed(std::string name, std::string detail, Counterexample cex) {
  return {std::move(name), Verdict::fail, std::move(detail), std::move(cex)};
}

std::vector<std::set<Natural>> enumerations(const TraceReplay& replay, const EnumOperator& w, unsigned side) {
  std::vector<std::set<Natural>> out;
  out.reserve(replay.horizon() + 1);
  for (Stage t = 0; t <= replay.horizon(); ++t) out.push_back(eval(w, replay.description(side, t), t));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

DiagonalSet derive_x(const Trace& trace, const FunctionalSuite& suite, unsigned side, Natural bound) {
  const TraceReplay replay(trace);
  const Stage t_end = replay.horizon();
  const auto& members = replay.members(side, t_end);

  DiagonalSet x;
  x.side = side;
  x.horizon = t_end;
  x.bound = bound;
  x.bits.assign(bound, 1);
  for (Natural n = 0; n < bound; ++n) {
    const auto e = r_index(n);
    if (!e) continue;
    const auto phi = suite.query(*e, n, t_end);
    if (!phi) continue;
    if (members.contains(n)) {
      x.bits[n] = static_cast<Bit>(1 - *phi);
      x.diagonal_witnesses.push_back(n);
    }
    if (*phi != x.bits[n]) x.disagreements.push_back(n);
  }
  return x;
}

PsiTable synthesize_psi(const Trace& trace, const OperatorSuite& ops, Natural e0, Natural e1) {
  const TraceReplay replay(trace);
  PsiTable table;
  table.e0 = e0;
  table.e1 = e1;
  table.horizon = replay.horizon();
  for (Stage s = 0; s <= replay.horizon(); ++s) {
    const auto left = eval(ops.at(e0), replay.description(0, s), s);
    const auto right = eval(ops.at(e1), replay.description(1, s), s);
    // codes ascend in k for fixed n, so the first hit for n has the least k
    for (const auto c : left) {
      if (!right.contains(c)) continue;
      const auto [n, k] = unpair(c);
      if (k > 1) continue;
      table.entries.emplace(n, PsiEntry{static_cast<Bit>(k), s});
    }
  }
  return table;
}

// ---------------------------------------------------------------------------

CheckResult check_property3(const Trace& trace, const OperatorSuite& ops, Natural e0, Natural e1) {
  const std::string name = "property3[" + std::to_string(e0) + "," + std::to_string(e1) + "]";
  const TraceReplay replay(trace);
  const Stage t_end = replay.horizon();
  const std::array<std::vector<std::set<Natural>>, 2> enumerated{enumerations(replay, ops.at(e0), 0),
                                                                 enumerations(replay, ops.at(e1), 1)};

  // strongest[s]: the least pair acting at a stage >= s, with its first such stage.
  std::vector<std::optional<std::pair<PriorityIndex, Stage>>> strongest(t_end + 1);
  for (Stage s = t_end; s-- > 0;) {
    strongest[s] = strongest[s + 1];
    const auto& act = trace.events[s].action;
    if (act && (!strongest[s] || act->pair.index() <= strongest[s]->first.index())) strongest[s] = {act->pair, s};
  }

  // Maximal runs [begin, end) of stages at which each side enumerates x.
  std::array<std::map<Natural, std::vector<std::pair<Stage, Stage>>>, 2> runs;
  for (unsigned side = 0; side < 2; ++side)
    for (Stage t = 0; t <= t_end; ++t)
      for (const auto x : enumerated[side][t]) {
        auto& v = runs[side][x];
        if (!v.empty() && v.back().second == t)
          v.back().second = t + 1;
        else
          v.emplace_back(t, t + 1);
      }

  // first stage >= from at which side drops x, or nullopt if it never does
  auto first_loss = [&](unsigned side, Natural x, Stage from) -> std::optional<Stage> {
    const auto it = runs[side].find(x);
    if (it == runs[side].end()) return from;
    const auto& v = it->second;
    auto run = std::upper_bound(v.begin(), v.end(), from, [](Stage f, const auto& r) { return f < r.first; });
    if (run == v.begin() || std::prev(run)->second <= from) return from;
    const Stage end = std::prev(run)->second;
    if (end > t_end) return std::nullopt;
    return end;
  };

  std::uint64_t checked = 0;
  for (Stage s = 0; s <= t_end; ++s) {
    for (const auto x : enumerated[0][s]) {
      if (!enumerated[1][s].contains(x)) continue;
      ++checked;
      const Stage protect_from = strongest[s] ? strongest[s]->second + 1 : s;
      const auto loss0 = first_loss(0, x, protect_from);
      const auto loss1 = first_loss(1, x, protect_from);
      if (!loss0 || !loss1) continue;

      Counterexample cex;
      cex.stage = s;
      cex.element = x;
      const unsigned expected = strongest[s] ? 1 - strongest[s]->first.j : 0;
      cex.later_stage = expected == 0 ? *loss0 : *loss1;
      if (strongest[s]) cex.pair = strongest[s]->first;
      std::ostringstream msg;
      msg << "x=" << x << " enumerated on both sides at stage " << s << ", lost on side 0 at " << *loss0
          << " and on side 1 at " << *loss1;
      if (strongest[s])
        msg << " (protection by " << to_string(strongest[s]->first) << " acting at " << strongest[s]->second << ")";
      cex.note = msg.str();
      return failed(name, cex.note, std::move(cex));
    }
  }
  return passed(name, std::to_string(checked) + " (x, s) instances checked");
}

CheckResult check_property2(const Trace& trace, const FunctionalSuite& suite, Natural e, unsigned j) {
  const PriorityIndex p{e, j};
  const std::string name = "property2[" + std::to_string(e) + "," + std::to_string(j) + "]";
  const TraceReplay replay(trace);
  const Stage t_end = replay.horizon();
  auto inconclusive = [&](std::string why) { return CheckResult{name, Verdict::inconclusive, std::move(why), {}}; };

  if (t_end == 0) return inconclusive("empty trace");
  const Stage last = t_end - 1;  // the last stage the rule was applied at
  if (p.index() >= last) return inconclusive("pair not yet eligible by the last stage");

  std::optional<Stage> last_stronger;
  for (const auto& ev : trace.events)
    if (ev.action && ev.action->pair.index() < p.index()) last_stronger = ev.stage;
  if (last_stronger && *last_stronger >= last)
    return inconclusive("stronger pairs still acting at stage " + std::to_string(*last_stronger));

  Natural bar = 0;
  for (const auto& [q, r] : replay.restraints(t_end))
    if (q.index() < p.index()) bar = std::max(bar, r);

  const auto seen = suite.domain_in_class(e, last);
  auto eligible = std::upper_bound(seen.begin(), seen.end(), bar);
  if (eligible == seen.end()) return inconclusive("no element of dom Phi_e in R_e above the stronger restraints");

  const auto& members = replay.members(j, t_end);
  for (const auto n : suite.domain_in_class(e, t_end))
    if (members.contains(n)) return passed(name, "witness " + std::to_string(n));

  Counterexample cex;
  cex.stage = last;
  cex.element = *eligible;
  cex.pair = p;
  cex.note = "eligible " + std::to_string(*eligible) + " at stage " + std::to_string(last) + " but A_" +
             std::to_string(j) + " misses dom Phi_" + std::to_string(e) + " on R_" + std::to_string(e);
  return failed(name, cex.note, std::move(cex));
}

// ---------------------------------------------------------------------------

VerificationReport check_structural(const Trace& trace, const FunctionalSuite* suite) {
  validate_trace_schema(trace);
  const TraceReplay replay(trace);
  const Stage t_end = replay.horizon();
  VerificationReport report;

  // per-class bound and class membership
  {
    std::optional<CheckResult> bound_fail, class_fail;
    for (Stage s = 0; s <= t_end && !(bound_fail && class_fail); ++s) {
      for (unsigned side = 0; side < 2; ++side) {
        std::map<unsigned, Natural> per_class;
        for (const auto n : replay.members(side, s)) {
          const auto e = r_index(n);
          if (!e) {
            if (!class_fail)
              class_fail = failed("structural.class_membership", "0 is a member of A_" + std::to_string(side),
                                  {s, {}, n, {}, "member outside every R_e"});
            continue;
          }
          if (++per_class[*e] == 2 && !bound_fail)
            bound_fail = failed("structural.per_class_bound",
                                "two members of A_" + std::to_string(side) + " in R_" + std::to_string(*e),
                                {s, {}, n, PriorityIndex{*e, side}, "second member of the class"});
        }
      }
    }
    report.checks.push_back(bound_fail.value_or(passed("structural.per_class_bound")));
    report.checks.push_back(class_fail.value_or(passed("structural.class_membership")));
  }

  // per-action checks
  {
    std::optional<CheckResult> dce_fail, shape_fail, witness_fail, restraint_fail, removal_fail;
    std::array<std::set<Natural>, 2> ever;
    std::array<std::map<Natural, std::pair<PriorityIndex, Stage>>, 2> live;
    for (const auto& ev : trace.events) {
      const Stage s = ev.stage;
      if (!ev.action) {
        if (!ev.removals.empty() && !shape_fail)
          shape_fail = failed("structural.event_shape", "removals without an action at stage " + std::to_string(s),
                              {s, {}, ev.removals.front().n, {}, "removal without action"});
        continue;
      }
      const auto& act = *ev.action;
      const auto p = act.pair;
      const auto& restraints = replay.restraints(s);

      if (!witness_fail) {
        std::string why;
        if (p.index() >= s)
          why = "pair index not below the stage";
        else if (!in_class(act.witness, static_cast<unsigned>(std::min<Natural>(p.e, 64))))
          why = "witness outside R_e";
        else if (replay.members(p.j, s).contains(act.witness))
          why = "witness already a member";
        for (const auto& [q, r] : restraints)
          if (why.empty() && q.index() < p.index() && act.witness <= r)
            why = "witness not above r" + to_string(q).substr(1) + "=" + std::to_string(r);
        if (why.empty() && suite) {
          if (!suite->query(p.e, act.witness, s)) why = "witness not in dom Phi_e[s]";
          for (const auto n : suite->domain_in_class(p.e, s))
            if (why.empty() && replay.members(p.j, s).contains(n))
              why = "requirement already met by " + std::to_string(n);
        }
        if (!why.empty()) witness_fail = failed("structural.witness_discipline", why, {s, {}, act.witness, p, why});
      }

      if (!restraint_fail && act.restraint != s)
        restraint_fail = failed(
            "structural.restraint_discipline",
            to_string(p) + " set its restraint to " + std::to_string(act.restraint) + " at stage " + std::to_string(s),
            {s, {}, {}, p, "restraint must equal the action stage"});

      if (!dce_fail && !ever[p.j].insert(act.witness).second)
        dce_fail = failed("structural.dce",
                          std::to_string(act.witness) + " inserted into A_" + std::to_string(p.j) + " a second time",
                          {s, {}, act.witness, p, "second insertion"});

      for (const auto& rm : ev.removals) {
        if (removal_fail) break;
        std::string why;
        auto it = live[rm.side].find(rm.n);
        if (rm.side != 1 - p.j)
          why = "removal on the actor's own side";
        else if (rm.inserted_by.index() <= p.index())
          why = "removal of an element placed by a pair at least as strong";
        else if (rm.inserted_at >= s)
          why = "removal of an element not inserted before this stage";
        else if (it == live[rm.side].end())
          why = "removal of a non-member";
        else if (it->second != std::pair{rm.inserted_by, rm.inserted_at})
          why = "removal provenance mismatch";
        if (!why.empty())
          removal_fail = failed("structural.removal_soundness", why, {s, {}, rm.n, rm.inserted_by, why});
      }

      for (const auto& rm : ev.removals)
        if (rm.side < 2) live[rm.side].erase(rm.n);
      live[p.j][act.witness] = {p, s};

      // completeness: nothing weaker survives on the other side
      if (!removal_fail) {
        for (const auto& [n, prov] : live[1 - p.j]) {
          if (prov.first.index() > p.index()) {
            removal_fail = failed("structural.removal_soundness",
                                  "element " + std::to_string(n) + " placed by " + to_string(prov.first) +
                                      " survived an action of " + to_string(p),
                                  {s, {}, n, prov.first, "weaker element not removed"});
            break;
          }
        }
      }
    }
    report.checks.push_back(dce_fail.value_or(passed("structural.dce")));
    report.checks.push_back(shape_fail.value_or(passed("structural.event_shape")));
    report.checks.push_back(witness_fail.value_or(passed("structural.witness_discipline")));
    report.checks.push_back(restraint_fail.value_or(passed("structural.restraint_discipline")));
    report.checks.push_back(removal_fail.value_or(passed("structural.removal_soundness")));
  }

  // key lemma: A_{1-j}[t+1] is contained in A_{1-j}[s] whenever no pair stronger
  // than the stage-t actor acted in [s, t)
  {
    std::optional<CheckResult> lemma_fail;
    std::uint64_t pairs_checked = 0;
    for (Stage t = 0; t < t_end && !lemma_fail; ++t) {
      const auto& act = trace.events[t].action;
      if (!act) continue;
      const unsigned other = 1 - act->pair.j;
      const auto& after = replay.members(other, t + 1);
      for (Stage s = t + 1; s-- > 0;) {
        const auto& earlier = trace.events[s].action;
        if (s < t && earlier && earlier->pair.index() < act->pair.index()) break;
        ++pairs_checked;
        const auto& before = replay.members(other, s);
        if (!std::includes(before.begin(), before.end(), after.begin(), after.end())) {
          Natural culprit = 0;
          for (const auto n : after)
            if (!before.contains(n)) {
              culprit = n;
              break;
            }
          lemma_fail = failed("structural.key_lemma",
                              "f_" + std::to_string(other) + "," + std::to_string(t + 1) + " does not extend f_" +
                                  std::to_string(other) + "," + std::to_string(s),
                              {s, t, culprit, act->pair, "member of A_{1-j} after the action but not at s"});
          break;
        }
      }
    }
    report.checks.push_back(
        lemma_fail.value_or(passed("structural.key_lemma", std::to_string(pairs_checked) + " (s,t) pairs")));
  }

  // finite action: after the last action of every stronger pair, a pair acts at most once
  {
    std::optional<CheckResult> fin_fail;
    std::map<PriorityIndex, std::vector<Stage>> acts;
    for (const auto& ev : trace.events)
      if (ev.action) acts[ev.action->pair].push_back(ev.stage);
    std::optional<Stage> last_stronger;
    for (const auto& [p, stages] : acts) {  // ascending priority index
      const auto later =
          std::count_if(stages.begin(), stages.end(), [&](Stage st) { return !last_stronger || st > *last_stronger; });
      if (later > 1 && !fin_fail) {
        std::vector<Stage> quiet;
        for (const auto st : stages)
          if (!last_stronger || st > *last_stronger) quiet.push_back(st);
        fin_fail = failed("structural.finite_action",
                          to_string(p) + " acted " + std::to_string(later) + " times after stronger pairs stopped",
                          {quiet[1], {}, {}, p, "second action after stronger pairs settled"});
      }
      const Stage mine = stages.back();
      last_stronger = last_stronger ? std::max(*last_stronger, mine) : mine;
    }
    report.checks.push_back(fin_fail.value_or(passed("structural.finite_action")));
  }

  // snapshots and the summary line are what the events replay to
  {
    std::optional<CheckResult> snap_fail;
    for (const auto& ev : trace.events) {
      if (!ev.snapshot) continue;
      for (unsigned side = 0; side < 2 && !snap_fail; ++side) {
        const auto& want = replay.members(side, ev.stage + 1);
        const auto& got = ev.snapshot->members[side];
        if (!std::equal(want.begin(), want.end(), got.begin(), got.end()))
          snap_fail = failed("structural.snapshot_replay",
                             "snapshot after stage " + std::to_string(ev.stage) + " disagrees with replay",
                             {ev.stage, {}, {}, {}, "snapshot mismatch on side " + std::to_string(side)});
      }
      if (snap_fail) break;
    }
    report.checks.push_back(snap_fail.value_or(passed("structural.snapshot_replay")));
  }
  {
    const auto replayed = replay.summary();
    if (replayed == trace.summary) {
      report.checks.push_back(passed("structural.summary_replay"));
    } else {
      report.checks.push_back(failed("structural.summary_replay", "summary differs from the replayed final state",
                                     {t_end, {}, {}, {}, "summary mismatch"}));
    }
  }

  report.sort();
  return report;
}

// ---------------------------------------------------------------------------

Trace reference_run(const FunctionalSuite& suite, Stage horizon, Stage snapshot_every) {
  struct Record {
    Natural n;
    unsigned side;
    Natural by;  // priority index
    Stage at;
    bool removed = false;
  };
  std::vector<Record> log;
  std::map<Natural, Natural> restraint;  // priority index -> r

  auto member = [&](unsigned side, Natural n) {
    for (const auto& rec : log)
      if (rec.side == side && rec.n == n && !rec.removed) return true;
    return false;
  };
  auto r_of = [&](Natural idx) {
    auto it = restraint.find(idx);
    return it == restraint.end() ? Natural{0} : it->second;
  };
  auto members_of = [&](unsigned side) {
    std::vector<Natural> out;
    for (const auto& rec : log)
      if (rec.side == side && !rec.removed) out.push_back(rec.n);
    std::sort(out.begin(), out.end());
    return out;
  };

  Trace trace;
  for (Stage s = 0; s < horizon; ++s) {
    TraceEvent ev;
    ev.stage = s;
    for (Natural idx = 0; idx < s && !ev.action; ++idx) {
      const Natural e = idx / 2;
      const auto j = static_cast<unsigned>(idx % 2);
      if (e >= suite.size()) continue;  // Phi_e diverges everywhere

      bool met = false;
      for (Natural n = 0; n < s; ++n)
        if (in_class(n, static_cast<unsigned>(std::min<Natural>(e, 64))) && phi_eval(suite, e, n, s) && member(j, n))
          met = true;
      if (met) continue;

      for (Natural n = 0; n < s; ++n) {
        if (!in_class(n, static_cast<unsigned>(std::min<Natural>(e, 64))) || !phi_eval(suite, e, n, s)) continue;
        bool clear = true;
        for (Natural k = 0; k < idx; ++k)
          if (n <= r_of(k)) clear = false;
        if (!clear) continue;

        log.push_back({n, j, idx, s});
        for (auto& rec : log) {
          if (rec.side == 1 - j && !rec.removed && rec.by > idx) {
            rec.removed = true;
            ev.removals.push_back({rec.n, rec.side, PriorityIndex::from_index(rec.by), rec.at});
          }
        }
        std::sort(ev.removals.begin(), ev.removals.end(), [](const Removal& a, const Removal& b) { return a.n < b.n; });
        restraint[idx] = s;
        ev.action = Action{PriorityIndex{e, j}, n, s};
        break;
      }
    }
    if (snapshot_every != 0 && (s + 1) % snapshot_every == 0) ev.snapshot = Snapshot{{members_of(0), members_of(1)}};
    trace.events.push_back(std::move(ev));
  }

  trace.summary.horizon = horizon;
  trace.summary.members = {members_of(0), members_of(1)};
  for (const auto& [idx, r] : restraint) trace.summary.restraints.emplace_back(PriorityIndex::from_index(idx), r);
  return trace;
}

// ---------------------------------------------------------------------------

EndToEndResult end_to_end_check(const Trace& trace, const OperatorSuite& ops, Natural e0, Natural e1, TargetRule target,
                                Natural bound, Rational threshold) {
  EndToEndResult out;
  out.psi = synthesize_psi(trace, ops, e0, e1);
  std::set<Natural> domain;
  for (const auto& [n, entry] : out.psi.entries) {
    domain.insert(n);
    if (entry.value != target_bit(target, n)) out.disagreements.push_back(n);
  }
  out.domain_density = partial_density(domain, bound);

  const std::string name = "end_to_end[" + std::to_string(e0) + "," + std::to_string(e1) + "]";
  std::ostringstream detail;
  detail << "dom Psi density " << out.domain_density.str() << " at N=" << bound << " (threshold " << threshold.str()
         << "), " << out.disagreements.size() << " disagreements";
  if (!out.disagreements.empty()) {
    const auto n = out.disagreements.front();
    out.check =
        failed(name, detail.str(), {out.psi.entries.at(n).found_at, {}, n, {}, "Psi(n) differs from the target"});
  } else if (out.domain_density < threshold) {
    out.check = failed(name, detail.str(), {trace.summary.horizon, {}, {}, {}, "domain density below threshold"});
  } else {
    out.check = passed(name, detail.str());
  }
  return out;
}

}  // namespace mpgen
