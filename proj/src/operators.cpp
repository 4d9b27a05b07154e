#include "mpgen/operators.hpp"

#include <algorithm>

namespace mpgen {

Axiom::Axiom(std::vector<Code> premise_codes, Natural k) : premise(std::move(premise_codes)), output(k) {
  std::sort(premise.begin(), premise.end());
  premise.erase(std::unique(premise.begin(), premise.end()), premise.end());
}

EnumOperator::EnumOperator(std::vector<StagedAxiom> axioms) {
  std::map<Axiom, Stage> earliest;
  for (auto& a : axioms) {
    auto [it, inserted] = earliest.emplace(a.axiom, a.appears_at);
    if (!inserted) it->second = std::min(it->second, a.appears_at);
  }
  axioms_.reserve(earliest.size());
  for (auto& [axiom, stage] : earliest) axioms_.push_back({axiom, stage});
  std::stable_sort(axioms_.begin(), axioms_.end(),
                   [](const StagedAxiom& a, const StagedAxiom& b) { return a.appears_at < b.appears_at; });
}

std::span<const StagedAxiom> EnumOperator::axioms_at(Stage s) const {
  auto end = std::upper_bound(axioms_.begin(), axioms_.end(), s,
                              [](Stage stage, const StagedAxiom& a) { return stage < a.appears_at; });
  return {axioms_.data(), static_cast<std::size_t>(end - axioms_.begin())};
}

std::optional<StagedAxiom> EnumOperator::use_bound_violation() const {
  for (const auto& a : axioms_)
    if (a.axiom.use() > a.appears_at) return a;
  return std::nullopt;
}

namespace {

bool satisfied(const Axiom& a, const PartialGraph& g) {
  return std::all_of(a.premise.begin(), a.premise.end(), [&](Code c) { return g.contains(c); });
}

}  // namespace

std::set<Natural> eval(const EnumOperator& w, const PartialGraph& g, Stage s) {
  std::set<Natural> out;
  for (const auto& a : w.axioms_at(s))
    if (!out.contains(a.axiom.output) && satisfied(a.axiom, g)) out.insert(a.axiom.output);
  return out;
}

std::optional<Natural> use_of(const EnumOperator& w, const PartialGraph& g, Stage s, Natural k) {
  std::optional<Natural> best;
  for (const auto& a : w.axioms_at(s)) {
    if (a.axiom.output != k || !satisfied(a.axiom, g)) continue;
    if (!best || a.axiom.use() < *best) best = a.axiom.use();
  }
  return best;
}

std::map<Natural, Natural> enumerate_outputs(const EnumOperator& w, const PartialGraph& g, Stage s) {
  std::map<Natural, Natural> out;
  for (const auto& a : w.axioms_at(s)) {
    if (!satisfied(a.axiom, g)) continue;
    auto [it, inserted] = out.emplace(a.axiom.output, a.axiom.use());
    if (!inserted) it->second = std::min(it->second, a.axiom.use());
  }
  return out;
}

}  // namespace mpgen
