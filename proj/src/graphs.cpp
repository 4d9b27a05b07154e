#include "mpgen/graphs.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mpgen {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
}  // namespace

PartialGraph PartialGraph::explicit_map(std::map<Natural, Bit> points) {
  for (const auto& [n, v] : points)
    if (v > 1) throw std::invalid_argument("graph value at " + std::to_string(n) + " is not a bit");
  return PartialGraph(Explicit{std::move(points)});
}

PartialGraph PartialGraph::cofinite_ones(std::set<Natural> exceptions) {
  return PartialGraph(CofiniteOnes{std::move(exceptions)});
}

std::optional<Bit> PartialGraph::at(Natural n) const {
  return std::visit(overloaded{
                        [n](const Explicit& e) -> std::optional<Bit> {
                          auto it = e.points.find(n);
                          if (it == e.points.end()) return std::nullopt;
                          return it->second;
                        },
                        [n](const CofiniteOnes& c) -> std::optional<Bit> {
                          if (c.exceptions.contains(n)) return std::nullopt;
                          return Bit{1};
                        },
                    },
                    shape_);
}

bool PartialGraph::contains(Code c) const {
  const auto [n, v] = unpair(c);
  if (v > 1) return false;
  const auto value = at(n);
  return value && *value == v;
}

bool extends(const PartialGraph& f, const PartialGraph& g) {
  using Explicit = PartialGraph::Explicit;
  using Cofinite = PartialGraph::CofiniteOnes;
  return std::visit(overloaded{
                        [&](const Explicit& fe, const auto&) {
                          return std::all_of(fe.points.begin(), fe.points.end(), [&](const auto& p) {
                            const auto gv = g.at(p.first);
                            return gv && *gv == p.second;
                          });
                        },
                        [](const Cofinite& fc, const Cofinite& gc) {
                          return std::includes(fc.exceptions.begin(), fc.exceptions.end(), gc.exceptions.begin(),
                                               gc.exceptions.end());
                        },
                        // an infinite graph never fits inside a finite one
                        [](const Cofinite&, const Explicit&) { return false; },
                    },
                    f.shape(), g.shape());
}

Rational domain_density(const PartialGraph& f, Natural n_bound) {
  if (n_bound == 0) throw std::invalid_argument("partial density needs N >= 1");
  return std::visit(overloaded{
                        [n_bound](const PartialGraph::Explicit& e) {
                          const auto below = std::distance(e.points.begin(), e.points.lower_bound(n_bound));
                          return Rational(static_cast<std::uint64_t>(below), n_bound);
                        },
                        [n_bound](const PartialGraph::CofiniteOnes& c) {
                          const auto excluded = std::distance(c.exceptions.begin(), c.exceptions.lower_bound(n_bound));
                          return Rational(n_bound - static_cast<std::uint64_t>(excluded), n_bound);
                        },
                    },
                    f.shape());
}

DescriptionReport check_description(const PartialGraph& f, std::span<const Bit> x, Natural n_bound) {
  if (x.size() < n_bound) throw std::invalid_argument("bit sequence shorter than the checked bound");
  DescriptionReport report;
  report.checked_bound = n_bound;
  for (Natural n = 0; n < n_bound; ++n) {
    const auto v = f.at(n);
    if (v && *v != x[n]) report.error_points.push_back(n);
  }
  report.domain_partial_density = n_bound == 0 ? Rational(0, 1) : domain_density(f, n_bound);
  return report;
}

}  // namespace mpgen
