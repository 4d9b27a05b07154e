#pragma once

// Independent re-derivations used as ground truth by the tests. Nothing here
// calls into the engine or the analysis code.

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <tuple>
#include <vector>

#include "mpgen/suites.hpp"

namespace oracle {

using mpgen::Natural;
using mpgen::Stage;

// Walks the Cantor diagonals x + y = d in order of increasing y.
inline Natural diagonal_pair(Natural x, Natural y) {
  Natural code = 0;
  for (Natural d = 0;; ++d) {
    for (Natural yy = 0; yy <= d; ++yy, ++code)
      if (d - yy == x && yy == y) return code;
  }
}

inline Natural valuation(Natural n) {
  Natural v = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++v;
  }
  return v;
}

struct ActionRecord {
  Stage stage;
  Natural e;
  unsigned j;
  Natural witness;
  bool operator==(const ActionRecord&) const = default;
};

struct Construction {
  std::array<std::set<Natural>, 2> members;
  std::vector<ActionRecord> actions;
};

// The stage rule written out as plainly as possible.
inline Construction construct(const mpgen::FunctionalSuite& suite, Stage horizon) {
  std::array<std::map<Natural, Natural>, 2> owner;  // element -> priority index of the pair that placed it
  std::map<Natural, Stage> restraint;               // priority index -> r
  Construction out;
  for (Stage s = 0; s < horizon; ++s) {
    for (Natural idx = 0; idx < s; ++idx) {
      const Natural e = idx / 2;
      const unsigned j = static_cast<unsigned>(idx % 2);
      if (e >= suite.size()) break;
      Natural bar = 0;
      for (const auto& [i, r] : restraint)
        if (i < idx && r > bar) bar = r;
      bool met = false;
      bool have_pick = false;
      Natural pick = 0;
      for (Natural n = 1; n < s; ++n) {
        if (valuation(n) != e || !suite.query(e, n, s)) continue;
        if (owner[j].count(n)) met = true;
        if (!have_pick && n > bar) {
          have_pick = true;
          pick = n;
        }
      }
      if (met || !have_pick) continue;
      owner[j][pick] = idx;
      auto& other = owner[1 - j];
      for (auto it = other.begin(); it != other.end();) it = it->second > idx ? other.erase(it) : std::next(it);
      restraint[idx] = s;
      out.actions.push_back({s, e, j, pick});
      break;
    }
  }
  for (unsigned j = 0; j < 2; ++j)
    for (const auto& [n, by] : owner[j]) out.members[j].insert(n);
  return out;
}

// |{n < bound : n not in members}| as a fraction of bound, unreduced.
inline std::pair<Natural, Natural> complement_density(const std::set<Natural>& members, Natural bound) {
  Natural inside = 0;
  for (auto n : members)
    if (n < bound) ++inside;
  return {bound - inside, bound};
}

}  // namespace oracle
