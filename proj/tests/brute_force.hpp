#pragma once

// Exhaustive enumeration of small matching instances, shared by the unit
// and acceptance tests.

#include <optional>
#include <vector>

#include "mmbn/allocation.hpp"
#include "mmbn/matching.hpp"

namespace testing {

/// Every quota-respecting matching in which all pairs are mutually acceptable.
inline std::vector<mmbn::matching::Matching> all_matchings(const mmbn::matching::PreferenceProfile& proposers,
                                                           const mmbn::matching::PreferenceProfile& acceptors,
                                                           const std::vector<std::size_t>& quotas) {
  using namespace mmbn::matching;
  const std::size_t np = proposers.size();
  std::vector<Matching> out;
  std::vector<std::size_t> choice(np, 0);  // 0 = single, i = i-th listed acceptor
  for (;;) {
    Matching m = Matching::empty(np, quotas);
    bool ok = true;
    for (std::size_t p = 0; p < np && ok; ++p) {
      if (choice[p] == 0) continue;
      const Agent a = proposers[p][choice[p] - 1];
      ok = rank_of(acceptors[a], p) < acceptors[a].size();
      if (ok) m.assign(p, a);
    }
    if (ok && m.consistent()) out.push_back(std::move(m));
    std::size_t i = 0;
    while (i < np && ++choice[i] > proposers[i].size()) choice[i++] = 0;
    if (i == np) break;
  }
  return out;
}

inline std::vector<mmbn::matching::Matching> stable_matchings(const mmbn::matching::PreferenceProfile& proposers,
                                                              const mmbn::matching::PreferenceProfile& acceptors,
                                                              const std::vector<std::size_t>& quotas) {
  std::vector<mmbn::matching::Matching> out;
  for (auto& m : all_matchings(proposers, acceptors, quotas))
    if (mmbn::matching::find_blocking_pairs(m, proposers, acceptors).empty()) out.push_back(std::move(m));
  return out;
}

/// Sub-channel matches in which every child's holding is admissible under the
/// saturation rule and no blocking pair exists.
inline std::vector<mmbn::matching::Matching> stable_allocations(const mmbn::SubchannelGame& game) {
  using namespace mmbn::matching;
  const std::size_t nk = game.subchannels();
  const std::size_t nc = game.children();
  const auto k_prefs = mmbn::subchannel_preferences(game);
  const auto c_prefs = mmbn::child_preferences(game);
  const auto room = mmbn::saturation_room(game);
  std::vector<Matching> out;
  std::vector<std::size_t> owner(nk, 0);  // 0 = free, c + 1 = child c
  for (;;) {
    std::vector<std::vector<std::size_t>> held(nc);
    for (std::size_t k = 0; k < nk; ++k)
      if (owner[k] > 0) held[owner[k] - 1].push_back(k);
    bool admissible = true;
    for (std::size_t c = 0; c < nc; ++c) admissible = admissible && mmbn::admissible_holding(game, c, held[c]);
    if (admissible) {
      auto m = Matching::empty(nk, std::vector<std::size_t>(nc, nk));
      for (std::size_t k = 0; k < nk; ++k)
        if (owner[k] > 0) m.assign(k, owner[k] - 1);
      if (find_blocking_pairs(m, k_prefs, c_prefs, room).empty()) out.push_back(std::move(m));
    }
    std::size_t i = 0;
    while (i < nk && ++owner[i] > nc) owner[i++] = 0;
    if (i == nk) break;
  }
  return out;
}

}  // namespace testing
