#include "mmbn/matching.hpp"

#include <algorithm>
#include <stdexcept>

namespace mmbn::matching {

Matching Matching::empty(std::size_t proposers, std::vector<std::size_t> quotas) {
  Matching m;
  m.partner.assign(proposers, std::nullopt);
  m.held.assign(quotas.size(), {});
  m.quota = std::move(quotas);
  return m;
}

void Matching::assign(Agent proposer, Agent acceptor) {
  release(proposer);
  partner.at(proposer) = acceptor;
  held.at(acceptor).push_back(proposer);
}

void Matching::release(Agent proposer) {
  auto& current = partner.at(proposer);
  if (!current) return;
  auto& list = held[*current];
  list.erase(std::remove(list.begin(), list.end(), proposer), list.end());
  current.reset();
}

bool Matching::consistent() const {
  if (held.size() != quota.size()) return false;
  std::size_t total = 0;
  for (Agent a = 0; a < held.size(); ++a) {
    if (held[a].size() > quota[a]) return false;
    for (Agent p : held[a])
      if (p >= partner.size() || partner[p] != a) return false;
    total += held[a].size();
  }
  const auto matched = std::count_if(partner.begin(), partner.end(), [](const auto& x) { return x.has_value(); });
  return static_cast<std::size_t>(matched) == total;
}

std::size_t rank_of(const PreferenceList& list, std::optional<Agent> partner) {
  if (!partner) return list.size();
  const auto it = std::find(list.begin(), list.end(), *partner);
  return static_cast<std::size_t>(it - list.begin());
}

PreferenceList order_by_utility(std::span<const Agent> candidates, const std::function<double(Agent)>& utility) {
  std::vector<std::pair<double, Agent>> scored;
  scored.reserve(candidates.size());
  for (Agent c : candidates) scored.emplace_back(utility(c), c);
  std::sort(scored.begin(), scored.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  PreferenceList out;
  out.reserve(scored.size());
  for (const auto& [u, c] : scored) out.push_back(c);
  return out;
}

namespace {

constexpr std::size_t kNotListed = static_cast<std::size_t>(-1);

// rank[a][p] = position of p in a's list, or npos when unacceptable.
std::vector<std::vector<std::size_t>> rank_table(const PreferenceProfile& prefs, std::size_t other_side) {
  std::vector<std::vector<std::size_t>> rank(prefs.size(), std::vector<std::size_t>(other_side, kNotListed));
  for (std::size_t a = 0; a < prefs.size(); ++a)
    for (std::size_t i = 0; i < prefs[a].size(); ++i) {
      if (prefs[a][i] >= other_side) throw std::out_of_range("preference list references an unknown agent");
      rank[a][prefs[a][i]] = i;
    }
  return rank;
}

}  // namespace

DeferredAcceptanceResult deferred_acceptance(const PreferenceProfile& proposer_prefs,
                                             const PreferenceProfile& acceptor_prefs,
                                             std::span<const std::size_t> quotas, const PeerEffectHook& peer_effect) {
  const std::size_t n_prop = proposer_prefs.size();
  const std::size_t n_acc = acceptor_prefs.size();
  if (quotas.size() != n_acc) throw std::invalid_argument("one quota per acceptor is required");
  const auto acc_rank = rank_table(acceptor_prefs, n_prop);
  rank_table(proposer_prefs, n_acc);  // validates indices

  DeferredAcceptanceResult out;
  out.matching = Matching::empty(n_prop, {quotas.begin(), quotas.end()});
  Matching& m = out.matching;

  std::vector<std::size_t> next(n_prop, 0);
  std::vector<Agent> free;
  for (Agent p = 0; p < n_prop; ++p)
    if (!proposer_prefs[p].empty()) free.push_back(p);

  std::vector<std::vector<Agent>> incoming(n_acc);
  while (!free.empty()) {
    ++out.rounds;
    for (auto& v : incoming) v.clear();
    for (Agent p : free) {
      const Agent a = proposer_prefs[p][next[p]++];
      incoming[a].push_back(p);
      ++out.proposals;
    }

    std::vector<Agent> rejected;
    for (Agent a = 0; a < n_acc; ++a) {
      if (incoming[a].empty()) continue;
      const auto by_rank = [&](Agent x, Agent y) { return acc_rank[a][x] < acc_rank[a][y]; };
      if (!peer_effect) {
        std::vector<Agent> pool = m.held[a];
        pool.insert(pool.end(), incoming[a].begin(), incoming[a].end());
        std::sort(pool.begin(), pool.end(), by_rank);
        std::size_t kept = 0;
        for (Agent p : pool) {
          const bool keep = acc_rank[a][p] != kNotListed && kept < m.quota[a];
          if (keep) {
            ++kept;
            if (m.partner[p] != a) m.assign(p, a);
          } else {
            if (m.partner[p] == a) m.release(p);
            rejected.push_back(p);
          }
        }
      } else {
        std::vector<Agent> fresh = incoming[a];
        std::sort(fresh.begin(), fresh.end(), by_rank);
        for (Agent p : fresh) {
          const bool keep =
              acc_rank[a][p] != kNotListed && m.held[a].size() < m.quota[a] && peer_effect(a, m.held[a], p);
          if (keep)
            m.assign(p, a);
          else
            rejected.push_back(p);
        }
      }
      if (m.held[a].size() > m.quota[a]) out.quota_respected = false;
    }

    free.clear();
    for (Agent p : rejected)
      if (next[p] < proposer_prefs[p].size()) free.push_back(p);
    std::sort(free.begin(), free.end());
  }
  return out;
}

std::vector<std::pair<Agent, Agent>> find_blocking_pairs(const Matching& m, const PreferenceProfile& proposer_prefs,
                                                         const PreferenceProfile& acceptor_prefs,
                                                         const RoomHook& has_room) {
  const auto acc_rank = rank_table(acceptor_prefs, proposer_prefs.size());
  std::vector<std::pair<Agent, Agent>> out;
  for (Agent p = 0; p < proposer_prefs.size(); ++p) {
    const auto& list = proposer_prefs[p];
    const std::size_t current = rank_of(list, m.partner[p]);
    for (std::size_t i = 0; i < current && i < list.size(); ++i) {
      const Agent a = list[i];
      const std::size_t r = acc_rank[a][p];
      if (r == kNotListed) continue;
      const auto& held = m.held[a];
      const bool room = has_room ? has_room(a, held) : held.size() < m.quota[a];
      const bool displaces =
          std::any_of(held.begin(), held.end(), [&](Agent h) { return acc_rank[a][h] > r; });
      if (room || displaces) out.emplace_back(p, a);
    }
  }
  return out;
}

bool is_pareto_improvement(std::span<const double> before, std::span<const double> after) {
  if (before.size() != after.size()) throw std::invalid_argument("utility vectors differ in size");
  bool strict = false;
  for (std::size_t i = 0; i < before.size(); ++i) {
    if (after[i] < before[i]) return false;
    if (after[i] > before[i]) strict = true;
  }
  return strict;
}

bool is_pareto_improvement(const Matching& before, const Matching& after, const PreferenceProfile& proposer_prefs) {
  std::vector<double> u_before, u_after;
  for (Agent p = 0; p < proposer_prefs.size(); ++p) {
    u_before.push_back(-static_cast<double>(rank_of(proposer_prefs[p], before.partner.at(p))));
    u_after.push_back(-static_cast<double>(rank_of(proposer_prefs[p], after.partner.at(p))));
  }
  return is_pareto_improvement(u_before, u_after);
}

}  // namespace mmbn::matching
