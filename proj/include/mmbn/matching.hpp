#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace mmbn::matching {

/// Agents on each side are dense indices 0..n-1.
using Agent = std::size_t;

/// Strictly ordered acceptable partners, most preferred first. Partners not
/// listed are unacceptable.
using PreferenceList = std::vector<Agent>;
using PreferenceProfile = std::vector<PreferenceList>;

/// One-to-many matching: each proposer holds at most one acceptor, each
/// acceptor holds up to its quota of proposers.
struct Matching {
  std::vector<std::optional<Agent>> partner;  ///< proposer -> acceptor
  std::vector<std::vector<Agent>> held;       ///< acceptor -> proposers
  std::vector<std::size_t> quota;

  static Matching empty(std::size_t proposers, std::vector<std::size_t> quotas);

  void assign(Agent proposer, Agent acceptor);
  void release(Agent proposer);
  /// partner and held agree and no quota is exceeded.
  bool consistent() const;
};

/// Acceptability of a new proposal given what the acceptor currently holds.
/// Models preferences that depend on the current matching (peer effects).
using PeerEffectHook = std::function<bool(Agent acceptor, std::span<const Agent> held, Agent candidate)>;

/// Whether an acceptor holding `held` would still take an extra partner.
using RoomHook = std::function<bool(Agent acceptor, std::span<const Agent> held)>;

struct DeferredAcceptanceResult {
  Matching matching;
  std::size_t proposals = 0;
  std::size_t rounds = 0;
  bool quota_respected = true;  ///< checked after every round
};

/// Proposer-proposing deferred acceptance with simultaneous rounds.
///
/// Without a hook, every acceptor keeps its quota of best proposals out of
/// held plus new ones (classical Gale-Shapley). With a peer-effect hook the
/// acceptor ranks proposals against its current tentative match instead:
/// held partners stay, and each new proposal, best first, is kept only while
/// the hook accepts it. That is the conventional algorithm run on
/// matching-dependent preferences and is not guaranteed to be stable.
DeferredAcceptanceResult deferred_acceptance(const PreferenceProfile& proposer_prefs,
                                             const PreferenceProfile& acceptor_prefs,
                                             std::span<const std::size_t> quotas,
                                             const PeerEffectHook& peer_effect = {});

/// Every (proposer, acceptor) pair that blocks the matching: the pair is
/// mutually acceptable, the proposer strictly prefers the acceptor to its
/// current partner (being single is worst) and the acceptor either prefers
/// the proposer to one of its held partners or has room for it. Room
/// defaults to an unfilled quota; a hook can replace it with a
/// state-dependent rule.
std::vector<std::pair<Agent, Agent>> find_blocking_pairs(const Matching& m, const PreferenceProfile& proposer_prefs,
                                                         const PreferenceProfile& acceptor_prefs,
                                                         const RoomHook& has_room = {});

/// True iff `after` is weakly better for every agent and strictly better for one.
bool is_pareto_improvement(std::span<const double> before, std::span<const double> after);

/// Proposer-side comparison: utility of a proposer is minus the rank of its
/// partner in its list; being single ranks below every listed partner.
bool is_pareto_improvement(const Matching& before, const Matching& after, const PreferenceProfile& proposer_prefs);

/// Rank of `partner` in `list`, or list.size() when absent.
std::size_t rank_of(const PreferenceList& list, std::optional<Agent> partner);

/// Order candidates by descending utility, ties by ascending index.
PreferenceList order_by_utility(std::span<const Agent> candidates, const std::function<double(Agent)>& utility);

}  // namespace mmbn::matching
