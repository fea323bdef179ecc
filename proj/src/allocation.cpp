#include "mmbn/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mmbn {

double SubchannelGame::held_rate(std::size_t child, std::span<const std::size_t> held) const {
  double sum = 0.0;
  for (std::size_t k : held) sum += rate(static_cast<Eigen::Index>(child), static_cast<Eigen::Index>(k));
  return sum;
}

bool saturation_criterion(double held_rate_bps, double upstream_bps, std::size_t fanout) {
  if (std::isinf(upstream_bps)) return true;
  return held_rate_bps < upstream_bps / static_cast<double>(fanout + 1);
}

bool saturation_criterion(double held_rate_bps, double demand_bound_bps) {
  return std::isinf(demand_bound_bps) || held_rate_bps < demand_bound_bps;
}

double psi_utility(const SubchannelGame& game, std::size_t child, std::size_t k, std::span<const std::size_t> held) {
  if (!saturation_criterion(game.held_rate(child, held), game.demand_bound.at(child)))
    return -std::numeric_limits<double>::infinity();
  return game.rate(static_cast<Eigen::Index>(child), static_cast<Eigen::Index>(k));
}

double phi_utility(const SubchannelGame& game, std::size_t k, std::size_t child) {
  return game.rate(static_cast<Eigen::Index>(child), static_cast<Eigen::Index>(k)) + game.revenue.at(child);
}

matching::PreferenceProfile subchannel_preferences(const SubchannelGame& game) {
  std::vector<matching::Agent> all(game.children());
  std::iota(all.begin(), all.end(), 0);
  matching::PreferenceProfile prefs(game.subchannels());
  for (std::size_t k = 0; k < game.subchannels(); ++k)
    prefs[k] = matching::order_by_utility(all, [&](matching::Agent c) { return phi_utility(game, k, c); });
  return prefs;
}

matching::PreferenceProfile child_preferences(const SubchannelGame& game) {
  std::vector<matching::Agent> all(game.subchannels());
  std::iota(all.begin(), all.end(), 0);
  matching::PreferenceProfile prefs(game.children());
  for (std::size_t c = 0; c < game.children(); ++c)
    prefs[c] = matching::order_by_utility(all, [&](matching::Agent k) {
      return game.rate(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k));
    });
  return prefs;
}

SubchannelMatch allocate_subchannels(const SubchannelGame& game) {
  const std::size_t nc = game.children();
  const std::size_t nk = game.subchannels();
  SubchannelMatch out;
  out.owner.assign(nk, std::nullopt);
  out.held.assign(nc, {});
  if (nc == 0) return out;

  const auto k_prefs = subchannel_preferences(game);
  const auto c_prefs = child_preferences(game);
  std::vector<std::vector<std::size_t>> c_rank(nc, std::vector<std::size_t>(nk));
  for (std::size_t c = 0; c < nc; ++c)
    for (std::size_t r = 0; r < nk; ++r) c_rank[c][c_prefs[c][r]] = r;

  std::vector<std::size_t> next(nk, 0);
  std::vector<std::vector<bool>> asked(nk, std::vector<bool>(nc, false));
  auto ask = [&](std::size_t k, std::size_t c) {
    if (asked[k][c]) out.repeated_proposal = true;
    asked[k][c] = true;
    ++out.messages;
  };

  // Phase 1.
  for (;;) {
    std::vector<std::vector<std::size_t>> incoming(nc);
    for (std::size_t k = 0; k < nk; ++k) {
      if (out.owner[k] || next[k] >= k_prefs[k].size()) continue;
      const std::size_t c = k_prefs[k][next[k]++];
      ask(k, c);
      incoming[c].push_back(k);
    }
    bool any = false;
    for (const auto& in : incoming) any = any || !in.empty();
    if (!any) break;
    ++out.rounds;

    for (std::size_t c = 0; c < nc; ++c) {
      if (incoming[c].empty()) continue;
      std::vector<std::size_t> pool = out.held[c];
      pool.insert(pool.end(), incoming[c].begin(), incoming[c].end());
      std::sort(pool.begin(), pool.end(), [&](std::size_t a, std::size_t b) { return c_rank[c][a] < c_rank[c][b]; });
      std::vector<std::size_t> keep;
      double sum = 0.0;
      for (std::size_t k : pool) {
        if (saturation_criterion(sum, game.demand_bound[c])) {
          keep.push_back(k);
          sum += game.rate(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k));
          out.owner[k] = c;
        } else {
          out.owner[k].reset();
        }
      }
      std::sort(keep.begin(), keep.end());
      out.held[c] = std::move(keep);
    }
  }

  // Phase 2.
  for (std::size_t k = 0; k < nk; ++k) {
    if (out.owner[k]) continue;
    for (std::size_t c : k_prefs[k]) {
      if (!game.same_mno[c] || asked[k][c]) continue;
      if (!saturation_criterion(game.held_rate(c, out.held[c]), game.demand_bound[c])) continue;
      ask(k, c);
      out.owner[k] = c;
      out.held[c].insert(std::upper_bound(out.held[c].begin(), out.held[c].end(), k), k);
      ++out.phase_two_assignments;
      break;
    }
  }
  return out;
}

matching::Matching to_matching(const SubchannelGame& game, const SubchannelMatch& match) {
  auto m = matching::Matching::empty(game.subchannels(), std::vector<std::size_t>(game.children(), game.subchannels()));
  for (std::size_t k = 0; k < match.owner.size(); ++k)
    if (match.owner[k]) m.assign(k, *match.owner[k]);
  return m;
}

matching::RoomHook saturation_room(const SubchannelGame& game) {
  return [&game](matching::Agent c, std::span<const matching::Agent> held) {
    return saturation_criterion(game.held_rate(c, held), game.demand_bound.at(c));
  };
}

bool admissible_holding(const SubchannelGame& game, std::size_t child, std::span<const std::size_t> held) {
  if (held.empty()) return true;
  double least = std::numeric_limits<double>::infinity();
  for (std::size_t k : held)
    least = std::min(least, game.rate(static_cast<Eigen::Index>(child), static_cast<Eigen::Index>(k)));
  return saturation_criterion(game.held_rate(child, held) - least, game.demand_bound.at(child));
}

double planned_subchannel_rate(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch, NodeId tx,
                               NodeId rx, std::size_t k, std::span<const NodeId> interferers) {
  std::vector<NodeId> others;
  others.reserve(interferers.size());
  for (NodeId i : interferers)
    if (i != tx && i != rx) others.push_back(i);
  const double interference = expected_interference(topo, cfg, rx, others);
  return subchannel_rate(topo, cfg, ch, tx, rx, k, ch.state(tx, rx), interference);
}

SubchannelGame make_subchannel_game(const Topology& topo, const ChannelRealization& ch, const RadioConfig& cfg,
                                    const PricingConfig& pricing, NodeId anchor, std::span<const NodeId> children,
                                    double upstream_bps, std::span<const NodeId> interferers) {
  SubchannelGame game;
  const auto nc = static_cast<Eigen::Index>(children.size());
  const auto nk = static_cast<Eigen::Index>(cfg.subchannels);
  game.rate.resize(nc, nk);
  for (Eigen::Index c = 0; c < nc; ++c) {
    const NodeId child = children[static_cast<std::size_t>(c)];
    std::vector<NodeId> others;
    for (NodeId i : interferers)
      if (i != anchor && i != child) others.push_back(i);
    const double interference = expected_interference(topo, cfg, child, others);
    for (Eigen::Index k = 0; k < nk; ++k)
      game.rate(c, k) = subchannel_rate(topo, cfg, ch, anchor, child, static_cast<std::size_t>(k),
                                        ch.state(anchor, child), interference);
    const bool cross = topo.cross_mno(anchor, child);
    game.revenue.push_back(cross ? pricing.kappa_of(anchor) * pricing.price_of(anchor) : 0.0);
    game.same_mno.push_back(!cross);
    game.demand_bound.push_back(std::isinf(upstream_bps) ? upstream_bps
                                                         : upstream_bps / static_cast<double>(children.size() + 1));
  }
  return game;
}

AllocationResult::AllocationResult(std::size_t nodes)
    : subchannels(nodes),
      planned_link_bps(nodes, 0.0),
      planned_e2e_bps(nodes, 0.0),
      link_bps(nodes, 0.0),
      e2e_bps(nodes, 0.0) {
  if (nodes > 0) {
    planned_e2e_bps[0] = kInfiniteRate;
    e2e_bps[0] = kInfiniteRate;
  }
}

std::size_t AllocationResult::messages() const {
  std::size_t total = 0;
  for (const auto& a : anchors) total += a.match.messages;
  return total;
}

void allocate_stage(const Stage& stage, const FormationResult& formation, const Topology& topo,
                    const ChannelRealization& ch, const RadioConfig& cfg, const PricingConfig& pricing,
                    std::span<const NodeId> interferers, AllocationResult& out) {
  for (NodeId anchor : stage.anchors) {
    std::vector<NodeId> children;
    for (const Edge& e : formation.edges)
      if (e.parent == anchor && e.stage == stage.index) children.push_back(e.child);
    if (children.empty()) continue;
    std::sort(children.begin(), children.end());

    AnchorAllocation a;
    a.stage = stage.index;
    a.anchor = anchor;
    a.children = children;
    a.game = make_subchannel_game(topo, ch, cfg, pricing, anchor, children, out.planned_e2e_bps[anchor.value],
                                  interferers);
    a.match = allocate_subchannels(a.game);
    for (std::size_t c = 0; c < children.size(); ++c) {
      out.subchannels[children[c].value] = a.match.held[c];
      out.planned_link_bps[children[c].value] = a.game.held_rate(c, a.match.held[c]);
    }
    out.anchors.push_back(std::move(a));
  }
  out.planned_e2e_bps = end_to_end_rates(formation.parent, out.planned_link_bps);
}

std::vector<double> end_to_end_rates(std::span<const std::optional<NodeId>> parent, std::span<const double> link_bps) {
  std::vector<double> out(parent.size(), 0.0);
  if (!parent.empty()) out[0] = kInfiniteRate;
  for (std::size_t m = 1; m < parent.size(); ++m) {
    double bottleneck = kInfiniteRate;
    std::size_t hops = 0;
    std::optional<NodeId> cur = NodeId{m};
    while (cur && *cur != kMbs) {
      bottleneck = std::min(bottleneck, link_bps[cur->value]);
      cur = parent[cur->value];
      if (++hops > parent.size()) throw std::logic_error("parent pointers contain a cycle");
    }
    if (cur) out[m] = bottleneck / static_cast<double>(hops);
  }
  return out;
}

std::vector<double> realized_link_rates(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch,
                                        std::span<const std::optional<NodeId>> parent,
                                        std::span<const std::vector<std::size_t>> subchannels) {
  const std::size_t n = parent.size();
  std::vector<std::vector<NodeId>> on_channel(cfg.subchannels);
  for (std::size_t m = 0; m < n; ++m) {
    if (!parent[m]) continue;
    for (std::size_t k : subchannels[m]) {
      auto& tx = on_channel.at(k);
      if (std::find(tx.begin(), tx.end(), *parent[m]) == tx.end()) tx.push_back(*parent[m]);
    }
  }
  for (auto& tx : on_channel) std::sort(tx.begin(), tx.end());
  std::vector<double> out(n, 0.0);
  for (std::size_t m = 0; m < n; ++m) {
    if (!parent[m]) continue;
    const NodeId tx = *parent[m];
    const NodeId rx{m};
    for (std::size_t k : subchannels[m])
      out[m] += subchannel_rate(topo, cfg, ch, tx, rx, k, ch.state(tx, rx), on_channel[k]);
  }
  return out;
}

void finalize_rates(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch,
                    const FormationResult& formation, AllocationResult& alloc) {
  alloc.link_bps = realized_link_rates(topo, cfg, ch, formation.parent, alloc.subchannels);
  alloc.e2e_bps = end_to_end_rates(formation.parent, alloc.link_bps);
  alloc.below_min_rate.clear();
  for (std::size_t m = 1; m < alloc.e2e_bps.size(); ++m)
    if (formation.attached(NodeId{m}) && alloc.e2e_bps[m] < cfg.min_rate_bps) alloc.below_min_rate.push_back(NodeId{m});
}

}  // namespace mmbn
