#include "mmbn/formation.hpp"

#include <algorithm>
#include <cmath>

namespace mmbn {

PricingConfig PricingConfig::uniform(std::size_t nodes, double price, double kappa) {
  return PricingConfig{std::vector<double>(nodes, price), std::vector<double>(nodes, kappa)};
}

void PricingConfig::validate(std::size_t nodes) const {
  if (price.size() != nodes || kappa.size() != nodes) throw ConfigError("pricing must cover every node");
  for (std::size_t i = 0; i < nodes; ++i)
    if (price[i] < 0.0 || kappa[i] < 0.0) throw ConfigError("prices and kappa must be non-negative");
}

std::vector<NodeId> FormationResult::children(NodeId m) const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < parent.size(); ++i)
    if (parent[i] == m) out.push_back(NodeId{i});
  return out;
}

std::size_t FormationResult::depth(NodeId m) const {
  std::size_t d = 0;
  auto cur = parent.at(m.value);
  while (cur) {
    ++d;
    if (d > parent.size()) throw std::logic_error("parent pointers contain a cycle");
    cur = parent[cur->value];
  }
  return d;
}

std::size_t FormationResult::total_messages() const {
  std::size_t total = 0;
  for (auto n : stage_messages) total += n;
  return total;
}

Stage first_stage(const Topology& topo) {
  const auto& reach = topo.comm_set(kMbs);
  return Stage{1, {kMbs}, {reach.begin(), reach.end()}};
}

std::optional<Stage> build_next_stage(const Stage& prev, std::span<const NodeId> newly_matched, const Topology& topo,
                                      const std::vector<bool>& attached) {
  Stage next;
  next.index = prev.index + 1;
  next.anchors.assign(newly_matched.begin(), newly_matched.end());
  std::sort(next.anchors.begin(), next.anchors.end());

  std::vector<bool> seen(topo.node_count(), false);
  for (NodeId a : next.anchors)
    for (NodeId m : topo.comm_set(a))
      if (!attached[m.value] && !seen[m.value]) {
        seen[m.value] = true;
        next.demanders.push_back(m);
      }
  if (next.anchors.empty() || next.demanders.empty()) return std::nullopt;
  std::sort(next.demanders.begin(), next.demanders.end());
  return next;
}

std::optional<double> utility_dbs(NodeId dbs, NodeId abs, double upstream_bps, double average_rate_bps,
                                  const PricingConfig& pricing, const Topology& topo) {
  const double cost = topo.cross_mno(dbs, abs) ? pricing.kappa_of(dbs) * pricing.price_of(abs) : 0.0;
  const double u = std::min(average_rate_bps, upstream_bps) - cost;
  if (!(u > 0.0)) return std::nullopt;
  return u;
}

double utility_abs(NodeId abs, NodeId dbs, double average_rate_bps, const PricingConfig& pricing,
                   const Topology& topo) {
  const double revenue = topo.cross_mno(dbs, abs) ? pricing.kappa_of(abs) * pricing.price_of(abs) : 0.0;
  return average_rate_bps + revenue;
}

double formation_rate_estimate(const Topology& topo, const ChannelRealization& ch, const RadioConfig& cfg, NodeId abs,
                               NodeId dbs, std::span<const NodeId> interferers) {
  std::vector<NodeId> others;
  others.reserve(interferers.size());
  for (NodeId i : interferers)
    if (i != abs && i != dbs) others.push_back(i);
  const double interference = expected_interference(topo, cfg, dbs, others);
  return full_band_average_rate(topo, cfg, ch, abs, dbs, interference);
}

StageGame play_formation_stage(const Stage& stage, const Topology& topo, const ChannelRealization& ch,
                               const RadioConfig& cfg, const PricingConfig& pricing, const FormationOptions& options,
                               std::span<const double> upstream_bps, std::span<const NodeId> interferers) {
  StageGame game;
  game.demanders = stage.demanders;
  game.anchors = stage.anchors;
  const std::size_t nd = game.demanders.size();
  const std::size_t na = game.anchors.size();

  // Rate estimate per (anchor, demander) pair that may link at all.
  std::vector<std::vector<std::optional<double>>> rate(na, std::vector<std::optional<double>>(nd));
  for (std::size_t a = 0; a < na; ++a)
    for (std::size_t d = 0; d < nd; ++d) {
      const NodeId abs = game.anchors[a];
      const NodeId dbs = game.demanders[d];
      if (topo.in_range(abs, dbs) && options.allows(topo, abs, dbs))
        rate[a][d] = formation_rate_estimate(topo, ch, cfg, abs, dbs, interferers);
    }

  game.demander_prefs.resize(nd);
  for (std::size_t d = 0; d < nd; ++d) {
    std::vector<matching::Agent> acceptable;
    std::vector<double> utility(na, 0.0);
    for (std::size_t a = 0; a < na; ++a) {
      if (!rate[a][d]) continue;
      const NodeId abs = game.anchors[a];
      if (auto u = utility_dbs(game.demanders[d], abs, upstream_bps[abs.value], *rate[a][d], pricing, topo)) {
        acceptable.push_back(a);
        utility[a] = *u;
      }
    }
    game.demander_prefs[d] = matching::order_by_utility(acceptable, [&](matching::Agent a) { return utility[a]; });
  }

  game.anchor_prefs.resize(na);
  game.quotas.resize(na);
  for (std::size_t a = 0; a < na; ++a) {
    std::vector<matching::Agent> listed;
    std::vector<double> utility(nd, 0.0);
    for (std::size_t d = 0; d < nd; ++d) {
      if (!rate[a][d]) continue;
      listed.push_back(d);
      utility[d] = utility_abs(game.anchors[a], game.demanders[d], *rate[a][d], pricing, topo);
    }
    game.anchor_prefs[a] = matching::order_by_utility(listed, [&](matching::Agent d) { return utility[d]; });
    game.quotas[a] = options.quota_of(game.anchors[a]);
  }

  auto da = matching::deferred_acceptance(game.demander_prefs, game.anchor_prefs, game.quotas);
  game.matching = std::move(da.matching);
  game.proposals = da.proposals;
  return game;
}

}  // namespace mmbn
