#include "mmbn/network.hpp"

#include <algorithm>
#include <sstream>

namespace mmbn {

std::vector<NodeId> attached_nodes(const FormationResult& formation) {
  std::vector<NodeId> out;
  for (std::size_t m = 0; m < formation.parent.size(); ++m)
    if (formation.attached(NodeId{m})) out.push_back(NodeId{m});
  return out;
}

BackhaulNetwork form_network(const Topology& topo, const ChannelRealization& ch, const RadioConfig& cfg,
                             const PricingConfig& pricing, const FormationOptions& options) {
  const std::size_t n = topo.node_count();
  pricing.validate(n);
  BackhaulNetwork net{FormationResult{}, AllocationResult(n)};
  auto& f = net.formation;
  f.parent.assign(n, std::nullopt);

  std::vector<bool> attached(n, false);
  attached[0] = true;
  std::optional<Stage> stage;
  if (Stage s = first_stage(topo); !s.demanders.empty()) stage = std::move(s);

  while (stage && stage->index <= topo.sbs_count()) {
    const auto interferers = attached_nodes(f);
    StageGame game = play_formation_stage(*stage, topo, ch, cfg, pricing, options, net.allocation.planned_e2e_bps,
                                          interferers);
    std::vector<NodeId> matched;
    for (std::size_t d = 0; d < game.demanders.size(); ++d) {
      if (!game.matching.partner[d]) continue;
      const NodeId child = game.demanders[d];
      const NodeId parent = game.anchors[*game.matching.partner[d]];
      f.parent[child.value] = parent;
      f.edges.push_back(Edge{parent, child, stage->index});
      matched.push_back(child);
    }
    f.stage_messages.push_back(game.proposals);
    f.stages.push_back(*stage);
    f.games.push_back(std::move(game));

    allocate_stage(*stage, f, topo, ch, cfg, pricing, interferers, net.allocation);

    for (NodeId m : matched) attached[m.value] = true;
    stage = build_next_stage(*stage, matched, topo, attached);
  }

  for (NodeId m : topo.sbs_nodes())
    if (!f.attached(m)) f.unmatched.push_back(m);
  finalize_rates(topo, cfg, ch, f, net.allocation);
  return net;
}

std::vector<std::string> structural_violations(const Topology& topo, const RadioConfig& cfg,
                                               const FormationOptions& options, const BackhaulNetwork& net) {
  std::vector<std::string> out;
  auto fail = [&](auto&&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    out.push_back(os.str());
  };
  const auto& f = net.formation;
  const auto& a = net.allocation;
  const std::size_t n = topo.node_count();
  if (f.parent.size() != n || a.subchannels.size() != n) {
    fail("result sized for ", f.parent.size(), " nodes, topology has ", n);
    return out;
  }
  if (f.parent[0]) fail("MBS has a parent");

  std::vector<std::size_t> fanout(n, 0);
  for (std::size_t m = 1; m < n; ++m) {
    if (!f.parent[m]) continue;
    const NodeId p = *f.parent[m];
    if (p.value >= n) {
      fail("node ", m, " has unknown parent ", p.value);
      continue;
    }
    if (!topo.in_range(p, NodeId{m})) fail("edge ", p.value, "->", m, " exceeds the link range");
    if (!options.cooperative && topo.cross_mno(p, NodeId{m})) fail("cross-operator edge ", p.value, "->", m);
    if (f.parent[p.value] == NodeId{m}) fail("anti-parallel edges between ", p.value, " and ", m);
    ++fanout[p.value];
    // Walk to the root; a cycle or a dangling chain is a violation.
    std::optional<NodeId> cur = p;
    std::size_t hops = 0;
    while (cur && *cur != kMbs && hops <= n) {
      cur = f.parent[cur->value];
      ++hops;
    }
    if (!cur || hops > n) fail("node ", m, " does not reach the MBS");
  }
  for (std::size_t m = 0; m < n; ++m)
    if (options.quota_of(NodeId{m}) != kUnbounded && fanout[m] > options.quota_of(NodeId{m}))
      fail("node ", m, " serves ", fanout[m], " children, quota ", options.quota_of(NodeId{m}));

  std::vector<std::size_t> seen_child(n, 0);
  for (const Edge& e : f.edges) {
    if (e.child.value >= n || f.parent[e.child.value] != e.parent) fail("edge ", e.parent.value, "->", e.child.value, " disagrees with parents");
    else if (++seen_child[e.child.value] > 1) fail("node ", e.child.value, " appears as a child twice");
    else if (f.depth(e.child) != e.stage) fail("edge into ", e.child.value, " at stage ", e.stage, " but depth ", f.depth(e.child));
  }
  std::size_t with_parent = 0;
  for (std::size_t m = 0; m < n; ++m) with_parent += f.parent[m] ? 1 : 0;
  if (with_parent != f.edges.size()) fail(with_parent, " parents but ", f.edges.size(), " edges");
  if (with_parent + f.unmatched.size() != topo.sbs_count()) fail("matched and unmatched SBSs do not cover the network");

  std::vector<std::size_t> anchor_stage(n, 0);
  for (const Stage& s : f.stages)
    for (NodeId m : s.anchors) {
      if (anchor_stage[m.value] != 0) fail("node ", m.value, " is an A-BS in two stages");
      anchor_stage[m.value] = s.index;
    }

  // Sub-channels: only on edges, indices in range, each used once per A-BS.
  std::vector<std::vector<std::size_t>> used(n, std::vector<std::size_t>(cfg.subchannels, 0));
  for (std::size_t m = 0; m < n; ++m) {
    if (a.subchannels[m].size() > cfg.subchannels) fail("node ", m, " holds more than K sub-channels");
    if (!a.subchannels[m].empty() && !f.parent[m]) fail("unattached node ", m, " holds sub-channels");
    for (std::size_t k : a.subchannels[m]) {
      if (k >= cfg.subchannels) {
        fail("node ", m, " holds sub-channel ", k, " outside the band");
        continue;
      }
      if (f.parent[m] && ++used[f.parent[m]->value][k] > 1)
        fail("sub-channel ", k, " of A-BS ", f.parent[m]->value, " given to two children");
    }
  }
  return out;
}

}  // namespace mmbn
