#include "mmbn/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mmbn/rng.hpp"

namespace mmbn {

double sum_rate(const AllocationResult& alloc) {
  double total = 0.0;
  for (std::size_t m = 1; m < alloc.e2e_bps.size(); ++m) total += alloc.e2e_bps[m];
  return total;
}

namespace {

/// Hop counts; nullopt for nodes that do not reach the MBS (unattached or cyclic).
std::vector<std::optional<std::size_t>> depths(const std::vector<std::optional<NodeId>>& parent) {
  const std::size_t n = parent.size();
  std::vector<std::optional<std::size_t>> out(n);
  if (n == 0) return out;
  out[0] = 0;
  for (std::size_t m = 1; m < n; ++m) {
    std::size_t hops = 0;
    std::optional<NodeId> cur = NodeId{m};
    while (cur && *cur != kMbs && hops <= n) {
      cur = parent[cur->value];
      ++hops;
    }
    if (cur && hops <= n) out[m] = hops;
  }
  return out;
}

std::vector<std::vector<NodeId>> children_of(const std::vector<std::optional<NodeId>>& parent) {
  std::vector<std::vector<NodeId>> out(parent.size());
  for (std::size_t m = 0; m < parent.size(); ++m)
    if (parent[m]) out[parent[m]->value].push_back(NodeId{m});
  return out;
}

/// Per-forest enumeration of sub-channel assignments.
class AllocationSearch {
 public:
  AllocationSearch(const Topology& topo, const ChannelRealization& ch, const RadioConfig& cfg,
                   const PricingConfig& pricing)
      : topo_(topo), ch_(ch), cfg_(cfg), pricing_(pricing) {}

  void run(const std::vector<std::optional<NodeId>>& parent) {
    parent_ = parent;
    const std::size_t n = parent.size();
    const auto depth = depths(parent);
    const auto kids = children_of(parent);

    // A-BSs with children, shallowest first, so upstream rates are known in time.
    anchors_.clear();
    for (std::size_t m = 0; m < n; ++m)
      if (depth[m] && !kids[m].empty()) anchors_.push_back(NodeId{m});
    std::stable_sort(anchors_.begin(), anchors_.end(),
                     [&](NodeId a, NodeId b) { return *depth[a.value] < *depth[b.value]; });

    games_.clear();
    children_.clear();
    for (NodeId a : anchors_) {
      std::vector<NodeId> interferers;
      for (std::size_t m = 0; m < n; ++m)
        if (depth[m] && *depth[m] <= *depth[a.value]) interferers.push_back(NodeId{m});
      children_.push_back(kids[a.value]);
      games_.push_back(make_subchannel_game(topo_, ch_, cfg_, pricing_, a, kids[a.value], kInfiniteRate, interferers));
    }
    held_.assign(n, {});
    planned_link_.assign(n, 0.0);
    anchor_step(0);
  }

  double best_sum = -1.0;
  std::vector<std::optional<NodeId>> best_parent;
  std::vector<std::vector<std::size_t>> best_held;
  std::size_t evaluated = 0;

 private:
  double planned_e2e(NodeId m) const {
    if (m == kMbs) return kInfiniteRate;
    double bottleneck = kInfiniteRate;
    std::size_t hops = 0;
    for (std::optional<NodeId> cur = m; cur && *cur != kMbs; cur = parent_[cur->value]) {
      bottleneck = std::min(bottleneck, planned_link_[cur->value]);
      ++hops;
    }
    return bottleneck / static_cast<double>(hops);
  }

  void anchor_step(std::size_t idx) {
    if (idx == anchors_.size()) {
      evaluate();
      return;
    }
    SubchannelGame& game = games_[idx];
    const double upstream = planned_e2e(anchors_[idx]);
    const std::size_t c = game.children();
    for (auto& b : game.demand_bound) b = std::isinf(upstream) ? upstream : upstream / static_cast<double>(c + 1);
    sums_.assign(c, 0.0);
    mins_.assign(c, kInfiniteRate);
    channel_step(idx, 0);
  }

  void channel_step(std::size_t idx, std::size_t k) {
    SubchannelGame& game = games_[idx];
    const auto& kids = children_[idx];
    if (k == game.subchannels()) {
      for (std::size_t c = 0; c < kids.size(); ++c) planned_link_[kids[c].value] = sums_[c];
      // Deeper games overwrite sums_/mins_, so keep ours.
      const auto sums = sums_;
      const auto mins = mins_;
      anchor_step(idx + 1);
      sums_ = sums;
      mins_ = mins;
      return;
    }
    channel_step(idx, k + 1);  // k stays unused
    for (std::size_t c = 0; c < kids.size(); ++c) {
      const double r = game.rate(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k));
      const double sum = sums_[c] + r;
      const double least = std::min(mins_[c], r);
      if (!saturation_criterion(sum - least, game.demand_bound[c])) continue;
      const double old_sum = sums_[c];
      const double old_min = mins_[c];
      sums_[c] = sum;
      mins_[c] = least;
      held_[kids[c].value].push_back(k);
      channel_step(idx, k + 1);
      held_[kids[c].value].pop_back();
      sums_[c] = old_sum;
      mins_[c] = old_min;
    }
  }

  void evaluate() {
    ++evaluated;
    const auto links = realized_link_rates(topo_, cfg_, ch_, parent_, held_);
    const auto e2e = end_to_end_rates(parent_, links);
    double total = 0.0;
    for (std::size_t m = 1; m < e2e.size(); ++m) total += e2e[m];
    if (total > best_sum) {
      best_sum = total;
      best_parent = parent_;
      best_held = held_;
    }
  }

  const Topology& topo_;
  const ChannelRealization& ch_;
  const RadioConfig& cfg_;
  const PricingConfig& pricing_;
  std::vector<std::optional<NodeId>> parent_;
  std::vector<NodeId> anchors_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<SubchannelGame> games_;
  std::vector<std::vector<std::size_t>> held_;
  std::vector<double> planned_link_;
  std::vector<double> sums_;
  std::vector<double> mins_;
};

/// Upper bound on the allocations of one forest: each sub-channel of an
/// A-BS with c children has c + 1 options.
double leaf_estimate(const std::vector<std::optional<NodeId>>& parent, std::size_t k) {
  double leaves = 1.0;
  for (const auto& kids : children_of(parent))
    if (!kids.empty()) leaves *= std::pow(static_cast<double>(kids.size() + 1), static_cast<double>(k));
  return leaves;
}

/// Every parent assignment that forms a forest rooted at the MBS.
void enumerate_forests(const Topology& topo, const FormationOptions& options, std::size_t m,
                       std::vector<std::optional<NodeId>>& parent, std::vector<std::size_t>& fanout,
                       const std::function<void(const std::vector<std::optional<NodeId>>&)>& visit) {
  if (m == topo.node_count()) {
    const auto depth = depths(parent);
    for (std::size_t i = 1; i < parent.size(); ++i)
      if (parent[i] && !depth[i]) return;
    visit(parent);
    return;
  }
  const NodeId node{m};
  parent[m].reset();
  enumerate_forests(topo, options, m + 1, parent, fanout, visit);
  for (NodeId p : topo.comm_set(node)) {
    if (!options.allows(topo, p, node)) continue;
    const std::size_t quota = options.quota_of(p);
    if (quota != kUnbounded && fanout[p.value] >= quota) continue;
    parent[m] = p;
    ++fanout[p.value];
    enumerate_forests(topo, options, m + 1, parent, fanout, visit);
    --fanout[p.value];
  }
  parent[m].reset();
}

void check_size(const Topology& topo, const RadioConfig& cfg, const ExhaustiveLimits& limits, double estimate) {
  std::ostringstream os;
  if (topo.sbs_count() > limits.max_sbs || cfg.subchannels > limits.max_subchannels) {
    os << "exhaustive search limited to " << limits.max_sbs << " SBSs and " << limits.max_subchannels
       << " sub-channels, got " << topo.sbs_count() << " and " << cfg.subchannels << " (about " << estimate
       << " allocations)";
    throw InstanceTooLarge(os.str(), estimate);
  }
  if (estimate > limits.max_leaves) {
    os << "exhaustive search would evaluate about " << estimate << " allocations, limit " << limits.max_leaves;
    throw InstanceTooLarge(os.str(), estimate);
  }
}

OptimalResult finish(const Topology& topo, const ChannelRealization& ch, const RadioConfig& cfg,
                     const PricingConfig& pricing, AllocationSearch& search, std::size_t formations) {
  OptimalResult out{assemble_network(topo, ch, cfg, pricing, search.best_parent, search.best_held), 0.0, formations,
                    search.evaluated};
  out.sum_rate_bps = sum_rate(out.network.allocation);
  return out;
}

}  // namespace

BackhaulNetwork assemble_network(const Topology& topo, const ChannelRealization& ch, const RadioConfig& cfg,
                                 const PricingConfig& pricing, std::vector<std::optional<NodeId>> parent,
                                 std::vector<std::vector<std::size_t>> subchannels) {
  const std::size_t n = topo.node_count();
  BackhaulNetwork net{FormationResult{}, AllocationResult(n)};
  auto& f = net.formation;
  auto& a = net.allocation;
  f.parent = std::move(parent);
  const auto depth = depths(f.parent);
  std::size_t max_depth = 0;
  for (std::size_t m = 1; m < n; ++m) {
    if (!f.parent[m]) continue;
    if (!depth[m]) throw std::invalid_argument("parent pointers do not form a forest rooted at the MBS");
    max_depth = std::max(max_depth, *depth[m]);
  }

  for (std::size_t j = 1; j <= max_depth; ++j) {
    Stage s;
    s.index = j;
    for (std::size_t m = 0; m < n; ++m) {
      if (depth[m] && *depth[m] == j - 1) s.anchors.push_back(NodeId{m});
      if (depth[m] && *depth[m] == j) {
        s.demanders.push_back(NodeId{m});
        f.edges.push_back(Edge{*f.parent[m], NodeId{m}, j});
      }
    }
    f.stages.push_back(s);
    f.stage_messages.push_back(0);

    std::vector<NodeId> interferers;
    for (std::size_t m = 0; m < n; ++m)
      if (depth[m] && *depth[m] < j) interferers.push_back(NodeId{m});
    for (NodeId anchor : s.anchors) {
      std::vector<NodeId> kids;
      for (NodeId d : s.demanders)
        if (f.parent[d.value] == anchor) kids.push_back(d);
      if (kids.empty()) continue;
      AnchorAllocation aa;
      aa.stage = j;
      aa.anchor = anchor;
      aa.children = kids;
      aa.game = make_subchannel_game(topo, ch, cfg, pricing, anchor, kids, a.planned_e2e_bps[anchor.value], interferers);
      aa.match.owner.assign(cfg.subchannels, std::nullopt);
      aa.match.held.assign(kids.size(), {});
      for (std::size_t c = 0; c < kids.size(); ++c) {
        auto held = subchannels.at(kids[c].value);
        std::sort(held.begin(), held.end());
        for (std::size_t k : held) aa.match.owner.at(k) = c;
        aa.match.held[c] = held;
        a.subchannels[kids[c].value] = held;
        a.planned_link_bps[kids[c].value] = aa.game.held_rate(c, held);
      }
      a.anchors.push_back(std::move(aa));
    }
    a.planned_e2e_bps = end_to_end_rates(f.parent, a.planned_link_bps);
  }

  for (NodeId m : topo.sbs_nodes())
    if (!f.parent[m.value]) f.unmatched.push_back(m);
  finalize_rates(topo, cfg, ch, f, a);
  return net;
}

OptimalResult exhaustive_optimal(const Topology& topo, const ChannelRealization& ch, const RadioConfig& cfg,
                                 const PricingConfig& pricing, const FormationOptions& options,
                                 const ExhaustiveLimits& limits) {
  const std::size_t n = topo.node_count();
  if (topo.sbs_count() > limits.max_sbs || cfg.subchannels > limits.max_subchannels) {
    double forests = 1.0;
    for (std::size_t m = 1; m < n; ++m) forests *= static_cast<double>(topo.comm_set(NodeId{m}).size() + 1);
    check_size(topo, cfg, limits, forests * std::pow(static_cast<double>(n), static_cast<double>(cfg.subchannels)));
  }

  std::vector<std::optional<NodeId>> parent(n);
  std::vector<std::size_t> fanout(n, 0);
  double estimate = 0.0;
  std::size_t forests = 0;
  enumerate_forests(topo, options, 1, parent, fanout, [&](const auto& p) {
    estimate += leaf_estimate(p, cfg.subchannels);
    ++forests;
  });
  check_size(topo, cfg, limits, estimate);

  AllocationSearch search(topo, ch, cfg, pricing);
  enumerate_forests(topo, options, 1, parent, fanout, [&](const auto& p) { search.run(p); });
  return finish(topo, ch, cfg, pricing, search, forests);
}

OptimalResult optimal_allocation(const Topology& topo, const ChannelRealization& ch, const RadioConfig& cfg,
                                 const PricingConfig& pricing, const std::vector<std::optional<NodeId>>& parent,
                                 const ExhaustiveLimits& limits) {
  if (parent.size() != topo.node_count()) throw std::invalid_argument("parent vector does not match the topology");
  check_size(topo, cfg, limits, leaf_estimate(parent, cfg.subchannels));
  AllocationSearch search(topo, ch, cfg, pricing);
  search.run(parent);
  return finish(topo, ch, cfg, pricing, search, 1);
}

BackhaulNetwork random_baseline(const Topology& topo, const ChannelRealization& ch, const RadioConfig& cfg,
                                const PricingConfig& pricing, std::uint64_t seed, const FormationOptions& options) {
  Rng rng(seed, streams::kRandomBaseline);
  const std::size_t n = topo.node_count();
  std::vector<std::optional<NodeId>> parent(n);
  std::vector<std::vector<std::size_t>> held(n);
  std::vector<double> planned_link(n, 0.0);
  std::vector<double> planned_e2e = end_to_end_rates(parent, planned_link);
  std::vector<bool> attached(n, false);
  attached[0] = true;

  auto shuffle = [&](auto& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.index(i)]);
  };

  std::vector<NodeId> anchors{kMbs};
  for (std::size_t stage = 1; !anchors.empty() && stage <= topo.sbs_count(); ++stage) {
    std::vector<NodeId> interferers;
    for (std::size_t m = 0; m < n; ++m)
      if (attached[m]) interferers.push_back(NodeId{m});

    std::vector<NodeId> demanders;
    for (std::size_t m = 1; m < n; ++m) {
      if (attached[m]) continue;
      for (NodeId a : anchors)
        if (topo.in_range(a, NodeId{m})) {
          demanders.push_back(NodeId{m});
          break;
        }
    }
    if (demanders.empty()) break;
    shuffle(demanders);

    std::vector<std::size_t> fanout(n, 0);
    std::vector<std::vector<NodeId>> kids(n);
    for (NodeId d : demanders) {
      std::vector<NodeId> options_left;
      for (NodeId a : anchors) {
        const std::size_t quota = options.quota_of(a);
        if (topo.in_range(a, d) && options.allows(topo, a, d) && (quota == kUnbounded || fanout[a.value] < quota))
          options_left.push_back(a);
      }
      if (options_left.empty()) continue;
      const NodeId a = options_left[rng.index(options_left.size())];
      parent[d.value] = a;
      ++fanout[a.value];
      kids[a.value].push_back(d);
    }

    std::vector<NodeId> matched;
    for (NodeId a : anchors) {
      auto& children = kids[a.value];
      if (children.empty()) continue;
      std::sort(children.begin(), children.end());
      matched.insert(matched.end(), children.begin(), children.end());
      const auto game =
          make_subchannel_game(topo, ch, cfg, pricing, a, children, planned_e2e[a.value], interferers);
      std::vector<std::size_t> order(cfg.subchannels);
      for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
      shuffle(order);
      std::vector<std::vector<std::size_t>> local(children.size());
      for (std::size_t k : order) {
        std::vector<std::size_t> hungry;
        for (std::size_t c = 0; c < children.size(); ++c)
          if (saturation_criterion(game.held_rate(c, local[c]), game.demand_bound[c])) hungry.push_back(c);
        if (hungry.empty()) break;
        local[hungry[rng.index(hungry.size())]].push_back(k);
      }
      for (std::size_t c = 0; c < children.size(); ++c) {
        std::sort(local[c].begin(), local[c].end());
        planned_link[children[c].value] = game.held_rate(c, local[c]);
        held[children[c].value] = std::move(local[c]);
      }
    }
    planned_e2e = end_to_end_rates(parent, planned_link);
    std::sort(matched.begin(), matched.end());
    for (NodeId m : matched) attached[m.value] = true;
    anchors = std::move(matched);
  }
  return assemble_network(topo, ch, cfg, pricing, std::move(parent), std::move(held));
}

BackhaulNetwork non_cooperative(const Topology& topo, const ChannelRealization& ch, const RadioConfig& cfg,
                                const PricingConfig& pricing, FormationOptions options) {
  options.cooperative = false;
  return form_network(topo, ch, cfg, pricing, options);
}

}  // namespace mmbn
