#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mmbn/channel.hpp"
#include "mmbn/matching.hpp"
#include "mmbn/topology.hpp"

namespace mmbn {

/// Per-node sub-channel price q and cost weight kappa (bit/s per currency unit).
struct PricingConfig {
  std::vector<double> price;
  std::vector<double> kappa;

  static PricingConfig uniform(std::size_t nodes, double price = 1.0, double kappa = 0.0);
  double price_of(NodeId m) const { return price.at(m.value); }
  double kappa_of(NodeId m) const { return kappa.at(m.value); }
  void validate(std::size_t nodes) const;
};

struct FormationOptions {
  std::size_t sbs_quota = 5;
  std::size_t mbs_quota = kUnbounded;
  /// When false, SBSs of different operators never link (the MBS still serves everyone).
  bool cooperative = true;

  std::size_t quota_of(NodeId m) const { return m == kMbs ? mbs_quota : sbs_quota; }
  bool allows(const Topology& topo, NodeId a, NodeId b) const { return cooperative || topo.same_mno(a, b); }
};

/// Hop level j of the build-out: A-BSs that transmit and D-BSs that want a parent.
struct Stage {
  std::size_t index = 1;
  std::vector<NodeId> anchors;
  std::vector<NodeId> demanders;
};

/// The formation game of one stage exactly as it was played. D-BSs are the
/// proposers, A-BSs the acceptors; indices refer to the two node lists.
struct StageGame {
  std::vector<NodeId> demanders;
  std::vector<NodeId> anchors;
  matching::PreferenceProfile demander_prefs;
  matching::PreferenceProfile anchor_prefs;
  std::vector<std::size_t> quotas;
  matching::Matching matching;
  std::size_t proposals = 0;
};

struct Edge {
  NodeId parent;
  NodeId child;
  std::size_t stage = 0;

  bool operator==(const Edge&) const = default;
};

struct FormationResult {
  std::vector<Stage> stages;
  std::vector<StageGame> games;  ///< one per stage; empty for schemes that do not play the game
  std::vector<Edge> edges;
  std::vector<NodeId> unmatched;
  std::vector<std::size_t> stage_messages;
  std::vector<std::optional<NodeId>> parent;  ///< per node; empty for the MBS and unmatched SBSs

  std::vector<NodeId> children(NodeId m) const;
  std::size_t depth(NodeId m) const;  ///< hop count to the MBS; 0 for the MBS and unmatched SBSs
  bool attached(NodeId m) const { return m == kMbs || parent.at(m.value).has_value(); }
  std::size_t total_messages() const;
};

/// Stage 1: the MBS serves every SBS in its range.
Stage first_stage(const Topology& topo);

/// Next stage: the newly matched D-BSs become A-BSs, and every node in their
/// range that is not yet attached becomes a D-BS (rejected D-BSs stay
/// eligible). Returns nothing when no D-BS is left.
std::optional<Stage> build_next_stage(const Stage& prev, std::span<const NodeId> newly_matched, const Topology& topo,
                                      const std::vector<bool>& attached);

/// D-BS utility for an A-BS: min(average rate, upstream rate) minus the
/// weighted price when the two belong to different operators. Empty when the
/// value is not positive, i.e. the A-BS is unacceptable.
std::optional<double> utility_dbs(NodeId dbs, NodeId abs, double upstream_bps, double average_rate_bps,
                                  const PricingConfig& pricing, const Topology& topo);

/// A-BS utility for a D-BS: average rate plus the weighted revenue for serving
/// another operator's SBS.
double utility_abs(NodeId abs, NodeId dbs, double average_rate_bps, const PricingConfig& pricing,
                   const Topology& topo);

/// Builds both sides' preferences for one stage and runs deferred acceptance
/// with D-BSs proposing. `upstream_bps` holds the end-to-end rate of every
/// attached node (infinite for the MBS); `interferers` are the A-BSs of this
/// and earlier stages.
StageGame play_formation_stage(const Stage& stage, const Topology& topo, const ChannelRealization& ch,
                               const RadioConfig& cfg, const PricingConfig& pricing, const FormationOptions& options,
                               std::span<const double> upstream_bps, std::span<const NodeId> interferers);

/// Formation-time rate estimate of link abs -> dbs: full band, state-averaged,
/// expected interference from `interferers` other than abs.
double formation_rate_estimate(const Topology& topo, const ChannelRealization& ch, const RadioConfig& cfg, NodeId abs,
                               NodeId dbs, std::span<const NodeId> interferers);

}  // namespace mmbn
