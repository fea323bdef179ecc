#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "mmbn/channel.hpp"
#include "mmbn/formation.hpp"
#include "mmbn/matching.hpp"
#include "mmbn/topology.hpp"

namespace mmbn {

/// Sub-channel game of one A-BS: its K sub-channels propose to its children.
/// Children are indexed 0..c-1 in ascending node order.
struct SubchannelGame {
  Eigen::MatrixXd rate;             ///< children x K rate r_m(k) in bit/s
  std::vector<double> revenue;      ///< kappa q 1_cross of the A-BS for each child
  std::vector<double> demand_bound; ///< the child stops wanting sub-channels once its sum reaches this
  std::vector<bool> same_mno;

  std::size_t children() const { return static_cast<std::size_t>(rate.rows()); }
  std::size_t subchannels() const { return static_cast<std::size_t>(rate.cols()); }
  double held_rate(std::size_t child, std::span<const std::size_t> held) const;
};

struct SubchannelMatch {
  std::vector<std::optional<std::size_t>> owner;  ///< sub-channel -> child
  std::vector<std::vector<std::size_t>> held;     ///< child -> sub-channels, ascending
  std::size_t messages = 0;                       ///< proposals over both phases
  std::size_t rounds = 0;
  std::size_t phase_two_assignments = 0;
  bool repeated_proposal = false;                 ///< some sub-channel asked the same child twice
};

/// True while the child still wants sub-channels: held sum < upstream / (fanout + 1).
bool saturation_criterion(double held_rate_bps, double upstream_bps, std::size_t fanout);
bool saturation_criterion(double held_rate_bps, double demand_bound_bps);

/// Child's utility for an unheld sub-channel: its rate while unsaturated, -inf otherwise.
double psi_utility(const SubchannelGame& game, std::size_t child, std::size_t k, std::span<const std::size_t> held);

/// Sub-channel's utility for a child: rate plus the A-BS revenue for a cross-operator child.
double phi_utility(const SubchannelGame& game, std::size_t k, std::size_t child);

/// Sub-channel preference (by phi) and child preference (by rate), ties by index.
matching::PreferenceProfile subchannel_preferences(const SubchannelGame& game);
matching::PreferenceProfile child_preferences(const SubchannelGame& game);

/// The many-to-one sub-channel allocation with peer effects.
///
/// Phase 1: every free sub-channel proposes to its best child not yet tried.
/// A child pools what it holds with the new proposals, and keeps them in
/// descending rate while its running sum is below its bound; the rest are
/// rejected, even ones it held before, and never come back. Phase 2 hands
/// every sub-channel still free, in ascending index, to its best same-operator
/// child that it has not asked yet and that is still below its bound.
SubchannelMatch allocate_subchannels(const SubchannelGame& game);

/// Express a sub-channel match as a generic matching (sub-channels propose,
/// children accept) with the saturation rule as room test, for stability checks.
matching::Matching to_matching(const SubchannelGame& game, const SubchannelMatch& match);
matching::RoomHook saturation_room(const SubchannelGame& game);

/// Children's holdings allowed by the saturation rule: empty, or still below
/// the bound before the least valuable sub-channel was added.
bool admissible_holding(const SubchannelGame& game, std::size_t child, std::span<const std::size_t> held);

/// Planning rate of sub-channel k on tx -> rx: realized link state, shadowing
/// and fading, with expected interference from `interferers` other than tx and rx.
double planned_subchannel_rate(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch, NodeId tx,
                               NodeId rx, std::size_t k, std::span<const NodeId> interferers);

/// Game of A-BS `anchor` with its children (ascending). `upstream_bps` is the
/// anchor's own end-to-end rate (infinite for the MBS).
SubchannelGame make_subchannel_game(const Topology& topo, const ChannelRealization& ch, const RadioConfig& cfg,
                                    const PricingConfig& pricing, NodeId anchor, std::span<const NodeId> children,
                                    double upstream_bps, std::span<const NodeId> interferers);

struct AnchorAllocation {
  std::size_t stage = 0;
  NodeId anchor;
  std::vector<NodeId> children;
  SubchannelGame game;
  SubchannelMatch match;
};

struct AllocationResult {
  std::vector<AnchorAllocation> anchors;
  std::vector<std::vector<std::size_t>> subchannels;  ///< per node: sub-channels on the link from its parent
  std::vector<double> planned_link_bps;
  std::vector<double> planned_e2e_bps;  ///< infinite for the MBS
  std::vector<double> link_bps;         ///< realized with the actual co-channel transmitters
  std::vector<double> e2e_bps;          ///< realized end-to-end, 0 when unattached
  std::vector<NodeId> below_min_rate;   ///< attached SBSs under the rate requirement

  explicit AllocationResult(std::size_t nodes = 0);
  std::size_t messages() const;
};

/// Runs the sub-channel game for every A-BS of a stage that got children, and
/// records holdings and planning rates of the new children in `out`.
/// `parent_e2e_bps` must already hold every anchor's planning end-to-end rate.
void allocate_stage(const Stage& stage, const FormationResult& formation, const Topology& topo,
                    const ChannelRealization& ch, const RadioConfig& cfg, const PricingConfig& pricing,
                    std::span<const NodeId> interferers, AllocationResult& out);

/// Decode-and-forward end-to-end rates: a node n hops deep gets the minimum
/// link rate along its path divided by n. The MBS gets +inf, unattached nodes 0.
std::vector<double> end_to_end_rates(std::span<const std::optional<NodeId>> parent, std::span<const double> link_bps);

/// Realized per-link rates: each assigned sub-channel sees every other node
/// transmitting on the same sub-channel index as interference.
std::vector<double> realized_link_rates(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch,
                                        std::span<const std::optional<NodeId>> parent,
                                        std::span<const std::vector<std::size_t>> subchannels);

/// Fills link_bps, e2e_bps and below_min_rate from the holdings.
void finalize_rates(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch,
                    const FormationResult& formation, AllocationResult& alloc);

}  // namespace mmbn
