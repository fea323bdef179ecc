#pragma once

#include <cstdint>
#include <stdexcept>

#include "mmbn/network.hpp"

namespace mmbn {

struct ExhaustiveLimits {
  std::size_t max_sbs = 8;
  std::size_t max_subchannels = 5;
  double max_leaves = 2e8;  ///< estimated allocations to evaluate
};

class InstanceTooLarge : public std::runtime_error {
 public:
  InstanceTooLarge(const std::string& what, double estimate) : std::runtime_error(what), estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

struct OptimalResult {
  BackhaulNetwork network;
  double sum_rate_bps = 0.0;
  std::size_t formations = 0;   ///< forests examined
  std::size_t allocations = 0;  ///< complete allocations evaluated
};

/// Sum of realized end-to-end SBS rates.
double sum_rate(const AllocationResult& alloc);

/// Rebuilds a full network record (stages, edges, per-A-BS games, planning
/// and realized rates) from parent pointers and sub-channel holdings.
BackhaulNetwork assemble_network(const Topology& topo, const ChannelRealization& ch, const RadioConfig& cfg,
                                 const PricingConfig& pricing, std::vector<std::optional<NodeId>> parent,
                                 std::vector<std::vector<std::size_t>> subchannels);

/// Best realized sum rate over every forest rooted at the MBS (range, quota,
/// operator rule from `options`) and every sub-channel assignment each child
/// may hold under the saturation rule. Throws InstanceTooLarge beyond `limits`.
OptimalResult exhaustive_optimal(const Topology& topo, const ChannelRealization& ch, const RadioConfig& cfg,
                                 const PricingConfig& pricing, const FormationOptions& options = {},
                                 const ExhaustiveLimits& limits = {});

/// Same search with the forest fixed, over sub-channel assignments only.
OptimalResult optimal_allocation(const Topology& topo, const ChannelRealization& ch, const RadioConfig& cfg,
                                 const PricingConfig& pricing, const std::vector<std::optional<NodeId>>& parent,
                                 const ExhaustiveLimits& limits = {});

/// Stage by stage, every D-BS picks a uniformly random in-range A-BS with
/// quota left; each A-BS then hands its sub-channels, in random order, to a
/// uniformly random child that still wants more.
BackhaulNetwork random_baseline(const Topology& topo, const ChannelRealization& ch, const RadioConfig& cfg,
                                const PricingConfig& pricing, std::uint64_t seed, const FormationOptions& options = {});

/// The matching pipeline with operators refusing to serve each other.
BackhaulNetwork non_cooperative(const Topology& topo, const ChannelRealization& ch, const RadioConfig& cfg,
                                const PricingConfig& pricing, FormationOptions options = {});

}  // namespace mmbn
