#pragma once

#include <string>
#include <vector>

#include "mmbn/allocation.hpp"
#include "mmbn/formation.hpp"

namespace mmbn {

struct BackhaulNetwork {
  FormationResult formation;
  AllocationResult allocation;
};

/// Stage-by-stage build-out: formation game, then the sub-channel game of
/// every A-BS, whose planning rates feed the next stage's utilities. Realized
/// rates are filled in at the end.
BackhaulNetwork form_network(const Topology& topo, const ChannelRealization& ch, const RadioConfig& cfg,
                             const PricingConfig& pricing, const FormationOptions& options = {});

/// Nodes attached before the current stage: the MBS plus every matched SBS.
std::vector<NodeId> attached_nodes(const FormationResult& formation);

/// Empty when the network is a forest rooted at the MBS that respects range,
/// quotas, single parents, stage order and per-A-BS sub-channel exclusivity.
std::vector<std::string> structural_violations(const Topology& topo, const RadioConfig& cfg,
                                               const FormationOptions& options, const BackhaulNetwork& net);

}  // namespace mmbn
