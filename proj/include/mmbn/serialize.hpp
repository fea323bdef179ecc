#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmbn/network.hpp"

namespace mmbn {

/// Shortest round-trip decimal form; "inf" for infinity.
std::string format_double(double v);

/// {"num_mnos", "area_radius_m", "comm_range_m", "nodes": [{"id", "x", "y", "owner"}]},
/// owner null for the MBS.
nlohmann::json topology_to_json(const Topology& topo);
Topology topology_from_json(const nlohmann::json& doc);

/// Per-pair records {i, j, los, shadow_z, chi_db} and per (tx, rx) fading
/// and interference gain.
nlohmann::json channel_to_json(const ChannelRealization& ch, const RadioConfig& cfg);

/// {"edges": [{"parent", "child", "stage"}], "unmatched": [...], "stage_messages": [...],
///  "stages": [{"index", "anchors", "demanders"}]}
nlohmann::json formation_to_json(const FormationResult& f);

struct AllocationRow {
  std::size_t stage = 0;
  std::size_t a_bs = 0;
  std::size_t d_bs = 0;
  std::size_t sub_channel = 0;
  double rate_bps = 0.0;  ///< realized rate of that sub-channel
};

std::vector<AllocationRow> allocation_rows(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch,
                                           const BackhaulNetwork& net);

/// Header `stage,a_bs,d_bs,sub_channel,rate_bps` then one row per assignment.
void write_allocation_csv(std::ostream& os, const std::vector<AllocationRow>& rows);

}  // namespace mmbn
