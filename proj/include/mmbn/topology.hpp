#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "mmbn/types.hpp"

namespace mmbn {

struct TopologyParams {
  std::size_t num_sbs = 10;
  std::size_t num_mnos = 2;
  double area_radius_m = 400.0;  ///< SBSs are dropped inside this disk
  double comm_range_m = 200.0;   ///< link range d
};

/// Positions and ownership of the MBS (node 0, shared by all operators) and
/// the SBSs (nodes 1..M). Immutable once built.
class Topology {
 public:
  /// positions[0] must be the origin and owners[0] empty; every SBS needs an
  /// owner below num_mnos.
  Topology(std::vector<Eigen::Vector2d> positions, std::vector<std::optional<MnoId>> owners,
           std::size_t num_mnos, double area_radius_m, double comm_range_m);

  std::size_t node_count() const { return positions_.size(); }
  std::size_t sbs_count() const { return positions_.size() - 1; }
  std::size_t mno_count() const { return num_mnos_; }
  double area_radius() const { return area_radius_m_; }
  double comm_range() const { return comm_range_m_; }

  const Eigen::Vector2d& position(NodeId m) const;
  std::optional<MnoId> owner(NodeId m) const;
  double distance(NodeId a, NodeId b) const;

  /// Nodes within communication range of m (m itself excluded), ascending.
  const std::vector<NodeId>& comm_set(NodeId m) const;
  bool in_range(NodeId a, NodeId b) const;

  /// True when both nodes belong to the same operator. The MBS counts as
  /// belonging to every operator.
  bool same_mno(NodeId a, NodeId b) const;
  /// Inter-operator indicator: 1 when the two ends belong to different operators.
  bool cross_mno(NodeId a, NodeId b) const { return !same_mno(a, b); }

  std::vector<NodeId> sbs_of(MnoId n) const;
  std::vector<NodeId> sbs_nodes() const;

 private:
  void check(NodeId m) const;

  std::vector<Eigen::Vector2d> positions_;
  std::vector<std::optional<MnoId>> owners_;
  std::vector<std::vector<NodeId>> neighbors_;
  std::size_t num_mnos_;
  double area_radius_m_;
  double comm_range_m_;
};

/// Uniform drop of M SBSs on the disk; SBS i is owned by operator (i-1) mod N.
Topology generate_topology(std::uint64_t seed, const TopologyParams& params);

}  // namespace mmbn
