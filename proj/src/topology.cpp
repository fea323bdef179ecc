#include "mmbn/topology.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mmbn/rng.hpp"

namespace mmbn {

Topology::Topology(std::vector<Eigen::Vector2d> positions, std::vector<std::optional<MnoId>> owners,
                   std::size_t num_mnos, double area_radius_m, double comm_range_m)
    : positions_(std::move(positions)),
      owners_(std::move(owners)),
      num_mnos_(num_mnos),
      area_radius_m_(area_radius_m),
      comm_range_m_(comm_range_m) {
  if (positions_.size() < 2) throw ConfigError("topology needs at least one SBS");
  if (owners_.size() != positions_.size()) throw ConfigError("owner list does not match node count");
  if (num_mnos_ < 1) throw ConfigError("at least one MNO is required");
  if (!(area_radius_m_ > 0.0) || !(comm_range_m_ > 0.0)) throw ConfigError("radii must be positive");
  if (positions_[0] != Eigen::Vector2d::Zero()) throw ConfigError("MBS must sit at the origin");
  if (owners_[0].has_value()) throw ConfigError("MBS is shared and has no owner");
  for (std::size_t i = 1; i < positions_.size(); ++i) {
    if (!owners_[i] || owners_[i]->value >= num_mnos_)
      throw ConfigError("SBS " + std::to_string(i) + " has no valid owner");
    // Small tolerance for positions that went through a text round trip.
    if (positions_[i].norm() > area_radius_m_ * (1.0 + 1e-12))
      throw ConfigError("SBS " + std::to_string(i) + " lies outside the deployment disk");
  }

  neighbors_.resize(positions_.size());
  for (std::size_t a = 0; a < positions_.size(); ++a)
    for (std::size_t b = 0; b < positions_.size(); ++b)
      if (a != b && (positions_[a] - positions_[b]).norm() <= comm_range_m_) neighbors_[a].push_back(NodeId{b});
}

void Topology::check(NodeId m) const {
  if (m.value >= positions_.size()) throw LookupError("unknown node " + std::to_string(m.value));
}

const Eigen::Vector2d& Topology::position(NodeId m) const {
  check(m);
  return positions_[m.value];
}

std::optional<MnoId> Topology::owner(NodeId m) const {
  check(m);
  return owners_[m.value];
}

double Topology::distance(NodeId a, NodeId b) const { return (position(a) - position(b)).norm(); }

const std::vector<NodeId>& Topology::comm_set(NodeId m) const {
  check(m);
  return neighbors_[m.value];
}

bool Topology::in_range(NodeId a, NodeId b) const { return a != b && distance(a, b) <= comm_range_m_; }

bool Topology::same_mno(NodeId a, NodeId b) const {
  check(a);
  check(b);
  if (a == kMbs || b == kMbs) return true;
  return owners_[a.value] == owners_[b.value];
}

std::vector<NodeId> Topology::sbs_of(MnoId n) const {
  std::vector<NodeId> out;
  for (std::size_t i = 1; i < owners_.size(); ++i)
    if (owners_[i] == n) out.push_back(NodeId{i});
  return out;
}

std::vector<NodeId> Topology::sbs_nodes() const {
  std::vector<NodeId> out;
  for (std::size_t i = 1; i < positions_.size(); ++i) out.push_back(NodeId{i});
  return out;
}

Topology generate_topology(std::uint64_t seed, const TopologyParams& params) {
  if (params.num_sbs < 1) throw ConfigError("num_sbs must be at least 1");
  if (params.num_mnos < 1) throw ConfigError("num_mnos must be at least 1");
  if (!(params.area_radius_m > 0.0)) throw ConfigError("area_radius_m must be positive");
  if (!(params.comm_range_m > 0.0)) throw ConfigError("comm_range_m must be positive");

  Rng rng(seed, streams::kTopology);
  std::vector<Eigen::Vector2d> positions{Eigen::Vector2d::Zero()};
  std::vector<std::optional<MnoId>> owners{std::nullopt};
  for (std::size_t i = 1; i <= params.num_sbs; ++i) {
    const double radius = params.area_radius_m * std::sqrt(rng.uniform());
    const double angle = 2.0 * std::numbers::pi * rng.uniform();
    positions.emplace_back(radius * std::cos(angle), radius * std::sin(angle));
    owners.emplace_back(MnoId{(i - 1) % params.num_mnos});
  }
  return Topology(std::move(positions), std::move(owners), params.num_mnos, params.area_radius_m,
                  params.comm_range_m);
}

}  // namespace mmbn
