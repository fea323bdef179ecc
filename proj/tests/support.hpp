#pragma once

// Hand-built networks for tests: exact positions, every link LoS with zero
// shadowing, unit fading and side-lobe interference gain.

#include <optional>
#include <utility>
#include <vector>

#include "mmbn/channel.hpp"
#include "mmbn/topology.hpp"

namespace testing {

struct Site {
  double x;
  double y;
  std::size_t mno;
};

inline mmbn::Topology make_topology(const std::vector<Site>& sbs, std::size_t mnos = 2, double range = 200.0,
                                    double radius = 400.0) {
  std::vector<Eigen::Vector2d> pos{Eigen::Vector2d::Zero()};
  std::vector<std::optional<mmbn::MnoId>> owners{std::nullopt};
  for (const auto& s : sbs) {
    pos.emplace_back(s.x, s.y);
    owners.emplace_back(mmbn::MnoId{s.mno});
  }
  return mmbn::Topology(std::move(pos), std::move(owners), mnos, radius, range);
}

inline mmbn::ChannelRealization flat_channel(const mmbn::Topology& topo, const mmbn::RadioConfig& cfg,
                                             mmbn::LinkState state = mmbn::LinkState::Los) {
  const std::size_t n = topo.node_count();
  mmbn::ChannelRealization ch(n, cfg.subchannels);
  const double side = cfg.antenna.side_lobe();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      ch.set_link(mmbn::NodeId{a}, mmbn::NodeId{b}, state, 0.0);
      ch.set_interference_gain(mmbn::NodeId{a}, mmbn::NodeId{b}, side * side);
    }
  return ch;
}

}  // namespace testing
