#include "mmbn/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace mmbn {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

nlohmann::json topology_to_json(const Topology& topo) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t m = 0; m < topo.node_count(); ++m) {
    const NodeId id{m};
    const auto& p = topo.position(id);
    nlohmann::json owner = nullptr;
    if (auto o = topo.owner(id)) owner = o->value;
    nodes.push_back({{"id", m}, {"x", p.x()}, {"y", p.y()}, {"owner", owner}});
  }
  return {{"num_mnos", topo.mno_count()},
          {"area_radius_m", topo.area_radius()},
          {"comm_range_m", topo.comm_range()},
          {"nodes", nodes}};
}

Topology topology_from_json(const nlohmann::json& doc) {
  try {
    const auto& nodes = doc.at("nodes");
    std::vector<Eigen::Vector2d> positions(nodes.size());
    std::vector<std::optional<MnoId>> owners(nodes.size());
    std::vector<bool> seen(nodes.size(), false);
    for (const auto& n : nodes) {
      const auto id = n.at("id").get<std::size_t>();
      if (id >= nodes.size() || seen[id]) throw ConfigError("node ids must be 0..n-1 without repeats");
      seen[id] = true;
      positions[id] = {n.at("x").get<double>(), n.at("y").get<double>()};
      if (!n.at("owner").is_null()) owners[id] = MnoId{n.at("owner").get<std::size_t>()};
    }
    return Topology(std::move(positions), std::move(owners), doc.at("num_mnos").get<std::size_t>(),
                    doc.at("area_radius_m").get<double>(), doc.at("comm_range_m").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad topology document: ") + e.what());
  }
}

nlohmann::json channel_to_json(const ChannelRealization& ch, const RadioConfig& cfg) {
  nlohmann::json pairs = nlohmann::json::array();
  nlohmann::json links = nlohmann::json::array();
  const std::size_t n = ch.node_count();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const NodeId a{i}, b{j};
      const LinkState s = ch.state(a, b);
      pairs.push_back({{"i", i},
                       {"j", j},
                       {"los", s == LinkState::Los},
                       {"shadow_z", ch.shadow_z(a, b)},
                       {"chi_db", ch.shadowing_db(a, b, cfg.path_loss, s)}});
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      std::vector<double> fading;
      for (std::size_t k = 0; k < ch.subchannel_count(); ++k) fading.push_back(ch.fading(NodeId{i}, NodeId{j}, k));
      links.push_back({{"tx", i}, {"rx", j}, {"psi", ch.interference_gain(NodeId{i}, NodeId{j})}, {"fading", fading}});
    }
  return {{"nodes", n}, {"subchannels", ch.subchannel_count()}, {"pairs", pairs}, {"links", links}};
}

nlohmann::json formation_to_json(const FormationResult& f) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : f.edges) edges.push_back({{"parent", e.parent.value}, {"child", e.child.value}, {"stage", e.stage}});
  nlohmann::json unmatched = nlohmann::json::array();
  for (NodeId m : f.unmatched) unmatched.push_back(m.value);
  nlohmann::json stages = nlohmann::json::array();
  for (const Stage& s : f.stages) {
    nlohmann::json anchors = nlohmann::json::array(), demanders = nlohmann::json::array();
    for (NodeId m : s.anchors) anchors.push_back(m.value);
    for (NodeId m : s.demanders) demanders.push_back(m.value);
    stages.push_back({{"index", s.index}, {"anchors", anchors}, {"demanders", demanders}});
  }
  return {{"edges", edges}, {"unmatched", unmatched}, {"stage_messages", f.stage_messages}, {"stages", stages}};
}

std::vector<AllocationRow> allocation_rows(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch,
                                           const BackhaulNetwork& net) {
  const auto& parent = net.formation.parent;
  const auto& held = net.allocation.subchannels;
  std::vector<std::vector<NodeId>> on_channel(cfg.subchannels);
  for (std::size_t m = 0; m < parent.size(); ++m)
    if (parent[m])
      for (std::size_t k : held[m]) on_channel[k].push_back(*parent[m]);
  for (auto& tx : on_channel) {
    std::sort(tx.begin(), tx.end());
    tx.erase(std::unique(tx.begin(), tx.end()), tx.end());
  }

  std::vector<AllocationRow> rows;
  for (const Edge& e : net.formation.edges)
    for (std::size_t k : held[e.child.value]) {
      const double r = subchannel_rate(topo, cfg, ch, e.parent, e.child, k, ch.state(e.parent, e.child), on_channel[k]);
      rows.push_back({e.stage, e.parent.value, e.child.value, k, r});
    }
  return rows;
}

void write_allocation_csv(std::ostream& os, const std::vector<AllocationRow>& rows) {
  os << "stage,a_bs,d_bs,sub_channel,rate_bps\n";
  for (const auto& r : rows)
    os << r.stage << ',' << r.a_bs << ',' << r.d_bs << ',' << r.sub_channel << ',' << format_double(r.rate_bps) << '\n';
}

}  // namespace mmbn
