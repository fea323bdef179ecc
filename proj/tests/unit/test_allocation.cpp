#include <doctest.h>

#include <limits>

#include "brute_force.hpp"
#include "mmbn/allocation.hpp"
#include "mmbn/network.hpp"
#include "mmbn/rng.hpp"
#include "support.hpp"

using namespace mmbn;

namespace {

SubchannelGame game_of(const Eigen::MatrixXd& rate, std::vector<double> bound, std::vector<double> revenue = {}) {
  SubchannelGame g;
  g.rate = rate;
  g.demand_bound = std::move(bound);
  g.revenue = revenue.empty() ? std::vector<double>(rate.rows(), 0.0) : std::move(revenue);
  g.same_mno.assign(rate.rows(), true);
  for (std::size_t c = 0; c < g.revenue.size(); ++c) g.same_mno[c] = g.revenue[c] == 0.0;
  return g;
}

SubchannelGame random_game(Rng& rng, std::size_t nc, std::size_t nk) {
  Eigen::MatrixXd r(nc, nk);
  for (Eigen::Index i = 0; i < r.size(); ++i) r.data()[i] = 1.0 + 9.0 * rng.uniform();
  std::vector<double> bound, revenue;
  for (std::size_t c = 0; c < nc; ++c) {
    bound.push_back(rng.uniform() < 0.2 ? kInfiniteRate : 2.0 + 20.0 * rng.uniform());
    revenue.push_back(rng.uniform() < 0.5 ? 0.0 : 3.0 * rng.uniform());
  }
  return game_of(r, bound, revenue);
}

}  // namespace

TEST_SUITE("allocation") {
  TEST_CASE("saturation rule") {
    CHECK(saturation_criterion(0.0, 10.0, 1));
    CHECK(saturation_criterion(4.9, 10.0, 1));
    CHECK_FALSE(saturation_criterion(5.0, 10.0, 1));  // equal to the bound is saturated
    CHECK_FALSE(saturation_criterion(3.0, 10.0, 3));
    CHECK(saturation_criterion(1e30, kInfiniteRate, 4));
    CHECK(saturation_criterion(1e30, kInfiniteRate));
    CHECK_FALSE(saturation_criterion(2.0, 2.0));
  }

  TEST_CASE("utilities of the two sides") {
    Eigen::MatrixXd r(2, 2);
    r << 3, 1, 2, 4;
    const auto g = game_of(r, {3.5, 5.0}, {0.0, 1.5});
    const std::vector<std::size_t> none, both{0, 1};
    CHECK(psi_utility(g, 0, 1, none) == 1.0);
    CHECK(psi_utility(g, 0, 1, both) == -std::numeric_limits<double>::infinity());
    CHECK(phi_utility(g, 0, 1) == 3.5);
    CHECK(phi_utility(g, 1, 0) == 1.0);
    CHECK(subchannel_preferences(g) == matching::PreferenceProfile{{1, 0}, {1, 0}});  // revenue tips k0
    CHECK(child_preferences(g) == matching::PreferenceProfile{{0, 1}, {1, 0}});
  }

  TEST_CASE("peer-effect instance ends stable") {
    Eigen::MatrixXd r(2, 3);
    r << 5.0, 4.0, 3.0, 2.0, 3.9, 3.5;
    const auto g = game_of(r, {1.0, 1.0});
    const auto m = allocate_subchannels(g);
    CHECK(m.owner[0] == std::size_t{0});
    CHECK(m.owner[1] == std::size_t{1});
    CHECK_FALSE(m.owner[2].has_value());
    CHECK_FALSE(m.repeated_proposal);
    CHECK(matching::find_blocking_pairs(to_matching(g, m), subchannel_preferences(g), child_preferences(g),
                                        saturation_room(g))
              .empty());
  }

  TEST_CASE("a lone child of the MBS takes every sub-channel") {
    Eigen::MatrixXd r = Eigen::MatrixXd::Constant(1, 6, 2.0);
    const auto m = allocate_subchannels(game_of(r, {kInfiniteRate}));
    CHECK(m.held[0] == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
    CHECK(m.messages == 6);
    CHECK(m.rounds == 1);
  }

  TEST_CASE("no children") {
    const auto m = allocate_subchannels(game_of(Eigen::MatrixXd(0, 4), {}));
    CHECK(m.owner.size() == 4);
    CHECK(m.messages == 0);
  }

  TEST_CASE("a child drops a held sub-channel for a better one") {
    // Round 1: c0 takes k0; c1 keeps k2 and refuses k1. Round 2: k1 reaches c0,
    // which keeps k1 alone and lets k0 go. Round 3: c1 refuses k0 as well.
    Eigen::MatrixXd r(2, 3);
    r << 2.0, 3.0, 0.5, 1.0, 4.0, 5.0;
    const auto g = game_of(r, {1.5, 3.0});
    const auto m = allocate_subchannels(g);
    CHECK(m.held[0] == std::vector<std::size_t>{1});
    CHECK(m.held[1] == std::vector<std::size_t>{2});
    CHECK_FALSE(m.owner[0].has_value());
    CHECK(m.rounds == 3);
    CHECK(m.messages == 5);
    CHECK(matching::find_blocking_pairs(to_matching(g, m), subchannel_preferences(g), child_preferences(g),
                                        saturation_room(g))
              .empty());
  }

  TEST_CASE("phase two only serves same-operator children") {
    Eigen::MatrixXd r(1, 3);
    r << 1.0, 1.0, 1.0;
    auto g = game_of(r, {1.5}, {1.0});
    const auto m = allocate_subchannels(g);
    CHECK(m.phase_two_assignments == 0);
    CHECK(m.held[0].size() == 2);
    CHECK_FALSE(m.owner[2].has_value());
  }

  TEST_CASE("random games: stable, bounded messages, admissible holdings") {
    Rng rng(4242, 7);
    for (int t = 0; t < 400; ++t) {
      const std::size_t nc = 1 + rng.index(5), nk = 1 + rng.index(10);
      const auto g = random_game(rng, nc, nk);
      const auto m = allocate_subchannels(g);
      CHECK_FALSE(m.repeated_proposal);
      CHECK(m.messages <= nk * nc);
      const auto mm = to_matching(g, m);
      CHECK(mm.consistent());
      CHECK(matching::find_blocking_pairs(mm, subchannel_preferences(g), child_preferences(g), saturation_room(g))
                .empty());
      for (std::size_t c = 0; c < nc; ++c) CHECK(admissible_holding(g, c, m.held[c]));
    }
  }

  TEST_CASE("no stable allocation is better for every sub-channel") {
    Rng rng(5150, 7);
    for (int t = 0; t < 300; ++t) {
      const std::size_t nc = 1 + rng.index(2), nk = 1 + rng.index(4);
      const auto g = random_game(rng, nc, nk);
      const auto out = to_matching(g, allocate_subchannels(g));
      const auto prefs = subchannel_preferences(g);
      const auto stable = testing::stable_allocations(g);
      CHECK_FALSE(stable.empty());
      for (const auto& alt : stable) CHECK_FALSE(matching::is_pareto_improvement(out, alt, prefs));
    }
  }

  TEST_CASE("admissible holdings") {
    Eigen::MatrixXd r(1, 3);
    r << 4.0, 3.0, 1.0;
    const auto g = game_of(r, {4.5});
    CHECK(admissible_holding(g, 0, std::vector<std::size_t>{}));
    CHECK(admissible_holding(g, 0, std::vector<std::size_t>{0}));
    CHECK(admissible_holding(g, 0, std::vector<std::size_t>{0, 1}));    // 4 < 4.5 before adding 3
    CHECK_FALSE(admissible_holding(g, 0, std::vector<std::size_t>{0, 1, 2}));  // 7 >= 4.5
    CHECK(admissible_holding(g, 0, std::vector<std::size_t>{0, 2}));
  }

  TEST_CASE("end-to-end rate over two hops") {
    const std::vector<std::optional<NodeId>> parent{std::nullopt, kMbs, NodeId{1}, std::nullopt};
    const std::vector<double> link{0.0, 4e9, 2e9, 7e9};
    const auto e2e = end_to_end_rates(parent, link);
    CHECK(e2e[0] == kInfiniteRate);
    CHECK(e2e[1] == 4e9);
    CHECK(e2e[2] == 1e9);
    CHECK(e2e[3] == 0.0);
  }

  TEST_CASE("end-to-end detects cycles") {
    const std::vector<std::optional<NodeId>> parent{std::nullopt, NodeId{2}, NodeId{1}};
    const std::vector<double> link{0.0, 1.0, 1.0};
    CHECK_THROWS(end_to_end_rates(parent, link));
  }

  TEST_CASE("realized rates see co-channel transmitters") {
    RadioConfig cfg;
    cfg.subchannels = 2;
    const auto topo = testing::make_topology({{60, 0, 0}, {-60, 0, 0}, {-120, 0, 0}});
    const auto ch = testing::flat_channel(topo, cfg);
    const std::vector<std::optional<NodeId>> parent{std::nullopt, kMbs, kMbs, NodeId{2}};
    const std::vector<std::vector<std::size_t>> shared{{}, {0}, {1}, {0}};
    const std::vector<std::vector<std::size_t>> apart{{}, {0}, {1}, {1}};
    const auto a = realized_link_rates(topo, cfg, ch, parent, shared);
    const auto b = realized_link_rates(topo, cfg, ch, parent, apart);
    // On sub-channel 0, node 1 hears node 2 transmitting to node 3.
    CHECK(a[1] < b[1]);
    const std::vector<NodeId> none;
    CHECK(b[1] == subchannel_rate(topo, cfg, ch, kMbs, NodeId{1}, 0, LinkState::Los, none));
  }

  TEST_CASE("allocation inside a built network") {
    RadioConfig cfg;
    cfg.subchannels = 10;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto topo = generate_topology(seed, {20, 3, 400, 200});
      const auto ch = sample_channel(topo, cfg, seed);
      const auto net = form_network(topo, ch, cfg, PricingConfig::uniform(topo.node_count()));
      const auto& a = net.allocation;
      for (const auto& anchor : a.anchors) {
        CHECK_FALSE(anchor.match.repeated_proposal);
        CHECK(anchor.match.messages <= cfg.subchannels * anchor.children.size());
        for (std::size_t c = 0; c < anchor.children.size(); ++c) {
          const NodeId child = anchor.children[c];
          CHECK(net.formation.parent[child.value] == anchor.anchor);
          CHECK(a.subchannels[child.value] == anchor.match.held[c]);
          CHECK(a.planned_link_bps[child.value] == anchor.game.held_rate(c, anchor.match.held[c]));
        }
      }
      for (NodeId m : net.formation.unmatched) {
        CHECK(a.subchannels[m.value].empty());
        CHECK(a.e2e_bps[m.value] == 0.0);
      }
    }
  }
}
