// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "mmbn/baselines.hpp"
#include "mmbn/experiment.hpp"
#include "mmbn/metrics.hpp"
#include "mmbn/rng.hpp"

using namespace mmbn;

namespace {

int failures = 0;

void report(bool pass, const std::string& name, const std::string& detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Every network built anywhere in the suite is checked for message bounds and structure.
struct Ledger {
  std::size_t runs = 0;
  std::size_t overhead_failures = 0;
  std::size_t structural_failures = 0;
  std::size_t stage_checks = 0;
  std::size_t anchor_checks = 0;
  double worst_stage_ratio = 0.0;   // messages / bound
  double worst_anchor_ratio = 0.0;  // messages / (K Q)
  double worst_fanout_ratio = 0.0;  // messages / (K children)
  std::size_t at_bound = 0;         // A-BSs with exactly K Q messages
  std::size_t at_bound_single = 0;  // ... of which quota 1
  std::string first_overhead;
  std::string first_structural;

  double fanout_k = 1.0;  // K of the network being noted

  void add(const Topology& topo, const RadioConfig& cfg, const FormationOptions& opt, const BackhaulNetwork& net) {
    ++runs;
    fanout_k = static_cast<double>(cfg.subchannels);
    const auto o = overhead_check(net, opt, cfg.subchannels);
    note(o);
    const auto s = structural_violations(topo, cfg, opt, net);
    if (!s.empty()) {
      ++structural_failures;
      if (first_structural.empty()) first_structural = s.front();
    }
  }

  void add(const SchemeRun& r, std::size_t subchannels) {
    ++runs;
    fanout_k = static_cast<double>(subchannels);
    note(r.overhead);
    if (r.structural_violations > 0) {
      ++structural_failures;
      if (first_structural.empty()) first_structural = r.scheme + " run with structural violations";
    }
  }

  void note(const OverheadReport& o) {
    stage_checks += o.stages.size();
    anchor_checks += o.anchors.size();
    for (const auto& s : o.stages)
      if (s.bound > 0) worst_stage_ratio = std::max(worst_stage_ratio, static_cast<double>(s.messages) / s.bound);
    for (const auto& a : o.anchors) {
      const double msgs = static_cast<double>(a.messages);
      if (a.bound > 0) worst_anchor_ratio = std::max(worst_anchor_ratio, msgs / a.bound);
      if (a.children > 0) worst_fanout_ratio = std::max(worst_fanout_ratio, msgs / (fanout_k * static_cast<double>(a.children)));
      if (a.strict && msgs == a.bound) {
        ++at_bound;
        if (a.bound == fanout_k) ++at_bound_single;
      }
    }
    if (!o.pass) {
      ++overhead_failures;
      if (first_overhead.empty()) first_overhead = o.failures.front();
    }
  }
};

Ledger ledger;

struct SweepStats {
  double mean = 0.0;
  double se = 0.0;
};

RunSetup base_setup(std::size_t m, std::size_t n, double rho) {
  ExperimentConfig c;
  c.topology.num_sbs = m;
  c.topology.num_mnos = n;
  c.radio.los_probability = rho;
  return setup_of(c);
}

/// Runs `schemes` over seeds 1..seeds; returns per-scheme sum rates.
std::vector<std::vector<double>> sum_rates(const RunSetup& s, std::size_t seeds, const std::vector<std::string>& schemes,
                                           std::vector<std::vector<std::vector<double>>>* costs = nullptr) {
  std::vector<std::vector<double>> out(schemes.size());
  if (costs) costs->assign(schemes.size(), {});
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    const auto runs = run_seed(s, seed, schemes);
    for (std::size_t i = 0; i < runs.size(); ++i) {
      ledger.add(runs[i], s.radio.subchannels);
      out[i].push_back(runs[i].metrics.sum_rate_bps);
      if (costs) (*costs)[i].push_back(runs[i].metrics.mno_cost);
    }
  }
  return out;
}

SweepStats stats(const std::vector<double>& v) {
  const auto s = aggregate(v);
  return {s.mean, s.standard_error()};
}

// ---------------------------------------------------------------------------

void stability_suite() {
  Rng rng(20240601, 11);
  const double rhos[] = {0.2, 0.5, 1.0};
  std::size_t instances = 0, stage_games = 0, allocations = 0, blocking_stage = 0, blocking_alloc = 0;
  std::string first;
  for (; instances < 1000; ++instances) {
    RadioConfig cfg;
    cfg.subchannels = 1 + rng.index(10);
    cfg.los_probability = rhos[rng.index(3)];
    const TopologyParams tp{1 + rng.index(20), 1 + rng.index(3), 400.0, 200.0};
    FormationOptions opt;
    opt.sbs_quota = 1 + rng.index(5);
    opt.mbs_quota = rng.uniform() < 0.5 ? kUnbounded : 1 + rng.index(6);
    opt.cooperative = rng.uniform() < 0.8;
    const double price = 10.0 * rng.uniform();
    const double kappa = 100e6 * rng.uniform();
    const std::uint64_t seed = 1000 + instances;
    const auto topo = generate_topology(seed, tp);
    const auto ch = sample_channel(topo, cfg, seed);
    const auto net = form_network(topo, ch, cfg, PricingConfig::uniform(topo.node_count(), price, kappa), opt);
    ledger.add(topo, cfg, opt, net);
    for (const auto& g : net.formation.games) {
      ++stage_games;
      if (!matching::find_blocking_pairs(g.matching, g.demander_prefs, g.anchor_prefs).empty()) {
        ++blocking_stage;
        if (first.empty()) first = fmt("seed %llu stage game", static_cast<unsigned long long>(seed));
      }
    }
    for (const auto& a : net.allocation.anchors) {
      ++allocations;
      const auto bp = matching::find_blocking_pairs(to_matching(a.game, a.match), subchannel_preferences(a.game),
                                                    child_preferences(a.game), saturation_room(a.game));
      if (!bp.empty()) {
        ++blocking_alloc;
        if (first.empty()) first = fmt("seed %llu allocation of A-BS %zu", static_cast<unsigned long long>(seed),
                                       a.anchor.value);
      }
    }
  }
  report(blocking_stage == 0 && blocking_alloc == 0, "stability",
         fmt("%zu instances, %zu stage games with blocking pairs out of %zu, %zu allocations with blocking pairs out "
             "of %zu%s%s",
             instances, blocking_stage, stage_games, blocking_alloc, allocations, first.empty() ? "" : "; first: ",
             first.c_str()));
}

void peer_effect_counterexample() {
  // Sub-channels k1..k3 propose to D-BSs m1, m2; a D-BS wants more only while its rate sum is below 1.
  Eigen::MatrixXd r(2, 3);
  r << 5.0, 4.0, 3.0, 2.0, 3.9, 3.5;
  SubchannelGame g;
  g.rate = r;
  g.revenue = {0.0, 0.0};
  g.demand_bound = {1.0, 1.0};
  g.same_mno = {true, true};
  const auto k_prefs = subchannel_preferences(g);
  const auto c_prefs = child_preferences(g);
  const auto room = saturation_room(g);
  const matching::PeerEffectHook hook = [&](matching::Agent c, std::span<const matching::Agent> held,
                                            matching::Agent) { return room(c, held); };

  const auto plain = matching::deferred_acceptance(k_prefs, c_prefs, std::vector<std::size_t>{3, 3}, hook);
  const auto plain_bp = matching::find_blocking_pairs(plain.matching, k_prefs, c_prefs, room);
  const bool plain_ok = plain.matching.partner[0] == matching::Agent{0} && !plain.matching.partner[1] &&
                        plain.matching.partner[2] == matching::Agent{1} && plain_bp.size() == 1 &&
                        plain_bp[0] == std::pair<matching::Agent, matching::Agent>{1, 1};

  const auto ours = allocate_subchannels(g);
  const auto ours_bp = matching::find_blocking_pairs(to_matching(g, ours), k_prefs, c_prefs, room);
  const bool ours_ok = ours_bp.empty() && ours.owner[0] == std::size_t{0} && ours.owner[1] == std::size_t{1};

  report(plain_ok && ours_ok, "peer_effect_counterexample",
         fmt("plain DA: %zu blocking pair(s)%s; allocation algorithm: %zu blocking pairs, k1->m%zu k2->m%zu k3->%s",
             plain_bp.size(), plain_ok ? " = {(m2, k2)}" : " (unexpected)", ours_bp.size(),
             ours.owner[0] ? *ours.owner[0] + 1 : 0, ours.owner[1] ? *ours.owner[1] + 1 : 0,
             ours.owner[2] ? "assigned" : "unmatched"));
}

void optimality_gap() {
  const std::size_t m = 6, k = 4, seeds = 100;
  RadioConfig cfg;
  cfg.subchannels = k;
  std::vector<double> gaps, alloc_gaps;
  std::size_t exceed = 0;
  double worst = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    const auto topo = generate_topology(seed, {m, 2, 400, 200});
    const auto ch = sample_channel(topo, cfg, seed);
    const auto pricing = PricingConfig::uniform(topo.node_count());
    const auto net = form_network(topo, ch, cfg, pricing);
    ledger.add(topo, cfg, {}, net);
    const auto opt = exhaustive_optimal(topo, ch, cfg, pricing);
    ledger.add(topo, cfg, {}, opt.network);
    const auto fixed = optimal_allocation(topo, ch, cfg, pricing, net.formation.parent);
    const double h = sum_rate(net.allocation);
    if (h > opt.sum_rate_bps) ++exceed;
    const double gap = opt.sum_rate_bps > 0 ? (opt.sum_rate_bps - h) / opt.sum_rate_bps : 0.0;
    gaps.push_back(gap);
    worst = std::max(worst, gap);
    alloc_gaps.push_back(fixed.sum_rate_bps > 0 ? (fixed.sum_rate_bps - h) / fixed.sum_rate_bps : 0.0);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double mean = aggregate(gaps).mean;
  const double alloc_mean = aggregate(alloc_gaps).mean;
  report(mean <= 0.10 && exceed == 0, "optimality_gap",
         fmt("M=%zu K=%zu N=2, %zu seeds: mean gap %.2f%% (limit 10%%, margin %+.2f pp), worst %.2f%%, "
             "heuristic above optimum in %zu runs; gap to best allocation on the same forest %.2f%%; %.0f s",
             m, k, seeds, 100 * mean, 100 * (0.10 - mean), 100 * worst, exceed, 100 * alloc_mean, secs));
}

void cooperation_gain() {
  const auto s = base_setup(40, 5, 0.5);
  const auto r = sum_rates(s, 200, {"cooperative", "noncoop", "random"});
  const auto c = stats(r[0]), n = stats(r[1]), x = stats(r[2]);
  const double gain = c.mean / n.mean - 1.0;
  report(c.mean > n.mean && n.mean > x.mean && gain >= 0.10, "cooperation_gain",
         fmt("M=40 N=5 K=50, 200 seeds: cooperative %.2f Gbps, noncoop %.2f Gbps, random %.2f Gbps; gain over "
             "noncoop %.1f%% (limit 10%%, margin %+.1f pp), over random %.1f%%",
             c.mean / 1e9, n.mean / 1e9, x.mean / 1e9, 100 * gain, 100 * (gain - 0.10),
             100 * (c.mean / x.mean - 1.0)));
}

void blockage() {
  const std::vector<double> rhos{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
  std::vector<SweepStats> st;
  for (double rho : rhos) st.push_back(stats(sum_rates(base_setup(40, 5, rho), 200, {"cooperative"})[0]));
  bool monotone = true;
  std::string curve;
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    curve += fmt("%s%.1f:%.2f", i ? " " : "", rhos[i], st[i].mean / 1e9);
    if (i > 0 && st[i].mean < st[i - 1].mean - st[i - 1].se) monotone = false;
  }
  const double ratio = st.back().mean / st.front().mean;
  report(ratio >= 3.0 && monotone, "blockage",
         fmt("M=40 N=5 K=50, 200 seeds: rho=1 / rho=0 = %.2fx (limit 3x, margin %+.2f), monotone within 1 SE: %s; "
             "mean Gbps by rho {%s}",
             ratio, ratio - 3.0, monotone ? "yes" : "no", curve.c_str()));
}

void economics() {
  const std::size_t seeds = 100;
  const std::size_t mnos = 3;
  std::size_t zero_points = 0, noncoop_nonzero = 0;
  bool corner_zero = false;
  double corner_max = 0.0;
  std::string corner_costs;
  for (int q = 0; q <= 10; ++q)
    for (int kappa = 0; kappa <= 100; kappa += 10) {
      RunSetup s = base_setup(15, mnos, 0.5);
      s.price = q;
      s.kappa_mbps = kappa;
      std::vector<std::vector<std::vector<double>>> costs;
      sum_rates(s, seeds, {"cooperative", "noncoop"}, &costs);
      std::vector<double> mean(mnos, 0.0);
      for (const auto& c : costs[0])
        for (std::size_t n = 0; n < mnos; ++n) mean[n] += c[n] / static_cast<double>(seeds);
      for (const auto& c : costs[1])
        for (double v : c) noncoop_nonzero += v != 0.0 ? 1 : 0;
      const bool all_zero = std::all_of(mean.begin(), mean.end(), [](double v) { return v == 0.0; });
      if (all_zero && q > 0 && kappa > 0) ++zero_points;
      if (q == 10 && kappa == 100) {
        corner_zero = all_zero;
        corner_max = *std::max_element(mean.begin(), mean.end());
        for (std::size_t n = 0; n < mnos; ++n) corner_costs += fmt("%s%.2f", n ? "/" : "", mean[n]);
      }
    }
  report(corner_zero && zero_points > 0 && noncoop_nonzero == 0, "economics",
         fmt("M=15 N=3, q 0..10 x kappa 0..100 Mbps/$, %zu seeds: points with zero cost for every operator (q, "
             "kappa > 0): %zu of 100; mean cost at q=10, kappa=100: %s (largest %.2f, needs 0); noncoop runs with "
             "nonzero cost: %zu",
             seeds, zero_points, corner_costs.c_str(), corner_max, noncoop_nonzero));
}

void pareto_checks() {
  Rng rng(777, 13);
  std::size_t formation_games = 0, formation_improved = 0, alloc_games = 0, alloc_improved = 0;
  std::size_t multi_anchor = 0, formation_stable_total = 0, alloc_stable_total = 0;
  for (std::uint64_t seed = 1; (formation_games < 300 || alloc_games < 300) && seed < 20000; ++seed) {
    RadioConfig cfg;
    cfg.subchannels = 1 + rng.index(4);
    cfg.los_probability = rng.uniform() < 0.5 ? 0.5 : 0.2;
    FormationOptions opt;
    opt.sbs_quota = 1 + rng.index(2);
    opt.mbs_quota = 1 + rng.index(3);
    const TopologyParams tp{3 + rng.index(10), 1 + rng.index(3), 400.0, 200.0};
    const auto topo = generate_topology(50000 + seed, tp);
    const auto ch = sample_channel(topo, cfg, 50000 + seed);
    const auto net = form_network(topo, ch, cfg, PricingConfig::uniform(topo.node_count(), 1.0, 1e7), opt);
    ledger.add(topo, cfg, opt, net);
    for (const auto& g : net.formation.games) {
      if (g.anchors.size() > 3 || g.demanders.size() > 5 || formation_games >= 300) continue;
      ++formation_games;
      multi_anchor += g.anchors.size() > 1 ? 1 : 0;
      const auto stable = testing::stable_matchings(g.demander_prefs, g.anchor_prefs, g.quotas);
      formation_stable_total += stable.size();
      for (const auto& alt : stable)
        if (matching::is_pareto_improvement(g.matching, alt, g.demander_prefs)) {
          ++formation_improved;
          break;
        }
    }
    for (const auto& a : net.allocation.anchors) {
      if (a.children.size() > 2 || alloc_games >= 300) continue;
      ++alloc_games;
      const auto out = to_matching(a.game, a.match);
      const auto prefs = subchannel_preferences(a.game);
      const auto stable = testing::stable_allocations(a.game);
      alloc_stable_total += stable.size();
      for (const auto& alt : stable)
        if (matching::is_pareto_improvement(out, alt, prefs)) {
          ++alloc_improved;
          break;
        }
    }
  }
  report(formation_games >= 300 && alloc_games >= 300 && formation_improved == 0 && alloc_improved == 0, "pareto",
         fmt("%zu stage games (<=3 A-BS, <=5 D-BS; %zu with several A-BSs; %zu stable matchings enumerated), %zu "
             "dominated for D-BSs; %zu allocations (<=2 D-BS, <=4 sub-channels; %zu admissible stable matches "
             "enumerated), %zu dominated for sub-channels",
             formation_games, multi_anchor, formation_stable_total, formation_improved, alloc_games,
             alloc_stable_total, alloc_improved));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  stability_suite();
  peer_effect_counterexample();
  optimality_gap();
  cooperation_gain();
  blockage();
  pareto_checks();
  economics();

  report(ledger.overhead_failures == 0, "complexity_bounds",
         fmt("%zu networks, %zu stage checks, %zu A-BS checks; runs over a bound: %zu; worst stage messages/bound "
             "%.3f, worst A-BS messages/(K Q) %.3f; A-BSs at exactly K Q: %zu (%zu with Q = 1); worst A-BS "
             "messages/(K x children) %.3f%s%s",
             ledger.runs, ledger.stage_checks, ledger.anchor_checks, ledger.overhead_failures,
             ledger.worst_stage_ratio, ledger.worst_anchor_ratio, ledger.at_bound, ledger.at_bound_single,
             ledger.worst_fanout_ratio, ledger.first_overhead.empty() ? "" : "; first: ",
             ledger.first_overhead.c_str()));
  report(ledger.structural_failures == 0, "structural_invariants",
         fmt("%zu networks, %zu with violations%s%s", ledger.runs, ledger.structural_failures,
             ledger.first_structural.empty() ? "" : "; first: ", ledger.first_structural.c_str()));

  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%d criteria failed, %.0f s\n", failures, secs);
  return failures == 0 ? 0 : 1;
}
