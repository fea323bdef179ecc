#include "mmbn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "mmbn/baselines.hpp"

namespace mmbn {

std::vector<double> mno_cost(const Topology& topo, const PricingConfig& pricing, const BackhaulNetwork& net) {
  std::vector<double> cost(topo.mno_count(), 0.0);
  const auto& parent = net.formation.parent;
  for (std::size_t m = 1; m < parent.size(); ++m) {
    if (!parent[m] || *parent[m] == kMbs) continue;
    const NodeId child{m};
    if (!topo.cross_mno(*parent[m], child)) continue;
    cost[topo.owner(child)->value] +=
        pricing.price_of(*parent[m]) * static_cast<double>(net.allocation.subchannels[m].size());
  }
  return cost;
}

RunMetrics collect_metrics(const Topology& topo, const PricingConfig& pricing, const BackhaulNetwork& net) {
  RunMetrics r;
  const auto& e2e = net.allocation.e2e_bps;
  r.per_sbs_rates.assign(e2e.begin() + 1, e2e.end());
  r.sum_rate_bps = sum_rate(net.allocation);
  r.mno_cost = mno_cost(topo, pricing, net);
  r.formation_messages = net.formation.total_messages();
  r.allocation_messages = net.allocation.messages();
  r.unmatched_count = net.formation.unmatched.size();
  r.rth_violations = net.allocation.below_min_rate.size();
  return r;
}

double Summary::standard_error() const { return runs > 0 ? stddev / std::sqrt(static_cast<double>(runs)) : 0.0; }

Summary aggregate(std::span<const double> values, std::span<const double> grid) {
  if (values.empty()) throw std::invalid_argument("cannot aggregate zero runs");
  Summary s;
  s.runs = values.size();
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(s.runs);
  if (s.runs > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(s.runs - 1));
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  s.grid.assign(grid.begin(), grid.end());
  for (double g : grid) {
    const auto below = std::upper_bound(sorted.begin(), sorted.end(), g) - sorted.begin();
    s.cdf.push_back(static_cast<double>(below) / static_cast<double>(s.runs));
  }
  return s;
}

Summary aggregate(std::span<const RunMetrics> runs, std::span<const double> grid) {
  std::vector<double> values;
  for (const auto& r : runs) values.push_back(r.sum_rate_bps);
  return aggregate(values, grid);
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  std::vector<double> out;
  if (points == 0) return out;
  if (points == 1) return {hi};
  for (std::size_t i = 0; i < points; ++i)
    out.push_back(i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
  return out;
}

double formation_message_bound(std::size_t demanders, std::size_t quota) {
  if (quota == kUnbounded) return static_cast<double>(demanders);
  const double q = static_cast<double>(quota);
  const double ratio = static_cast<double>(demanders) / q;
  return 0.5 * q * (ratio + 1.0) * (ratio + 2.0);
}

OverheadReport overhead_check(const BackhaulNetwork& net, const FormationOptions& options, std::size_t subchannels) {
  OverheadReport report;
  const auto& f = net.formation;
  for (std::size_t i = 0; i < f.stages.size(); ++i) {
    const Stage& s = f.stages[i];
    StageOverhead o;
    o.stage = s.index;
    o.demanders = s.demanders.size();
    o.messages = i < f.stage_messages.size() ? f.stage_messages[i] : 0;
    bool uniform = true;
    o.quota = s.anchors.empty() ? options.sbs_quota : options.quota_of(s.anchors.front());
    for (NodeId a : s.anchors) uniform = uniform && options.quota_of(a) == o.quota;
    // Only the MBS may carry a different quota, and it is alone in stage 1.
    if (!uniform)
      for (NodeId a : s.anchors) o.quota = std::min(o.quota, options.quota_of(a));
    o.bound = formation_message_bound(o.demanders, o.quota);
    if (static_cast<double>(o.messages) > o.bound) {
      std::ostringstream os;
      os << "stage " << o.stage << ": " << o.messages << " proposals exceed bound " << o.bound;
      report.failures.push_back(os.str());
    }
    report.stages.push_back(o);
  }
  for (const auto& a : net.allocation.anchors) {
    AnchorOverhead o;
    o.stage = a.stage;
    o.anchor = a.anchor;
    o.children = a.children.size();
    o.messages = a.match.messages;
    const std::size_t quota = options.quota_of(a.anchor);
    // Without a quota only the actual fan-out limits the proposals.
    o.strict = quota != kUnbounded;
    o.bound = static_cast<double>(subchannels) * static_cast<double>(o.strict ? quota : o.children);
    const double m = static_cast<double>(o.messages);
    if (o.strict ? !(m < o.bound) : m > o.bound) {
      std::ostringstream os;
      os << "A-BS " << a.anchor.value << " at stage " << a.stage << ": " << o.messages << " messages, bound "
         << o.bound;
      report.failures.push_back(os.str());
    }
    report.anchors.push_back(o);
  }
  report.pass = report.failures.empty();
  return report;
}

}  // namespace mmbn
