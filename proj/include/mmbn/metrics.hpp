#pragma once

#include <span>
#include <string>
#include <vector>

#include "mmbn/network.hpp"

namespace mmbn {

struct RunMetrics {
  double sum_rate_bps = 0.0;
  std::vector<double> per_sbs_rates;  ///< end-to-end rate of SBS 1..M, in node order
  std::vector<double> mno_cost;       ///< what each operator pays the others
  std::size_t formation_messages = 0;
  std::size_t allocation_messages = 0;
  std::size_t unmatched_count = 0;
  std::size_t rth_violations = 0;
};

/// Per operator: price of the foreign parent times the sub-channels its SBSs
/// receive over cross-operator links. Links from the MBS are free.
std::vector<double> mno_cost(const Topology& topo, const PricingConfig& pricing, const BackhaulNetwork& net);

RunMetrics collect_metrics(const Topology& topo, const PricingConfig& pricing, const BackhaulNetwork& net);

struct Summary {
  std::size_t runs = 0;
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation, 0 for a single run
  std::vector<double> grid;
  std::vector<double> cdf;  ///< fraction of values <= grid point

  double standard_error() const;
};

/// Mean, spread and empirical CDF on `grid`. Throws on empty input.
Summary aggregate(std::span<const double> values, std::span<const double> grid = {});
Summary aggregate(std::span<const RunMetrics> runs, std::span<const double> grid = {});

/// Evenly spaced grid from lo to hi inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

struct StageOverhead {
  std::size_t stage = 0;
  std::size_t demanders = 0;
  std::size_t quota = 0;  ///< kUnbounded when the stage's A-BSs have no limit
  std::size_t messages = 0;
  double bound = 0.0;
};

struct AnchorOverhead {
  std::size_t stage = 0;
  NodeId anchor;
  std::size_t children = 0;
  std::size_t messages = 0;
  double bound = 0.0;
  bool strict = true;  ///< messages must stay strictly below the bound
};

struct OverheadReport {
  bool pass = true;
  std::vector<StageOverhead> stages;
  std::vector<AnchorOverhead> anchors;
  std::vector<std::string> failures;
};

/// Worst-case proposals of one formation stage with uniform quota Q and I
/// rounds of rejections: Q I (I + 1) / 2 with I = |D| / Q + 1. An A-BS
/// without a quota rejects nobody, so |D| proposals suffice.
double formation_message_bound(std::size_t demanders, std::size_t quota);

/// Message counts against the formation bound per stage and K Q per A-BS.
/// Never throws; the report says what failed and by how much.
OverheadReport overhead_check(const BackhaulNetwork& net, const FormationOptions& options, std::size_t subchannels);

}  // namespace mmbn
