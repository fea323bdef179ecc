#include "mmbn/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mmbn/rng.hpp"

namespace mmbn {

namespace {
constexpr double kSpeedOfLight = 299792458.0;
}

double dbm_to_w(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double PathLossParams::wavelength_m() const { return kSpeedOfLight / carrier_hz; }

void PathLossParams::validate() const {
  if (!(carrier_hz > 0.0)) throw ConfigError("carrier frequency must be positive");
  if (!(reference_distance_m > 0.0)) throw ConfigError("reference distance must be positive");
  if (exponent_los < 1.0 || exponent_nlos < 1.0) throw ConfigError("path loss exponents must be >= 1");
  if (shadow_std_los_db < 0.0 || shadow_std_nlos_db < 0.0) throw ConfigError("shadowing std must be >= 0");
}

double AntennaPattern::main_lobe() const { return db_to_linear(main_lobe_db); }
double AntennaPattern::side_lobe() const { return db_to_linear(side_lobe_db); }

void AntennaPattern::validate() const {
  if (!(main_lobe_db > side_lobe_db)) throw ConfigError("main lobe gain must exceed side lobe gain");
  if (!(beamwidth_deg > 0.0) || beamwidth_deg > 360.0) throw ConfigError("beamwidth must be in (0, 360]");
}

double RadioConfig::noise_dbm() const { return noise_psd_dbm_hz + 10.0 * std::log10(subchannel_bandwidth_hz()); }
double RadioConfig::noise_w() const { return dbm_to_w(noise_dbm()); }

double RadioConfig::subchannel_power_w(NodeId tx) const {
  const double total = tx == kMbs ? tx_power_mbs_dbm : tx_power_sbs_dbm;
  return dbm_to_w(total) / static_cast<double>(subchannels);
}

void RadioConfig::validate() const {
  if (subchannels < 1) throw ConfigError("need at least one sub-channel");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("bandwidth must be positive");
  if (!(los_probability >= 0.0 && los_probability <= 1.0)) throw ConfigError("LoS probability must be in [0, 1]");
  if (min_rate_bps < 0.0) throw ConfigError("minimum rate must be >= 0");
  path_loss.validate();
  antenna.validate();
}

ChannelRealization::ChannelRealization(std::size_t nodes, std::size_t subchannels)
    : nodes_(nodes),
      subchannels_(subchannels),
      state_(nodes * nodes, LinkState::Nlos),
      shadow_z_(nodes * nodes, 0.0),
      fading_(nodes * nodes * subchannels, 1.0),
      psi_(nodes * nodes, 1.0) {}

std::size_t ChannelRealization::pair(NodeId a, NodeId b) const {
  if (a.value >= nodes_ || b.value >= nodes_) throw LookupError("node outside channel realization");
  const auto lo = std::min(a.value, b.value);
  const auto hi = std::max(a.value, b.value);
  return lo * nodes_ + hi;
}

void ChannelRealization::set_link(NodeId a, NodeId b, LinkState s, double z) {
  const auto i = pair(a, b);
  state_[i] = s;
  shadow_z_[i] = z;
}

void ChannelRealization::set_fading(NodeId tx, NodeId rx, std::size_t k, double gain) {
  fading_.at((tx.value * nodes_ + rx.value) * subchannels_ + k) = gain;
}

void ChannelRealization::set_interference_gain(NodeId tx, NodeId rx, double psi) {
  psi_.at(tx.value * nodes_ + rx.value) = psi;
}

ChannelRealization sample_channel(const Topology& topo, const RadioConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const std::size_t n = topo.node_count();
  const std::size_t k_count = cfg.subchannels;
  ChannelRealization ch(n, k_count);
  Rng rng(seed, streams::kChannel);

  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const double u = rng.uniform();
      const double z = rng.normal();
      ch.set_link(NodeId{a}, NodeId{b}, u < cfg.los_probability ? LinkState::Los : LinkState::Nlos, z);
    }

  const double g_max = cfg.antenna.main_lobe();
  const double g_min = cfg.antenna.side_lobe();
  const double p_main = cfg.antenna.main_lobe_probability();
  for (std::size_t tx = 0; tx < n; ++tx)
    for (std::size_t rx = 0; rx < n; ++rx) {
      if (tx == rx) continue;
      for (std::size_t k = 0; k < k_count; ++k) {
        // Draw even when fading is disabled so the other streams do not shift.
        const double h = rng.exponential();
        ch.set_fading(NodeId{tx}, NodeId{rx}, k, cfg.fading == FadingLaw::Rayleigh ? h : 1.0);
      }
      const double end_tx = rng.uniform() < p_main ? g_max : g_min;
      const double end_rx = rng.uniform() < p_main ? g_max : g_min;
      const double psi = cfg.interference_gain == InterferenceGainLaw::RandomBoresight ? end_tx * end_rx : g_min * g_min;
      ch.set_interference_gain(NodeId{tx}, NodeId{rx}, psi);
    }
  return ch;
}

double path_loss_db(const PathLossParams& p, double distance_m, LinkState state, double shadowing_db) {
  if (!(distance_m >= p.reference_distance_m))
    throw DomainError("path loss undefined below the reference distance (" + std::to_string(distance_m) + " m)");
  const double d0 = p.reference_distance_m;
  return 20.0 * std::log10(4.0 * std::numbers::pi * d0 / p.wavelength_m()) +
         10.0 * p.exponent(state) * std::log10(distance_m / d0) + shadowing_db;
}

double link_gain(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch, NodeId tx, NodeId rx,
                 LinkState state) {
  const double dist = std::max(topo.distance(tx, rx), cfg.path_loss.reference_distance_m);
  const double pl = path_loss_db(cfg.path_loss, dist, state, ch.shadowing_db(tx, rx, cfg.path_loss, state));
  return db_to_linear(-pl);
}

double signal_power(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch, NodeId tx, NodeId rx,
                    std::size_t k, LinkState state) {
  const double g = cfg.antenna.main_lobe();
  return cfg.subchannel_power_w(tx) * g * g * link_gain(topo, cfg, ch, tx, rx, state) * ch.fading(tx, rx, k);
}

double interference_power(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch, NodeId from,
                          NodeId rx, std::size_t k) {
  return cfg.subchannel_power_w(from) * ch.interference_gain(from, rx) *
         link_gain(topo, cfg, ch, from, rx, ch.state(from, rx)) * ch.fading(from, rx, k);
}

double subchannel_rate(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch, NodeId tx,
                       NodeId rx, std::size_t k, LinkState state, double interference_w) {
  const double sinr = signal_power(topo, cfg, ch, tx, rx, k, state) / (interference_w + cfg.noise_w());
  return cfg.subchannel_bandwidth_hz() * std::log2(1.0 + sinr);
}

double subchannel_rate(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch, NodeId tx,
                       NodeId rx, std::size_t k, LinkState state, std::span<const NodeId> interferers) {
  double interference = 0.0;
  for (NodeId i : interferers) {
    if (i == tx || i == rx) continue;
    interference += interference_power(topo, cfg, ch, i, rx, k);
  }
  return subchannel_rate(topo, cfg, ch, tx, rx, k, state, interference);
}

double expected_interference_gain(const RadioConfig& cfg) {
  const double g_min = cfg.antenna.side_lobe();
  if (cfg.interference_gain == InterferenceGainLaw::SideLobe) return g_min * g_min;
  const double p = cfg.antenna.main_lobe_probability();
  const double per_end = p * cfg.antenna.main_lobe() + (1.0 - p) * g_min;
  return per_end * per_end;
}

double expected_interference(const Topology& topo, const RadioConfig& cfg, NodeId rx,
                             std::span<const NodeId> interferers) {
  const double psi = expected_interference_gain(cfg);
  const double rho = cfg.los_probability;
  const auto& pl = cfg.path_loss;
  double total = 0.0;
  for (NodeId i : interferers) {
    if (i == rx) continue;
    const double dist = std::max(topo.distance(i, rx), pl.reference_distance_m);
    const double l_los = db_to_linear(-path_loss_db(pl, dist, LinkState::Los, 0.0));
    const double l_nlos = db_to_linear(-path_loss_db(pl, dist, LinkState::Nlos, 0.0));
    total += cfg.subchannel_power_w(i) * psi * (rho * l_los + (1.0 - rho) * l_nlos);
  }
  return total;
}

double average_rate(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch, NodeId tx, NodeId rx,
                    std::span<const std::size_t> subchannels, double interference_w) {
  const double rho = cfg.los_probability;
  double los = 0.0;
  double nlos = 0.0;
  for (std::size_t k : subchannels) {
    if (rho > 0.0) los += subchannel_rate(topo, cfg, ch, tx, rx, k, LinkState::Los, interference_w);
    if (rho < 1.0) nlos += subchannel_rate(topo, cfg, ch, tx, rx, k, LinkState::Nlos, interference_w);
  }
  return rho * los + (1.0 - rho) * nlos;
}

double full_band_average_rate(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch, NodeId tx,
                              NodeId rx, double interference_w) {
  std::vector<std::size_t> all(cfg.subchannels);
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  return average_rate(topo, cfg, ch, tx, rx, all, interference_w);
}

}  // namespace mmbn
