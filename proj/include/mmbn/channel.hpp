#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mmbn/topology.hpp"
#include "mmbn/types.hpp"

namespace mmbn {

enum class LinkState : std::uint8_t { Nlos = 0, Los = 1 };

/// Small-scale fading law for |h|^2.
enum class FadingLaw { Rayleigh, None };

/// How the combined antenna gain of an interfering link is drawn.
enum class InterferenceGainLaw {
  RandomBoresight,  ///< each end points its main lobe at the victim w.p. beamwidth/360
  SideLobe,         ///< both ends always side lobe
};

struct PathLossParams {
  double carrier_hz = 73e9;
  double reference_distance_m = 1.0;
  double exponent_los = 2.0;
  double exponent_nlos = 3.5;
  double shadow_std_los_db = 4.2;
  double shadow_std_nlos_db = 7.9;

  double wavelength_m() const;
  double exponent(LinkState s) const { return s == LinkState::Los ? exponent_los : exponent_nlos; }
  double shadow_std_db(LinkState s) const { return s == LinkState::Los ? shadow_std_los_db : shadow_std_nlos_db; }
  void validate() const;
};

/// Sectorized pattern: main lobe gain inside the beamwidth, side lobe outside.
struct AntennaPattern {
  double main_lobe_db = 18.0;
  double side_lobe_db = -2.0;
  double beamwidth_deg = 10.0;

  double main_lobe() const;  ///< linear
  double side_lobe() const;  ///< linear
  double main_lobe_probability() const { return beamwidth_deg / 360.0; }
  void validate() const;
};

struct RadioConfig {
  std::size_t subchannels = 50;
  double bandwidth_hz = 5e9;  ///< total band, split evenly over the sub-channels
  double tx_power_mbs_dbm = 40.0;
  double tx_power_sbs_dbm = 30.0;
  double noise_psd_dbm_hz = -174.0;
  double los_probability = 0.5;
  double min_rate_bps = 1e6;  ///< per-SBS backhaul requirement, reported only
  PathLossParams path_loss;
  AntennaPattern antenna;
  FadingLaw fading = FadingLaw::Rayleigh;
  InterferenceGainLaw interference_gain = InterferenceGainLaw::RandomBoresight;

  double subchannel_bandwidth_hz() const { return bandwidth_hz / static_cast<double>(subchannels); }
  double noise_dbm() const;
  double noise_w() const;
  /// Uniform power split over the sub-channels.
  double subchannel_power_w(NodeId tx) const;
  void validate() const;
};

double dbm_to_w(double dbm);
double db_to_linear(double db);

/// One coherence-time snapshot of every link in the network. Link state and
/// shadowing are per unordered pair; fading and interference gain are per
/// ordered pair.
class ChannelRealization {
 public:
  ChannelRealization(std::size_t nodes, std::size_t subchannels);

  std::size_t node_count() const { return nodes_; }
  std::size_t subchannel_count() const { return subchannels_; }

  LinkState state(NodeId a, NodeId b) const { return state_[pair(a, b)]; }
  /// Standard normal draw behind the shadowing of the pair; chi = xi(state) * z.
  double shadow_z(NodeId a, NodeId b) const { return shadow_z_[pair(a, b)]; }
  double shadowing_db(NodeId a, NodeId b, const PathLossParams& p, LinkState s) const {
    return p.shadow_std_db(s) * shadow_z(a, b);
  }
  double fading(NodeId tx, NodeId rx, std::size_t k) const { return fading_[(tx.value * nodes_ + rx.value) * subchannels_ + k]; }
  /// Combined antenna gain psi(tx, rx) of tx interfering at rx (linear).
  double interference_gain(NodeId tx, NodeId rx) const { return psi_[tx.value * nodes_ + rx.value]; }

  void set_link(NodeId a, NodeId b, LinkState s, double shadow_z);
  void set_fading(NodeId tx, NodeId rx, std::size_t k, double gain);
  void set_interference_gain(NodeId tx, NodeId rx, double psi);

 private:
  std::size_t pair(NodeId a, NodeId b) const;

  std::size_t nodes_;
  std::size_t subchannels_;
  std::vector<LinkState> state_;
  std::vector<double> shadow_z_;
  std::vector<double> fading_;
  std::vector<double> psi_;
};

/// LoS is decided as u < rho with one uniform u per pair, so realizations for
/// different rho but the same seed are coupled (LoS sets are nested).
ChannelRealization sample_channel(const Topology& topo, const RadioConfig& cfg, std::uint64_t seed);

/// Large-scale path loss in dB; distances below the reference distance are a domain error.
double path_loss_db(const PathLossParams& p, double distance_m, LinkState state, double shadowing_db);

/// Linear channel gain l(tx, rx) = 10^(-PL/10) for the given state, using the
/// realization's shadowing. Distances below d0 are clamped to d0.
double link_gain(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch, NodeId tx, NodeId rx,
                 LinkState state);

/// Received power of the intended signal on sub-channel k (W).
double signal_power(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch, NodeId tx, NodeId rx,
                    std::size_t k, LinkState state);

/// Received power at rx from an interferer transmitting on sub-channel k (W),
/// using the interferer's realized link state, psi and fading.
double interference_power(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch, NodeId from,
                          NodeId rx, std::size_t k);

/// w log2(1 + S / (I + noise)) for a given interference power in watts.
double subchannel_rate(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch, NodeId tx,
                       NodeId rx, std::size_t k, LinkState state, double interference_w);

/// Rate with the listed nodes all transmitting on sub-channel k.
double subchannel_rate(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch, NodeId tx,
                       NodeId rx, std::size_t k, LinkState state, std::span<const NodeId> interferers);

/// Mean interference power at rx from the given transmitters, averaging over
/// antenna alignment, link state (with zero shadowing) and unit-mean fading.
double expected_interference(const Topology& topo, const RadioConfig& cfg, NodeId rx,
                             std::span<const NodeId> interferers);

/// Mean of psi over the configured interference gain law.
double expected_interference_gain(const RadioConfig& cfg);

/// State-averaged rate over the selected sub-channels:
/// rho * sum r(LoS) + (1 - rho) * sum r(NLoS).
double average_rate(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch, NodeId tx, NodeId rx,
                    std::span<const std::size_t> subchannels, double interference_w);

/// average_rate over all K sub-channels.
double full_band_average_rate(const Topology& topo, const RadioConfig& cfg, const ChannelRealization& ch, NodeId tx,
                              NodeId rx, double interference_w);

}  // namespace mmbn
