#include "mmbn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "mmbn/serialize.hpp"

namespace mmbn {

namespace {

using json = nlohmann::json;

double number(const std::string& key, const json& v) {
  if (!v.is_number()) throw ConfigError("parameter '" + key + "' expects a number, got " + v.dump());
  return v.get<double>();
}

std::size_t count(const std::string& key, const json& v) {
  const double d = number(key, v);
  if (d < 0 || d != std::floor(d) || d > 1e15)
    throw ConfigError("parameter '" + key + "' expects a non-negative integer, got " + v.dump());
  return static_cast<std::size_t>(d);
}

std::string text(const std::string& key, const json& v) {
  if (!v.is_string()) throw ConfigError("parameter '" + key + "' expects a string, got " + v.dump());
  return v.get<std::string>();
}

struct Parameter {
  std::string name;
  std::function<void(ExperimentConfig&, const json&)> set;
  std::function<json(const ExperimentConfig&)> get;
};

#define MMBN_REAL(name, field)                                                                   \
  Parameter {                                                                                    \
    name, [](ExperimentConfig& c, const json& v) { c.field = number(name, v); },                 \
        [](const ExperimentConfig& c) { return json(c.field); }                                  \
  }
#define MMBN_COUNT(name, field)                                                                  \
  Parameter {                                                                                    \
    name, [](ExperimentConfig& c, const json& v) { c.field = count(name, v); },                  \
        [](const ExperimentConfig& c) { return json(c.field); }                                  \
  }

const std::vector<Parameter>& registry() {
  static const std::vector<Parameter> params = {
      MMBN_REAL("carrier_frequency_hz", radio.path_loss.carrier_hz),
      MMBN_REAL("tx_power_mbs_dbm", radio.tx_power_mbs_dbm),
      MMBN_REAL("tx_power_sbs_dbm", radio.tx_power_sbs_dbm),
      MMBN_COUNT("num_sbs", topology.num_sbs),
      MMBN_COUNT("num_mnos", topology.num_mnos),
      MMBN_REAL("bandwidth_hz", radio.bandwidth_hz),
      MMBN_COUNT("subchannels", radio.subchannels),
      MMBN_REAL("shadow_std_los_db", radio.path_loss.shadow_std_los_db),
      MMBN_REAL("shadow_std_nlos_db", radio.path_loss.shadow_std_nlos_db),
      MMBN_REAL("path_loss_exponent_los", radio.path_loss.exponent_los),
      MMBN_REAL("path_loss_exponent_nlos", radio.path_loss.exponent_nlos),
      MMBN_REAL("reference_distance_m", radio.path_loss.reference_distance_m),
      MMBN_REAL("main_lobe_gain_db", radio.antenna.main_lobe_db),
      MMBN_REAL("side_lobe_gain_db", radio.antenna.side_lobe_db),
      MMBN_REAL("beamwidth_deg", radio.antenna.beamwidth_deg),
      MMBN_REAL("noise_psd_dbm_hz", radio.noise_psd_dbm_hz),
      MMBN_REAL("area_radius_m", topology.area_radius_m),
      MMBN_REAL("comm_range_m", topology.comm_range_m),
      MMBN_REAL("min_rate_bps", radio.min_rate_bps),
      MMBN_REAL("price", price),
      MMBN_REAL("los_probability", radio.los_probability),
      MMBN_REAL("kappa_mbps", kappa_mbps),
      MMBN_COUNT("sbs_quota", formation.sbs_quota),
      Parameter{"mbs_quota",
                [](ExperimentConfig& c, const json& v) {
                  c.formation.mbs_quota = (v.is_null() || v == "unbounded") ? kUnbounded : count("mbs_quota", v);
                },
                [](const ExperimentConfig& c) {
                  return c.formation.mbs_quota == kUnbounded ? json("unbounded") : json(c.formation.mbs_quota);
                }},
      Parameter{"fading",
                [](ExperimentConfig& c, const json& v) {
                  const auto s = text("fading", v);
                  if (s == "rayleigh") c.radio.fading = FadingLaw::Rayleigh;
                  else if (s == "none") c.radio.fading = FadingLaw::None;
                  else throw ConfigError("fading must be 'rayleigh' or 'none', got '" + s + "'");
                },
                [](const ExperimentConfig& c) { return json(c.radio.fading == FadingLaw::Rayleigh ? "rayleigh" : "none"); }},
      Parameter{"interference_gain",
                [](ExperimentConfig& c, const json& v) {
                  const auto s = text("interference_gain", v);
                  if (s == "random_boresight") c.radio.interference_gain = InterferenceGainLaw::RandomBoresight;
                  else if (s == "side_lobe") c.radio.interference_gain = InterferenceGainLaw::SideLobe;
                  else throw ConfigError("interference_gain must be 'random_boresight' or 'side_lobe', got '" + s + "'");
                },
                [](const ExperimentConfig& c) {
                  return json(c.radio.interference_gain == InterferenceGainLaw::RandomBoresight ? "random_boresight"
                                                                                               : "side_lobe");
                }},
      MMBN_COUNT("max_exhaustive_sbs", limits.max_sbs),
      MMBN_COUNT("max_exhaustive_subchannels", limits.max_subchannels),
      MMBN_REAL("max_exhaustive_leaves", limits.max_leaves),
  };
  return params;
}

#undef MMBN_REAL
#undef MMBN_COUNT

const Parameter* find_parameter(const std::string& key) {
  for (const auto& p : registry())
    if (p.name == key) return &p;
  return nullptr;
}

std::string joined(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
  return out;
}

std::vector<double> steps(double lo, double hi, double step) {
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::llround((hi - lo) / step));
  for (std::size_t i = 0; i <= n; ++i) out.push_back(lo + step * static_cast<double>(i));
  return out;
}

std::vector<std::string> scheme_list(const json& v) {
  std::vector<std::string> out;
  if (v.is_string()) {
    std::stringstream ss(v.get<std::string>());
    for (std::string s; std::getline(ss, s, ',');)
      if (!s.empty()) out.push_back(s);
  } else if (v.is_array()) {
    for (const auto& s : v) out.push_back(text("schemes", s));
  } else {
    throw ConfigError("schemes must be a list or a comma-separated string");
  }
  return out;
}

std::vector<SweepAxis> sweep_list(const json& v) {
  if (!v.is_array()) throw ConfigError("sweep must be a list of {\"key\", \"values\"} objects");
  std::vector<SweepAxis> out;
  for (const auto& a : v) {
    if (!a.is_object() || !a.contains("key") || !a.contains("values"))
      throw ConfigError("sweep entries need \"key\" and \"values\"");
    SweepAxis axis{text("sweep key", a["key"]), {}};
    if (!a["values"].is_array() || a["values"].empty()) throw ConfigError("sweep values must be a non-empty list");
    for (const auto& x : a["values"]) axis.values.push_back(number(axis.key, x));
    out.push_back(std::move(axis));
  }
  return out;
}

bool set_experiment_key(ExperimentConfig& cfg, const std::string& key, const json& v) {
  if (key == "preset") cfg.preset = text(key, v);
  else if (key == "schemes" || key == "scheme") cfg.schemes = scheme_list(v);
  else if (key == "seeds") cfg.seeds = count(key, v);
  else if (key == "first_seed") cfg.first_seed = count(key, v);
  else if (key == "sweep") cfg.sweep = sweep_list(v);
  else if (key == "cdf_points") cfg.cdf_points = count(key, v);
  else if (key == "snapshot") {
    if (!v.is_boolean()) throw ConfigError("snapshot expects true or false");
    cfg.snapshot = v.get<bool>();
  } else return false;
  return true;
}

}  // namespace

const std::vector<std::string>& parameter_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& p : registry()) out.push_back(p.name);
    return out;
  }();
  return names;
}

void set_parameter(ExperimentConfig& cfg, const std::string& key, const nlohmann::json& value) {
  const Parameter* p = find_parameter(key);
  if (!p) throw ConfigError("unknown parameter '" + key + "'; known: " + joined(parameter_names()));
  p->set(cfg, value);
}

nlohmann::json parameters_to_json(const ExperimentConfig& cfg) {
  json out = json::object();
  for (const auto& p : registry()) out[p.name] = p.get(cfg);
  return out;
}

const std::vector<std::string>& scheme_names() {
  static const std::vector<std::string> names{"cooperative", "noncoop", "random", "optimal"};
  return names;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "overhead"};
  return names;
}

ExperimentConfig make_preset(const std::string& name) {
  ExperimentConfig c;
  c.preset = name;
  c.radio.los_probability = 0.5;
  if (name == "fig3") {
    c.topology.num_mnos = 2;
    c.radio.subchannels = 4;
    c.schemes = {"cooperative", "noncoop", "random", "optimal"};
    c.seeds = 100;
    c.sweep = {{"num_sbs", {2, 3, 4, 5, 6}}};
  } else if (name == "fig4") {
    c.topology.num_mnos = 5;
    c.sweep = {{"num_sbs", steps(5, 65, 10)}};
  } else if (name == "fig5") {
    c.topology.num_sbs = 40;
    c.topology.num_mnos = 5;
    c.sweep = {{"los_probability", steps(0, 1, 0.2)}};
  } else if (name == "fig6") {
    c.topology.num_sbs = 60;
    c.topology.num_mnos = 5;
  } else if (name == "fig7") {
    c.topology.num_sbs = 20;
    c.topology.num_mnos = 5;
    c.schemes = {"cooperative"};
    c.sweep = {{"los_probability", steps(0.2, 1, 0.2)}};
  } else if (name == "fig8") {
    c.topology.num_sbs = 15;
    c.topology.num_mnos = 3;
    c.schemes = {"cooperative", "noncoop"};
    c.seeds = 100;
    c.sweep = {{"price", steps(0, 10, 1)}, {"kappa_mbps", steps(0, 100, 10)}};
  } else if (name == "fig9") {
    c.topology.num_sbs = 20;
    c.topology.num_mnos = 2;
    c.schemes = {"cooperative", "noncoop"};
    c.seeds = 1;
    c.snapshot = true;
  } else if (name == "overhead") {
    c.topology.num_mnos = 5;
    c.schemes = {"cooperative"};
    c.seeds = 50;
    c.sweep = {{"num_sbs", steps(5, 65, 10)}};
  } else {
    throw ConfigError("unknown preset '" + name + "'; available: " + joined(preset_names()));
  }
  return c;
}

ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig base) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (key != "defaults" && key != "experiment")
      throw ConfigError("unknown top-level key '" + key + "'; expected 'defaults' and 'experiment'");
  if (doc.contains("experiment") && doc["experiment"].contains("preset")) {
    const auto& name = doc["experiment"]["preset"];
    if (!name.is_string()) throw ConfigError("preset must be a string");
    // "custom" names a config built from the defaults, as written to manifests.
    if (name != "custom") base = make_preset(name.get<std::string>());
    else base.preset = "custom";
  }
  if (doc.contains("defaults")) {
    if (!doc["defaults"].is_object()) throw ConfigError("'defaults' must be an object");
    for (const auto& [key, value] : doc["defaults"].items()) set_parameter(base, key, value);
  }
  if (doc.contains("experiment")) {
    if (!doc["experiment"].is_object()) throw ConfigError("'experiment' must be an object");
    for (const auto& [key, value] : doc["experiment"].items())
      if (key != "preset" && !set_experiment_key(base, key, value))
        throw ConfigError("unknown experiment key '" + key + "'");
  }
  return base;
}

ExperimentConfig config_from_text(const std::string& content, ExperimentConfig base) {
  json doc;
  try {
    doc = json::parse(content);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < content.size(); ++i) {
      if (content[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream os;
    os << "config parse error at line " << line << ", column " << col << ": " << e.what();
    throw ConfigError(os.str());
  }
  return config_from_json(doc, std::move(base));
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  json sweep = json::array();
  for (const auto& a : cfg.sweep) sweep.push_back({{"key", a.key}, {"values", a.values}});
  return {{"defaults", parameters_to_json(cfg)},
          {"experiment",
           {{"preset", cfg.preset},
            {"schemes", cfg.schemes},
            {"seeds", cfg.seeds},
            {"first_seed", cfg.first_seed},
            {"sweep", sweep},
            {"cdf_points", cfg.cdf_points},
            {"snapshot", cfg.snapshot}}}};
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  if (!set_experiment_key(cfg, key, value)) set_parameter(cfg, key, value);
}

std::uint64_t fnv1a(const std::string& content) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : content) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<ExperimentConfig> sweep_points(const ExperimentConfig& cfg) {
  std::vector<ExperimentConfig> points{cfg};
  for (const auto& axis : cfg.sweep) {
    std::vector<ExperimentConfig> next;
    for (const auto& p : points)
      for (double v : axis.values) {
        ExperimentConfig q = p;
        set_parameter(q, axis.key, json(v));
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }
  return points;
}

PricingConfig RunSetup::pricing() const { return PricingConfig::uniform(topology.num_sbs + 1, price, kappa_mbps * 1e6); }

RunSetup setup_of(const ExperimentConfig& p) {
  return RunSetup{p.topology, p.radio, p.formation, p.limits, p.price, p.kappa_mbps};
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.schemes.empty()) throw ConfigError("no scheme selected");
  for (const auto& s : cfg.schemes)
    if (std::find(scheme_names().begin(), scheme_names().end(), s) == scheme_names().end())
      throw ConfigError("unknown scheme '" + s + "'; available: " + joined(scheme_names()));
  for (std::size_t i = 0; i < cfg.schemes.size(); ++i)
    for (std::size_t j = i + 1; j < cfg.schemes.size(); ++j)
      if (cfg.schemes[i] == cfg.schemes[j]) throw ConfigError("scheme '" + cfg.schemes[i] + "' listed twice");
  if (cfg.seeds == 0) throw ConfigError("seeds must be at least 1");
  if (cfg.cdf_points < 2) throw ConfigError("cdf_points must be at least 2");
  for (const auto& a : cfg.sweep)
    if (!find_parameter(a.key)) throw ConfigError("unknown sweep key '" + a.key + "'; known: " + joined(parameter_names()));

  const bool optimal = std::find(cfg.schemes.begin(), cfg.schemes.end(), "optimal") != cfg.schemes.end();
  for (const auto& p : sweep_points(cfg)) {
    const auto& t = p.topology;
    if (t.num_sbs < 1) throw ConfigError("num_sbs must be at least 1");
    if (t.num_mnos < 1) throw ConfigError("num_mnos must be at least 1");
    if (!(t.area_radius_m > 0) || !(t.comm_range_m > 0)) throw ConfigError("area_radius_m and comm_range_m must be positive");
    p.radio.validate();
    if (p.formation.sbs_quota < 1 || p.formation.mbs_quota < 1) throw ConfigError("quotas must be at least 1");
    if (p.price < 0 || p.kappa_mbps < 0) throw ConfigError("price and kappa_mbps must be non-negative");
    if (optimal && (t.num_sbs > p.limits.max_sbs || p.radio.subchannels > p.limits.max_subchannels)) {
      std::ostringstream os;
      os << "scheme 'optimal' handles at most " << p.limits.max_sbs << " SBSs and " << p.limits.max_subchannels
         << " sub-channels; this experiment asks for " << t.num_sbs << " SBSs and " << p.radio.subchannels
         << " sub-channels";
      throw ConfigError(os.str());
    }
  }
}

namespace {

struct Built {
  BackhaulNetwork net;
  FormationOptions options;
};

Built build(const RunSetup& s, const Topology& topo, const ChannelRealization& ch, const PricingConfig& pricing,
            const std::string& scheme, std::uint64_t seed) {
  FormationOptions opts = s.formation;
  if (scheme == "cooperative") return {form_network(topo, ch, s.radio, pricing, opts), opts};
  if (scheme == "noncoop") {
    opts.cooperative = false;
    return {non_cooperative(topo, ch, s.radio, pricing, opts), opts};
  }
  if (scheme == "random") return {random_baseline(topo, ch, s.radio, pricing, seed, opts), opts};
  if (scheme == "optimal") return {exhaustive_optimal(topo, ch, s.radio, pricing, opts, s.limits).network, opts};
  throw ConfigError("unknown scheme '" + scheme + "'");
}

}  // namespace

std::vector<SchemeRun> run_seed(const RunSetup& setup, std::uint64_t seed, const std::vector<std::string>& schemes) {
  const Topology topo = generate_topology(seed, setup.topology);
  const ChannelRealization ch = sample_channel(topo, setup.radio, seed);
  const PricingConfig pricing = setup.pricing();
  std::vector<SchemeRun> out;
  for (const auto& scheme : schemes) {
    const Built b = build(setup, topo, ch, pricing, scheme, seed);
    SchemeRun r;
    r.scheme = scheme;
    r.metrics = collect_metrics(topo, pricing, b.net);
    r.overhead = overhead_check(b.net, b.options, setup.radio.subchannels);
    r.structural_violations = structural_violations(topo, setup.radio, b.options, b.net).size();
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

std::ofstream open_csv(const std::filesystem::path& path, const std::string& header) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << header << '\n';
  return os;
}

std::string point_columns(const ExperimentConfig& p) {
  std::ostringstream os;
  os << p.topology.num_sbs << ',' << p.topology.num_mnos << ',' << format_double(p.radio.los_probability) << ','
     << format_double(p.price) << ',' << format_double(p.kappa_mbps);
  return os.str();
}

void write_snapshot(const ExperimentConfig& point, std::uint64_t seed, const std::filesystem::path& out) {
  const RunSetup s = setup_of(point);
  const Topology topo = generate_topology(seed, s.topology);
  const ChannelRealization ch = sample_channel(topo, s.radio, seed);
  const PricingConfig pricing = s.pricing();
  std::ofstream(out / "topology.json", std::ios::binary) << topology_to_json(topo).dump(2) << '\n';
  std::ofstream(out / "channel.json", std::ios::binary) << channel_to_json(ch, s.radio).dump() << '\n';
  for (std::size_t i = 0; i < point.schemes.size(); ++i) {
    const auto& scheme = point.schemes[i];
    const Built b = build(s, topo, ch, pricing, scheme, seed);
    std::ofstream(out / ("formation_" + scheme + ".json"), std::ios::binary)
        << formation_to_json(b.net.formation).dump(2) << '\n';
    const auto rows = allocation_rows(topo, s.radio, ch, b.net);
    std::ofstream a(out / ("allocation_" + scheme + ".csv"), std::ios::binary);
    write_allocation_csv(a, rows);
    if (i == 0) {
      std::ofstream first(out / "allocation.csv", std::ios::binary);
      write_allocation_csv(first, rows);
    }
  }
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out, std::size_t workers) {
  validate(cfg);
  std::filesystem::create_directories(out);
  const auto points = sweep_points(cfg);
  std::vector<std::uint64_t> seeds;
  for (std::size_t i = 0; i < cfg.seeds; ++i) seeds.push_back(cfg.first_seed + i);

  const std::size_t tasks = points.size() * seeds.size();
  std::vector<std::vector<SchemeRun>> results(tasks);
  std::vector<std::exception_ptr> errors(tasks);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks;) {
      try {
        results[t] = run_seed(setup_of(points[t / seeds.size()]), seeds[t % seeds.size()], cfg.schemes);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(workers, tasks));
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  auto sumrate = open_csv(out / "sumrate.csv", "seed,scheme,M,N,rho,sum_rate_bps");
  auto summary = open_csv(out / "summary.csv",
                          "scheme,M,N,rho,q,kappa,runs,mean_bps,std_bps,stderr_bps,mean_unmatched,"
                          "mean_rth_violations,violations");
  auto cdf = open_csv(out / "cdf.csv", "scheme,M,N,rho,q,kappa,sum_rate_bps,cdf");
  auto overhead = open_csv(out / "overhead.csv", "seed,scheme,M,N,rho,stage,kind,a_bs,size,quota,messages,bound");
  std::map<std::string, std::ofstream> cost;
  for (std::size_t s = 0; s < cfg.schemes.size(); ++s)
    cost.emplace(cfg.schemes[s], open_csv(out / (s == 0 ? std::string("cost.csv") : "cost_" + cfg.schemes[s] + ".csv"),
                                          "q,kappa,mno,cost"));

  double top = 0.0;
  for (const auto& r : results)
    for (const auto& s : r) top = std::max(top, s.metrics.sum_rate_bps);
  const auto grid = linear_grid(0.0, top, cfg.cdf_points);

  for (std::size_t p = 0; p < points.size(); ++p) {
    const auto& point = points[p];
    const std::string cols = point_columns(point);
    for (std::size_t s = 0; s < cfg.schemes.size(); ++s) {
      const auto& scheme = cfg.schemes[s];
      std::vector<double> sums;
      std::vector<double> cost_sum(point.topology.num_mnos, 0.0);
      double unmatched = 0.0, below = 0.0;
      std::size_t violations = 0;
      for (std::size_t i = 0; i < seeds.size(); ++i) {
        const SchemeRun& run = results[p * seeds.size() + i][s];
        const auto& m = run.metrics;
        sums.push_back(m.sum_rate_bps);
        for (std::size_t n = 0; n < cost_sum.size(); ++n) cost_sum[n] += m.mno_cost[n];
        unmatched += static_cast<double>(m.unmatched_count);
        below += static_cast<double>(m.rth_violations);
        violations += run.structural_violations + run.overhead.failures.size();
        sumrate << seeds[i] << ',' << scheme << ',' << point.topology.num_sbs << ',' << point.topology.num_mnos << ','
                << format_double(point.radio.los_probability) << ',' << format_double(m.sum_rate_bps) << '\n';
        for (const auto& o : run.overhead.stages)
          overhead << seeds[i] << ',' << scheme << ',' << point.topology.num_sbs << ',' << point.topology.num_mnos
                   << ',' << format_double(point.radio.los_probability) << ',' << o.stage << ",formation,,"
                   << o.demanders << ',' << (o.quota == kUnbounded ? std::string("inf") : std::to_string(o.quota))
                   << ',' << o.messages << ',' << format_double(o.bound) << '\n';
        for (const auto& o : run.overhead.anchors) {
          const std::size_t q = point.formation.quota_of(o.anchor);
          overhead << seeds[i] << ',' << scheme << ',' << point.topology.num_sbs << ',' << point.topology.num_mnos
                   << ',' << format_double(point.radio.los_probability) << ',' << o.stage << ",allocation,"
                   << o.anchor.value << ',' << o.children << ','
                   << (q == kUnbounded ? std::string("inf") : std::to_string(q)) << ',' << o.messages << ','
                   << format_double(o.bound) << '\n';
        }
      }
      const double runs = static_cast<double>(seeds.size());
      const Summary sm = aggregate(sums, grid);
      summary << scheme << ',' << cols << ',' << sm.runs << ',' << format_double(sm.mean) << ','
              << format_double(sm.stddev) << ',' << format_double(sm.standard_error()) << ','
              << format_double(unmatched / runs) << ',' << format_double(below / runs) << ',' << violations << '\n';
      for (std::size_t g = 0; g < grid.size(); ++g)
        cdf << scheme << ',' << cols << ',' << format_double(grid[g]) << ',' << format_double(sm.cdf[g]) << '\n';
      for (std::size_t n = 0; n < cost_sum.size(); ++n)
        cost[scheme] << format_double(point.price) << ',' << format_double(point.kappa_mbps) << ',' << n << ','
                     << format_double(cost_sum[n] / runs) << '\n';
    }
  }

  if (cfg.snapshot) write_snapshot(points.front(), seeds.front(), out);

  const std::string canonical = config_to_json(cfg).dump();
  std::ostringstream hash;
  hash << std::hex << fnv1a(canonical);
  const json manifest{{"version", kVersion}, {"config_hash", hash.str()}, {"seeds", seeds},
                      {"config", config_to_json(cfg)}};
  std::ofstream(out / "manifest.json", std::ios::binary) << manifest.dump(2) << '\n';
}

}  // namespace mmbn
