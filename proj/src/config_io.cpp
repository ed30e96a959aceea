#include "pqnb/config_io.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "pqnb/error.hpp"

namespace pqnb {
namespace {

// Typed access to one JSON object that remembers which keys were consumed.
class Fields {
 public:
  Fields(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "must be a JSON object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const Json* raw(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const Json* v = raw(key)) {
      if (!v->is_number()) throw ConfigError(at(key), "must be a number");
      out = v->get<double>();
    }
  }

  template <class Int>
  void integer(const std::string& key, Int& out) {
    if (const Json* v = raw(key)) {
      if (!v->is_number_integer()) throw ConfigError(at(key), "must be an integer");
      if (v->is_number_unsigned()) {
        const auto u = v->get<std::uint64_t>();
        if (u > static_cast<std::uint64_t>(std::numeric_limits<Int>::max())) throw ConfigError(at(key), "out of range");
        out = static_cast<Int>(u);
      } else {
        const auto s = v->get<std::int64_t>();
        if constexpr (std::is_unsigned_v<Int>) {
          if (s < 0) throw ConfigError(at(key), "must be nonnegative");
        }
        if (s > static_cast<std::int64_t>(std::numeric_limits<Int>::max()) ||
            (std::is_signed_v<Int> && s < static_cast<std::int64_t>(std::numeric_limits<Int>::min()))) {
          throw ConfigError(at(key), "out of range");
        }
        out = static_cast<Int>(s);
      }
    }
  }

  void boolean(const std::string& key, bool& out) {
    if (const Json* v = raw(key)) {
      if (!v->is_boolean()) throw ConfigError(at(key), "must be true or false");
      out = v->get<bool>();
    }
  }

  void string(const std::string& key, std::string& out) {
    if (const Json* v = raw(key)) {
      if (!v->is_string()) throw ConfigError(at(key), "must be a string");
      out = v->get<std::string>();
    }
  }

  std::string require_string(const std::string& key) {
    std::string s;
    if (!j_.contains(key)) throw ConfigError(at(key), "is required");
    string(key, s);
    return s;
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(at(key), "unknown field");
    }
  }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace

Json to_json(const ChannelConfig& c) {
  return {{"prb_bandwidth_hz", c.prb_bandwidth_hz}, {"n_subcarriers", c.n_subcarriers},
          {"subcarrier_hz", c.subcarrier_hz},       {"ul_rate_bps", c.ul_rate_bps},
          {"dl_rate_bps", c.dl_rate_bps},           {"ul_repetitions", c.ul_repetitions},
          {"dl_repetitions", c.dl_repetitions},     {"turnaround_s", c.turnaround_s},
          {"ack_time_s", c.ack_time_s},             {"mss_bytes", c.mss_bytes},
          {"ack_every", c.ack_every}};
}

Json to_json(const OverheadSplitPolicy& p) {
  return {{"flight1", p.flight1}, {"flight2", p.flight2}, {"flight3", p.flight3}};
}

Json to_json(const SimConfig& c) {
  Json start;
  if (const auto* p = std::get_if<Poisson>(&c.start_policy)) {
    start = {{"kind", "poisson"}, {"rate_per_s", p->rate_per_s}};
  } else {
    start = {{"kind", "simultaneous"}};
  }
  Json rule;
  if (const auto* ld = std::get_if<LogDistanceMcl>(&c.ce_rule)) {
    rule = {{"kind", "log_distance"}, {"reference_loss_db", ld->reference_loss_db}, {"exponent", ld->exponent}};
  } else {
    rule = {{"kind", "ce0_only"}};
  }
  return {{"n_devices", c.n_devices},
          {"suite_name", c.suite_name},
          {"seed", c.seed},
          {"radius_m", c.radius_m},
          {"start_policy", start},
          {"channel", to_json(c.channel)},
          {"split_policy", to_json(c.split_policy)},
          {"tcp_setup_rtt", c.tcp_setup_rtt},
          {"ce_rule", rule}};
}

ChannelConfig channel_from_json(const Json& j, ChannelConfig c, const std::string& path) {
  Fields f(j, path);
  f.number("prb_bandwidth_hz", c.prb_bandwidth_hz);
  f.integer("n_subcarriers", c.n_subcarriers);
  f.number("subcarrier_hz", c.subcarrier_hz);
  f.number("ul_rate_bps", c.ul_rate_bps);
  f.number("dl_rate_bps", c.dl_rate_bps);
  f.integer("ul_repetitions", c.ul_repetitions);
  f.integer("dl_repetitions", c.dl_repetitions);
  f.number("turnaround_s", c.turnaround_s);
  f.number("ack_time_s", c.ack_time_s);
  f.integer("mss_bytes", c.mss_bytes);
  f.integer("ack_every", c.ack_every);
  f.finish();
  return c;
}

OverheadSplitPolicy split_from_json(const Json& j, const std::string& path) {
  Fields f(j, path);
  OverheadSplitPolicy p{0, 0, 0};
  for (const char* key : {"flight1", "flight2", "flight3"}) {
    if (!j.contains(key)) throw ConfigError(f.at(key), "is required");
  }
  f.number("flight1", p.flight1);
  f.number("flight2", p.flight2);
  f.number("flight3", p.flight3);
  f.finish();
  return p;
}

SimConfig sim_config_from_json(const Json& j, SimConfig c) {
  Fields f(j, "");
  f.integer("n_devices", c.n_devices);
  f.string("suite_name", c.suite_name);
  f.integer("seed", c.seed);
  f.number("radius_m", c.radius_m);
  if (const Json* sp = f.raw("start_policy")) {
    Fields s(*sp, "start_policy");
    const std::string kind = s.require_string("kind");
    if (kind == "simultaneous") {
      c.start_policy = Simultaneous{};
    } else if (kind == "poisson") {
      Poisson p;
      s.number("rate_per_s", p.rate_per_s);
      c.start_policy = p;
    } else {
      throw ConfigError("start_policy.kind", "must be 'simultaneous' or 'poisson', got '" + kind + "'");
    }
    s.finish();
  }
  if (const Json* ch = f.raw("channel")) c.channel = channel_from_json(*ch, c.channel);
  if (const Json* sp = f.raw("split_policy")) c.split_policy = split_from_json(*sp);
  f.boolean("tcp_setup_rtt", c.tcp_setup_rtt);
  if (const Json* cr = f.raw("ce_rule")) {
    Fields s(*cr, "ce_rule");
    const std::string kind = s.require_string("kind");
    if (kind == "ce0_only") {
      c.ce_rule = Ce0Only{};
    } else if (kind == "log_distance") {
      LogDistanceMcl ld;
      s.number("reference_loss_db", ld.reference_loss_db);
      s.number("exponent", ld.exponent);
      c.ce_rule = ld;
    } else {
      throw ConfigError("ce_rule.kind", "must be 'ce0_only' or 'log_distance', got '" + kind + "'");
    }
    s.finish();
  }
  f.finish();
  return c;
}

namespace {

Range range_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError(path, "must be a [lo, hi] pair of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

SearchSpace search_space_from_json(const Json& j, SearchSpace s) {
  Fields f(j, "search_space");
  const std::pair<const char*, Range*> ranges[] = {
      {"ul_rate_bps", &s.ul_rate_bps},     {"dl_rate_bps", &s.dl_rate_bps},
      {"turnaround_s", &s.turnaround_s},   {"ack_time_s", &s.ack_time_s},
      {"split_flight1", &s.split_flight1}, {"split_flight3", &s.split_flight3},
  };
  for (const auto& [key, dst] : ranges) {
    if (const Json* v = f.raw(key)) *dst = range_from_json(*v, f.at(key));
  }
  f.integer("mss_bytes", s.mss_bytes);
  f.integer("ack_every", s.ack_every);
  f.boolean("tcp_setup_rtt", s.tcp_setup_rtt);
  f.integer("samples", s.samples);
  f.integer("refine_rounds", s.refine_rounds);
  f.integer("restarts", s.restarts);
  f.integer("seed", s.seed);
  f.finish();
  return s;
}

Json to_json(const CipherSuite& s) {
  return {{"name", s.name},
          {"kem",
           {{"name", s.kem.name},
            {"client_key_share_bytes", s.kem.client_key_share_bytes},
            {"server_key_share_bytes", s.kem.server_key_share_bytes}}},
          {"sig",
           {{"name", s.sig.name},
            {"signature_bytes", s.sig.signature_bytes},
            {"public_key_bytes", s.sig.public_key_bytes},
            {"nist_level", s.sig.nist_level}}},
          {"chain_bytes", s.chain_bytes ? Json(*s.chain_bytes) : Json(nullptr)},
          {"total_handshake_bytes", s.total_handshake_bytes}};
}

Json to_json(const SuiteCatalog& catalog) {
  Json arr = Json::array();
  for (const auto& s : catalog.suites()) arr.push_back(to_json(s));
  return {{"suites", arr}};
}

CipherSuite suite_from_json(const Json& j) {
  Fields f(j, "suites[]");
  CipherSuite s;
  s.name = f.require_string("name");
  const std::string p = "suites[" + s.name + "]";
  const Json* kem = f.raw("kem");
  const Json* sig = f.raw("sig");
  if (!kem) throw ConfigError(p + ".kem", "is required");
  if (!sig) throw ConfigError(p + ".sig", "is required");
  {
    Fields k(*kem, p + ".kem");
    s.kem.name = k.require_string("name");
    k.integer("client_key_share_bytes", s.kem.client_key_share_bytes);
    k.integer("server_key_share_bytes", s.kem.server_key_share_bytes);
    k.finish();
  }
  {
    Fields g(*sig, p + ".sig");
    s.sig.name = g.require_string("name");
    g.integer("signature_bytes", s.sig.signature_bytes);
    g.integer("public_key_bytes", s.sig.public_key_bytes);
    g.integer("nist_level", s.sig.nist_level);
    g.finish();
  }
  if (const Json* chain = f.raw("chain_bytes"); chain && !chain->is_null()) {
    ByteCount v = 0;
    f.integer("chain_bytes", v);
    s.chain_bytes = v;
  }
  f.integer("total_handshake_bytes", s.total_handshake_bytes);
  f.finish();
  validate_suite(s);
  return s;
}

SuiteCatalog catalog_from_json(const Json& j) {
  const Json* arr = &j;
  if (j.is_object()) {
    Fields f(j, "");
    arr = f.raw("suites");
    if (!arr) throw ConfigError("suites", "is required");
    f.finish();
  }
  if (!arr->is_array()) throw ConfigError("suites", "must be an array");
  std::vector<CipherSuite> suites;
  for (const auto& item : *arr) suites.push_back(suite_from_json(item));
  if (suites.empty()) throw ConfigError("suites", "must not be empty");
  return SuiteCatalog(std::move(suites));
}

Json to_json(const DeviceRecord& r) {
  return {{"id", r.id},
          {"x_m", r.position.x_m},
          {"y_m", r.position.y_m},
          {"distance_m", r.distance_m},
          {"ce_class", ce_mode(r.ce_class).name},
          {"subcarrier", r.subcarrier},
          {"t_arrive", r.t_arrive},
          {"t_granted", r.t_granted},
          {"t_flight1_done", r.t_flight1_done},
          {"t_flight2_done", r.t_flight2_done},
          {"t_complete", r.t_complete},
          {"queue_delay_s", r.queue_delay_s()},
          {"bytes_transmitted", r.bytes_transmitted}};
}

Json to_json(const AggregateMetrics& m) {
  return {{"suite_name", m.suite_name},
          {"n_devices", m.n_devices},
          {"mean_handshake_s", m.mean_handshake_s},
          {"stdev_handshake_s", m.stdev_handshake_s},
          {"mean_device_throughput_bps", m.mean_device_throughput_bps},
          {"min_handshake_s", m.min_handshake_s},
          {"max_handshake_s", m.max_handshake_s},
          {"queued_devices", m.queued_devices}};
}

Json to_json(const RunResult& r) {
  Json devices = Json::array();
  for (const auto& d : r.devices) devices.push_back(to_json(d));
  return {{"config", to_json(r.config)},
          {"aggregate", to_json(r.aggregate)},
          {"devices", devices},
          {"wall_events", r.wall_events}};
}

Json to_json(const CalibrationAnchor& a) {
  Json j = {{"suite_name", a.suite_name}, {"n_devices", a.n_devices}, {"target", a.target},
          {"kind", to_string(a.kind)},  {"metric", to_string(a.metric)}, {"source", a.source}};
  if (!a.reference_suite.empty()) j["reference_suite"] = a.reference_suite;
  return j;
}

Json to_json(const CalibrationResult& r) {
  Json res = Json::array();
  for (const auto& x : r.residuals) {
    res.push_back({{"anchor", to_json(x.anchor)},
                   {"simulated", x.simulated},
                   {"relative_error", x.relative_error},
                   {"satisfied", x.satisfied}});
  }
  return {{"channel", to_json(r.channel)},
          {"split_policy", to_json(r.split)},
          {"max_point_error", r.max_point_error},
          {"evaluations", r.evaluations},
          {"residuals", res}};
}

std::vector<CalibrationAnchor> anchors_from_json(const Json& j) {
  const Json* arr = &j;
  if (j.is_object()) {
    Fields f(j, "");
    arr = f.raw("anchors");
    if (!arr) throw ConfigError("anchors", "is required");
    f.raw("description");
    f.finish();
  }
  if (!arr->is_array()) throw ConfigError("anchors", "must be an array");
  std::vector<CalibrationAnchor> out;
  for (const auto& item : *arr) {
    Fields f(item, "anchors[" + std::to_string(out.size()) + "]");
    CalibrationAnchor a;
    a.suite_name = f.require_string("suite_name");
    f.integer("n_devices", a.n_devices);
    if (!item.contains("target")) throw ConfigError(f.at("target"), "is required");
    f.number("target", a.target);
    std::string kind = "point";
    f.string("kind", kind);
    if (kind == "point") {
      a.kind = AnchorKind::kPoint;
    } else if (kind == "lower_bound") {
      a.kind = AnchorKind::kLowerBound;
    } else if (kind == "upper_bound") {
      a.kind = AnchorKind::kUpperBound;
    } else {
      throw ConfigError(f.at("kind"), "must be point, lower_bound or upper_bound");
    }
    std::string metric = "mean_handshake_s";
    f.string("metric", metric);
    if (metric == "mean_handshake_s") {
      a.metric = AnchorMetric::kMeanHandshakeS;
    } else if (metric == "mean_throughput_bps") {
      a.metric = AnchorMetric::kMeanThroughputBps;
    } else if (metric == "throughput_deficit") {
      a.metric = AnchorMetric::kThroughputDeficit;
    } else {
      throw ConfigError(f.at("metric"), "must be mean_handshake_s, mean_throughput_bps or throughput_deficit");
    }
    f.string("reference_suite", a.reference_suite);
    f.string("source", a.source);
    f.finish();
    validate(a);
    out.push_back(std::move(a));
  }
  return out;
}

Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError("document", std::string("invalid JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error(ErrorCode::kIo, "write failed for '" + path + "'");
}

}  // namespace pqnb
