#include "pqnb/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "pqnb/error.hpp"

namespace pqnb {
namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string kem_part(const std::string& suite) { return suite.substr(0, suite.find('+')); }

std::string sig_part(const std::string& suite) {
  const auto plus = suite.find('+');
  return plus == std::string::npos ? std::string() : suite.substr(plus + 1);
}

bool classical_signature(const std::string& suite) {
  const std::string sig = sig_part(suite);
  return sig.rfind("ecdsa", 0) == 0 || sig.rfind("rsa", 0) == 0;
}

}  // namespace

ExperimentSpec normalized(ExperimentSpec spec, const SuiteCatalog& catalog) {
  if (spec.suites.empty()) {
    for (const auto& s : catalog.suites()) spec.suites.push_back(s.name);
  }
  for (const auto& name : spec.suites) {
    if (!catalog.find(name)) throw ConfigError("suites", "unknown suite '" + name + "'");
  }
  if (spec.device_counts.empty()) throw ConfigError("device_counts", "must not be empty");
  for (auto n : spec.device_counts) {
    if (n < 1) throw ConfigError("device_counts", "every device count must be >= 1");
  }
  if (spec.seeds.empty()) throw ConfigError("seeds", "must not be empty");
  SimConfig probe = spec.base;
  probe.suite_name = spec.suites.front();
  probe.n_devices = spec.device_counts.front();
  validate(probe);
  return spec;
}

std::vector<SimConfig> expand(const ExperimentSpec& spec) {
  std::vector<SimConfig> out;
  for (const auto& suite : spec.suites) {
    for (auto n : spec.device_counts) {
      for (auto seed : spec.seeds) {
        SimConfig c = spec.base;
        c.suite_name = suite;
        c.n_devices = n;
        c.seed = seed;
        out.push_back(std::move(c));
      }
    }
  }
  return out;
}

ExperimentSpec experiment_from_json(const Json& j, ExperimentSpec spec) {
  if (!j.is_object()) throw ConfigError("document", "must be a JSON object");
  Json sim = j;
  for (const char* key : {"suites", "device_counts", "seeds", "format"}) sim.erase(key);
  spec.base = sim_config_from_json(sim, spec.base);

  auto list = [&](const char* key) -> const Json* {
    auto it = j.find(key);
    if (it == j.end()) return nullptr;
    if (!it->is_array()) throw ConfigError(key, "must be an array");
    return &*it;
  };
  if (const Json* v = list("suites")) {
    spec.suites.clear();
    for (const auto& s : *v) {
      if (!s.is_string()) throw ConfigError("suites", "entries must be strings");
      spec.suites.push_back(s.get<std::string>());
    }
  }
  if (const Json* v = list("device_counts")) {
    spec.device_counts.clear();
    for (const auto& n : *v) {
      if (!n.is_number_unsigned()) throw ConfigError("device_counts", "entries must be positive integers");
      spec.device_counts.push_back(n.get<std::size_t>());
    }
  }
  if (const Json* v = list("seeds")) {
    spec.seeds.clear();
    for (const auto& s : *v) {
      if (!s.is_number_unsigned()) throw ConfigError("seeds", "entries must be unsigned integers");
      spec.seeds.push_back(s.get<std::uint64_t>());
    }
  }
  // A plain SimConfig document names one suite, device count and seed.
  if (j.contains("suite_name") && !j.contains("suites")) spec.suites = {spec.base.suite_name};
  if (j.contains("n_devices") && !j.contains("device_counts")) spec.device_counts = {spec.base.n_devices};
  if (j.contains("seed") && !j.contains("seeds")) spec.seeds = {spec.base.seed};
  if (auto it = j.find("format"); it != j.end()) {
    const std::string f = it->is_string() ? it->get<std::string>() : "";
    if (f == "csv") {
      spec.format = OutputFormat::kCsv;
    } else if (f == "json") {
      spec.format = OutputFormat::kJson;
    } else {
      throw ConfigError("format", "must be 'csv' or 'json'");
    }
  }
  return spec;
}

Json to_json(const ExperimentSpec& spec) {
  Json j = to_json(spec.base);
  for (const char* key : {"suite_name", "n_devices", "seed"}) j.erase(key);
  j["suites"] = spec.suites;
  j["device_counts"] = spec.device_counts;
  j["seeds"] = spec.seeds;
  j["format"] = spec.format == OutputFormat::kCsv ? "csv" : "json";
  return j;
}

std::string results_csv(std::span<const RunResult> results) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : results) {
    const auto& m = r.aggregate;
    out += m.suite_name + "," + std::to_string(m.n_devices) + "," + std::to_string(r.config.seed) + "," +
           fixed6(m.mean_handshake_s) + "," + fixed6(m.stdev_handshake_s) + "," +
           fixed6(m.mean_device_throughput_bps) + "," + fixed6(m.min_handshake_s) + "," +
           fixed6(m.max_handshake_s) + "," + std::to_string(m.queued_devices) + "\n";
  }
  return out;
}

std::string results_json(const ExperimentSpec& spec, std::span<const RunResult> results) {
  Json runs = Json::array();
  for (const auto& r : results) runs.push_back(to_json(r));
  return Json{{"experiment", to_json(spec)}, {"runs", runs}}.dump(2) + "\n";
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

template <class T>
T parse_number(const std::string& cell, std::size_t line_no) {
  std::istringstream ss(cell);
  T v{};
  ss >> v;
  if (ss.fail() || !ss.eof()) {
    throw Error(ErrorCode::kMalformedResults, "line " + std::to_string(line_no) + ": bad number '" + cell + "'");
  }
  return v;
}

std::vector<ResultRow> parse_json_results(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kMalformedResults, std::string("results JSON does not parse: ") + e.what());
  }
  std::vector<ResultRow> rows;
  try {
    for (const auto& run : doc.at("runs")) {
      const auto& m = run.at("aggregate");
      ResultRow r;
      r.suite = m.at("suite_name").get<std::string>();
      r.n_devices = m.at("n_devices").get<std::size_t>();
      r.seed = run.at("config").at("seed").get<std::uint64_t>();
      r.mean_handshake_s = m.at("mean_handshake_s").get<double>();
      r.stdev_handshake_s = m.at("stdev_handshake_s").get<double>();
      r.mean_throughput_bps = m.at("mean_device_throughput_bps").get<double>();
      r.min_s = m.at("min_handshake_s").get<double>();
      r.max_s = m.at("max_handshake_s").get<double>();
      r.queued_devices = m.at("queued_devices").get<std::size_t>();
      rows.push_back(std::move(r));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kMalformedResults, std::string("results JSON lacks expected fields: ") + e.what());
  }
  return rows;
}

}  // namespace

std::vector<ResultRow> parse_results(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw Error(ErrorCode::kMalformedResults, "results file is empty");
  std::vector<ResultRow> rows;
  if (text[first] == '{') {
    rows = parse_json_results(text);
  } else {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw Error(ErrorCode::kMalformedResults, "unexpected CSV header '" + line + "'");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto c = split_csv_line(line);
      if (c.size() != 9) {
        throw Error(ErrorCode::kMalformedResults, "line " + std::to_string(line_no) + ": expected 9 columns");
      }
      ResultRow r;
      r.suite = c[0];
      r.n_devices = parse_number<std::size_t>(c[1], line_no);
      r.seed = parse_number<std::uint64_t>(c[2], line_no);
      r.mean_handshake_s = parse_number<double>(c[3], line_no);
      r.stdev_handshake_s = parse_number<double>(c[4], line_no);
      r.mean_throughput_bps = parse_number<double>(c[5], line_no);
      r.min_s = parse_number<double>(c[6], line_no);
      r.max_s = parse_number<double>(c[7], line_no);
      r.queued_devices = parse_number<std::size_t>(c[8], line_no);
      rows.push_back(std::move(r));
    }
  }
  if (rows.empty()) throw Error(ErrorCode::kMalformedResults, "results file holds no rows");
  return rows;
}

std::vector<PublishedSizes> published_sizes() {
  return {
      {"ecdhe+ecdsa", 38, 36, std::nullopt, 64, 2048},
      {"ecdhe+rsa2048", 38, 36, std::nullopt, 256, 3026},
      {"kyber512+ecdsa", 806, 772, 592, 64, 3560},
      {"kyber512+rsa2048", 806, 772, std::nullopt, 256, 4522},
      {"kyber512+falcon512", 806, 772, 3404, 690, 6965},
      {"kyber512+dilithium3", 806, 772, 10824, 3293, 16997},
      {"kyber512+sphincs-sha256-128f-simple", 806, 772, 16070, 7856, 26830},
  };
}

TablesReport tables_report(const SuiteCatalog& catalog) {
  const auto published = published_sizes();
  return tables_report(catalog, published);
}

TablesReport tables_report(const SuiteCatalog& catalog, std::span<const PublishedSizes> published) {
  TablesReport rep;
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-6s %-36s %9s %9s %9s %9s %9s %9s\n", "status", "suite", "client_ks", "server_ks",
                "chain", "signature", "overhead", "total");
  out << "Handshake byte accounting (bytes; '*' marks a derived chain size)\n" << buf;
  for (const auto& ref : published) {
    const CipherSuite* s = catalog.find(ref.suite);
    if (!s) {
      ++rep.failed;
      std::snprintf(buf, sizeof buf, "%-6s %-36s missing from catalog\n", "FAIL", ref.suite.c_str());
      out << buf;
      continue;
    }
    bool ok = s->kem.client_key_share_bytes == ref.client_key_share &&
              s->kem.server_key_share_bytes == ref.server_key_share && s->total_handshake_bytes == ref.total;
    if (ref.chain) ok = ok && s->chain_bytes == ref.chain;
    if (ref.signature) ok = ok && s->sig.signature_bytes == *ref.signature;

    std::string chain = "?";
    std::string overhead = "?";
    try {
      const CipherSuite r = catalog.resolved(s->name);
      chain = std::to_string(*r.chain_bytes) + (s->chain_bytes ? " " : "*");
      overhead = std::to_string(fixed_overhead(r));
    } catch (const Error&) {
    }
    (ok ? rep.passed : rep.failed) += 1;
    std::snprintf(buf, sizeof buf, "%-6s %-36s %9lld %9lld %9s %9lld %9s %9lld\n", ok ? "PASS" : "FAIL",
                  s->name.c_str(), static_cast<long long>(s->kem.client_key_share_bytes),
                  static_cast<long long>(s->kem.server_key_share_bytes), chain.c_str(),
                  static_cast<long long>(s->sig.signature_bytes), overhead.c_str(),
                  static_cast<long long>(s->total_handshake_bytes));
    out << buf;
    if (!ok) {
      std::snprintf(buf, sizeof buf, "       %-36s expected %lld/%lld chain %s sig %s total %lld\n", "",
                    static_cast<long long>(ref.client_key_share), static_cast<long long>(ref.server_key_share),
                    ref.chain ? std::to_string(*ref.chain).c_str() : "-",
                    ref.signature ? std::to_string(*ref.signature).c_str() : "-", static_cast<long long>(ref.total));
      out << buf;
    }
  }
  out << rep.passed << " passed, " << rep.failed << " failed\n";
  rep.text = out.str();
  return rep;
}

namespace {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (devices, value)
};

double nice_step(double span) {
  if (span <= 0) return 1;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double nice = norm <= 1 ? 1 : norm <= 2 ? 2 : norm <= 5 ? 5 : 10;
  return nice * mag;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string line_chart(const std::string& title, const std::string& y_label, const std::vector<Series>& series) {
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2",
                                  "#7f7f7f", "#bcbd22", "#17becf"};
  constexpr double W = 720, H = 460, left = 70, right = 230, top = 40, bottom = 60;
  const double pw = W - left - right;
  const double ph = H - top - bottom;

  double x_min = 1e300, x_max = -1e300, y_max = 0;
  for (const auto& s : series) {
    for (auto [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_max = std::max(y_max, y);
    }
  }
  if (x_max <= x_min) {
    x_min -= 1;
    x_max += 1;
  }
  const double y_step = nice_step(y_max > 0 ? y_max : 1);
  const double y_top = std::ceil((y_max > 0 ? y_max : 1) / y_step) * y_step;
  auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * pw; };
  auto py = [&](double y) { return top + ph - y / y_top * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << " " << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(title)
    << "</text>\n";
  for (double y = 0; y <= y_top + 1e-9 * y_top; y += y_step) {
    o << "<line x1=\"" << left << "\" y1=\"" << num(py(y)) << "\" x2=\"" << left + pw << "\" y2=\"" << num(py(y))
      << "\" stroke=\"#dddddd\"/>\n";
    o << "<text x=\"" << left - 6 << "\" y=\"" << num(py(y) + 4) << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
  }
  std::set<double> xs;
  for (const auto& s : series) {
    for (auto [x, y] : s.points) xs.insert(x);
  }
  for (double x : xs) {
    o << "<line x1=\"" << num(px(x)) << "\" y1=\"" << top + ph << "\" x2=\"" << num(px(x)) << "\" y2=\""
      << top + ph + 5 << "\" stroke=\"black\"/>\n";
    o << "<text x=\"" << num(px(x)) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">" << num(x)
      << "</text>\n";
  }
  o << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
    << "\" stroke=\"black\"/>\n";
  o << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 18 << "\" text-anchor=\"middle\">Number of IoT devices</text>\n";
  o << "<text transform=\"translate(18," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << xml_escape(y_label) << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = kColors[i % std::size(kColors)];
    o << "<polyline class=\"series\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < s.points.size(); ++k) {
      o << (k ? " " : "") << num(px(s.points[k].first)) << "," << num(py(s.points[k].second));
    }
    o << "\"/>\n";
    for (auto [x, y] : s.points) {
      o << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = top + 10 + 20 * static_cast<double>(i);
    o << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 35 << "\" y2=\"" << ly
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << left + pw + 40 << "\" y=\"" << ly + 4 << "\">" << xml_escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace

std::vector<PlotFile> render_plots(std::span<const ResultRow> rows) {
  if (rows.empty()) throw Error(ErrorCode::kMalformedResults, "no result rows to plot");
  // Average across seeds per (suite, devices); suites keep first-seen order.
  std::vector<std::string> order;
  std::map<std::string, std::map<std::size_t, std::array<double, 3>>> acc;  // sum time, sum tput, count
  for (const auto& r : rows) {
    if (!acc.count(r.suite)) order.push_back(r.suite);
    auto& a = acc[r.suite][r.n_devices];
    a[0] += r.mean_handshake_s;
    a[1] += r.mean_throughput_bps;
    a[2] += 1;
  }
  auto build = [&](bool want_kem_family) {
    std::vector<Series> time, tput;
    for (const auto& suite : order) {
      const bool in_kem = classical_signature(suite);
      const bool in_sig = kem_part(suite) != "ecdhe" || !classical_signature(suite);
      if (want_kem_family ? !in_kem : !in_sig) continue;
      Series t{suite, {}}, p{suite, {}};
      for (const auto& [n, a] : acc[suite]) {
        t.points.emplace_back(static_cast<double>(n), a[0] / a[2]);
        p.points.emplace_back(static_cast<double>(n), a[1] / a[2] / 1000.0);
      }
      time.push_back(std::move(t));
      tput.push_back(std::move(p));
    }
    return std::make_pair(time, tput);
  };

  std::vector<PlotFile> files;
  const auto [kem_time, kem_tput] = build(true);
  if (!kem_time.empty()) {
    files.push_back({"kem_handshake_time.svg",
                     line_chart("Key exchange: average TLS handshake time", "Average handshake time (s)", kem_time)});
    files.push_back(
        {"kem_throughput.svg", line_chart("Key exchange: per-device throughput", "Throughput (kbps)", kem_tput)});
  }
  const auto [sig_time, sig_tput] = build(false);
  if (!sig_time.empty()) {
    files.push_back({"signature_handshake_time.svg",
                     line_chart("Signature: average TLS handshake time", "Average handshake time (s)", sig_time)});
    files.push_back({"signature_throughput.svg",
                     line_chart("Signature: per-device throughput", "Throughput (kbps)", sig_tput)});
  }
  return files;
}

}  // namespace pqnb
