#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pqnb/config_io.hpp"
#include "pqnb/sim_engine.hpp"

namespace pqnb {

enum class OutputFormat { kCsv, kJson };

struct ExperimentSpec {
  std::vector<std::string> suites;  // empty: every suite in the catalog
  std::vector<std::size_t> device_counts{5, 10, 15, 20};
  std::vector<std::uint64_t> seeds{42};
  OutputFormat format = OutputFormat::kCsv;
  SimConfig base;  // n_devices, suite_name and seed are overwritten per run
};

// Fills the default suite list from the catalog and checks every field.
// An unknown suite raises ConfigError("suites", ...) carrying the name.
ExperimentSpec normalized(ExperimentSpec spec, const SuiteCatalog& catalog);

// suite-major, then device count, then seed.
std::vector<SimConfig> expand(const ExperimentSpec& spec);

// Experiment documents extend a SimConfig document with the optional lists
// "suites", "device_counts", "seeds" and "format". A scalar suite_name,
// n_devices or seed stands for a one-element list. to_json output reads
// back to the same spec.
ExperimentSpec experiment_from_json(const Json& j, ExperimentSpec base = {});
Json to_json(const ExperimentSpec& spec);

inline constexpr const char* kCsvHeader =
    "suite,n_devices,seed,mean_handshake_s,stdev_handshake_s,mean_throughput_bps,min_s,max_s,queued_devices";

std::string results_csv(std::span<const RunResult> results);
std::string results_json(const ExperimentSpec& spec, std::span<const RunResult> results);

// One row of a results file, as read back for plotting.
struct ResultRow {
  std::string suite;
  std::size_t n_devices = 0;
  std::uint64_t seed = 0;
  double mean_handshake_s = 0;
  double stdev_handshake_s = 0;
  double mean_throughput_bps = 0;
  double min_s = 0;
  double max_s = 0;
  std::size_t queued_devices = 0;
};

// Accepts the CSV or JSON output of results_csv / results_json.
// Throws kMalformedResults.
std::vector<ResultRow> parse_results(const std::string& text);

// Published sizes the tables report is checked against.
struct PublishedSizes {
  std::string suite;
  ByteCount client_key_share;
  ByteCount server_key_share;
  std::optional<ByteCount> chain;
  std::optional<ByteCount> signature;
  ByteCount total;
};
std::vector<PublishedSizes> published_sizes();

struct TablesReport {
  std::string text;
  int passed = 0;
  int failed = 0;
};

// One PASS/FAIL line per published suite; a suite passes when every
// published size matches the catalog exactly.
TablesReport tables_report(const SuiteCatalog& catalog, std::span<const PublishedSizes> published);
TablesReport tables_report(const SuiteCatalog& catalog);

// Key-exchange comparison (classical signatures) and signature comparison
// (post-quantum KEM), each as a handshake-time and a throughput chart.
struct PlotFile {
  std::string name;
  std::string svg;
};
std::vector<PlotFile> render_plots(std::span<const ResultRow> rows);

}  // namespace pqnb
