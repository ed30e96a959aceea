#include "pqnb/pqnb.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "pqnb/calibration.hpp"
#include "pqnb/config_io.hpp"
#include "pqnb/error.hpp"
#include "pqnb/report.hpp"
#include "pqnb/sim_engine.hpp"

struct pqnb_catalog {
  pqnb::SuiteCatalog catalog;
};

struct pqnb_experiment {
  pqnb::ExperimentSpec spec;
};

struct pqnb_run {
  pqnb::RunResult result;
};

namespace {

thread_local std::string g_last_error;
thread_local std::string g_last_field;

pqnb_status status_of(pqnb::ErrorCode code) {
  using pqnb::ErrorCode;
  switch (code) {
    case ErrorCode::kUnknownChain: return PQNB_E_UNKNOWN_CHAIN;
    case ErrorCode::kNoReference: return PQNB_E_NO_REFERENCE;
    case ErrorCode::kInvalidPolicy: return PQNB_E_INVALID_POLICY;
    case ErrorCode::kZeroMss: return PQNB_E_ZERO_MSS;
    case ErrorCode::kDoubleAcquire: return PQNB_E_DOUBLE_ACQUIRE;
    case ErrorCode::kNotHeld: return PQNB_E_NOT_HELD;
    case ErrorCode::kNonCe0Device: return PQNB_E_NON_CE0_DEVICE;
    case ErrorCode::kUnknownSuite: return PQNB_E_UNKNOWN_SUITE;
    case ErrorCode::kZeroDuration: return PQNB_E_ZERO_DURATION;
    case ErrorCode::kEmpty: return PQNB_E_EMPTY;
    case ErrorCode::kInfeasible: return PQNB_E_INFEASIBLE;
    case ErrorCode::kMalformedResults: return PQNB_E_MALFORMED_RESULTS;
    case ErrorCode::kInvalidConfig: return PQNB_E_INVALID_CONFIG;
    case ErrorCode::kIo: return PQNB_E_IO;
  }
  return PQNB_E_INTERNAL;
}

pqnb_status fail(pqnb_status s, std::string message, std::string field = {}) {
  g_last_error = std::move(message);
  g_last_field = std::move(field);
  return s;
}

// Runs body, translating exceptions into a status and the thread-local error.
template <class F>
pqnb_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    g_last_field.clear();
    return PQNB_OK;
  } catch (const pqnb::SweepError& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const pqnb::ConfigError& e) {
    return fail(PQNB_E_INVALID_CONFIG, e.what(), e.field());
  } catch (const pqnb::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PQNB_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(PQNB_E_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

#define PQNB_REQUIRE(cond, what) \
  if (!(cond)) return fail(PQNB_E_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* pqnb_version(void) { return "0.1.0"; }

const char* pqnb_status_name(pqnb_status status) {
  switch (status) {
    case PQNB_OK: return "OK";
    case PQNB_E_UNKNOWN_CHAIN: return "UNKNOWN_CHAIN";
    case PQNB_E_NO_REFERENCE: return "NO_REFERENCE";
    case PQNB_E_INVALID_POLICY: return "INVALID_POLICY";
    case PQNB_E_ZERO_MSS: return "ZERO_MSS";
    case PQNB_E_DOUBLE_ACQUIRE: return "DOUBLE_ACQUIRE";
    case PQNB_E_NOT_HELD: return "NOT_HELD";
    case PQNB_E_NON_CE0_DEVICE: return "NON_CE0_DEVICE";
    case PQNB_E_UNKNOWN_SUITE: return "UNKNOWN_SUITE";
    case PQNB_E_ZERO_DURATION: return "ZERO_DURATION";
    case PQNB_E_EMPTY: return "EMPTY";
    case PQNB_E_INFEASIBLE: return "INFEASIBLE";
    case PQNB_E_MALFORMED_RESULTS: return "MALFORMED_RESULTS";
    case PQNB_E_INVALID_CONFIG: return "INVALID_CONFIG";
    case PQNB_E_IO: return "IO";
    case PQNB_E_INVALID_ARGUMENT: return "INVALID_ARGUMENT";
    case PQNB_E_INTERNAL: return "INTERNAL";
  }
  return "UNKNOWN_STATUS";
}

const char* pqnb_last_error(void) { return g_last_error.c_str(); }
const char* pqnb_last_error_field(void) { return g_last_field.c_str(); }
void pqnb_free(char* text) { std::free(text); }

pqnb_status pqnb_catalog_builtin(pqnb_catalog** out) {
  PQNB_REQUIRE(out, "out is null");
  return guarded([&] { *out = new pqnb_catalog{pqnb::SuiteCatalog::builtin()}; });
}

pqnb_status pqnb_catalog_from_json(const char* json, pqnb_catalog** out) {
  PQNB_REQUIRE(json && out, "null argument");
  return guarded([&] { *out = new pqnb_catalog{pqnb::catalog_from_json(pqnb::parse_document(json))}; });
}

pqnb_status pqnb_catalog_from_file(const char* path, pqnb_catalog** out) {
  PQNB_REQUIRE(path && out, "null argument");
  return guarded([&] {
    *out = new pqnb_catalog{pqnb::catalog_from_json(pqnb::parse_document(pqnb::read_file(path)))};
  });
}

void pqnb_catalog_destroy(pqnb_catalog* catalog) { delete catalog; }

size_t pqnb_catalog_size(const pqnb_catalog* catalog) { return catalog ? catalog->catalog.size() : 0; }

pqnb_status pqnb_catalog_to_json(const pqnb_catalog* catalog, char** out) {
  PQNB_REQUIRE(catalog && out, "null argument");
  return guarded([&] { *out = dup(pqnb::to_json(catalog->catalog).dump(2) + "\n"); });
}

pqnb_status pqnb_tables_report(const pqnb_catalog* catalog, char** text, int* failed) {
  PQNB_REQUIRE(catalog && text, "null argument");
  return guarded([&] {
    const auto rep = pqnb::tables_report(catalog->catalog);
    *text = dup(rep.text);
    if (failed) *failed = rep.failed;
  });
}

pqnb_status pqnb_experiment_create(pqnb_experiment** out) {
  PQNB_REQUIRE(out, "out is null");
  return guarded([&] { *out = new pqnb_experiment{}; });
}

void pqnb_experiment_destroy(pqnb_experiment* experiment) { delete experiment; }

pqnb_status pqnb_experiment_merge_json(pqnb_experiment* experiment, const char* json) {
  PQNB_REQUIRE(experiment && json, "null argument");
  return guarded(
      [&] { experiment->spec = pqnb::experiment_from_json(pqnb::parse_document(json), experiment->spec); });
}

pqnb_status pqnb_experiment_set_suites(pqnb_experiment* experiment, const char* const* names, size_t count) {
  PQNB_REQUIRE(experiment && (names || count == 0), "null argument");
  return guarded([&] {
    std::vector<std::string> v;
    for (size_t i = 0; i < count; ++i) {
      if (!names[i]) throw pqnb::ConfigError("suites", "null suite name");
      v.emplace_back(names[i]);
    }
    experiment->spec.suites = std::move(v);
  });
}

pqnb_status pqnb_experiment_set_device_counts(pqnb_experiment* experiment, const size_t* counts, size_t count) {
  PQNB_REQUIRE(experiment && (counts || count == 0), "null argument");
  return guarded([&] { experiment->spec.device_counts.assign(counts, counts + count); });
}

pqnb_status pqnb_experiment_set_seeds(pqnb_experiment* experiment, const uint64_t* seeds, size_t count) {
  PQNB_REQUIRE(experiment && (seeds || count == 0), "null argument");
  return guarded([&] { experiment->spec.seeds.assign(seeds, seeds + count); });
}

pqnb_status pqnb_experiment_set_format(pqnb_experiment* experiment, pqnb_format format) {
  PQNB_REQUIRE(experiment, "null argument");
  PQNB_REQUIRE(format == PQNB_FORMAT_CSV || format == PQNB_FORMAT_JSON, "unknown format");
  experiment->spec.format = format == PQNB_FORMAT_CSV ? pqnb::OutputFormat::kCsv : pqnb::OutputFormat::kJson;
  return PQNB_OK;
}

pqnb_status pqnb_experiment_to_json(const pqnb_experiment* experiment, const pqnb_catalog* catalog, char** out) {
  PQNB_REQUIRE(experiment && catalog && out, "null argument");
  return guarded([&] {
    *out = dup(pqnb::to_json(pqnb::normalized(experiment->spec, catalog->catalog)).dump(2) + "\n");
  });
}

pqnb_status pqnb_experiment_run(const pqnb_experiment* experiment, const pqnb_catalog* catalog, unsigned threads,
                                char** out) {
  PQNB_REQUIRE(experiment && catalog && out, "null argument");
  return guarded([&] {
    const auto spec = pqnb::normalized(experiment->spec, catalog->catalog);
    const auto results = pqnb::sweep(pqnb::expand(spec), catalog->catalog, threads);
    *out = dup(spec.format == pqnb::OutputFormat::kCsv ? pqnb::results_csv(results)
                                                       : pqnb::results_json(spec, results));
  });
}

pqnb_status pqnb_simulate(const pqnb_catalog* catalog, const char* config_json, pqnb_run** out) {
  PQNB_REQUIRE(catalog && out, "null argument");
  return guarded([&] {
    pqnb::SimConfig cfg;
    if (config_json && *config_json) cfg = pqnb::sim_config_from_json(pqnb::parse_document(config_json));
    *out = new pqnb_run{pqnb::run(cfg, catalog->catalog)};
  });
}

void pqnb_run_destroy(pqnb_run* run) { delete run; }

size_t pqnb_run_device_count(const pqnb_run* run) { return run ? run->result.devices.size() : 0; }

pqnb_status pqnb_run_device(const pqnb_run* run, size_t index, pqnb_device_record* out) {
  PQNB_REQUIRE(run && out, "null argument");
  PQNB_REQUIRE(index < run->result.devices.size(), "device index out of range");
  const auto& d = run->result.devices[index];
  *out = pqnb_device_record{d.id,           d.position.x_m,     d.position.y_m,     d.distance_m,
                            d.t_arrive,     d.t_granted,        d.t_flight1_done,   d.t_flight2_done,
                            d.t_complete,   d.bytes_transmitted, d.subcarrier};
  return PQNB_OK;
}

pqnb_status pqnb_run_aggregate(const pqnb_run* run, pqnb_aggregate* out) {
  PQNB_REQUIRE(run && out, "null argument");
  const auto& m = run->result.aggregate;
  *out = pqnb_aggregate{m.n_devices,       m.mean_handshake_s, m.stdev_handshake_s,         m.min_handshake_s,
                        m.max_handshake_s, m.mean_device_throughput_bps, m.queued_devices};
  return PQNB_OK;
}

pqnb_status pqnb_run_to_json(const pqnb_run* run, char** out) {
  PQNB_REQUIRE(run && out, "null argument");
  return guarded([&] { *out = dup(pqnb::to_json(run->result).dump(2) + "\n"); });
}

pqnb_status pqnb_plot(const char* results_path, const char* out_dir, size_t* written) {
  PQNB_REQUIRE(results_path && out_dir, "null argument");
  return guarded([&] {
    const auto rows = pqnb::parse_results(pqnb::read_file(results_path));
    const auto files = pqnb::render_plots(rows);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw pqnb::Error(pqnb::ErrorCode::kIo, std::string("cannot create ") + out_dir + ": " + ec.message());
    for (const auto& f : files) pqnb::write_file((std::filesystem::path(out_dir) / f.name).string(), f.svg);
    if (written) *written = files.size();
  });
}

pqnb_status pqnb_calibrate(const pqnb_catalog* catalog, const char* anchors_json, const char* search_json,
                           unsigned threads, char** result_json, char** header) {
  PQNB_REQUIRE(catalog && anchors_json && result_json, "null argument");
  return guarded([&] {
    const auto anchors = pqnb::anchors_from_json(pqnb::parse_document(anchors_json));
    pqnb::SearchSpace space;
    if (search_json && *search_json) space = pqnb::search_space_from_json(pqnb::parse_document(search_json));
    const auto result = pqnb::calibrate(anchors, space, catalog->catalog, threads);
    *result_json = dup(pqnb::to_json(result).dump(2) + "\n");
    if (header) *header = dup(pqnb::defaults_header(result));
  });
}

}  // extern "C"
