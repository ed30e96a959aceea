/* C interface to the NB-IoT TLS handshake simulator.
 *
 * Every fallible call returns a pqnb_status; on failure the message (and,
 * for configuration errors, the offending field) is available from
 * pqnb_last_error() / pqnb_last_error_field() on the calling thread.
 * Strings returned through char** are owned by the caller: release them
 * with pqnb_free(). Handles are released with their *_destroy function.
 */
#ifndef PQNB_H
#define PQNB_H

#include <stddef.h>
#include <stdint.h>

#if defined(PQNB_BUILDING_LIBRARY)
#define PQNB_API __attribute__((visibility("default")))
#else
#define PQNB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pqnb_status {
  PQNB_OK = 0,
  PQNB_E_UNKNOWN_CHAIN,
  PQNB_E_NO_REFERENCE,
  PQNB_E_INVALID_POLICY,
  PQNB_E_ZERO_MSS,
  PQNB_E_DOUBLE_ACQUIRE,
  PQNB_E_NOT_HELD,
  PQNB_E_NON_CE0_DEVICE,
  PQNB_E_UNKNOWN_SUITE,
  PQNB_E_ZERO_DURATION,
  PQNB_E_EMPTY,
  PQNB_E_INFEASIBLE,
  PQNB_E_MALFORMED_RESULTS,
  PQNB_E_INVALID_CONFIG,
  PQNB_E_IO,
  PQNB_E_INVALID_ARGUMENT,
  PQNB_E_INTERNAL
} pqnb_status;

typedef enum pqnb_format { PQNB_FORMAT_CSV = 0, PQNB_FORMAT_JSON = 1 } pqnb_format;

typedef struct pqnb_catalog pqnb_catalog;
typedef struct pqnb_experiment pqnb_experiment;
typedef struct pqnb_run pqnb_run;

typedef struct pqnb_device_record {
  size_t id;
  double x_m;
  double y_m;
  double distance_m;
  double t_arrive;
  double t_granted;
  double t_flight1_done;
  double t_flight2_done;
  double t_complete;
  int64_t bytes_transmitted;
  int subcarrier;
} pqnb_device_record;

typedef struct pqnb_aggregate {
  size_t n_devices;
  double mean_handshake_s;
  double stdev_handshake_s;
  double min_handshake_s;
  double max_handshake_s;
  double mean_device_throughput_bps;
  size_t queued_devices;
} pqnb_aggregate;

PQNB_API const char* pqnb_version(void);
/* "OK", "UNKNOWN_SUITE", ... */
PQNB_API const char* pqnb_status_name(pqnb_status status);
PQNB_API const char* pqnb_last_error(void);
/* Dotted field path of the last configuration error, or "" */
PQNB_API const char* pqnb_last_error_field(void);
PQNB_API void pqnb_free(char* text);

/* Suite catalogs */
PQNB_API pqnb_status pqnb_catalog_builtin(pqnb_catalog** out);
PQNB_API pqnb_status pqnb_catalog_from_json(const char* json, pqnb_catalog** out);
PQNB_API pqnb_status pqnb_catalog_from_file(const char* path, pqnb_catalog** out);
PQNB_API void pqnb_catalog_destroy(pqnb_catalog* catalog);
PQNB_API size_t pqnb_catalog_size(const pqnb_catalog* catalog);
PQNB_API pqnb_status pqnb_catalog_to_json(const pqnb_catalog* catalog, char** out);
/* Byte accounting check against the published sizes. *failed receives the
 * number of FAIL lines. */
PQNB_API pqnb_status pqnb_tables_report(const pqnb_catalog* catalog, char** text, int* failed);

/* Experiments: a base simulation config swept over suites x devices x seeds */
PQNB_API pqnb_status pqnb_experiment_create(pqnb_experiment** out);
PQNB_API void pqnb_experiment_destroy(pqnb_experiment* experiment);
/* Merges a JSON experiment document over the current settings. */
PQNB_API pqnb_status pqnb_experiment_merge_json(pqnb_experiment* experiment, const char* json);
PQNB_API pqnb_status pqnb_experiment_set_suites(pqnb_experiment* experiment, const char* const* names, size_t count);
PQNB_API pqnb_status pqnb_experiment_set_device_counts(pqnb_experiment* experiment, const size_t* counts,
                                                       size_t count);
PQNB_API pqnb_status pqnb_experiment_set_seeds(pqnb_experiment* experiment, const uint64_t* seeds, size_t count);
PQNB_API pqnb_status pqnb_experiment_set_format(pqnb_experiment* experiment, pqnb_format format);
/* Effective configuration after validation against the catalog. */
PQNB_API pqnb_status pqnb_experiment_to_json(const pqnb_experiment* experiment, const pqnb_catalog* catalog,
                                             char** out);
/* Runs every configuration (threads = 0: hardware concurrency) and renders
 * the results in the experiment's format. */
PQNB_API pqnb_status pqnb_experiment_run(const pqnb_experiment* experiment, const pqnb_catalog* catalog,
                                         unsigned threads, char** out);

/* Single simulations. config_json is a simulation config document; NULL
 * or "" selects the defaults. */
PQNB_API pqnb_status pqnb_simulate(const pqnb_catalog* catalog, const char* config_json, pqnb_run** out);
PQNB_API void pqnb_run_destroy(pqnb_run* run);
PQNB_API size_t pqnb_run_device_count(const pqnb_run* run);
PQNB_API pqnb_status pqnb_run_device(const pqnb_run* run, size_t index, pqnb_device_record* out);
PQNB_API pqnb_status pqnb_run_aggregate(const pqnb_run* run, pqnb_aggregate* out);
PQNB_API pqnb_status pqnb_run_to_json(const pqnb_run* run, char** out);

/* Reads a results file (CSV or JSON) and writes the comparison charts into
 * out_dir. *written receives the number of SVG files. */
PQNB_API pqnb_status pqnb_plot(const char* results_path, const char* out_dir, size_t* written);

/* Fits channel parameters to anchor observations. search_json may be NULL.
 * header (may be NULL) receives calibrated_defaults.hpp source text. */
PQNB_API pqnb_status pqnb_calibrate(const pqnb_catalog* catalog, const char* anchors_json, const char* search_json,
                                    unsigned threads, char** result_json, char** header);

#ifdef __cplusplus
}
#endif

#endif /* PQNB_H */
