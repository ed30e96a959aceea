// pqnb: command-line front end over the C API.
//
//   pqnb run          sweep suites x devices x seeds, write CSV/JSON results
//   pqnb tables       byte accounting check against the published sizes
//   pqnb plot FILE    SVG charts from a results file
//   pqnb calibrate    fit channel parameters to anchor observations
//   pqnb show-config  print the effective experiment configuration
//
// Exit codes: 0 success, 1 simulation/report failure, 2 configuration error.

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pqnb/pqnb.h"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

bool is_config_status(pqnb_status s) {
  switch (s) {
    case PQNB_E_INVALID_CONFIG:
    case PQNB_E_UNKNOWN_SUITE:
    case PQNB_E_UNKNOWN_CHAIN:
    case PQNB_E_INVALID_POLICY:
    case PQNB_E_ZERO_MSS:
    case PQNB_E_INVALID_ARGUMENT:
      return true;
    default:
      return false;
  }
}

struct Failure {
  int exit_code;
};

// Reports a failed call and unwinds to main with the matching exit code.
// Failures while loading inputs count as configuration errors.
void check(pqnb_status s, bool loading_inputs = false) {
  if (s == PQNB_OK) return;
  std::cerr << "pqnb: " << pqnb_status_name(s) << ": " << pqnb_last_error() << "\n";
  throw Failure{loading_inputs || is_config_status(s) ? kExitConfig : kExitFailure};
}

// Owning wrapper for strings handed out by the library.
struct Text {
  char* p = nullptr;
  ~Text() { pqnb_free(p); }
  std::string str() const { return p ? p : ""; }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "pqnb: cannot read '" << path << "'\n";
    throw Failure{kExitConfig};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "pqnb: cannot write '" << path << "'\n";
    throw Failure{kExitFailure};
  }
}

class Catalog {
 public:
  explicit Catalog(const std::string& path) {
    check(path.empty() ? pqnb_catalog_builtin(&h_) : pqnb_catalog_from_file(path.c_str(), &h_), true);
  }
  ~Catalog() { pqnb_catalog_destroy(h_); }
  Catalog(const Catalog&) = delete;
  Catalog& operator=(const Catalog&) = delete;
  const pqnb_catalog* get() const { return h_; }

 private:
  pqnb_catalog* h_ = nullptr;
};

struct ExperimentFlags {
  std::vector<std::string> suites;
  std::vector<std::size_t> devices;
  std::vector<std::uint64_t> seeds;
  std::string format;
  std::string config;
  std::string catalog;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f) {
  cmd->add_option("--suite", f.suites, "Cipher suite to simulate (repeatable; default: all)");
  cmd->add_option("--devices", f.devices, "Comma-separated device counts (default 5,10,15,20)")->delimiter(',');
  cmd->add_option("--seed", f.seeds, "RNG seed (repeatable; fallback PQNB_SEED, then 42)");
  cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--config", f.config, "JSON config document overriding any field");
  cmd->add_option("--catalog", f.catalog, "JSON suite catalog replacing the built-in suites");
}

class Experiment {
 public:
  explicit Experiment(const ExperimentFlags& f) {
    check(pqnb_experiment_create(&h_));
    if (const char* env = std::getenv("PQNB_SEED"); env && *env) {
      char* end = nullptr;
      errno = 0;
      const unsigned long long seed = std::strtoull(env, &end, 10);
      if (errno != 0 || *end != '\0' || env[0] == '-') {
        std::cerr << "pqnb: INVALID_CONFIG: PQNB_SEED: not an unsigned integer: '" << env << "'\n";
        throw Failure{kExitConfig};
      }
      const std::uint64_t s = seed;
      check(pqnb_experiment_set_seeds(h_, &s, 1), true);
    }
    if (!f.config.empty()) check(pqnb_experiment_merge_json(h_, slurp(f.config).c_str()), true);
    if (!f.suites.empty()) {
      std::vector<const char*> names;
      for (const auto& s : f.suites) names.push_back(s.c_str());
      check(pqnb_experiment_set_suites(h_, names.data(), names.size()), true);
    }
    if (!f.devices.empty()) check(pqnb_experiment_set_device_counts(h_, f.devices.data(), f.devices.size()), true);
    if (!f.seeds.empty()) check(pqnb_experiment_set_seeds(h_, f.seeds.data(), f.seeds.size()), true);
    if (!f.format.empty()) {
      check(pqnb_experiment_set_format(h_, f.format == "json" ? PQNB_FORMAT_JSON : PQNB_FORMAT_CSV), true);
    }
  }
  ~Experiment() { pqnb_experiment_destroy(h_); }
  Experiment(const Experiment&) = delete;
  Experiment& operator=(const Experiment&) = delete;
  const pqnb_experiment* get() const { return h_; }

 private:
  pqnb_experiment* h_ = nullptr;
};

int cmd_run(const ExperimentFlags& f, const std::string& out, unsigned threads) {
  Catalog catalog(f.catalog);
  Experiment exp(f);
  Text text;
  check(pqnb_experiment_run(exp.get(), catalog.get(), threads, &text.p));
  emit(out, text.str());
  return 0;
}

int cmd_show_config(const ExperimentFlags& f, const std::string& out) {
  Catalog catalog(f.catalog);
  Experiment exp(f);
  Text text;
  check(pqnb_experiment_to_json(exp.get(), catalog.get(), &text.p), true);
  emit(out, text.str());
  return 0;
}

int cmd_tables(const std::string& catalog_path) {
  Catalog catalog(catalog_path);
  Text text;
  int failed = 0;
  check(pqnb_tables_report(catalog.get(), &text.p, &failed));
  std::cout << text.str();
  return failed == 0 ? 0 : kExitFailure;
}

int cmd_plot(const std::string& results, const std::string& out_dir) {
  std::size_t written = 0;
  check(pqnb_plot(results.c_str(), out_dir.c_str(), &written));
  std::cerr << "wrote " << written << " SVG files to " << out_dir << "\n";
  return 0;
}

int cmd_calibrate(const std::string& catalog_path, const std::string& anchors, const std::string& search,
                  const std::string& out, const std::string& header_path, unsigned threads) {
  Catalog catalog(catalog_path);
  const std::string anchors_text = slurp(anchors);
  const std::string search_text = search.empty() ? std::string() : slurp(search);
  Text result;
  Text header;
  check(pqnb_calibrate(catalog.get(), anchors_text.c_str(), search_text.empty() ? nullptr : search_text.c_str(),
                       threads, &result.p, header_path.empty() ? nullptr : &header.p));
  emit(out, result.str());
  if (!header_path.empty()) emit(header_path, header.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event simulator of TLS 1.3 handshakes over a shared NB-IoT cell"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pqnb_version());

  ExperimentFlags run_flags;
  std::string run_out;
  unsigned threads = 0;
  auto* run = app.add_subcommand("run", "Run the experiment grid and write results");
  add_experiment_flags(run, run_flags);
  run->add_option("--out", run_out, "Results file (default: stdout)");
  run->add_option("--threads", threads, "Worker threads (default: hardware concurrency)");

  std::string tables_catalog;
  auto* tables = app.add_subcommand("tables", "Check the suite catalog against the published byte counts");
  tables->add_option("--catalog", tables_catalog, "JSON suite catalog replacing the built-in suites");

  std::string plot_input;
  std::string plot_out = "plots";
  auto* plot = app.add_subcommand("plot", "Render SVG charts from a results file");
  plot->add_option("results", plot_input, "CSV or JSON file written by 'run'")->required();
  plot->add_option("--out", plot_out, "Output directory")->capture_default_str();

  std::string cal_catalog, cal_anchors, cal_search, cal_out, cal_header;
  auto* cal = app.add_subcommand("calibrate", "Fit channel parameters to anchor observations");
  cal->add_option("--anchors", cal_anchors, "JSON anchor list")->required();
  cal->add_option("--search", cal_search, "JSON search-space overrides");
  cal->add_option("--catalog", cal_catalog, "JSON suite catalog replacing the built-in suites");
  cal->add_option("--out", cal_out, "Calibration result JSON (default: stdout)");
  cal->add_option("--emit-defaults", cal_header, "Also write calibrated_defaults.hpp to this path");
  cal->add_option("--threads", threads, "Worker threads (default: hardware concurrency)");

  ExperimentFlags show_flags;
  std::string show_out;
  auto* show = app.add_subcommand("show-config", "Print the effective experiment configuration");
  add_experiment_flags(show, show_flags);
  show->add_option("--out", show_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_flags, run_out, threads);
    if (*tables) return cmd_tables(tables_catalog);
    if (*plot) return cmd_plot(plot_input, plot_out);
    if (*cal) return cmd_calibrate(cal_catalog, cal_anchors, cal_search, cal_out, cal_header, threads);
    if (*show) return cmd_show_config(show_flags, show_out);
  } catch (const Failure& f) {
    return f.exit_code;
  }
  return kExitFailure;
}
