#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>

#include <unistd.h>

#include "pqnb/pqnb.h"

namespace {

struct Text {
  char* p = nullptr;
  ~Text() { pqnb_free(p); }
  std::string str() const { return p ? p : ""; }
};

struct CatalogPtr {
  pqnb_catalog* p = nullptr;
  ~CatalogPtr() { pqnb_catalog_destroy(p); }
};

struct ExperimentPtr {
  pqnb_experiment* p = nullptr;
  ~ExperimentPtr() { pqnb_experiment_destroy(p); }
};

struct RunPtr {
  pqnb_run* p = nullptr;
  ~RunPtr() { pqnb_run_destroy(p); }
};

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::filesystem::path temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("pqnb_capi_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(CApi, StatusNames) {
  EXPECT_STREQ(pqnb_status_name(PQNB_OK), "OK");
  EXPECT_STREQ(pqnb_status_name(PQNB_E_UNKNOWN_SUITE), "UNKNOWN_SUITE");
  EXPECT_STREQ(pqnb_status_name(PQNB_E_MALFORMED_RESULTS), "MALFORMED_RESULTS");
  EXPECT_STREQ(pqnb_status_name(static_cast<pqnb_status>(999)), "UNKNOWN_STATUS");
  EXPECT_GT(std::strlen(pqnb_version()), 0u);
}

TEST(CApi, NullArgumentsAreRejected) {
  EXPECT_EQ(pqnb_catalog_builtin(nullptr), PQNB_E_INVALID_ARGUMENT);
  EXPECT_STRNE(pqnb_last_error(), "");
  EXPECT_EQ(pqnb_catalog_size(nullptr), 0u);
  pqnb_free(nullptr);
  pqnb_catalog_destroy(nullptr);
  pqnb_run_destroy(nullptr);
}

TEST(CApi, BuiltinCatalogAndTables) {
  CatalogPtr cat;
  ASSERT_EQ(pqnb_catalog_builtin(&cat.p), PQNB_OK);
  EXPECT_EQ(pqnb_catalog_size(cat.p), 7u);

  Text report;
  int failed = -1;
  ASSERT_EQ(pqnb_tables_report(cat.p, &report.p, &failed), PQNB_OK);
  EXPECT_EQ(failed, 0);
  EXPECT_NE(report.str().find("26830"), std::string::npos);
}

TEST(CApi, CatalogJsonRoundTrip) {
  CatalogPtr cat;
  ASSERT_EQ(pqnb_catalog_builtin(&cat.p), PQNB_OK);
  Text json;
  ASSERT_EQ(pqnb_catalog_to_json(cat.p, &json.p), PQNB_OK);

  CatalogPtr back;
  ASSERT_EQ(pqnb_catalog_from_json(json.p, &back.p), PQNB_OK);
  Text again;
  ASSERT_EQ(pqnb_catalog_to_json(back.p, &again.p), PQNB_OK);
  EXPECT_EQ(json.str(), again.str());

  CatalogPtr bad;
  EXPECT_NE(pqnb_catalog_from_json("{not json", &bad.p), PQNB_OK);
  EXPECT_EQ(pqnb_catalog_from_file("/nonexistent/pqnb.json", &bad.p), PQNB_E_IO);
}

TEST(CApi, PerturbedCatalogFailsTables) {
  CatalogPtr cat;
  ASSERT_EQ(pqnb_catalog_builtin(&cat.p), PQNB_OK);
  Text json;
  ASSERT_EQ(pqnb_catalog_to_json(cat.p, &json.p), PQNB_OK);
  std::string doc = json.str();
  const auto at = doc.find("\"total_handshake_bytes\": 3560");
  ASSERT_NE(at, std::string::npos);
  doc.replace(at, std::strlen("\"total_handshake_bytes\": 3560"), "\"total_handshake_bytes\": 3561");

  CatalogPtr bent;
  ASSERT_EQ(pqnb_catalog_from_json(doc.c_str(), &bent.p), PQNB_OK);
  Text report;
  int failed = 0;
  ASSERT_EQ(pqnb_tables_report(bent.p, &report.p, &failed), PQNB_OK);
  EXPECT_EQ(failed, 1);
  EXPECT_NE(report.str().find("FAIL"), std::string::npos);
}

TEST(CApi, DefaultExperimentGrid) {
  CatalogPtr cat;
  ExperimentPtr exp;
  ASSERT_EQ(pqnb_catalog_builtin(&cat.p), PQNB_OK);
  ASSERT_EQ(pqnb_experiment_create(&exp.p), PQNB_OK);

  Text csv;
  ASSERT_EQ(pqnb_experiment_run(exp.p, cat.p, 2, &csv.p), PQNB_OK);
  EXPECT_EQ(count_lines(csv.str()), 29u);
  EXPECT_EQ(csv.str().rfind("suite,n_devices,seed,", 0), 0u);

  Text again;
  ASSERT_EQ(pqnb_experiment_run(exp.p, cat.p, 1, &again.p), PQNB_OK);
  EXPECT_EQ(csv.str(), again.str());
}

TEST(CApi, ExperimentSetters) {
  CatalogPtr cat;
  ExperimentPtr exp;
  ASSERT_EQ(pqnb_catalog_builtin(&cat.p), PQNB_OK);
  ASSERT_EQ(pqnb_experiment_create(&exp.p), PQNB_OK);

  const char* suites[] = {"ecdhe+ecdsa", "kyber512+falcon512"};
  const size_t counts[] = {1, 3};
  const uint64_t seeds[] = {1, 2, 3};
  ASSERT_EQ(pqnb_experiment_set_suites(exp.p, suites, 2), PQNB_OK);
  ASSERT_EQ(pqnb_experiment_set_device_counts(exp.p, counts, 2), PQNB_OK);
  ASSERT_EQ(pqnb_experiment_set_seeds(exp.p, seeds, 3), PQNB_OK);
  Text csv;
  ASSERT_EQ(pqnb_experiment_run(exp.p, cat.p, 0, &csv.p), PQNB_OK);
  EXPECT_EQ(count_lines(csv.str()), 1u + 2 * 2 * 3);

  ASSERT_EQ(pqnb_experiment_set_format(exp.p, PQNB_FORMAT_JSON), PQNB_OK);
  Text json;
  ASSERT_EQ(pqnb_experiment_run(exp.p, cat.p, 0, &json.p), PQNB_OK);
  EXPECT_EQ(json.str().front(), '{');
  EXPECT_NE(json.str().find("\"runs\""), std::string::npos);
  EXPECT_EQ(pqnb_experiment_set_format(exp.p, static_cast<pqnb_format>(7)), PQNB_E_INVALID_ARGUMENT);
}

TEST(CApi, MergeAndShowConfigRoundTrip) {
  CatalogPtr cat;
  ExperimentPtr exp;
  ASSERT_EQ(pqnb_catalog_builtin(&cat.p), PQNB_OK);
  ASSERT_EQ(pqnb_experiment_create(&exp.p), PQNB_OK);
  ASSERT_EQ(pqnb_experiment_merge_json(exp.p, R"({"device_counts":[2],"seeds":[9],"radius_m":500})"), PQNB_OK);

  Text shown;
  ASSERT_EQ(pqnb_experiment_to_json(exp.p, cat.p, &shown.p), PQNB_OK);
  ExperimentPtr back;
  ASSERT_EQ(pqnb_experiment_create(&back.p), PQNB_OK);
  ASSERT_EQ(pqnb_experiment_merge_json(back.p, shown.p), PQNB_OK);
  Text again;
  ASSERT_EQ(pqnb_experiment_to_json(back.p, cat.p, &again.p), PQNB_OK);
  EXPECT_EQ(shown.str(), again.str());

  Text a, b;
  ASSERT_EQ(pqnb_experiment_run(exp.p, cat.p, 1, &a.p), PQNB_OK);
  ASSERT_EQ(pqnb_experiment_run(back.p, cat.p, 1, &b.p), PQNB_OK);
  EXPECT_EQ(a.str(), b.str());
}

TEST(CApi, UnknownSuiteNamesField) {
  CatalogPtr cat;
  ExperimentPtr exp;
  ASSERT_EQ(pqnb_catalog_builtin(&cat.p), PQNB_OK);
  ASSERT_EQ(pqnb_experiment_create(&exp.p), PQNB_OK);
  const char* suites[] = {"nope+nothing"};
  ASSERT_EQ(pqnb_experiment_set_suites(exp.p, suites, 1), PQNB_OK);

  Text out;
  EXPECT_EQ(pqnb_experiment_run(exp.p, cat.p, 1, &out.p), PQNB_E_INVALID_CONFIG);
  EXPECT_EQ(out.p, nullptr);
  EXPECT_STREQ(pqnb_last_error_field(), "suites");
  EXPECT_NE(std::string(pqnb_last_error()).find("nope+nothing"), std::string::npos);

  EXPECT_EQ(pqnb_experiment_merge_json(exp.p, R"({"radius_m":-1})"), PQNB_OK);
  const char* ok[] = {"ecdhe+ecdsa"};
  ASSERT_EQ(pqnb_experiment_set_suites(exp.p, ok, 1), PQNB_OK);
  EXPECT_EQ(pqnb_experiment_run(exp.p, cat.p, 1, &out.p), PQNB_E_INVALID_CONFIG);
  EXPECT_STREQ(pqnb_last_error_field(), "radius_m");
}

TEST(CApi, SimulateAndInspect) {
  CatalogPtr cat;
  ASSERT_EQ(pqnb_catalog_builtin(&cat.p), PQNB_OK);
  RunPtr run;
  ASSERT_EQ(pqnb_simulate(cat.p, R"({"suite_name":"kyber512+ecdsa","n_devices":14,"seed":5})", &run.p), PQNB_OK);
  ASSERT_EQ(pqnb_run_device_count(run.p), 14u);

  pqnb_aggregate agg{};
  ASSERT_EQ(pqnb_run_aggregate(run.p, &agg), PQNB_OK);
  EXPECT_EQ(agg.n_devices, 14u);
  EXPECT_EQ(agg.queued_devices, 2u);
  EXPECT_LE(agg.min_handshake_s, agg.mean_handshake_s);
  EXPECT_LE(agg.mean_handshake_s, agg.max_handshake_s);

  double sum = 0;
  for (size_t i = 0; i < 14; ++i) {
    pqnb_device_record d{};
    ASSERT_EQ(pqnb_run_device(run.p, i, &d), PQNB_OK);
    EXPECT_EQ(d.bytes_transmitted, 3560);
    EXPECT_LE(d.t_arrive, d.t_granted);
    EXPECT_LE(d.t_granted, d.t_flight1_done);
    EXPECT_LE(d.t_flight1_done, d.t_flight2_done);
    EXPECT_LE(d.t_flight2_done, d.t_complete);
    EXPECT_GE(d.subcarrier, 0);
    EXPECT_LT(d.subcarrier, 12);
    sum += d.t_complete - d.t_arrive;
  }
  EXPECT_NEAR(sum / 14.0, agg.mean_handshake_s, 1e-9);

  pqnb_device_record d{};
  EXPECT_EQ(pqnb_run_device(run.p, 14, &d), PQNB_E_INVALID_ARGUMENT);

  Text json;
  ASSERT_EQ(pqnb_run_to_json(run.p, &json.p), PQNB_OK);
  EXPECT_NE(json.str().find("\"devices\""), std::string::npos);

  RunPtr defaults;
  ASSERT_EQ(pqnb_simulate(cat.p, nullptr, &defaults.p), PQNB_OK);
  EXPECT_EQ(pqnb_run_device_count(defaults.p), 1u);

  RunPtr bogus;
  EXPECT_EQ(pqnb_simulate(cat.p, R"({"suite_name":"bogus"})", &bogus.p), PQNB_E_UNKNOWN_SUITE);
}

TEST(CApi, PlotFromResults) {
  CatalogPtr cat;
  ExperimentPtr exp;
  ASSERT_EQ(pqnb_catalog_builtin(&cat.p), PQNB_OK);
  ASSERT_EQ(pqnb_experiment_create(&exp.p), PQNB_OK);
  Text csv;
  ASSERT_EQ(pqnb_experiment_run(exp.p, cat.p, 0, &csv.p), PQNB_OK);

  const auto dir = temp_dir("plot");
  const auto results = dir / "results.csv";
  std::ofstream(results) << csv.str();
  size_t written = 0;
  ASSERT_EQ(pqnb_plot(results.c_str(), (dir / "svg").c_str(), &written), PQNB_OK);
  EXPECT_EQ(written, 4u);
  for (const char* name : {"kem_handshake_time.svg", "kem_throughput.svg", "signature_handshake_time.svg",
                           "signature_throughput.svg"}) {
    std::ifstream in(dir / "svg" / name);
    const std::string svg((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(svg.rfind("<svg", 0), 0u) << name;
  }

  std::ofstream(dir / "junk.csv") << "hello\n";
  EXPECT_EQ(pqnb_plot((dir / "junk.csv").c_str(), (dir / "svg").c_str(), &written), PQNB_E_MALFORMED_RESULTS);
  std::filesystem::remove_all(dir);
}

TEST(CApi, CalibrateReportsInfeasibleAnchors) {
  CatalogPtr cat;
  ASSERT_EQ(pqnb_catalog_builtin(&cat.p), PQNB_OK);
  // A single-device handshake can't take an hour under any searched channel.
  const char* anchors = R"({"anchors":[
      {"suite_name":"ecdhe+ecdsa","n_devices":1,"target":2,"kind":"point","metric":"mean_handshake_s","source":"t"},
      {"suite_name":"ecdhe+ecdsa","n_devices":1,"target":3600,"kind":"lower_bound","metric":"mean_handshake_s",
       "source":"t"}]})";
  const char* search = R"({"samples":20,"refine_rounds":5,"restarts":1})";
  Text result, header;
  EXPECT_EQ(pqnb_calibrate(cat.p, anchors, search, 1, &result.p, &header.p), PQNB_E_INFEASIBLE);
  EXPECT_NE(std::string(pqnb_last_error()).find("ecdhe+ecdsa"), std::string::npos);
}
