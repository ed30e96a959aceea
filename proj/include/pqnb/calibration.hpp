#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pqnb/handshake_model.hpp"
#include "pqnb/nbiot_channel.hpp"
#include "pqnb/suite_catalog.hpp"

namespace pqnb {

enum class AnchorKind { kPoint, kLowerBound, kUpperBound };
// kThroughputDeficit: 1 - throughput(suite) / throughput(reference_suite),
// both at n_devices.
enum class AnchorMetric { kMeanHandshakeS, kMeanThroughputBps, kThroughputDeficit };

std::string_view to_string(AnchorKind k);
std::string_view to_string(AnchorMetric m);

struct CalibrationAnchor {
  std::string suite_name;
  std::size_t n_devices = 5;
  double target = 0;  // seconds, or bps for throughput anchors
  AnchorKind kind = AnchorKind::kPoint;
  AnchorMetric metric = AnchorMetric::kMeanHandshakeS;
  std::string reference_suite;  // kThroughputDeficit only
  std::string source;           // where the number comes from
};

struct Range {
  double lo = 0;
  double hi = 0;
};

// Box searched by calibrate(); rates are sampled log-uniformly.
struct SearchSpace {
  Range ul_rate_bps{2000, 80000};
  Range dl_rate_bps{2000, 80000};
  Range turnaround_s{0, 0.5};
  Range ack_time_s{0, 0.5};
  Range split_flight1{0, 0.6};
  Range split_flight3{0, 0.6};
  ByteCount mss_bytes = 536;
  int ack_every = 2;
  bool tcp_setup_rtt = true;
  std::size_t samples = 3000;
  std::size_t refine_rounds = 80;
  std::size_t restarts = 4;  // pattern searches, started from the best samples
  std::uint64_t seed = 1;
};

struct AnchorResidual {
  CalibrationAnchor anchor;
  double simulated = 0;
  double relative_error = 0;  // signed (simulated / target - 1)
  bool satisfied = false;     // bounds: within bound; points: always true
};

struct CalibrationResult {
  ChannelConfig channel;
  OverheadSplitPolicy split;
  double max_point_error = 0;
  std::vector<AnchorResidual> residuals;
  std::size_t evaluations = 0;
};

// Throws ConfigError for a bad anchor.
void validate(const CalibrationAnchor& anchor);

// Simulates every (suite, n) named by the anchors once.
std::vector<AnchorResidual> evaluate_anchors(std::span<const CalibrationAnchor> anchors, const ChannelConfig& channel,
                                             const OverheadSplitPolicy& split, bool tcp_setup_rtt,
                                             const SuiteCatalog& catalog = SuiteCatalog::builtin());

// Seeded random search followed by pattern-search refinement: minimizes the
// maximum relative error over POINT anchors while every bound anchor holds.
// Throws kInfeasible when no evaluated candidate satisfies all bounds.
CalibrationResult calibrate(std::span<const CalibrationAnchor> anchors, const SearchSpace& space,
                            const SuiteCatalog& catalog = SuiteCatalog::builtin(), unsigned max_threads = 0);

// Source text of calibrated_defaults.hpp for a calibration result.
std::string defaults_header(const CalibrationResult& result);

}  // namespace pqnb
