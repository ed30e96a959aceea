#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "pqnb/calibrated_defaults.hpp"
#include "pqnb/error.hpp"
#include "pqnb/handshake_model.hpp"
#include "pqnb/metrics.hpp"
#include "pqnb/nbiot_channel.hpp"
#include "pqnb/suite_catalog.hpp"

namespace pqnb {

struct Position {
  double x_m = 0;
  double y_m = 0;
};

// Area-uniform placement over a disk centered on the eNB.
std::vector<Position> place_devices(std::size_t n, double radius_m, std::mt19937_64& rng);

struct Simultaneous {};
struct Poisson {
  double rate_per_s = 1.0;
};
using StartPolicy = std::variant<Simultaneous, Poisson>;

// Default: every device within the cell is CE0.
struct Ce0Only {};
// MCL(d) = reference_loss_db + 10 * exponent * log10(max(d, 1 m)).
struct LogDistanceMcl {
  double reference_loss_db = 40.0;
  double exponent = 3.5;
};
using CeRule = std::variant<Ce0Only, LogDistanceMcl>;

CEMode classify_ce(double distance_m, const CeRule& rule = Ce0Only{});

struct SimConfig {
  std::size_t n_devices = 1;
  std::string suite_name = "kyber512+ecdsa";
  std::uint64_t seed = 42;
  double radius_m = 1000.0;
  StartPolicy start_policy = Simultaneous{};
  ChannelConfig channel{};
  OverheadSplitPolicy split_policy{calibrated::kSplitFlight1, calibrated::kSplitFlight2, calibrated::kSplitFlight3};
  bool tcp_setup_rtt = true;
  CeRule ce_rule = Ce0Only{};
};

// Throws ConfigError naming the field.
void validate(const SimConfig& cfg);

struct DeviceRecord {
  DeviceId id = 0;
  Position position;
  double distance_m = 0;
  CeLevel ce_class = CeLevel::kCe0;
  Seconds t_arrive = 0;
  Seconds t_granted = 0;
  Seconds t_flight1_done = 0;
  Seconds t_flight2_done = 0;
  Seconds t_complete = 0;
  ByteCount bytes_transmitted = 0;
  int subcarrier = -1;

  Seconds queue_delay_s() const { return t_granted - t_arrive; }
  Seconds handshake_s() const { return t_complete - t_arrive; }
};

enum class EventKind {
  kArrival,
  kGrant,
  kSetupDone,
  kDownlinkRequest,
  kSegmentDone,
  kAckDone,
  kFlightDone,
  kComplete,
};

struct Event {
  Seconds time = 0;
  std::uint64_t sequence = 0;
  EventKind kind = EventKind::kArrival;
  DeviceId device = 0;
};

// Strict (time, sequence) ordering.
bool event_after(const Event& a, const Event& b);

// Optional observation of one run, used by invariant checks.
struct RunTrace {
  struct DownlinkUse {
    DeviceId device;
    Interval interval;
    bool data;  // false for an acknowledgement
  };
  struct HolderSample {
    Seconds time;
    int holders;
    std::size_t waiting;
    int free;
  };
  std::vector<HolderSample> holders;  // after every event
  std::vector<DownlinkUse> downlink;
  std::vector<DeviceId> enqueue_order;  // devices that had to wait
  std::vector<DeviceId> dequeue_order;  // in the order they were granted
  std::vector<Event> events;            // in processing order
};

struct RunResult {
  SimConfig config;
  std::vector<DeviceRecord> devices;
  AggregateMetrics aggregate;
  std::uint64_t wall_events = 0;
};

// One deterministic run. Throws kUnknownSuite, kNonCe0Device or ConfigError.
RunResult run(const SimConfig& config, const SuiteCatalog& catalog = SuiteCatalog::builtin(),
              RunTrace* trace = nullptr);

// Runs configs concurrently; results keep input order. A failing run is
// rethrown as SweepError carrying its index.
std::vector<RunResult> sweep(const std::vector<SimConfig>& configs,
                             const SuiteCatalog& catalog = SuiteCatalog::builtin(), unsigned max_threads = 0);

class SweepError : public Error {
 public:
  SweepError(std::size_t index, const Error& cause)
      : Error(cause.code(), "config[" + std::to_string(index) + "]: " + cause.what()), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace pqnb
