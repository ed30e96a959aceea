#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <string_view>
#include <vector>

#include "pqnb/calibrated_defaults.hpp"
#include "pqnb/handshake_model.hpp"

namespace pqnb {

using Seconds = double;
using DeviceId = std::size_t;

enum class CeLevel { kCe0, kCe1, kCe2 };

struct CEMode {
  CeLevel level;
  std::string_view name;
  double mcl_db;
  int default_repetitions;
};

const CEMode& ce_mode(CeLevel level);

struct ChannelConfig {
  double prb_bandwidth_hz = 180000.0;
  int n_subcarriers = 12;
  double subcarrier_hz = 15000.0;
  // Rates, turnaround and ack time default to the calibrated values.
  double ul_rate_bps = calibrated::kUlRateBps;  // per single-tone subcarrier
  double dl_rate_bps = calibrated::kDlRateBps;  // shared by all devices
  int ul_repetitions = 1;
  int dl_repetitions = 1;
  Seconds turnaround_s = calibrated::kTurnaroundS;  // half-duplex RX<->TX switch
  Seconds ack_time_s = calibrated::kAckTimeS;       // channel time of one acknowledgement
  ByteCount mss_bytes = calibrated::kMssBytes;
  int ack_every = calibrated::kAckEvery;  // segments per acknowledgement

  bool operator==(const ChannelConfig&) const = default;
};


// Throws ConfigError naming the first offending field.
void validate(const ChannelConfig& cfg);

int repetitions(Direction d, const ChannelConfig& cfg);

// Airtime of `bytes` in one direction, repetitions included.
Seconds tx_time(ByteCount bytes, Direction d, const ChannelConfig& cfg);

// Airtime of one acknowledgement sent in direction `d`.
Seconds ack_time(Direction d, const ChannelConfig& cfg);

// Uplink resource: one single-tone subcarrier per device, FIFO waiting
// list once every subcarrier is held.
class SubcarrierPool {
 public:
  struct Grant {
    DeviceId device;
    int subcarrier;
  };

  explicit SubcarrierPool(int n_subcarriers = 12);

  // Granted subcarrier, or nullopt when the device was queued.
  // Throws kDoubleAcquire if the device already holds or waits.
  std::optional<int> acquire(DeviceId device, Seconds now);

  // Returns the subcarrier; the queue head, if any, takes it over at `now`.
  // Throws kNotHeld.
  std::optional<Grant> release(DeviceId device, Seconds now);

  int free_count() const { return static_cast<int>(free_.size()); }
  int holder_count() const { return capacity_ - free_count(); }
  std::size_t queue_length() const { return queue_.size(); }
  int capacity() const { return capacity_; }
  std::optional<int> subcarrier_of(DeviceId device) const;

 private:
  int capacity_;
  std::vector<int> free_;  // kept sorted descending; lowest id handed out first
  std::vector<std::optional<DeviceId>> holder_;
  struct Waiting {
    Seconds since;
    DeviceId device;
  };
  std::deque<Waiting> queue_;  // ordered by (since, device)
};

struct Interval {
  Seconds start = 0;
  Seconds finish = 0;
};

// start = max(now, busy_until); finish = start + downlink airtime.
Interval downlink_serve(ByteCount bytes, const ChannelConfig& cfg, Seconds busy_until, Seconds now);

// The eNB downlink as one serialized server, reserved in request order.
class DownlinkServer {
 public:
  Interval serve_bytes(ByteCount bytes, const ChannelConfig& cfg, Seconds now);
  Interval serve_for(Seconds duration, Seconds now);
  Seconds busy_until() const { return busy_until_; }

 private:
  Seconds busy_until_ = 0;
};

}  // namespace pqnb
