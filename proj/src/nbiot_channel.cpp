#include "pqnb/nbiot_channel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "pqnb/error.hpp"

namespace pqnb {
namespace {

constexpr std::array<CEMode, 3> kCeModes{{
    {CeLevel::kCe0, "CE0", 144.0, 1},
    {CeLevel::kCe1, "CE1", 154.0, 8},
    {CeLevel::kCe2, "CE2", 164.0, 32},
}};

constexpr int kMaxUlRepetitions = 2048;
constexpr int kMaxDlRepetitions = 128;

void require_positive(double v, const char* field) {
  if (!std::isfinite(v) || v <= 0) throw ConfigError(std::string("channel.") + field, "must be a finite value > 0");
}

void require_nonnegative(double v, const char* field) {
  if (!std::isfinite(v) || v < 0) throw ConfigError(std::string("channel.") + field, "must be a finite value >= 0");
}

}  // namespace

const CEMode& ce_mode(CeLevel level) { return kCeModes[static_cast<std::size_t>(level)]; }

void validate(const ChannelConfig& c) {
  require_positive(c.prb_bandwidth_hz, "prb_bandwidth_hz");
  require_positive(c.subcarrier_hz, "subcarrier_hz");
  if (c.n_subcarriers < 1) throw ConfigError("channel.n_subcarriers", "must be >= 1");
  if (std::abs(c.n_subcarriers * c.subcarrier_hz - c.prb_bandwidth_hz) > 1e-6) {
    throw ConfigError("channel.n_subcarriers", "n_subcarriers * subcarrier_hz must equal prb_bandwidth_hz");
  }
  require_positive(c.ul_rate_bps, "ul_rate_bps");
  require_positive(c.dl_rate_bps, "dl_rate_bps");
  if (c.ul_repetitions < 1 || c.ul_repetitions > kMaxUlRepetitions) {
    throw ConfigError("channel.ul_repetitions", "must lie in [1, 2048]");
  }
  if (c.dl_repetitions < 1 || c.dl_repetitions > kMaxDlRepetitions) {
    throw ConfigError("channel.dl_repetitions", "must lie in [1, 128]");
  }
  require_nonnegative(c.turnaround_s, "turnaround_s");
  require_nonnegative(c.ack_time_s, "ack_time_s");
  if (c.mss_bytes < 1) throw ConfigError("channel.mss_bytes", "must be >= 1");
  if (c.ack_every < 1) throw ConfigError("channel.ack_every", "must be >= 1");
}

int repetitions(Direction d, const ChannelConfig& cfg) {
  return d == Direction::kUplink ? cfg.ul_repetitions : cfg.dl_repetitions;
}

Seconds tx_time(ByteCount bytes, Direction d, const ChannelConfig& cfg) {
  const double rate = d == Direction::kUplink ? cfg.ul_rate_bps : cfg.dl_rate_bps;
  return static_cast<double>(bytes) * 8.0 / rate * repetitions(d, cfg);
}

Seconds ack_time(Direction d, const ChannelConfig& cfg) { return cfg.ack_time_s * repetitions(d, cfg); }

SubcarrierPool::SubcarrierPool(int n_subcarriers)
    : capacity_(n_subcarriers), holder_(static_cast<std::size_t>(std::max(n_subcarriers, 0))) {
  if (n_subcarriers < 1) throw ConfigError("channel.n_subcarriers", "must be >= 1");
  for (int id = n_subcarriers - 1; id >= 0; --id) free_.push_back(id);
}

std::optional<int> SubcarrierPool::subcarrier_of(DeviceId device) const {
  for (std::size_t i = 0; i < holder_.size(); ++i) {
    if (holder_[i] == device) return static_cast<int>(i);
  }
  return std::nullopt;
}

std::optional<int> SubcarrierPool::acquire(DeviceId device, Seconds now) {
  const bool waiting = std::any_of(queue_.begin(), queue_.end(), [&](const Waiting& w) { return w.device == device; });
  if (waiting || subcarrier_of(device)) {
    throw Error(ErrorCode::kDoubleAcquire, "device " + std::to_string(device) + " already holds or waits for a subcarrier");
  }
  if (!free_.empty()) {
    const int id = free_.back();
    free_.pop_back();
    holder_[static_cast<std::size_t>(id)] = device;
    return id;
  }
  const Waiting entry{now, device};
  auto pos = std::upper_bound(queue_.begin(), queue_.end(), entry, [](const Waiting& a, const Waiting& b) {
    return a.since < b.since || (a.since == b.since && a.device < b.device);
  });
  queue_.insert(pos, entry);
  return std::nullopt;
}

std::optional<SubcarrierPool::Grant> SubcarrierPool::release(DeviceId device, Seconds /*now*/) {
  const auto held = subcarrier_of(device);
  if (!held) throw Error(ErrorCode::kNotHeld, "device " + std::to_string(device) + " holds no subcarrier");
  holder_[static_cast<std::size_t>(*held)].reset();
  if (queue_.empty()) {
    free_.push_back(*held);
    std::sort(free_.begin(), free_.end(), std::greater<>());
    return std::nullopt;
  }
  const DeviceId next = queue_.front().device;
  queue_.pop_front();
  holder_[static_cast<std::size_t>(*held)] = next;
  return Grant{next, *held};
}

Interval downlink_serve(ByteCount bytes, const ChannelConfig& cfg, Seconds busy_until, Seconds now) {
  const Seconds start = std::max(now, busy_until);
  return {start, start + tx_time(bytes, Direction::kDownlink, cfg)};
}

Interval DownlinkServer::serve_bytes(ByteCount bytes, const ChannelConfig& cfg, Seconds now) {
  const Interval iv = downlink_serve(bytes, cfg, busy_until_, now);
  busy_until_ = iv.finish;
  return iv;
}

Interval DownlinkServer::serve_for(Seconds duration, Seconds now) {
  const Seconds start = std::max(now, busy_until_);
  busy_until_ = start + duration;
  return {start, busy_until_};
}

}  // namespace pqnb
