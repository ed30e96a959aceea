#include "pqnb/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "pqnb/error.hpp"
#include "pqnb/sim_engine.hpp"

namespace pqnb {

double device_throughput(const DeviceRecord& record, ByteCount total_bytes) {
  const Seconds duration = record.t_complete - record.t_arrive;
  if (!(duration > 0)) {
    throw Error(ErrorCode::kZeroDuration, "device " + std::to_string(record.id) + " has a nonpositive handshake duration");
  }
  return static_cast<double>(total_bytes) * 8.0 / duration;
}

AggregateMetrics aggregate(std::span<const DeviceRecord> records, const CipherSuite& suite) {
  if (records.empty()) throw Error(ErrorCode::kEmpty, "no device records to aggregate");
  AggregateMetrics m;
  m.suite_name = suite.name;
  m.n_devices = records.size();
  m.min_handshake_s = records.front().handshake_s();
  m.max_handshake_s = m.min_handshake_s;
  double sum = 0;
  double sum_tput = 0;
  for (const auto& r : records) {
    const double d = r.handshake_s();
    sum += d;
    sum_tput += device_throughput(r, suite.total_handshake_bytes);
    m.min_handshake_s = std::min(m.min_handshake_s, d);
    m.max_handshake_s = std::max(m.max_handshake_s, d);
    if (r.queue_delay_s() > 0) ++m.queued_devices;
  }
  const double n = static_cast<double>(records.size());
  m.mean_handshake_s = sum / n;
  m.mean_device_throughput_bps = sum_tput / n;
  double sq = 0;
  for (const auto& r : records) {
    const double dev = r.handshake_s() - m.mean_handshake_s;
    sq += dev * dev;
  }
  m.stdev_handshake_s = std::sqrt(sq / n);
  return m;
}

}  // namespace pqnb
