#pragma once

#include <span>
#include <string>

#include "pqnb/suite_catalog.hpp"

namespace pqnb {

struct DeviceRecord;

struct AggregateMetrics {
  std::string suite_name;
  std::size_t n_devices = 0;
  double mean_handshake_s = 0;
  double stdev_handshake_s = 0;  // population
  double mean_device_throughput_bps = 0;
  double min_handshake_s = 0;
  double max_handshake_s = 0;
  std::size_t queued_devices = 0;  // devices with a nonzero queue delay
};

// total_bytes * 8 / (t_complete - t_arrive). Throws kZeroDuration.
double device_throughput(const DeviceRecord& record, ByteCount total_bytes);

// Means over devices; each duration starts at arrival. Throws kEmpty.
AggregateMetrics aggregate(std::span<const DeviceRecord> records, const CipherSuite& suite);

}  // namespace pqnb
