#pragma once

#include <array>
#include <string>
#include <vector>

#include "pqnb/suite_catalog.hpp"

namespace pqnb {

enum class Direction { kUplink, kDownlink };

std::string_view to_string(Direction d);

struct FlightComponent {
  std::string label;
  ByteCount bytes = 0;
};

struct Flight {
  int index = 0;  // 1, 2 or 3
  Direction direction = Direction::kUplink;
  ByteCount bytes = 0;
  std::vector<FlightComponent> components;
};

// How the fixed overhead (hello bodies, extensions, Finished, record and
// transport framing) is spread over the three flights.
struct OverheadSplitPolicy {
  double flight1 = 0.25;
  double flight2 = 0.55;
  double flight3 = 0.20;

  bool operator==(const OverheadSplitPolicy&) const = default;
};


// Throws kInvalidPolicy for negative fractions or a sum other than 1.
void validate(const OverheadSplitPolicy& policy);

struct HandshakeProfile {
  std::string suite_name;
  std::array<Flight, 3> flights;
  ByteCount total_bytes = 0;
};

struct Segment {
  int flight_index = 0;
  Direction direction = Direction::kUplink;
  ByteCount payload_bytes = 0;
  std::size_t sequence_number = 0;
};

struct DirectionTotals {
  ByteCount uplink_bytes = 0;
  ByteCount downlink_bytes = 0;
};

// 1.5-RTT exchange: ClientHello up, ServerHello..Finished down, client
// Finished up. Flight 1 and 3 shares of the fixed overhead are floored and
// the remainder goes to flight 2, so the total always matches the suite.
// Requires a resolved chain (kUnknownChain otherwise).
HandshakeProfile decompose(const CipherSuite& suite, const OverheadSplitPolicy& policy = {});

std::vector<Segment> segment(const Flight& flight, ByteCount mss);

DirectionTotals direction_totals(const HandshakeProfile& profile);

}  // namespace pqnb
