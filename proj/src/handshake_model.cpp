#include "pqnb/handshake_model.hpp"

#include <cmath>

#include "pqnb/error.hpp"

namespace pqnb {

std::string_view to_string(Direction d) {
  return d == Direction::kUplink ? "uplink" : "downlink";
}

void validate(const OverheadSplitPolicy& p) {
  const bool finite = std::isfinite(p.flight1) && std::isfinite(p.flight2) && std::isfinite(p.flight3);
  if (!finite || p.flight1 < 0 || p.flight2 < 0 || p.flight3 < 0) {
    throw Error(ErrorCode::kInvalidPolicy, "split fractions must be finite and nonnegative");
  }
  if (std::abs(p.flight1 + p.flight2 + p.flight3 - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidPolicy, "split fractions must sum to 1");
  }
}

HandshakeProfile decompose(const CipherSuite& suite, const OverheadSplitPolicy& policy) {
  validate(policy);
  const ByteCount overhead = fixed_overhead(suite);
  const auto share = [&](double f) { return static_cast<ByteCount>(std::floor(f * static_cast<double>(overhead) + 1e-9)); };
  const ByteCount f1 = share(policy.flight1);
  const ByteCount f3 = share(policy.flight3);
  const ByteCount f2 = overhead - f1 - f3;
  if (f2 < 0) throw Error(ErrorCode::kInvalidPolicy, "split produces a negative flight-2 share");

  HandshakeProfile out;
  out.suite_name = suite.name;
  out.flights[0] = {1, Direction::kUplink, 0,
                    {{"key_share", suite.kem.client_key_share_bytes}, {"residual", f1}}};
  out.flights[1] = {2, Direction::kDownlink, 0,
                    {{"key_share", suite.kem.server_key_share_bytes},
                     {"certificate_chain", *suite.chain_bytes},
                     {"certificate_verify", suite.sig.signature_bytes},
                     {"residual", f2}}};
  out.flights[2] = {3, Direction::kUplink, 0, {{"residual", f3}}};
  for (auto& flight : out.flights) {
    for (const auto& c : flight.components) flight.bytes += c.bytes;
    out.total_bytes += flight.bytes;
  }
  return out;
}

std::vector<Segment> segment(const Flight& flight, ByteCount mss) {
  if (mss < 1) throw Error(ErrorCode::kZeroMss, "mss must be at least 1 byte");
  std::vector<Segment> out;
  out.reserve(static_cast<std::size_t>((flight.bytes + mss - 1) / mss));
  for (ByteCount sent = 0; sent < flight.bytes; sent += mss) {
    out.push_back({flight.index, flight.direction, std::min(mss, flight.bytes - sent), out.size()});
  }
  return out;
}

DirectionTotals direction_totals(const HandshakeProfile& profile) {
  DirectionTotals t;
  for (const auto& f : profile.flights) {
    (f.direction == Direction::kUplink ? t.uplink_bytes : t.downlink_bytes) += f.bytes;
  }
  return t;
}

}  // namespace pqnb
