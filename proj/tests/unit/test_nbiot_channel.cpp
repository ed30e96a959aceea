#include <gtest/gtest.h>

#include "pqnb/error.hpp"
#include "pqnb/nbiot_channel.hpp"

using namespace pqnb;

namespace {

ChannelConfig rates(double ul, double dl) {
  ChannelConfig c;
  c.ul_rate_bps = ul;
  c.dl_rate_bps = dl;
  return c;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "nothing thrown";
  return ErrorCode::kIo;
}

}  // namespace

TEST(CeModes, FixedTable) {
  EXPECT_DOUBLE_EQ(ce_mode(CeLevel::kCe0).mcl_db, 144);
  EXPECT_DOUBLE_EQ(ce_mode(CeLevel::kCe1).mcl_db, 154);
  EXPECT_DOUBLE_EQ(ce_mode(CeLevel::kCe2).mcl_db, 164);
  EXPECT_EQ(ce_mode(CeLevel::kCe0).default_repetitions, 1);
}

TEST(ChannelConfig, DefaultsAreConsistent) {
  const ChannelConfig c;
  EXPECT_NO_THROW(validate(c));
  EXPECT_DOUBLE_EQ(c.n_subcarriers * c.subcarrier_hz, c.prb_bandwidth_hz);
  EXPECT_EQ(c.n_subcarriers, 12);
}

TEST(ChannelConfig, ValidationNamesField) {
  auto expect_field = [](ChannelConfig c, const std::string& field) {
    try {
      validate(c);
      ADD_FAILURE() << "accepted bad " << field;
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.field(), field);
    }
  };
  ChannelConfig c;
  c.ul_rate_bps = 0;
  expect_field(c, "channel.ul_rate_bps");
  c = {};
  c.dl_rate_bps = -1;
  expect_field(c, "channel.dl_rate_bps");
  c = {};
  c.n_subcarriers = 6;
  expect_field(c, "channel.n_subcarriers");
  c = {};
  c.ul_repetitions = 2049;
  expect_field(c, "channel.ul_repetitions");
  c = {};
  c.dl_repetitions = 129;
  expect_field(c, "channel.dl_repetitions");
  c = {};
  c.mss_bytes = 0;
  expect_field(c, "channel.mss_bytes");
  c = {};
  c.ack_every = 0;
  expect_field(c, "channel.ack_every");
  c = {};
  c.turnaround_s = -0.1;
  expect_field(c, "channel.turnaround_s");
}

TEST(TxTime, Examples) {
  ChannelConfig c = rates(4000, 8000);
  EXPECT_DOUBLE_EQ(tx_time(2048, Direction::kUplink, c), 4.096);
  c.ul_repetitions = 2;
  EXPECT_DOUBLE_EQ(tx_time(2048, Direction::kUplink, c), 8.192);
  EXPECT_DOUBLE_EQ(tx_time(0, Direction::kUplink, c), 0.0);
  EXPECT_DOUBLE_EQ(tx_time(1000, Direction::kDownlink, c), 1.0);
}

TEST(AckTime, ScalesWithRepetitions) {
  ChannelConfig c;
  c.ack_time_s = 0.05;
  c.dl_repetitions = 4;
  EXPECT_DOUBLE_EQ(ack_time(Direction::kUplink, c), 0.05);
  EXPECT_DOUBLE_EQ(ack_time(Direction::kDownlink, c), 0.2);
}

TEST(SubcarrierPool, GrantsUntilFullThenQueues) {
  SubcarrierPool pool;
  for (DeviceId d = 0; d < 12; ++d) {
    const auto sc = pool.acquire(d, 0.0);
    ASSERT_TRUE(sc.has_value());
    EXPECT_EQ(*sc, static_cast<int>(d));
  }
  EXPECT_EQ(pool.free_count(), 0);
  EXPECT_EQ(pool.holder_count(), 12);
  EXPECT_FALSE(pool.acquire(12, 0.0).has_value());
  EXPECT_EQ(pool.queue_length(), 1u);
}

TEST(SubcarrierPool, ThirteenSimultaneousArrivals) {
  SubcarrierPool pool;
  int queued = 0;
  for (DeviceId d = 0; d < 13; ++d) queued += pool.acquire(d, 0.0) ? 0 : 1;
  EXPECT_EQ(queued, 1);
}

TEST(SubcarrierPool, ReleaseWithEmptyQueue) {
  SubcarrierPool pool;
  pool.acquire(3, 0.0);
  const int before = pool.free_count();
  EXPECT_FALSE(pool.release(3, 1.0).has_value());
  EXPECT_EQ(pool.free_count(), before + 1);
}

TEST(SubcarrierPool, ReleasePromotesHeadFifo) {
  SubcarrierPool pool(2);
  pool.acquire(0, 0.0);
  pool.acquire(1, 0.0);
  EXPECT_FALSE(pool.acquire(10, 1.0));  // A
  EXPECT_FALSE(pool.acquire(11, 2.0));  // B
  const auto g = pool.release(1, 3.0);
  ASSERT_TRUE(g.has_value());
  EXPECT_EQ(g->device, 10u);
  EXPECT_EQ(g->subcarrier, 1);
  EXPECT_EQ(pool.queue_length(), 1u);
  EXPECT_EQ(pool.subcarrier_of(10), 1);
  EXPECT_EQ(pool.free_count(), 0);
}

TEST(SubcarrierPool, TiesBrokenByDeviceId) {
  SubcarrierPool pool(1);
  pool.acquire(0, 0.0);
  pool.acquire(9, 5.0);
  pool.acquire(4, 5.0);
  pool.acquire(7, 4.0);
  std::vector<DeviceId> order;
  DeviceId holder = 0;
  while (auto g = pool.release(holder, 10.0)) {
    order.push_back(g->device);
    holder = g->device;
  }
  EXPECT_EQ(order, (std::vector<DeviceId>{7, 4, 9}));
}

TEST(SubcarrierPool, Errors) {
  SubcarrierPool pool(1);
  pool.acquire(0, 0.0);
  EXPECT_EQ(code_of([&] { pool.acquire(0, 0.0); }), ErrorCode::kDoubleAcquire);
  pool.acquire(1, 0.0);
  EXPECT_EQ(code_of([&] { pool.acquire(1, 0.0); }), ErrorCode::kDoubleAcquire);
  EXPECT_EQ(code_of([&] { pool.release(1, 0.0); }), ErrorCode::kNotHeld);
  pool.release(0, 1.0);
  EXPECT_EQ(code_of([&] { pool.release(0, 1.0); }), ErrorCode::kNotHeld);
}

TEST(Downlink, ServeExamples) {
  const ChannelConfig c = rates(4000, 8000);
  auto iv = downlink_serve(1000, c, 0.0, 2.0);
  EXPECT_DOUBLE_EQ(iv.start, 2.0);
  EXPECT_DOUBLE_EQ(iv.finish, 3.0);
  iv = downlink_serve(1000, c, 7.0, 2.0);
  EXPECT_DOUBLE_EQ(iv.start, 7.0);
  EXPECT_DOUBLE_EQ(iv.finish, 8.0);
}

TEST(Downlink, ServerSerializes) {
  const ChannelConfig c = rates(4000, 8000);
  DownlinkServer srv;
  const auto a = srv.serve_bytes(1000, c, 1.0);
  const auto b = srv.serve_bytes(500, c, 1.0);
  EXPECT_DOUBLE_EQ(b.start, a.finish);
  EXPECT_DOUBLE_EQ(b.finish, a.finish + 0.5);
  const auto k = srv.serve_for(0.25, 0.0);
  EXPECT_DOUBLE_EQ(k.start, b.finish);
  EXPECT_DOUBLE_EQ(srv.busy_until(), k.finish);
  const auto late = srv.serve_for(0.1, 100.0);
  EXPECT_DOUBLE_EQ(late.start, 100.0);
}
