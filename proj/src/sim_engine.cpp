#include "pqnb/sim_engine.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <queue>
#include <thread>

namespace pqnb {

std::vector<Position> place_devices(std::size_t n, double radius_m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Position> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = radius_m * std::sqrt(unit(rng));
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    out.push_back({r * std::cos(theta), r * std::sin(theta)});
  }
  return out;
}

CEMode classify_ce(double distance_m, const CeRule& rule) {
  if (const auto* ld = std::get_if<LogDistanceMcl>(&rule)) {
    const double mcl = ld->reference_loss_db + 10.0 * ld->exponent * std::log10(std::max(distance_m, 1.0));
    if (mcl > ce_mode(CeLevel::kCe1).mcl_db) return ce_mode(CeLevel::kCe2);
    if (mcl > ce_mode(CeLevel::kCe0).mcl_db) return ce_mode(CeLevel::kCe1);
  }
  return ce_mode(CeLevel::kCe0);
}

void validate(const SimConfig& c) {
  if (c.n_devices < 1) throw ConfigError("n_devices", "must be >= 1");
  if (c.suite_name.empty()) throw ConfigError("suite_name", "must be nonempty");
  if (!std::isfinite(c.radius_m) || c.radius_m <= 0) throw ConfigError("radius_m", "must be > 0");
  if (const auto* p = std::get_if<Poisson>(&c.start_policy)) {
    if (!std::isfinite(p->rate_per_s) || p->rate_per_s <= 0) {
      throw ConfigError("start_policy.rate_per_s", "must be > 0");
    }
  }
  validate(c.channel);
  try {
    validate(c.split_policy);
  } catch (const Error& e) {
    throw ConfigError("split_policy", e.what());
  }
}

bool event_after(const Event& a, const Event& b) {
  return a.time > b.time || (a.time == b.time && a.sequence > b.sequence);
}

namespace {

enum class Radio { kTx, kRx };

struct DeviceState {
  std::size_t flight = 0;  // 0..2
  std::size_t burst = 0;
  Radio radio = Radio::kTx;
};

// One run's mutable state; the event loop below is the whole kernel.
class Kernel {
 public:
  Kernel(const SimConfig& cfg, const CipherSuite& suite, RunTrace* trace)
      : cfg_(cfg), ch_(cfg.channel), trace_(trace), pool_(cfg.channel.n_subcarriers) {
    const HandshakeProfile profile = decompose(suite, cfg.split_policy);
    for (std::size_t f = 0; f < 3; ++f) {
      const Flight& flight = profile.flights[f];
      flight_dir_[f] = flight.direction;
      ByteCount acc = 0;
      int in_burst = 0;
      for (const Segment& seg : segment(flight, ch_.mss_bytes)) {
        acc += seg.payload_bytes;
        if (++in_burst == ch_.ack_every) {
          bursts_[f].push_back(acc);
          acc = 0;
          in_burst = 0;
        }
      }
      if (in_burst > 0) bursts_[f].push_back(acc);
    }
  }

  std::uint64_t execute(std::vector<DeviceRecord>& records) {
    records_ = &records;
    state_.assign(records.size(), {});
    for (const auto& r : records) push(r.t_arrive, EventKind::kArrival, r.id);
    std::uint64_t processed = 0;
    while (!queue_.empty()) {
      const Event ev = queue_.top();
      queue_.pop();
      ++processed;
      handle(ev);
      if (trace_) {
        trace_->events.push_back(ev);
        trace_->holders.push_back({ev.time, pool_.holder_count(), pool_.queue_length(), pool_.free_count()});
      }
    }
    return processed;
  }

 private:
  void push(Seconds t, EventKind kind, DeviceId d) { queue_.push({t, next_seq_++, kind, d}); }

  // Time at which the device's radio is in `mode`, starting from t.
  Seconds switch_radio(DeviceId d, Radio mode, Seconds t) {
    auto& st = state_[d];
    if (st.radio == mode) return t;
    st.radio = mode;
    return t + ch_.turnaround_s;
  }

  DeviceRecord& rec(DeviceId d) { return (*records_)[d]; }

  void handle(const Event& ev) {
    const DeviceId d = ev.device;
    const Seconds t = ev.time;
    auto& st = state_[d];
    switch (ev.kind) {
      case EventKind::kArrival:
        if (const auto sc = pool_.acquire(d, t)) {
          rec(d).subcarrier = *sc;
          push(t, EventKind::kGrant, d);
        } else if (trace_) {
          trace_->enqueue_order.push_back(d);
        }
        break;
      case EventKind::kGrant: {
        rec(d).t_granted = t;
        st.radio = Radio::kTx;
        if (cfg_.tcp_setup_rtt) {
          // SYN on the subcarrier, SYN-ACK back; latency only, the bytes are in the totals.
          const Seconds syn_done = t + ack_time(Direction::kUplink, ch_);
          const Seconds rx_ready = switch_radio(d, Radio::kRx, syn_done);
          push(rx_ready + ack_time(Direction::kDownlink, ch_), EventKind::kSetupDone, d);
        } else {
          push(t, EventKind::kSetupDone, d);
        }
        break;
      }
      case EventKind::kSetupDone:
        start_flight(d, 0, t);
        break;
      case EventKind::kDownlinkRequest:
        if (flight_dir_[st.flight] == Direction::kDownlink) {
          const ByteCount bytes = bursts_[st.flight][st.burst];
          const Interval iv = downlink_.serve_bytes(bytes, ch_, t);
          rec(d).bytes_transmitted += bytes;
          note_downlink(d, iv, true);
          push(iv.finish, EventKind::kSegmentDone, d);
        } else {
          const Interval iv = downlink_.serve_for(ack_time(Direction::kDownlink, ch_), t);
          note_downlink(d, iv, false);
          push(iv.finish, EventKind::kAckDone, d);
        }
        break;
      case EventKind::kSegmentDone:
        if (flight_dir_[st.flight] == Direction::kUplink) {
          push(switch_radio(d, Radio::kRx, t), EventKind::kDownlinkRequest, d);
        } else {
          const Seconds tx_ready = switch_radio(d, Radio::kTx, t);
          push(tx_ready + ack_time(Direction::kUplink, ch_), EventKind::kAckDone, d);
        }
        break;
      case EventKind::kAckDone:
        ++st.burst;
        if (st.burst < bursts_[st.flight].size()) {
          send_burst(d, t);
        } else {
          push(t, EventKind::kFlightDone, d);
        }
        break;
      case EventKind::kFlightDone:
        if (st.flight == 0) {
          rec(d).t_flight1_done = t;
          start_flight(d, 1, t);
        } else if (st.flight == 1) {
          rec(d).t_flight2_done = t;
          start_flight(d, 2, t);
        } else {
          push(t, EventKind::kComplete, d);
        }
        break;
      case EventKind::kComplete:
        rec(d).t_complete = t;
        if (const auto next = pool_.release(d, t)) {
          rec(next->device).subcarrier = next->subcarrier;
          if (trace_) trace_->dequeue_order.push_back(next->device);
          push(t, EventKind::kGrant, next->device);
        }
        break;
    }
  }

  void start_flight(DeviceId d, std::size_t f, Seconds t) {
    auto& st = state_[d];
    st.flight = f;
    st.burst = 0;
    if (bursts_[f].empty()) {
      push(t, EventKind::kFlightDone, d);
      return;
    }
    send_burst(d, t);
  }

  void send_burst(DeviceId d, Seconds t) {
    const auto& st = state_[d];
    if (flight_dir_[st.flight] == Direction::kUplink) {
      const ByteCount bytes = bursts_[st.flight][st.burst];
      const Seconds start = switch_radio(d, Radio::kTx, t);
      rec(d).bytes_transmitted += bytes;
      push(start + tx_time(bytes, Direction::kUplink, ch_), EventKind::kSegmentDone, d);
    } else {
      push(switch_radio(d, Radio::kRx, t), EventKind::kDownlinkRequest, d);
    }
  }

  void note_downlink(DeviceId d, Interval iv, bool data) {
    if (trace_) trace_->downlink.push_back({d, iv, data});
  }

  struct Later {
    bool operator()(const Event& a, const Event& b) const { return event_after(a, b); }
  };

  const SimConfig& cfg_;
  const ChannelConfig& ch_;
  RunTrace* trace_;
  SubcarrierPool pool_;
  DownlinkServer downlink_;
  std::array<std::vector<ByteCount>, 3> bursts_;
  std::array<Direction, 3> flight_dir_{};
  std::vector<DeviceState> state_;
  std::vector<DeviceRecord>* records_ = nullptr;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t next_seq_ = 0;
};

}  // namespace

RunResult run(const SimConfig& config, const SuiteCatalog& catalog, RunTrace* trace) {
  validate(config);
  const CipherSuite suite = catalog.resolved(config.suite_name);

  std::mt19937_64 rng(config.seed);
  const auto positions = place_devices(config.n_devices, config.radius_m, rng);

  RunResult result;
  result.config = config;
  result.devices.resize(config.n_devices);
  Seconds clock = 0;
  std::exponential_distribution<double> gap(
      std::holds_alternative<Poisson>(config.start_policy) ? std::get<Poisson>(config.start_policy).rate_per_s : 1.0);
  for (std::size_t i = 0; i < config.n_devices; ++i) {
    DeviceRecord& r = result.devices[i];
    r.id = i;
    r.position = positions[i];
    r.distance_m = std::hypot(r.position.x_m, r.position.y_m);
    const CEMode ce = classify_ce(r.distance_m, config.ce_rule);
    r.ce_class = ce.level;
    if (ce.level != CeLevel::kCe0) {
      throw Error(ErrorCode::kNonCe0Device, "device " + std::to_string(i) + " at " + std::to_string(r.distance_m) +
                                                " m classifies as " + std::string(ce.name) +
                                                "; only CE0 is schedulable");
    }
    if (std::holds_alternative<Poisson>(config.start_policy)) clock += gap(rng);
    r.t_arrive = clock;
  }

  Kernel kernel(config, suite, trace);
  result.wall_events = kernel.execute(result.devices);
  result.aggregate = aggregate(result.devices, suite);
  return result;
}

std::vector<RunResult> sweep(const std::vector<SimConfig>& configs, const SuiteCatalog& catalog,
                             unsigned max_threads) {
  std::vector<RunResult> results(configs.size());
  if (configs.empty()) return results;
  unsigned workers = max_threads ? max_threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, configs.size()));

  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        results[i] = run(configs[i], catalog);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const Error& e) {
      throw SweepError(i, e);
    }
  }
  return results;
}

}  // namespace pqnb
