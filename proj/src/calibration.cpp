#include "pqnb/calibration.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <thread>

#include "pqnb/error.hpp"
#include "pqnb/sim_engine.hpp"

namespace pqnb {

std::string_view to_string(AnchorKind k) {
  switch (k) {
    case AnchorKind::kPoint: return "point";
    case AnchorKind::kLowerBound: return "lower_bound";
    case AnchorKind::kUpperBound: return "upper_bound";
  }
  return "point";
}

std::string_view to_string(AnchorMetric m) {
  switch (m) {
    case AnchorMetric::kMeanHandshakeS: return "mean_handshake_s";
    case AnchorMetric::kMeanThroughputBps: return "mean_throughput_bps";
    case AnchorMetric::kThroughputDeficit: return "throughput_deficit";
  }
  return "mean_handshake_s";
}

void validate(const CalibrationAnchor& a) {
  if (a.suite_name.empty()) throw ConfigError("anchors[].suite_name", "must be nonempty");
  if (a.n_devices < 1) throw ConfigError("anchors[].n_devices", "must be >= 1");
  if (!std::isfinite(a.target) || a.target <= 0) throw ConfigError("anchors[].target", "must be > 0");
  if ((a.metric == AnchorMetric::kThroughputDeficit) == a.reference_suite.empty()) {
    throw ConfigError("anchors[].reference_suite", "required for throughput_deficit anchors, and only for them");
  }
}

std::vector<AnchorResidual> evaluate_anchors(std::span<const CalibrationAnchor> anchors, const ChannelConfig& channel,
                                             const OverheadSplitPolicy& split, bool tcp_setup_rtt,
                                             const SuiteCatalog& catalog) {
  std::map<std::pair<std::string, std::size_t>, AggregateMetrics> cache;
  std::vector<AnchorResidual> out;
  out.reserve(anchors.size());
  for (const auto& a : anchors) {
    validate(a);
    auto metrics = [&](const std::string& suite) -> const AggregateMetrics& {
      const auto key = std::make_pair(suite, a.n_devices);
      auto it = cache.find(key);
      if (it == cache.end()) {
        SimConfig cfg;
        cfg.n_devices = a.n_devices;
        cfg.suite_name = suite;
        cfg.channel = channel;
        cfg.split_policy = split;
        cfg.tcp_setup_rtt = tcp_setup_rtt;
        it = cache.emplace(key, run(cfg, catalog).aggregate).first;
      }
      return it->second;
    };
    AnchorResidual r;
    r.anchor = a;
    switch (a.metric) {
      case AnchorMetric::kMeanHandshakeS: r.simulated = metrics(a.suite_name).mean_handshake_s; break;
      case AnchorMetric::kMeanThroughputBps: r.simulated = metrics(a.suite_name).mean_device_throughput_bps; break;
      case AnchorMetric::kThroughputDeficit:
        r.simulated = 1.0 - metrics(a.suite_name).mean_device_throughput_bps /
                                metrics(a.reference_suite).mean_device_throughput_bps;
        break;
    }
    r.relative_error = r.simulated / a.target - 1.0;
    switch (a.kind) {
      case AnchorKind::kPoint: r.satisfied = true; break;
      case AnchorKind::kLowerBound: r.satisfied = r.simulated >= a.target; break;
      case AnchorKind::kUpperBound: r.satisfied = r.simulated <= a.target; break;
    }
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

constexpr std::size_t kDims = 6;
using Point = std::array<double, kDims>;  // normalized to [0, 1]

struct Score {
  double violation = 0;  // summed relative shortfall of bound anchors
  double max_error = 0;  // over point anchors

  bool operator<(const Score& o) const {
    if (violation != o.violation) return violation < o.violation;
    return max_error < o.max_error;
  }
};

double lerp(Range r, double u) { return r.lo + (r.hi - r.lo) * u; }
double log_lerp(Range r, double u) { return std::exp(std::log(r.lo) + (std::log(r.hi) - std::log(r.lo)) * u); }

struct Decoded {
  ChannelConfig channel;
  OverheadSplitPolicy split;
};

Decoded decode(const Point& x, const SearchSpace& s) {
  Decoded d;
  d.channel.ul_rate_bps = log_lerp(s.ul_rate_bps, x[0]);
  d.channel.dl_rate_bps = log_lerp(s.dl_rate_bps, x[1]);
  d.channel.turnaround_s = lerp(s.turnaround_s, x[2]);
  d.channel.ack_time_s = lerp(s.ack_time_s, x[3]);
  d.channel.mss_bytes = s.mss_bytes;
  d.channel.ack_every = s.ack_every;
  double f1 = lerp(s.split_flight1, x[4]);
  double f3 = lerp(s.split_flight3, x[5]);
  if (f1 + f3 > 1.0) {
    const double scale = 1.0 / (f1 + f3);
    f1 *= scale;
    f3 *= scale;
  }
  d.split = {f1, std::max(0.0, 1.0 - f1 - f3), f3};
  return d;
}

Score score(std::span<const AnchorResidual> residuals) {
  Score s;
  for (const auto& r : residuals) {
    if (r.anchor.kind == AnchorKind::kPoint) {
      s.max_error = std::max(s.max_error, std::abs(r.relative_error));
    } else if (!r.satisfied) {
      s.violation += std::abs(r.relative_error);
    }
  }
  return s;
}

void validate(const SearchSpace& s) {
  const auto check = [](Range r, const char* field, bool positive) {
    if (!(r.lo <= r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi) || (positive ? r.lo <= 0 : r.lo < 0)) {
      throw ConfigError(std::string("search_space.") + field, "needs finite lo <= hi within the legal domain");
    }
  };
  check(s.ul_rate_bps, "ul_rate_bps", true);
  check(s.dl_rate_bps, "dl_rate_bps", true);
  check(s.turnaround_s, "turnaround_s", false);
  check(s.ack_time_s, "ack_time_s", false);
  check(s.split_flight1, "split_flight1", false);
  check(s.split_flight3, "split_flight3", false);
  if (s.split_flight1.hi > 1 || s.split_flight3.hi > 1) throw ConfigError("search_space.split", "fractions must be <= 1");
  if (s.mss_bytes < 1) throw ConfigError("search_space.mss_bytes", "must be >= 1");
  if (s.ack_every < 1) throw ConfigError("search_space.ack_every", "must be >= 1");
}

}  // namespace

CalibrationResult calibrate(std::span<const CalibrationAnchor> anchors, const SearchSpace& space,
                            const SuiteCatalog& catalog, unsigned max_threads) {
  validate(space);
  if (anchors.empty()) throw ConfigError("anchors", "at least one anchor is required");
  for (const auto& a : anchors) {
    validate(a);
    catalog.at(a.suite_name);
    if (!a.reference_suite.empty()) catalog.at(a.reference_suite);
  }
  const unsigned workers = max_threads ? max_threads : std::max(1u, std::thread::hardware_concurrency());
  std::size_t evaluations = 0;

  // Scores a batch of candidates concurrently; each evaluation owns its runs.
  auto evaluate_batch = [&](const std::vector<Point>& pts) {
    std::vector<Score> scores(pts.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t i = next++; i < pts.size(); i = next++) {
        const Decoded d = decode(pts[i], space);
        scores[i] = score(evaluate_anchors(anchors, d.channel, d.split, space.tcp_setup_rtt, catalog));
      }
    };
    std::vector<std::thread> pool;
    const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, pts.size()));
    for (unsigned w = 1; w < n; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    evaluations += pts.size();
    return scores;
  };

  std::mt19937_64 rng(space.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> samples(std::max<std::size_t>(space.samples, 1));
  samples[0].fill(0.5);
  for (std::size_t i = 1; i < samples.size(); ++i) {
    for (auto& v : samples[i]) v = unit(rng);
  }
  const auto sample_scores = evaluate_batch(samples);
  std::vector<std::size_t> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const std::size_t starts = std::min<std::size_t>(std::max<std::size_t>(space.restarts, 1), order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(starts), order.end(),
                    [&](std::size_t a, std::size_t b) { return sample_scores[a] < sample_scores[b]; });

  // Pattern search from each of the best samples; keep the best endpoint.
  Point best = samples[order[0]];
  Score best_score = sample_scores[order[0]];
  for (std::size_t s = 0; s < starts; ++s) {
    Point at = samples[order[s]];
    Score at_score = sample_scores[order[s]];
    double step = 0.1;
    for (std::size_t round = 0; round < space.refine_rounds && step > 1e-5; ++round) {
      std::vector<Point> probes;
      for (std::size_t dim = 0; dim < kDims; ++dim) {
        for (double sign : {-1.0, 1.0}) {
          Point p = at;
          p[dim] = std::clamp(p[dim] + sign * step, 0.0, 1.0);
          if (p != at) probes.push_back(p);
        }
      }
      if (probes.empty()) break;
      const auto probe_scores = evaluate_batch(probes);
      std::size_t k = 0;
      for (std::size_t i = 1; i < probes.size(); ++i) {
        if (probe_scores[i] < probe_scores[k]) k = i;
      }
      if (probe_scores[k] < at_score) {
        at = probes[k];
        at_score = probe_scores[k];
      } else {
        step *= 0.5;
      }
    }
    if (at_score < best_score) {
      best = at;
      best_score = at_score;
    }
  }

  const Decoded d = decode(best, space);
  CalibrationResult result;
  result.channel = d.channel;
  result.split = d.split;
  result.residuals = evaluate_anchors(anchors, d.channel, d.split, space.tcp_setup_rtt, catalog);
  result.max_point_error = score(result.residuals).max_error;
  result.evaluations = evaluations + 1;
  if (best_score.violation > 0) {
    std::string unmet;
    for (const auto& x : result.residuals) {
      if (x.satisfied) continue;
      char buf[256];
      std::snprintf(buf, sizeof buf, "; %s n=%zu %s %s %g (best %g)", x.anchor.suite_name.c_str(),
                    x.anchor.n_devices, std::string(to_string(x.anchor.metric)).c_str(),
                    std::string(to_string(x.anchor.kind)).c_str(), x.anchor.target, x.simulated);
      unmet += buf;
    }
    throw Error(ErrorCode::kInfeasible,
                "no candidate in the search space satisfies every bound anchor (best violation " +
                    std::to_string(best_score.violation) + ")" + unmet);
  }
  return result;
}

std::string defaults_header(const CalibrationResult& result) {
  const auto& c = result.channel;
  const auto& p = result.split;
  auto d = [](const char* name, double v) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "inline constexpr double %s = %.17g;\n", name, v);
    return std::string(buf);
  };
  std::string out =
      "#pragma once\n"
      "// Generated by scripts/regen_defaults.sh -- do not edit by hand.\n"
      "namespace pqnb::calibrated {\n";
  out += d("kUlRateBps", c.ul_rate_bps);
  out += d("kDlRateBps", c.dl_rate_bps);
  out += d("kTurnaroundS", c.turnaround_s);
  out += d("kAckTimeS", c.ack_time_s);
  out += "inline constexpr long long kMssBytes = " + std::to_string(c.mss_bytes) + ";\n";
  out += "inline constexpr int kAckEvery = " + std::to_string(c.ack_every) + ";\n";
  out += d("kSplitFlight1", p.flight1);
  out += d("kSplitFlight2", p.flight2);
  out += d("kSplitFlight3", p.flight3);
  out += d("kMaxRelativeError", result.max_point_error);
  out += "}  // namespace pqnb::calibrated\n";
  return out;
}

}  // namespace pqnb
