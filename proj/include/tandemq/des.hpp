#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "tandemq/config.hpp"
#include "tandemq/error.hpp"

namespace tandemq {

// Random streams
//
// Every server owns a std::mt19937_64 seeded with the i-th output of a
// SplitMix64 sequence started at the run seed (arrivals use index K+1).
// Uniforms are the top 53 bits scaled to [0,1); exponentials are drawn by
// inverse transform, -log(1 - u) / rate. Both steps are written out here
// rather than delegated to <random> distributions, whose algorithms are
// implementation-defined.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class ExpStream {
 public:
  ExpStream(std::uint64_t seed, double rate) : engine_(seed), rate_(rate) {}

  double next() {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return -std::log1p(-u) / rate_;
  }

 private:
  std::mt19937_64 engine_;
  double rate_;
};

inline std::vector<ExpStream> make_streams(std::uint64_t seed, const std::vector<double>& rates) {
  std::uint64_t state = seed;
  std::vector<ExpStream> out;
  out.reserve(rates.size());
  for (double r : rates) out.emplace_back(splitmix64(state), r);
  return out;
}

struct SimResult {
  double throughput_estimate = 0.0;
  double ci_half_width = 0.0;  ///< 95% batch means, 20 batches
  std::uint64_t departures_counted = 0;
  std::uint64_t seed = 0;
  // bookkeeping over the whole run, warm-up included
  std::uint64_t injected = 0;
  std::uint64_t departed = 0;
  std::uint64_t in_system = 0;
  double elapsed = 0.0;
};

struct ArrivalTrace {
  double mean_level = 0.0;  ///< time-average of the station-0 count
  std::uint64_t final_level = 0;
  std::uint64_t arrivals = 0;
  std::uint64_t departures = 0;
  std::uint64_t in_system = 0;  ///< at the horizon, station 0 included
};

inline constexpr std::uint64_t kMinTargetDepartures = 10'000;
inline constexpr int kBatches = 20;

namespace detail {

inline constexpr double kNever = std::numeric_limits<double>::infinity();

/// Physical state of the line. Station 0 is fed either by a never-empty
/// source or by an unbounded queue. Stations 1..K hold up to B_i + 1
/// customers each (waiting room plus server); a server that finishes into a
/// full station keeps its customer and stops.
class Line {
 public:
  Line(const TandemConfig& cfg, std::vector<ExpStream>& streams, bool saturated)
      : cfg_(cfg), streams_(streams), saturated_(saturated),
        count_(cfg.servers(), 0), holding_(cfg.servers(), false),
        finish_(cfg.servers(), kNever) {}

  std::uint64_t injected = 0;
  std::uint64_t departed = 0;
  double now = 0.0;

  /// Customers at station 0 (queue plus server); meaningless when saturated.
  std::uint64_t level() const { return count_[0]; }

  std::uint64_t in_system() const {
    std::uint64_t n = 0;
    for (auto c : count_) n += c;
    return n;
  }

  void start() {
    if (saturated_) {
      count_[0] = 1;
      ++injected;
    }
    try_start(0);
  }

  void arrive() {
    ++count_[0];
    ++injected;
    try_start(0);
  }

  /// Index of the server with the earliest pending completion, or npos.
  std::size_t next_server(double& when) const {
    std::size_t best = npos;
    when = kNever;
    for (std::size_t i = 0; i < finish_.size(); ++i) {
      if (finish_[i] < when) {
        when = finish_[i];
        best = i;
      }
    }
    return best;
  }

  /// Returns true when a customer left the system.
  bool complete(std::size_t i) {
    finish_[i] = kNever;
    const std::size_t last = cfg_.K();
    if (i == last) {
      ++departed;
      vacate(i);
      return true;
    }
    if (count_[i + 1] < capacity(i + 1)) {
      ++count_[i + 1];
      try_start(i + 1);
      vacate(i);
    } else {
      holding_[i] = true;
    }
    return false;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::uint64_t capacity(std::size_t station) const {
    return static_cast<std::uint64_t>(cfg_.buffer(station)) + 1;
  }

  void try_start(std::size_t i) {
    if (finish_[i] != kNever || holding_[i] || count_[i] == 0) return;
    finish_[i] = now + streams_[i].next();
  }

  // The finished customer has left station i. Space opened here lets a
  // held customer upstream move in, which frees that server, and so on.
  void vacate(std::size_t i) {
    while (true) {
      --count_[i];
      if (i == 0 && saturated_) {
        count_[0] = 1;
        ++injected;
      }
      if (i > 0 && holding_[i - 1]) {
        holding_[i - 1] = false;
        ++count_[i];
        try_start(i);
        --i;
        continue;
      }
      try_start(i);
      return;
    }
  }

  const TandemConfig& cfg_;
  std::vector<ExpStream>& streams_;
  bool saturated_;
  std::vector<std::uint64_t> count_;
  std::vector<bool> holding_;
  std::vector<double> finish_;
};

}  // namespace detail

/// Departure rate of the line when S_0 never runs out of work. The first
/// 10% of target_departures are discarded as warm-up, then target_departures
/// are measured in 20 equal batches.
inline SimResult simulate_saturated(const TandemConfig& cfg, std::uint64_t target_departures,
                                    std::uint64_t seed) {
  if (target_departures < kMinTargetDepartures)
    throw Error(ErrorCode::TargetTooSmall,
                "need at least " + std::to_string(kMinTargetDepartures) + " departures");

  auto streams = make_streams(seed, cfg.service_rates());
  detail::Line line(cfg, streams, true);
  line.start();

  const std::uint64_t warmup = target_departures / 10;
  const std::uint64_t per_batch = target_departures / kBatches;
  const std::uint64_t measured = per_batch * kBatches;

  auto run_until = [&](std::uint64_t departures) {
    while (line.departed < departures) {
      double when;
      const std::size_t i = line.next_server(when);
      line.now = when;
      line.complete(i);
    }
  };

  run_until(warmup);
  const double t0 = line.now;
  std::vector<double> batch_rate;
  batch_rate.reserve(kBatches);
  double tb = t0;
  for (int b = 1; b <= kBatches; ++b) {
    run_until(warmup + per_batch * b);
    batch_rate.push_back(static_cast<double>(per_batch) / (line.now - tb));
    tb = line.now;
  }

  SimResult out;
  out.seed = seed;
  out.departures_counted = measured;
  out.throughput_estimate = static_cast<double>(measured) / (line.now - t0);
  double mean = 0.0;
  for (double r : batch_rate) mean += r;
  mean /= kBatches;
  double ss = 0.0;
  for (double r : batch_rate) ss += (r - mean) * (r - mean);
  const double sd = std::sqrt(ss / (kBatches - 1));
  constexpr double t_19_975 = 2.093024054408263;
  out.ci_half_width = t_19_975 * sd / std::sqrt(static_cast<double>(kBatches));
  out.injected = line.injected;
  out.departed = line.departed;
  out.in_system = line.in_system();
  out.elapsed = line.now;
  return out;
}

/// Open line fed by Poisson arrivals at rate lambda, run from empty up to
/// the given horizon.
inline ArrivalTrace simulate_with_arrivals(const TandemConfig& cfg, double lambda,
                                           double horizon, std::uint64_t seed) {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::NegativeArrivalRate, "arrival rate must be >= 0");
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");

  auto streams = make_streams(seed, cfg.service_rates());
  std::uint64_t state = seed ^ 0xA5A5A5A5A5A5A5A5ull;
  ExpStream arrivals(splitmix64(state), lambda > 0.0 ? lambda : 1.0);
  detail::Line line(cfg, streams, false);
  line.start();

  ArrivalTrace out;
  double next_arrival = lambda > 0.0 ? arrivals.next() : detail::kNever;
  double area = 0.0;
  while (true) {
    double when;
    const std::size_t i = line.next_server(when);
    const bool is_arrival = next_arrival <= when;
    const double t = is_arrival ? next_arrival : when;
    if (t > horizon) break;
    area += static_cast<double>(line.level()) * (t - line.now);
    line.now = t;
    if (is_arrival) {
      line.arrive();
      next_arrival = t + arrivals.next();
    } else {
      line.complete(i);
    }
  }
  area += static_cast<double>(line.level()) * (horizon - line.now);
  out.mean_level = area / horizon;
  out.final_level = line.level();
  out.arrivals = line.injected;
  out.departures = line.departed;
  out.in_system = line.in_system();
  return out;
}

}  // namespace tandemq
