#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tandemq/error.hpp"

namespace tandemq {

/// A line of K+1 exponential servers S_0..S_K in series. Station 0 has an
/// unbounded queue (it is the QBD level and is not stored); station i >= 1
/// has a waiting room of buffer_capacities[i-1] in front of its server.
/// Construct through validate_config.
class TandemConfig {
 public:
  const std::vector<double>& service_rates() const noexcept { return rates_; }
  const std::vector<int>& buffer_capacities() const noexcept { return buffers_; }

  /// Number of intermediate stations (servers minus one).
  std::size_t K() const noexcept { return buffers_.size(); }
  std::size_t servers() const noexcept { return rates_.size(); }

  double rate(std::size_t server) const { return rates_.at(server); }
  /// Capacity B_i of the buffer in front of server S_i, i in 1..K.
  int buffer(std::size_t station) const { return buffers_.at(station - 1); }

  bool homogeneous_buffers() const noexcept {
    for (int b : buffers_)
      if (b != buffers_.front()) return false;
    return true;
  }

  double min_rate() const noexcept {
    double m = rates_.front();
    for (double r : rates_) m = r < m ? r : m;
    return m;
  }

  /// Same buffers, servers in reverse order.
  TandemConfig reversed() const {
    TandemConfig out = *this;
    std::vector<double> r(rates_.rbegin(), rates_.rend());
    std::vector<int> b(buffers_.rbegin(), buffers_.rend());
    out.rates_ = std::move(r);
    out.buffers_ = std::move(b);
    return out;
  }

  /// Multiply every service rate by a positive factor.
  TandemConfig scaled(double factor) const {
    TandemConfig out = *this;
    for (double& r : out.rates_) r *= factor;
    return out;
  }

  friend bool operator==(const TandemConfig&, const TandemConfig&) = default;

 private:
  std::vector<double> rates_;
  std::vector<int> buffers_;

  friend TandemConfig validate_config(std::span<const double>, std::span<const int>);
};

inline TandemConfig validate_config(std::span<const double> raw_rates,
                                    std::span<const int> raw_buffers) {
  if (raw_rates.empty()) throw Error(ErrorCode::EmptySystem, "at least one server is required");
  if (raw_rates.size() != raw_buffers.size() + 1)
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(raw_rates.size()) + " service rates need " +
                    std::to_string(raw_rates.size() - 1) + " buffer capacities, got " +
                    std::to_string(raw_buffers.size()));
  for (std::size_t i = 0; i < raw_rates.size(); ++i) {
    // !(x > 0) also rejects NaN
    if (!(raw_rates[i] > 0.0) || !std::isfinite(raw_rates[i]))
      throw Error(ErrorCode::NonPositiveRate,
                  "service rate of S_" + std::to_string(i) + " must be positive and finite");
  }
  for (std::size_t i = 0; i < raw_buffers.size(); ++i) {
    if (raw_buffers[i] < 0)
      throw Error(ErrorCode::NegativeBuffer,
                  "capacity of B_" + std::to_string(i + 1) + " must be non-negative");
  }
  TandemConfig cfg;
  cfg.rates_.assign(raw_rates.begin(), raw_rates.end());
  cfg.buffers_.assign(raw_buffers.begin(), raw_buffers.end());
  return cfg;
}

inline TandemConfig validate_config(const TandemConfig& cfg) {
  return validate_config(cfg.service_rates(), cfg.buffer_capacities());
}

/// Line with K+1 servers and a common capacity B for every intermediate buffer.
inline TandemConfig homogeneous_line(std::span<const double> rates, int buffer) {
  std::vector<int> buffers(rates.empty() ? 0 : rates.size() - 1, buffer);
  return validate_config(rates, buffers);
}

}  // namespace tandemq
