#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tandemq/config.hpp"
#include "tandemq/error.hpp"

namespace tandemq {

inline constexpr std::size_t kDefaultMaxStates = 200'000;

/// Occupancies (m_1..m_K) of the downstream stations. m_i counts the waiting
/// room of station i plus the customer at S_i; the extra value m_i = B_i + 2
/// means station i is full and S_{i-1} is holding a finished customer.
struct Phase {
  std::vector<int> m;

  std::size_t size() const noexcept { return m.size(); }
  /// 1-based station access, matching m_1..m_K.
  int operator[](std::size_t station) const { return m[station - 1]; }
  int& operator[](std::size_t station) { return m[station - 1]; }

  friend auto operator<=>(const Phase&, const Phase&) = default;
  friend bool operator==(const Phase&, const Phase&) = default;
};

inline std::string to_string(const Phase& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.m.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(p.m[i]);
  }
  return s + ")";
}

inline bool is_valid_phase(const TandemConfig& cfg, const Phase& p) {
  const std::size_t K = cfg.K();
  if (p.size() != K) return false;
  for (std::size_t i = 1; i <= K; ++i)
    if (p[i] < 0 || p[i] > cfg.buffer(i) + 2) return false;
  // an empty server cannot be holding a blocked customer
  for (std::size_t i = 1; i < K; ++i)
    if (p[i] == 0 && p[i + 1] == cfg.buffer(i + 1) + 2) return false;
  return true;
}

/// All valid phases of a line in ascending lexicographic order.
class PhaseSpace {
 public:
  std::size_t M() const noexcept { return phases_.size(); }
  std::size_t K() const noexcept { return K_; }
  const std::vector<Phase>& phases() const noexcept { return phases_; }

  const Phase& phase_at(std::size_t index) const {
    if (index >= phases_.size())
      throw Error(ErrorCode::IndexOutOfRange,
                  "phase index " + std::to_string(index) + " >= M=" + std::to_string(M()));
    return phases_[index];
  }

  std::size_t phase_index(const Phase& p) const {
    auto it = std::lower_bound(phases_.begin(), phases_.end(), p);
    if (it == phases_.end() || *it != p)
      throw Error(ErrorCode::InvalidPhase, to_string(p) + " is not a valid phase");
    return static_cast<std::size_t>(it - phases_.begin());
  }

 private:
  std::vector<Phase> phases_;
  std::size_t K_ = 0;

  friend PhaseSpace enumerate_phases(const TandemConfig&, std::size_t);
};

namespace detail {

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "phase count overflows 64 bits");
  return r;
}

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "phase count overflows 64 bits");
  return r;
}

}  // namespace detail

/// Number of valid phases for any (possibly heterogeneous) buffer vector,
/// by dynamic programming over the last coordinate. K = 0 gives 1.
inline std::uint64_t count_phases(const TandemConfig& cfg) {
  const std::size_t K = cfg.K();
  if (K == 0) return 1;
  // ways[v]: valid prefixes m_1..m_i ending in m_i = v
  std::vector<std::uint64_t> ways(cfg.buffer(1) + 3, 1);
  for (std::size_t i = 2; i <= K; ++i) {
    std::uint64_t total = 0, ending_empty = ways[0];
    for (auto w : ways) total = detail::checked_add(total, w);
    const int top = cfg.buffer(i) + 2;
    std::vector<std::uint64_t> next(top + 1, total);
    next[top] = total - ending_empty;
    ways = std::move(next);
  }
  std::uint64_t total = 0;
  for (auto w : ways) total = detail::checked_add(total, w);
  return total;
}

/// Phase count for a common buffer capacity B via the integer recurrence
/// c_0 = 1, c_1 = B+3, c_k = (B+3) c_{k-1} - c_{k-2}.
inline std::uint64_t count_phases_closed_form(int B, int K) {
  if (B < 0 || K < 0) throw Error(ErrorCode::InvalidArgument, "B and K must be non-negative");
  const std::uint64_t a = static_cast<std::uint64_t>(B) + 3;
  std::uint64_t prev = 1, cur = a;
  if (K == 0) return prev;
  for (int k = 2; k <= K; ++k) {
    // (B+3) c_{k-1} > c_{k-2}, so the subtraction never wraps
    std::uint64_t next = detail::checked_mul(a, cur) - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

/// The same count through the radical expression
/// ([(B+3)+s]^{K+1} - [(B+3)-s]^{K+1}) / (2^{K+1} s), s = sqrt((B+1)(B+5)).
/// Floating point; kept for cross-checking the recurrence.
inline double count_phases_radical(int B, int K) {
  const double a = B + 3.0;
  const double s = std::sqrt((B + 1.0) * (B + 5.0));
  const double n = K + 1.0;
  return (std::pow(a + s, n) - std::pow(a - s, n)) / (std::pow(2.0, n) * s);
}

inline PhaseSpace enumerate_phases(const TandemConfig& cfg,
                                   std::size_t max_states = kDefaultMaxStates) {
  const std::size_t K = cfg.K();
  if (K == 0)
    throw Error(ErrorCode::InvalidArgument, "a single-server line has no phase process");
  const std::uint64_t expected = count_phases(cfg);
  if (expected > max_states)
    throw Error(ErrorCode::StateSpaceTooLarge,
                "M=" + std::to_string(expected) + " exceeds the cap of " + std::to_string(max_states));

  PhaseSpace space;
  space.K_ = K;
  space.phases_.reserve(expected);

  // Odometer over coordinates, rightmost fastest, yields lexicographic order.
  Phase p{std::vector<int>(K, 0)};
  while (true) {
    if (is_valid_phase(cfg, p)) space.phases_.push_back(p);
    std::size_t i = K;
    while (i >= 1 && p[i] == cfg.buffer(i) + 2) {
      p[i] = 0;
      --i;
    }
    if (i == 0) break;
    ++p[i];
  }
  return space;
}

}  // namespace tandemq
