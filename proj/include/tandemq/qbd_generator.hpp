#pragma once

#include <algorithm>
#include <cstddef>
#include <iomanip>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "tandemq/config.hpp"
#include "tandemq/error.hpp"
#include "tandemq/phase_space.hpp"

namespace tandemq {

struct TransitionOutcome {
  Phase new_phase;
  int level_delta = 0;  ///< 0 or -1

  friend bool operator==(const TransitionOutcome&, const TransitionOutcome&) = default;
};

struct Triplet {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;

  friend bool operator==(const Triplet&, const Triplet&) = default;
};

/// Repeating blocks of the level-independent part of the generator.
/// A0 = lambda * I is never stored; A1's diagonal omits the -lambda term,
/// so every row of A1 + A2 sums to zero.
struct QbdBlocks {
  std::size_t M = 0;
  std::vector<Triplet> A1;  ///< sorted by (row, col), no duplicates
  std::vector<Triplet> A2;  ///< sorted by (row, col), no duplicates

  std::vector<double> a2_row_sums() const {
    std::vector<double> s(M, 0.0);
    for (const auto& t : A2) s[t.row] += t.value;
    return s;
  }
};

/// True iff S_server holds a finished customer because station server+1 is full.
/// S_K is never blocked.
inline bool is_blocked(const TandemConfig& cfg, const Phase& m, std::size_t server) {
  const std::size_t K = cfg.K();
  if (server > K)
    throw Error(ErrorCode::IndexOutOfRange,
                "server " + std::to_string(server) + " > K=" + std::to_string(K));
  if (server == K) return false;
  return m[server + 1] == cfg.buffer(server + 1) + 2;
}

/// Servers that can complete a service from phase m, ascending. S_0 is
/// assumed busy (level >= 1).
inline std::vector<std::size_t> eligible_completions(const TandemConfig& cfg, const Phase& m) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i <= cfg.K(); ++i) {
    if (is_blocked(cfg, m, i)) continue;
    if (i >= 1 && m[i] == 0) continue;
    out.push_back(i);
  }
  return out;
}

namespace detail {

// Station j loses its customer in service. A blocked S_{j-1} then pushes its
// held customer in, which frees S_{j-1} in turn; the chain collapses within
// the same event. Returns the level change.
inline int release(const TandemConfig& cfg, Phase& m, std::size_t j) {
  while (j > 0) {
    if (m[j] == cfg.buffer(j) + 2) {
      m[j] = cfg.buffer(j) + 1;
      --j;
    } else {
      --m[j];
      return 0;
    }
  }
  return -1;
}

}  // namespace detail

inline TransitionOutcome apply_completion(const TandemConfig& cfg, const Phase& m,
                                          std::size_t server) {
  const auto eligible = eligible_completions(cfg, m);
  if (std::find(eligible.begin(), eligible.end(), server) == eligible.end())
    throw Error(ErrorCode::IneligibleServer,
                "S_" + std::to_string(server) + " cannot complete in phase " + to_string(m));

  TransitionOutcome out{m, 0};
  Phase& p = out.new_phase;
  const std::size_t K = cfg.K();
  if (server == K) {
    out.level_delta = detail::release(cfg, p, K);
  } else if (p[server + 1] <= cfg.buffer(server + 1)) {
    ++p[server + 1];
    out.level_delta = detail::release(cfg, p, server);
  } else {
    // station server+1 is exactly full: the finished customer stays put
    p[server + 1] = cfg.buffer(server + 1) + 2;
  }
  return out;
}

namespace detail {

inline void canonicalize(std::vector<Triplet>& ts) {
  std::sort(ts.begin(), ts.end(), [](const Triplet& a, const Triplet& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  std::vector<Triplet> merged;
  merged.reserve(ts.size());
  for (const auto& t : ts) {
    if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col)
      merged.back().value += t.value;
    else
      merged.push_back(t);
  }
  ts = std::move(merged);
}

}  // namespace detail

inline QbdBlocks build_blocks(const TandemConfig& cfg, const PhaseSpace& space) {
  if (space.K() != cfg.K())
    throw Error(ErrorCode::InvalidArgument, "phase space does not belong to this configuration");

  QbdBlocks blocks;
  blocks.M = space.M();
  std::vector<double> exit_rate(blocks.M, 0.0);
  for (std::size_t r = 0; r < blocks.M; ++r) {
    const Phase& from = space.phase_at(r);
    for (std::size_t i : eligible_completions(cfg, from)) {
      const auto outcome = apply_completion(cfg, from, i);
      const std::size_t c = space.phase_index(outcome.new_phase);
      const double mu = cfg.rate(i);
      (outcome.level_delta == 0 ? blocks.A1 : blocks.A2).push_back({r, c, mu});
      exit_rate[r] += mu;
    }
  }
  for (std::size_t r = 0; r < blocks.M; ++r) blocks.A1.push_back({r, r, -exit_rate[r]});
  detail::canonicalize(blocks.A1);
  detail::canonicalize(blocks.A2);
  return blocks;
}

inline QbdBlocks build_blocks(const TandemConfig& cfg,
                              std::size_t max_states = kDefaultMaxStates) {
  return build_blocks(cfg, enumerate_phases(cfg, max_states));
}

/// Text listing of both blocks: a header line per block, then
/// "row col value" with 1-based indices and 17 significant digits.
inline void write_triplets(std::ostream& os, const QbdBlocks& blocks) {
  const auto old_flags = os.flags();
  const auto old_prec = os.precision();
  os << std::setprecision(17);
  auto emit = [&](const char* name, const std::vector<Triplet>& ts) {
    os << "% " << name << ' ' << blocks.M << ' ' << blocks.M << ' ' << ts.size() << '\n';
    for (const auto& t : ts) os << t.row + 1 << ' ' << t.col + 1 << ' ' << t.value << '\n';
  };
  emit("A1", blocks.A1);
  emit("A2", blocks.A2);
  os.flags(old_flags);
  os.precision(old_prec);
}

}  // namespace tandemq
