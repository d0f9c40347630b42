#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "tandemq/config.hpp"
#include "tandemq/error.hpp"
#include "tandemq/phase_space.hpp"
#include "tandemq/qbd_generator.hpp"
#include "tandemq/stationary_solver.hpp"

namespace tandemq {

struct ThroughputReport {
  TandemConfig config;
  double lambda_max = 0.0;
  std::size_t M = 1;
  StationaryVector pi;
};

struct AnalysisOptions {
  std::size_t max_states = kDefaultMaxStates;
};

/// Saturation arrival rate: lambda_max = pi A2 e, where pi is the stationary
/// phase distribution with S_0 always busy. A single server gives mu_0.
inline ThroughputReport lambda_max(const TandemConfig& cfg, const AnalysisOptions& opts = {}) {
  ThroughputReport report{cfg, cfg.rate(0), 1, {{1.0}, 0.0}};
  if (cfg.K() == 0) return report;

  const QbdBlocks blocks = build_blocks(cfg, opts.max_states);
  report.M = blocks.M;
  report.pi = solve_stationary(build_A(blocks));
  const auto down = blocks.a2_row_sums();
  double lambda = 0.0;
  for (std::size_t r = 0; r < blocks.M; ++r) lambda += report.pi.pi[r] * down[r];
  report.lambda_max = lambda;
  return report;
}

/// The queue at S_0 stays bounded iff pi A2 e > pi A0 e = lambda.
inline bool is_stable(const ThroughputReport& report, double lambda) {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::NegativeArrivalRate, "arrival rate must be >= 0");
  return lambda < report.lambda_max;
}

inline bool is_stable(const TandemConfig& cfg, double lambda, const AnalysisOptions& opts = {}) {
  if (!(lambda >= 0.0)) throw Error(ErrorCode::NegativeArrivalRate, "arrival rate must be >= 0");
  return is_stable(lambda_max(cfg, opts), lambda);
}

/// Two servers, buffer B between them. The phase process is a birth-death
/// chain on m_1 = 0..B+2 with up-rate mu0 (below B+2) and down-rate mu1, so
/// pi_j is proportional to rho^j with rho = mu0/mu1. The level drops on an
/// S_0 completion from m_1 <= B and on an S_1 completion from m_1 = B+2.
inline double closed_form_two_server(double mu0, double mu1, int B) {
  if (!(mu0 > 0.0) || !(mu1 > 0.0)) throw Error(ErrorCode::NonPositiveRate, "rates must be positive");
  if (B < 0) throw Error(ErrorCode::NegativeBuffer, "buffer capacity must be non-negative");
  // Normalize by the largest weight so that rho^j never overflows.
  const double rho = mu0 / mu1;
  const int top = B + 2;
  std::vector<double> w(top + 1);
  if (rho <= 1.0) {
    double p = 1.0;
    for (int j = 0; j <= top; ++j, p *= rho) w[j] = p;
  } else {
    double p = 1.0;
    for (int j = top; j >= 0; --j, p /= rho) w[j] = p;
  }
  double total = 0.0, below = 0.0;
  for (int j = 0; j <= top; ++j) total += w[j];
  for (int j = 0; j <= B; ++j) below += w[j];
  return (mu0 * below + mu1 * w[top]) / total;
}

/// The B = 2 two-server expression exactly as it appears in print. Its
/// denominator lacks the mu0^2 mu1^2 term; at mu0 = mu1 = mu it evaluates to mu
/// rather than 0.8 mu. Kept only so reports can show the discrepancy.
inline double printed_two_server_b2(double mu0, double mu1) {
  const double num = mu0 * mu1 *
                     (mu0 * mu0 * mu0 + mu0 * mu0 * mu1 + mu0 * mu1 * mu1 + mu1 * mu1 * mu1);
  const double den = std::pow(mu0, 4) + std::pow(mu0, 3) * mu1 + mu0 * std::pow(mu1, 3) +
                     std::pow(mu1, 4);
  return num / den;
}

}  // namespace tandemq
