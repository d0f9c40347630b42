#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tandemq/error.hpp"
#include "tandemq/qbd_generator.hpp"

namespace tandemq {

using GeneratorMatrix = Eigen::MatrixXd;

struct StationaryVector {
  std::vector<double> pi;
  double residual = 0.0;  ///< ||pi A||_inf for the A it was solved against
};

/// A = A0 + A1 + A2 with the arrival terms cancelled, i.e. A1 + A2.
inline GeneratorMatrix build_A(const QbdBlocks& blocks) {
  GeneratorMatrix A = GeneratorMatrix::Zero(blocks.M, blocks.M);
  for (const auto& t : blocks.A1) A(t.row, t.col) += t.value;
  for (const auto& t : blocks.A2) A(t.row, t.col) += t.value;
  return A;
}

inline double stationary_residual(const GeneratorMatrix& A, const std::vector<double>& pi) {
  Eigen::Map<const Eigen::RowVectorXd> p(pi.data(), static_cast<Eigen::Index>(pi.size()));
  return (p * A).cwiseAbs().maxCoeff();
}

inline constexpr double kClampSlack = 1e-9;

/// Solves pi A = 0, pi e = 1. The transposed system has its last equation
/// (highest phase index) replaced by the normalization row.
inline StationaryVector solve_stationary(const GeneratorMatrix& A) {
  const Eigen::Index n = A.rows();
  if (n == 0 || A.cols() != n)
    throw Error(ErrorCode::InvalidArgument, "generator must be square and non-empty");
  if (n == 1) return {{1.0}, std::abs(A(0, 0))};

  Eigen::MatrixXd T = A.transpose();
  T.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(T);
  const auto& U = lu.matrixLU();
  const double scale = std::max(1.0, U.diagonal().cwiseAbs().maxCoeff());
  const double tiny = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(std::abs(U(i, i)) > tiny))
      throw Error(ErrorCode::SingularSystem,
                  "null space of the generator is not one-dimensional (pivot " +
                      std::to_string(i) + ")");
  }
  const Eigen::VectorXd x = lu.solve(rhs);

  StationaryVector out;
  out.pi.assign(x.data(), x.data() + n);
  bool clamped = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    double& v = out.pi[i];
    if (!std::isfinite(v) || v < -kClampSlack)
      throw Error(ErrorCode::NonPositiveSolution,
                  "pi[" + std::to_string(i) + "] = " + std::to_string(v));
    if (v < 0.0) {
      v = 0.0;
      clamped = true;
    }
  }
  if (clamped) {
    double sum = 0.0;
    for (double v : out.pi) sum += v;
    for (double& v : out.pi) v /= sum;
  }
  out.residual = stationary_residual(A, out.pi);
  return out;
}

}  // namespace tandemq
