#include <gtest/gtest.h>

#include <vector>

#include "tandemq/config.hpp"

using namespace tandemq;

namespace {

ErrorCode code_of(const std::vector<double>& rates, const std::vector<int>& buffers) {
  try {
    validate_config(rates, buffers);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected validation to fail";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Config, TwoServersOneBuffer) {
  const auto cfg = validate_config(std::vector{1.0, 1.0}, std::vector{2});
  EXPECT_EQ(cfg.K(), 1u);
  EXPECT_EQ(cfg.servers(), 2u);
  EXPECT_EQ(cfg.buffer(1), 2);
}

TEST(Config, SingleServerIsValid) {
  const auto cfg = validate_config(std::vector{1.0}, std::vector<int>{});
  EXPECT_EQ(cfg.K(), 0u);
  EXPECT_DOUBLE_EQ(cfg.min_rate(), 1.0);
}

TEST(Config, Rejections) {
  EXPECT_EQ(code_of({1.0, -0.5}, {0}), ErrorCode::NonPositiveRate);
  EXPECT_EQ(code_of({1.0, 0.0}, {0}), ErrorCode::NonPositiveRate);
  EXPECT_EQ(code_of({1.0, std::nan("")}, {0}), ErrorCode::NonPositiveRate);
  EXPECT_EQ(code_of({1.0, 1.0}, {-1}), ErrorCode::NegativeBuffer);
  EXPECT_EQ(code_of({1.0, 1.0}, {0, 0}), ErrorCode::LengthMismatch);
  EXPECT_EQ(code_of({1.0, 1.0, 1.0}, {0}), ErrorCode::LengthMismatch);
  EXPECT_EQ(code_of({}, {}), ErrorCode::EmptySystem);
}

TEST(Config, ValidationIsIdempotent) {
  const auto cfg = validate_config(std::vector{0.8, 1.0, 1.25}, std::vector{1, 3});
  EXPECT_EQ(validate_config(cfg), cfg);
}

TEST(Config, ReverseKeepsBuffersAligned) {
  const auto cfg = validate_config(std::vector{0.5, 1.0, 2.0}, std::vector{1, 3});
  const auto rev = cfg.reversed();
  EXPECT_EQ(rev.service_rates(), (std::vector{2.0, 1.0, 0.5}));
  EXPECT_EQ(rev.buffer_capacities(), (std::vector{3, 1}));
  EXPECT_EQ(rev.reversed(), cfg);
}
