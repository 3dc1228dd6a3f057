#pragma once

#include <cstdint>

#include "gridpos/error.hpp"

namespace gridpos {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out)) fail(Errc::ArithmeticOverflow, "int64 addition");
  return out;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_sub_overflow(a, b, &out)) fail(Errc::ArithmeticOverflow, "int64 subtraction");
  return out;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_mul_overflow(a, b, &out)) fail(Errc::ArithmeticOverflow, "int64 multiplication");
  return out;
}

inline std::uint64_t checked_mul_u64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out)) fail(Errc::ArithmeticOverflow, "uint64 multiplication");
  return out;
}

inline std::uint64_t checked_add_u64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_add_overflow(a, b, &out)) fail(Errc::ArithmeticOverflow, "uint64 addition");
  return out;
}

inline std::int64_t narrow_i128(__int128 v) {
  if (v > INT64_MAX || v < INT64_MIN) fail(Errc::ArithmeticOverflow, "int64 narrowing");
  return static_cast<std::int64_t>(v);
}

}  // namespace gridpos
