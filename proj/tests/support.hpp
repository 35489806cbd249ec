#pragma once

#include <gtest/gtest.h>

#include <string>

#include "foldprod/mpnum.hpp"

namespace foldprod::test {

/// |x - expected| <= 10^-digits, expected given as a decimal string.
inline ::testing::AssertionResult close_to(const BigReal& x, const std::string& expected, int digits) {
  const mpfr_prec_t bits = std::max<mpfr_prec_t>(x.precision(), 256);
  const BigReal ref = BigReal::from_string(expected, bits);
  const BigReal delta = abs(x.rounded(bits) - ref);
  if (delta <= ten_pow_neg(digits, bits)) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << format_decimal(x, digits + 5) << " vs " << expected << " (delta "
                                       << format_sci(delta, 3) << ", allowed 1e-" << digits << ")";
}

inline ::testing::AssertionResult close_to(const BigReal& x, const BigReal& y, int digits) {
  const BigReal delta = abs(x - y);
  if (delta <= ten_pow_neg(digits, 128)) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << format_decimal(x, digits + 5) << " vs " << format_decimal(y, digits + 5)
                                       << " (delta " << format_sci(delta, 3) << ")";
}

}  // namespace foldprod::test
