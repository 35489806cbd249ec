#pragma once

// The ±1 automatic weight sequences and their summatory functions.
//
// All indices are 0-based. The paperfolding sequence is evaluated through its
// 2-adic closed form: writing n+1 = 2^j (2k+1), eps_n = (-1)^k. This is what
// the recurrence eps_{2n} = (-1)^n, eps_{2n+1} = eps_n unrolls to, and it makes
// sparse access at indices 2^j k + c cost O(1).

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "foldprod/error.hpp"

namespace foldprod {

enum class SeqKind { Paperfold, ThueMorse, AlternatingSign };

inline std::string_view to_string(SeqKind kind) {
  switch (kind) {
    case SeqKind::Paperfold: return "paperfold";
    case SeqKind::ThueMorse: return "thue-morse";
    case SeqKind::AlternatingSign: return "alternating";
  }
  return "?";
}

inline SeqKind parse_seq_kind(std::string_view name) {
  if (name == "paperfold" || name == "paperfolding") return SeqKind::Paperfold;
  if (name == "thue-morse" || name == "thuemorse" || name == "tm") return SeqKind::ThueMorse;
  if (name == "alternating" || name == "alt") return SeqKind::AlternatingSign;
  throw Error(ErrorCode::ParseError, "unknown sequence kind '" + std::string(name) + "'");
}

/// Number of ones in the binary expansion of n.
constexpr std::uint64_t digit_sum(std::uint64_t n) noexcept {
  return static_cast<std::uint64_t>(std::popcount(n));
}

/// Paperfolding term from the 2-adic decomposition of n+1. Valid for
/// n < 2^64 - 1.
constexpr int paperfold_term(std::uint64_t n) noexcept {
  const std::uint64_t m = n + 1;
  const std::uint64_t odd = m >> std::countr_zero(m);  // 2k+1
  return ((odd >> 1) & 1U) ? -1 : 1;
}

constexpr int thue_morse_term(std::uint64_t n) noexcept { return (std::popcount(n) & 1) ? -1 : 1; }

constexpr int seq_term(SeqKind kind, std::uint64_t n) noexcept {
  switch (kind) {
    case SeqKind::Paperfold: return paperfold_term(n);
    case SeqKind::ThueMorse: return thue_morse_term(n);
    case SeqKind::AlternatingSign: return (n & 1U) ? -1 : 1;
  }
  return 0;
}

/// Level decomposition of an index: n + 1 = 2^level * (2*odd_index + 1).
struct LevelIndex {
  unsigned level;
  std::uint64_t odd_index;
};

constexpr LevelIndex level_index(std::uint64_t n) noexcept {
  const std::uint64_t m = n + 1;
  const auto j = static_cast<unsigned>(std::countr_zero(m));
  return {j, (m >> j) >> 1};
}

struct SummatoryValue {
  std::uint64_t n;
  std::int64_t S;  // sum of the first n terms, indices 0..n-1
};

namespace detail {

// S(2n) = (1 - (-1)^n)/2 + S(n);  S(2n+1) = S(2n) + (-1)^n.
inline std::int64_t paperfold_summatory(std::uint64_t n) {
  if (n == 0) return 0;
  const std::uint64_t half = n / 2;
  const std::int64_t even = ((half & 1U) ? 1 : 0) + paperfold_summatory(half);
  if ((n & 1U) == 0) return even;
  return even + ((half & 1U) ? -1 : 1);
}

}  // namespace detail

/// Exact summatory function S(n) = sum_{0 <= k < n} u_k in O(log n).
inline SummatoryValue summatory(SeqKind kind, std::uint64_t n) {
  switch (kind) {
    case SeqKind::Paperfold:
      return {n, detail::paperfold_summatory(n)};
    case SeqKind::ThueMorse:
      // Pairs (2k, 2k+1) cancel; an odd count leaves m_{n-1} = m_{(n-1)/2}.
      return {n, (n & 1U) ? thue_morse_term(n - 1) : 0};
    case SeqKind::AlternatingSign:
      return {n, static_cast<std::int64_t>(n & 1U)};
  }
  return {n, 0};
}

/// Exact check of |S| <= 1 + log2(n), i.e. |S| - 1 <= log2(n), for n >= 1.
constexpr bool within_log_bound(std::int64_t s, std::uint64_t n) noexcept {
  const std::uint64_t mag = static_cast<std::uint64_t>(s < 0 ? -s : s);
  if (mag <= 1) return true;
  if (mag - 1 >= 64) return false;
  return n >= (std::uint64_t{1} << (mag - 1));
}

struct SummatoryBoundReport {
  std::uint64_t n_max = 0;
  double max_ratio = 0.0;  // max |S(n)| / (1 + log2 n)
  std::uint64_t worst_n = 0;
  std::uint64_t violations = 0;  // decided exactly, not from max_ratio
  bool holds() const { return violations == 0; }
};

/// Scans 1 <= n <= n_max for the paperfolding bound |S(n)| <= 1 + log2 n.
inline SummatoryBoundReport summatory_bound_report(std::uint64_t n_max) {
  if (n_max < 1) throw Error(ErrorCode::DomainError, "n_max must be >= 1");
  SummatoryBoundReport report;
  report.n_max = n_max;
  std::int64_t s = 0;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    s += paperfold_term(n - 1);
    if (!within_log_bound(s, n)) ++report.violations;
    const double ratio = std::fabs(static_cast<double>(s)) / (1.0 + std::log2(static_cast<double>(n)));
    if (ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.worst_n = n;
    }
  }
  return report;
}

}  // namespace foldprod
