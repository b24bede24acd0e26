#pragma once

// Certified floating-point filter for the threshold predicate.
//
// The predicate denominator(n) * C(n,k) > 2^n is evaluated in the natural-log
// domain as
//
//     d = ln n! - ln k! - ln (n-k)! + ln denominator(n) - n ln 2
//
// next to a rigorous upper bound E on |d_computed - d_true|. Only a margin
// strictly outside [-E, E] yields a definite verdict; everything else is
// handed to the exact comparator. An exact tie has d_true = 0, so it can never
// be certified either way.

#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "binthr/error.hpp"
#include "binthr/exact.hpp"

namespace binthr {

// Rounding allowance per accumulation step, in units of eps * |running sum|.
inline constexpr double kTableUlpAllowance = 4.0;
// Allowance for the handful of additions in compare_fast, in eps * sum of magnitudes.
inline constexpr double kCombineUlpAllowance = 4.0;
inline constexpr std::size_t kDefaultTableBudgetBytes = std::size_t{1} << 30;

struct LogFactorialEntry {
  double value = 0.0;  // approximates ln(i!)
  double bound = 0.0;  // |value - ln(i!)| <= bound
};

class LogFactorialTable {
 public:
  LogFactorialTable() : entries_(1) {}

  Index max_n() const noexcept { return static_cast<Index>(entries_.size()) - 1; }

  const LogFactorialEntry& operator[](Index i) const noexcept {
    return entries_[static_cast<std::size_t>(i)];
  }

  const LogFactorialEntry& at(Index i) const {
    if (i < 0 || i > max_n()) {
      throw DomainError("log-factorial index " + std::to_string(i) + " outside table [0, " +
                        std::to_string(max_n()) + "]");
    }
    return (*this)[i];
  }

  std::span<const LogFactorialEntry> values() const noexcept { return entries_; }

 private:
  friend LogFactorialTable build_table(Index, std::size_t);
  std::vector<LogFactorialEntry> entries_;
};

// ln(i!) for i in [0, max_n], accumulated with Neumaier compensated summation.
inline LogFactorialTable build_table(Index max_n,
                                     std::size_t budget_bytes = kDefaultTableBudgetBytes) {
  if (max_n < 0) throw DomainError("table size must be non-negative");
  const auto count = static_cast<std::size_t>(max_n) + 1;
  if (count > budget_bytes / sizeof(LogFactorialEntry)) {
    throw ResourceError("log-factorial table for max_n=" + std::to_string(max_n) +
                        " exceeds the memory budget of " + std::to_string(budget_bytes) +
                        " bytes");
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();

  LogFactorialTable table;
  table.entries_.resize(count);
  double sum = 0.0;
  double comp = 0.0;
  double bound = 0.0;
  for (std::size_t i = 1; i < count; ++i) {
    const double term = std::log(static_cast<double>(i));
    const double t = sum + term;
    if (std::fabs(sum) >= std::fabs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
    const double value = sum + comp;
    bound += kTableUlpAllowance * eps * std::fabs(value);
    table.entries_[i] = {value, bound};
  }
  return table;
}

// Process-wide read-only table covering at least max_n. Grows (by rebuilding)
// when a larger n is requested; earlier handles stay valid.
inline std::shared_ptr<const LogFactorialTable> shared_table(Index max_n) {
  static std::mutex mutex;
  static std::shared_ptr<const LogFactorialTable> cached;
  std::lock_guard lock(mutex);
  if (!cached || cached->max_n() < max_n) {
    cached = std::make_shared<const LogFactorialTable>(build_table(max_n));
  }
  return cached;
}

struct FastVerdict {
  enum class Kind { DefinitelyAbove, DefinitelyNotAbove, Uncertain };
  Kind kind = Kind::Uncertain;
  double margin = 0.0;       // computed d, natural-log units
  double error_bound = 0.0;  // E

  bool definite() const noexcept { return kind != Kind::Uncertain; }
};

constexpr const char* to_string(FastVerdict::Kind k) noexcept {
  switch (k) {
    case FastVerdict::Kind::DefinitelyAbove: return "DefinitelyAbove";
    case FastVerdict::Kind::DefinitelyNotAbove: return "DefinitelyNotAbove";
    case FastVerdict::Kind::Uncertain: return "Uncertain";
  }
  return "?";
}

inline FastVerdict compare_fast(Index n, Index k, ThresholdKind kind,
                                const LogFactorialTable& table) {
  detail::check_threshold_args(n, k);
  if (n > table.max_n()) {
    throw DomainError("n=" + std::to_string(n) + " exceeds log-factorial table coverage " +
                      std::to_string(table.max_n()));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const auto& top = table[n];
  const auto& lo = table[k];
  const auto& hi = table[n - k];

  const double log_den = std::log(static_cast<double>(denominator(kind, n)));
  const double log_pow = static_cast<double>(n) * std::numbers::ln2;
  const double d = (((top.value - lo.value) - hi.value) + log_den) - log_pow;

  const double magnitude =
      std::fabs(top.value) + std::fabs(lo.value) + std::fabs(hi.value) + log_den + log_pow;
  const double error = top.bound + lo.bound + hi.bound  // table entries
                       + eps * log_den                  // std::log
                       + 2.0 * eps * log_pow            // ln2 constant and the product
                       + kCombineUlpAllowance * eps * magnitude;

  FastVerdict v;
  v.margin = d;
  v.error_bound = error;
  if (d > error) {
    v.kind = FastVerdict::Kind::DefinitelyAbove;
  } else if (d < -error) {
    v.kind = FastVerdict::Kind::DefinitelyNotAbove;
  } else {
    v.kind = FastVerdict::Kind::Uncertain;
  }
  return v;
}

// Fast verdict when certified, exact comparison otherwise.
inline bool exceeds_hybrid(Index n, Index k, ThresholdKind kind, const LogFactorialTable& table) {
  const FastVerdict v = compare_fast(n, k, kind, table);
  switch (v.kind) {
    case FastVerdict::Kind::DefinitelyAbove: return true;
    case FastVerdict::Kind::DefinitelyNotAbove: return false;
    case FastVerdict::Kind::Uncertain: break;
  }
  return exceeds(n, k, kind);
}

}  // namespace binthr
