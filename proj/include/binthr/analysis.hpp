#pragma once

// Asymptotics of f(n) and the central-third binomial bounds.
//
//   approx(n) = n/2 - sqrt(n ln(2n/pi)) / 2          (natural log)
//
// f(n) - approx(n) is claimed to be O(1). No constant is available, so the
// claim is checked as band stability: residuals over a calibration range fix
// [c1, c2], and a later range must stay within [c1 - slack, c2 + slack].

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "binthr/error.hpp"
#include "binthr/exact.hpp"
#include "binthr/fastpath.hpp"
#include "binthr/sequence.hpp"

namespace binthr {

inline double asymptotic_approx(Index n) {
  if (n < 3) throw DomainError("asymptotic form needs n >= 3, got " + std::to_string(n));
  const double x = static_cast<double>(n);
  return x / 2.0 - 0.5 * std::sqrt(x * std::log(2.0 * x / std::numbers::pi));
}

struct ResidualRecord {
  Index n = 0;
  Index f = 0;
  double approx = 0.0;
  double residual = 0.0;  // f - approx
};

inline ResidualRecord make_residual(const SequenceRecord& r) {
  ResidualRecord out{r.n, r.f, asymptotic_approx(r.n), 0.0};
  out.residual = static_cast<double>(out.f) - out.approx;
  return out;
}

inline std::vector<ResidualRecord> residuals(std::span<const SequenceRecord> records) {
  std::vector<ResidualRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(make_residual(r));
  return out;
}

struct ResidualSummary {
  Index n_start = 0;
  Index n_end = 0;
  double min_residual = 0.0;
  double max_residual = 0.0;
  double mean_residual = 0.0;
};

namespace detail {

// Records for exactly [n_start, n_end], located inside an ascending contiguous block.
inline std::span<const SequenceRecord> slice_covering(std::span<const SequenceRecord> records,
                                                      Index n_start, Index n_end) {
  if (n_end < n_start) throw DomainError("inverted residual range");
  auto it = std::lower_bound(records.begin(), records.end(), n_start,
                             [](const SequenceRecord& r, Index n) { return r.n < n; });
  const auto count = static_cast<std::size_t>(n_end - n_start + 1);
  if (it == records.end() || it->n != n_start ||
      static_cast<std::size_t>(records.end() - it) < count) {
    throw DomainError("records do not cover [" + std::to_string(n_start) + ", " +
                      std::to_string(n_end) + "]");
  }
  auto slice = records.subspan(static_cast<std::size_t>(it - records.begin()), count);
  if (slice.back().n != n_end) {
    throw DomainError("records covering [" + std::to_string(n_start) + ", " +
                      std::to_string(n_end) + "] are not contiguous");
  }
  return slice;
}

}  // namespace detail

inline ResidualSummary summarize(std::span<const ResidualRecord> rows) {
  if (rows.empty()) throw DomainError("no residuals to summarize");
  ResidualSummary s{rows.front().n, rows.back().n, std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity(), 0.0};
  double total = 0.0;
  for (const auto& r : rows) {
    s.min_residual = std::min(s.min_residual, r.residual);
    s.max_residual = std::max(s.max_residual, r.residual);
    total += r.residual;
  }
  // Floating-point mean can drift past an extreme when every residual is equal.
  s.mean_residual = std::clamp(total / static_cast<double>(rows.size()), s.min_residual,
                               s.max_residual);
  return s;
}

inline ResidualSummary residual_summary(Index n_start, Index n_end,
                                        std::span<const SequenceRecord> records) {
  const auto rows = residuals(detail::slice_covering(records, n_start, n_end));
  return summarize(rows);
}

struct ResidualBandResult {
  double c1 = 0.0;  // calibration min
  double c2 = 0.0;  // calibration max
  double slack = 0.0;
  ResidualSummary tested;
  std::vector<Index> outside;  // n whose residual left [c1 - slack, c2 + slack]

  bool passed() const noexcept { return outside.empty(); }
};

inline constexpr double kResidualSlack = 0.5;

inline ResidualBandResult check_residual_band(std::span<const SequenceRecord> records,
                                              Index calib_start, Index calib_end,
                                              Index test_start, Index test_end,
                                              double slack = kResidualSlack) {
  const ResidualSummary calib = residual_summary(calib_start, calib_end, records);
  const auto rows = residuals(detail::slice_covering(records, test_start, test_end));
  ResidualBandResult out{calib.min_residual, calib.max_residual, slack, summarize(rows), {}};
  for (const auto& r : rows) {
    if (r.residual < out.c1 - slack || r.residual > out.c2 + slack) out.outside.push_back(r.n);
  }
  return out;
}

// ---------------------------------------------------------------------------
// 0.375 * 1.88^n / n  <  C(n, n/3)  <  0.85 * 1.89^n / sqrt(n),  n = 0 mod 3.

struct Remark21Result {
  bool lower_ok = false;
  bool upper_ok = false;
  bool lower_exact = false;  // settled by the exact fallback
  bool upper_exact = false;
};

namespace detail {

// 375 * 188^n < 1000 * 100^n * n * C
inline bool remark21_lower_exact(Index n, const mpz_class& c) {
  const auto un = static_cast<unsigned long>(n);
  mpz_class lhs, rhs;
  mpz_ui_pow_ui(lhs.get_mpz_t(), 188, un);
  lhs *= 375;
  mpz_ui_pow_ui(rhs.get_mpz_t(), 100, un);
  rhs *= c;
  rhs *= un;
  rhs *= 1000;
  return lhs < rhs;
}

// C < 0.85 * 189^n / (100^n sqrt(n))  <=>  C^2 * n * 100^(2n) * 10^4 < 7225 * 189^(2n)
inline bool remark21_upper_exact(Index n, const mpz_class& c) {
  const auto un = static_cast<unsigned long>(n);
  mpz_class lhs, rhs;
  mpz_ui_pow_ui(lhs.get_mpz_t(), 100, 2 * un);
  lhs *= c;
  lhs *= c;
  lhs *= un;
  lhs *= 10000;
  mpz_ui_pow_ui(rhs.get_mpz_t(), 189, 2 * un);
  rhs *= 7225;
  return lhs < rhs;
}

}  // namespace detail

inline Remark21Result remark21_check(Index n, const LogFactorialTable& table) {
  if (n < 3 || n % 3 != 0) {
    throw DomainError("central-third bounds need a positive multiple of 3, got " +
                      std::to_string(n));
  }
  if (n > table.max_n()) throw DomainError("n exceeds log-factorial table coverage");
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const Index k = n / 3;
  const double x = static_cast<double>(n);

  const auto& top = table[n];
  const auto& lo = table[k];
  const auto& hi = table[n - k];
  const double log_c = (top.value - lo.value) - hi.value;
  const double log_c_err = top.bound + lo.bound + hi.bound + 2.0 * eps * (top.value + lo.value + hi.value);

  // Decimal constants are not exact doubles; allow one eps of relative
  // representation error per logarithm argument, scaled by n for the powers.
  const double lower_rhs = std::log(0.375) + x * std::log(1.88) - std::log(x);
  const double upper_rhs = std::log(0.85) + x * std::log(1.89) - 0.5 * std::log(x);
  auto rhs_err = [&](double c, double base) {
    const double mag = std::fabs(std::log(c)) + x * std::log(base) + std::log(x);
    return 8.0 * eps * mag + (x + 1.0) * eps;
  };
  const double lower_err = log_c_err + rhs_err(0.375, 1.88);
  const double upper_err = log_c_err + rhs_err(0.85, 1.89);

  Remark21Result out;
  std::optional<mpz_class> exact_c;
  auto binom = [&]() -> const mpz_class& {
    if (!exact_c) exact_c = binomial_exact(n, k);
    return *exact_c;
  };

  const double lower_margin = log_c - lower_rhs;
  if (lower_margin > lower_err) {
    out.lower_ok = true;
  } else if (lower_margin < -lower_err) {
    out.lower_ok = false;
  } else {
    out.lower_ok = detail::remark21_lower_exact(n, binom());
    out.lower_exact = true;
  }

  const double upper_margin = upper_rhs - log_c;
  if (upper_margin > upper_err) {
    out.upper_ok = true;
  } else if (upper_margin < -upper_err) {
    out.upper_ok = false;
  } else {
    out.upper_ok = detail::remark21_upper_exact(n, binom());
    out.upper_exact = true;
  }
  return out;
}

inline Remark21Result remark21_check(Index n) {
  if (n < 3 || n % 3 != 0) {
    throw DomainError("central-third bounds need a positive multiple of 3, got " +
                      std::to_string(n));
  }
  return remark21_check(n, *shared_table(n));
}

}  // namespace binthr
