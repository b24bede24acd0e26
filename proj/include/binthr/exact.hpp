#pragma once

// Exact big-integer ground truth for the threshold predicate
//
//     denominator(n) * C(n, k)  >  2^n
//
// where denominator(n) is n + 1 for f(n) and n for L(n). Nothing in here
// rounds; every other module treats these functions as the final authority.

#include <gmpxx.h>

#include <climits>
#include <cstdint>
#include <string>

#include "binthr/error.hpp"

namespace binthr {

using Index = std::int64_t;

enum class ThresholdKind { F, L };

constexpr Index denominator(ThresholdKind kind, Index n) noexcept {
  return kind == ThresholdKind::F ? n + 1 : n;
}

constexpr const char* to_string(ThresholdKind kind) noexcept {
  return kind == ThresholdKind::F ? "f" : "L";
}

// Relation of denominator(n) * C(n, k) to 2^n.
enum class ExactOrdering { Below, Equal, Above };

constexpr const char* to_string(ExactOrdering o) noexcept {
  switch (o) {
    case ExactOrdering::Below: return "Below";
    case ExactOrdering::Equal: return "Equal";
    case ExactOrdering::Above: return "Above";
  }
  return "?";
}

namespace detail {

// Product of every integer in [lo, hi]; 1 when the range is empty.
// Leaves pack consecutive factors into one machine word before touching GMP.
inline void range_product(mpz_t out, unsigned long lo, unsigned long hi) {
  if (lo > hi) {
    mpz_set_ui(out, 1);
    return;
  }
  if (hi - lo < 32) {
    mpz_set_ui(out, 1);
    unsigned long word = 1;
    for (unsigned long i = lo; i <= hi; ++i) {
      if (word > ULONG_MAX / i) {
        mpz_mul_ui(out, out, word);
        word = 1;
      }
      word *= i;
    }
    mpz_mul_ui(out, out, word);
    return;
  }
  const unsigned long mid = lo + (hi - lo) / 2;
  mpz_class right;
  range_product(out, lo, mid);
  range_product(right.get_mpz_t(), mid + 1, hi);
  mpz_mul(out, out, right.get_mpz_t());
}

inline void check_binomial_args(Index n, Index k) {
  if (n < 0 || k < 0 || k > n) {
    throw DomainError("binomial requires 0 <= k <= n, got n=" + std::to_string(n) +
                      " k=" + std::to_string(k));
  }
}

inline void check_threshold_args(Index n, Index k) {
  if (n < 3) {
    throw DomainError("threshold sequences are defined for n >= 3, got n=" + std::to_string(n));
  }
  check_binomial_args(n, k);
}

}  // namespace detail

// C(n, k) as the falling product n (n-1) ... (n-k+1) over k!, both sides
// formed by balanced product trees and joined by a single exact division.
inline mpz_class binomial_exact(Index n, Index k) {
  detail::check_binomial_args(n, k);
  if (k > n - k) k = n - k;
  if (k == 0) return 1;
  const auto un = static_cast<unsigned long>(n);
  const auto uk = static_cast<unsigned long>(k);
  mpz_class numer;
  mpz_class denom;
  detail::range_product(numer.get_mpz_t(), un - uk + 1, un);
  detail::range_product(denom.get_mpz_t(), 2, uk);
  mpz_divexact(numer.get_mpz_t(), numer.get_mpz_t(), denom.get_mpz_t());
  return numer;
}

inline ExactOrdering compare_exact(Index n, Index k, ThresholdKind kind) {
  detail::check_threshold_args(n, k);
  mpz_class lhs = binomial_exact(n, k);
  lhs *= static_cast<unsigned long>(denominator(kind, n));

  // 2^n has exactly n + 1 bits, so the bit length settles all but one case.
  const auto bits = mpz_sizeinbase(lhs.get_mpz_t(), 2);
  const auto pow_bits = static_cast<std::size_t>(n) + 1;
  if (bits > pow_bits) return ExactOrdering::Above;
  if (bits < pow_bits) return ExactOrdering::Below;
  // Same length: lhs >= 2^n, with equality iff no bit below the top is set.
  return mpz_scan1(lhs.get_mpz_t(), 0) == static_cast<mp_bitcnt_t>(n) ? ExactOrdering::Equal
                                                                       : ExactOrdering::Above;
}

// Strict: an exact tie is not "exceeds".
inline bool exceeds(Index n, Index k, ThresholdKind kind) {
  return compare_exact(n, k, kind) == ExactOrdering::Above;
}

// C(n,k) <= n^n / (k^k (n-k)^(n-k)), evaluated with denominators cleared:
// C(n,k) * k^k * (n-k)^(n-k) <= n^n, taking 0^0 = 1.
inline bool lemma21_holds(Index n, Index k) {
  if (n < 1 || k < 0 || k > n - 1) {
    throw DomainError("entropy bound is stated for n >= 1 and 0 <= k <= n-1, got n=" +
                      std::to_string(n) + " k=" + std::to_string(k));
  }
  const auto un = static_cast<unsigned long>(n);
  const auto uk = static_cast<unsigned long>(k);
  mpz_class lhs = binomial_exact(n, k);
  mpz_class term;
  mpz_ui_pow_ui(term.get_mpz_t(), uk, uk);
  lhs *= term;
  mpz_ui_pow_ui(term.get_mpz_t(), un - uk, un - uk);
  lhs *= term;
  mpz_class rhs;
  mpz_ui_pow_ui(rhs.get_mpz_t(), un, un);
  return lhs <= rhs;
}

}  // namespace binthr
