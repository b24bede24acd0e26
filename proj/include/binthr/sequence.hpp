#pragma once

// f(n) = min { k >= 1 : C(n,k) > 2^n / (n+1) }
// L(n) = min { k >= 1 : C(n,k) > 2^n / n }
//
// Single values come from a binary search on k in [1, floor(n/2)]: the
// predicate is monotone there because C(n,k) increases up to the middle, and
// it is always true at floor(n/2).
//
// Ranges use the one-probe walker: consecutive values differ by 0 or 1, so
// f(n+1) is f(n) when C(n+1, f(n)) already clears the threshold and f(n)+1
// otherwise. Each sub-range is seeded independently, so ranges partition
// cleanly across threads.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "binthr/error.hpp"
#include "binthr/exact.hpp"
#include "binthr/fastpath.hpp"
#include "binthr/parallel.hpp"

namespace binthr {

struct SequenceRecord {
  Index n = 0;
  Index f = 0;
  Index l = 0;

  friend bool operator==(const SequenceRecord&, const SequenceRecord&) = default;
};

// 1 <= f <= L <= floor(n/2) and L - f in {0, 1}.
inline bool satisfies_invariants(const SequenceRecord& r) noexcept {
  return r.n >= 3 && r.f >= 1 && r.f <= r.l && r.l <= r.n / 2 && r.l - r.f <= 1;
}

inline Index first_exceeding(Index n, ThresholdKind kind, const LogFactorialTable& table) {
  if (n < 3) throw DomainError("n must be >= 3, got " + std::to_string(n));
  Index lo = 1;
  Index hi = n / 2;
  while (lo < hi) {
    const Index mid = lo + (hi - lo) / 2;
    if (exceeds_hybrid(n, mid, kind, table)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

inline Index compute_f(Index n, const LogFactorialTable& table) {
  return first_exceeding(n, ThresholdKind::F, table);
}

inline Index compute_L(Index n, const LogFactorialTable& table) {
  return first_exceeding(n, ThresholdKind::L, table);
}

inline Index compute_f(Index n) {
  if (n < 3) throw DomainError("n must be >= 3, got " + std::to_string(n));
  return compute_f(n, *shared_table(n));
}

inline Index compute_L(Index n) {
  if (n < 3) throw DomainError("n must be >= 3, got " + std::to_string(n));
  return compute_L(n, *shared_table(n));
}

inline SequenceRecord compute_record(Index n, const LogFactorialTable& table) {
  return {n, compute_f(n, table), compute_L(n, table)};
}

// One walker step: the record for prev.n + 1.
inline SequenceRecord step_record(const SequenceRecord& prev, const LogFactorialTable& table) {
  const Index n = prev.n + 1;
  const Index f = exceeds_hybrid(n, prev.f, ThresholdKind::F, table) ? prev.f : prev.f + 1;
  const Index l = exceeds_hybrid(n, prev.l, ThresholdKind::L, table) ? prev.l : prev.l + 1;
  return {n, f, l};
}

inline constexpr std::size_t kProgressInterval = 10'000;

struct RangeOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
  // Called with the running total of finished rows, roughly every
  // kProgressInterval rows. May be invoked from worker threads.
  std::function<void(std::size_t done, std::size_t total)> progress;
};

namespace detail {

inline constexpr Index kMinChunkRows = 2'000;

inline void walk_into(SequenceRecord seed, std::span<SequenceRecord> out,
                      const LogFactorialTable& table, std::atomic<std::size_t>& done,
                      std::size_t total, const RangeOptions& opts) {
  std::size_t since_report = 0;
  auto tick = [&] {
    if (++since_report == kProgressInterval) {
      const auto now = done.fetch_add(since_report) + since_report;
      since_report = 0;
      if (opts.progress) opts.progress(now, total);
    }
  };
  SequenceRecord cur = seed;
  for (auto& slot : out) {
    cur = step_record(cur, table);
    slot = cur;
    tick();
  }
  done.fetch_add(since_report);
}

}  // namespace detail

// Records for n in [n_start, n_end], ascending.
inline std::vector<SequenceRecord> compute_range(Index n_start, Index n_end,
                                                 const LogFactorialTable& table,
                                                 const RangeOptions& opts = {}) {
  if (n_start < 3) throw DomainError("range must start at n >= 3, got " + std::to_string(n_start));
  if (n_end < n_start) {
    throw DomainError("inverted range [" + std::to_string(n_start) + ", " +
                      std::to_string(n_end) + "]");
  }
  const auto total = static_cast<std::size_t>(n_end - n_start + 1);
  std::vector<SequenceRecord> records(total);
  std::atomic<std::size_t> done{0};
  const auto chunks =
      partition_range(n_start, n_end, resolve_threads(opts.threads), detail::kMinChunkRows);
  for_each_chunk(chunks, [&](std::size_t, const Chunk& c) {
    const auto offset = static_cast<std::size_t>(c.begin - n_start);
    const auto len = static_cast<std::size_t>(c.end - c.begin + 1);
    std::span<SequenceRecord> slots(records.data() + offset, len);
    slots[0] = compute_record(c.begin, table);
    ++done;
    detail::walk_into(slots[0], slots.subspan(1), table, done, total, opts);
  });
  if (opts.progress) opts.progress(done.load(), total);
  return records;
}

inline std::vector<SequenceRecord> compute_range(Index n_start, Index n_end,
                                                 const RangeOptions& opts = {}) {
  if (n_end < n_start) {
    throw DomainError("inverted range [" + std::to_string(n_start) + ", " +
                      std::to_string(n_end) + "]");
  }
  if (n_start < 3) throw DomainError("range must start at n >= 3, got " + std::to_string(n_start));
  return compute_range(n_start, n_end, *shared_table(n_end), opts);
}

// Continues a sequence past `last` up to n_end with the one-probe walker,
// without re-seeding. Returns the records for last.n + 1 .. n_end.
inline std::vector<SequenceRecord> extend_range(const SequenceRecord& last, Index n_end,
                                                const LogFactorialTable& table) {
  std::vector<SequenceRecord> out;
  if (n_end <= last.n) return out;
  out.reserve(static_cast<std::size_t>(n_end - last.n));
  SequenceRecord cur = last;
  while (cur.n < n_end) {
    cur = step_record(cur, table);
    out.push_back(cur);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verification of the structural claims about f and L.

enum class CheckId { T1_1, T1_2, T1_3, C1_1, T1_4, T1_5, R1_1, L2_1, L2_2 };

inline constexpr CheckId kAllChecks[] = {CheckId::T1_1, CheckId::T1_2, CheckId::T1_3,
                                         CheckId::C1_1, CheckId::T1_4, CheckId::T1_5,
                                         CheckId::R1_1, CheckId::L2_1, CheckId::L2_2};

constexpr std::string_view to_string(CheckId id) noexcept {
  switch (id) {
    case CheckId::T1_1: return "T1.1";
    case CheckId::T1_2: return "T1.2";
    case CheckId::T1_3: return "T1.3";
    case CheckId::C1_1: return "C1.1";
    case CheckId::T1_4: return "T1.4";
    case CheckId::T1_5: return "T1.5";
    case CheckId::R1_1: return "R1.1";
    case CheckId::L2_1: return "L2.1";
    case CheckId::L2_2: return "L2.2";
  }
  return "?";
}

inline CheckId parse_check_id(std::string_view name) {
  for (CheckId id : kAllChecks) {
    if (to_string(id) == name) return id;
  }
  throw UsageError("unknown check '" + std::string(name) + "'");
}

// Smallest n each check is stated for.
constexpr Index check_domain_start(CheckId id) noexcept {
  switch (id) {
    case CheckId::T1_2: return 4;
    case CheckId::T1_4: return 5;  // f(n-2) must exist
    case CheckId::R1_1: return 5;  // L(7) = L(4) = 2
    case CheckId::L2_1: return 1;
    case CheckId::L2_2: return 88;
    default: return 3;
  }
}

// The entropy bound is checked over every (n, k) pair, which grows
// quadratically; ranges are capped here.
inline constexpr Index kLemma21MaxN = 300;
inline constexpr Index kLemma22Window = 200;

struct Violation {
  Index n = 0;
  std::string detail;
};

struct VerificationReport {
  CheckId id{};
  Index n_start = 0;  // first n actually checked
  Index n_end = 0;    // last n actually checked
  // Number of n values checked; for L2.1, the number of (n, k) pairs.
  std::size_t checked = 0;
  std::vector<Violation> violations;
  std::vector<std::string> notes;

  bool passed() const noexcept { return violations.empty(); }
};

// Lemma 2.2's inequality C(n, ceil(n/3)) < 2^n / (n+1), exactly.
inline bool lemma22_inequality_holds(Index n) {
  const Index k = (n + 2) / 3;
  return compare_exact(n, k, ThresholdKind::F) == ExactOrdering::Below;
}

// Least n0 such that the inequality holds on every n in [n0, n0 + window].
inline Index lemma22_minimal_n(Index window = kLemma22Window) {
  Index run_start = 3;
  for (Index n = 3;; ++n) {
    if (!lemma22_inequality_holds(n)) {
      run_start = n + 1;
    } else if (n - run_start >= window) {
      return run_start;
    }
  }
}

namespace detail {

// Random access into a contiguous block of records.
class SequenceView {
 public:
  explicit SequenceView(std::span<const SequenceRecord> records) : records_(records) {}
  Index first_n() const noexcept { return records_.front().n; }
  Index last_n() const noexcept { return records_.back().n; }
  const SequenceRecord& operator()(Index n) const noexcept {
    return records_[static_cast<std::size_t>(n - first_n())];
  }

 private:
  std::span<const SequenceRecord> records_;
};

inline std::string fmt_rec(const SequenceRecord& r) {
  return "f(" + std::to_string(r.n) + ")=" + std::to_string(r.f) + " L(" + std::to_string(r.n) +
         ")=" + std::to_string(r.l);
}

inline VerificationReport verify_lemma21(Index n_start, Index n_end) {
  VerificationReport rep{CheckId::L2_1, n_start, n_end, 0, {}, {}};
  for (Index n = n_start; n <= n_end; ++n) {
    for (Index k = 0; k < n; ++k) {
      ++rep.checked;
      if (!lemma21_holds(n, k)) {
        rep.violations.push_back({n, "C(n,k) k^k (n-k)^(n-k) > n^n at k=" + std::to_string(k)});
      }
    }
  }
  return rep;
}

inline VerificationReport verify_lemma22(Index n_start, Index n_end) {
  VerificationReport rep{CheckId::L2_2, n_start, n_end, 0, {}, {}};
  for (Index n = n_start; n <= n_end; ++n) {
    ++rep.checked;
    if (!lemma22_inequality_holds(n)) rep.violations.push_back({n, "C(n, ceil(n/3)) >= 2^n/(n+1)"});
  }
  return rep;
}

// Sequence-based checks; `seq` must cover [3, n_end + 3].
inline VerificationReport verify_on(CheckId id, Index n_start, Index n_end, const SequenceView& seq) {
  VerificationReport rep{id, n_start, n_end, 0, {}, {}};
  auto fail = [&](Index n, std::string detail) { rep.violations.push_back({n, std::move(detail)}); };

  for (Index n = n_start; n <= n_end; ++n) {
    const SequenceRecord& r = seq(n);
    ++rep.checked;
    switch (id) {
      case CheckId::T1_1: {
        const SequenceRecord& next = seq(n + 1);
        if (next.f - r.f < 0 || next.f - r.f > 1) fail(n, fmt_rec(r) + " -> " + fmt_rec(next));
        else if (next.l - r.l < 0 || next.l - r.l > 1) fail(n, fmt_rec(r) + " -> " + fmt_rec(next));
        break;
      }
      case CheckId::T1_2: {
        const SequenceRecord& prev = seq(n - 1);
        const SequenceRecord& next = seq(n + 1);
        if (r.f != prev.f && r.f != next.f) fail(n, "f(n) differs from both neighbours");
        if (r.l != prev.l && r.l != next.l) fail(n, "L(n) differs from both neighbours");
        break;
      }
      case CheckId::T1_3:
        if (!satisfies_invariants(r)) fail(n, fmt_rec(r) + " violates 1 <= f <= L <= n/2, L-f <= 1");
        break;
      case CheckId::C1_1: {
        const bool premise = r.l >= 1 && exceeds(n, r.l - 1, ThresholdKind::F);
        if ((r.f == r.l - 1) != premise) {
          fail(n, fmt_rec(r) + (premise ? " but C(n,L-1) > 2^n/(n+1)" : " but C(n,L-1) <= 2^n/(n+1)"));
        }
        break;
      }
      case CheckId::T1_4: {
        if (!exceeds(n, r.l - 1, ThresholdKind::F)) break;
        const Index target = r.l - 1;
        if (seq(n - 2).f != target || seq(n - 1).f != target || r.f != target) {
          fail(n, "premise holds but f(n-2..n) != L(n)-1");
        }
        if (seq(n + 1).l != r.l || seq(n + 2).l != r.l) {
          fail(n, "premise holds but L(n..n+2) not constant");
        }
        break;
      }
      case CheckId::T1_5: {
        const SequenceRecord& ahead = seq(n + 3);
        if (ahead.f <= r.f) fail(n, "f(n+3) <= f(n): " + fmt_rec(r) + ", " + fmt_rec(ahead));
        break;
      }
      case CheckId::R1_1: {
        const SequenceRecord& ahead = seq(n + 3);
        if (ahead.l <= r.l) fail(n, "L(n+3) <= L(n): " + fmt_rec(r) + ", " + fmt_rec(ahead));
        break;
      }
      case CheckId::L2_1:
      case CheckId::L2_2:
        break;
    }
  }
  return rep;
}

inline void add_edge_notes(VerificationReport& rep, Index requested_start, const SequenceView& seq) {
  if (rep.id == CheckId::T1_4 && requested_start <= 4 && rep.n_end >= 4) {
    const auto& r4 = seq(4);
    const bool premise = exceeds(4, r4.l - 1, ThresholdKind::F);
    const bool forward = seq(5).l == r4.l && seq(6).l == r4.l;
    rep.notes.push_back("n=4 domain edge: premise " + std::string(premise ? "holds" : "fails") +
                        " (" + fmt_rec(r4) + "), f(2) undefined; forward clause L(4)=L(5)=L(6) " +
                        (forward ? "holds" : "FAILS"));
  }
  if (rep.id == CheckId::R1_1 && requested_start <= 4 && rep.n_end >= 4) {
    const auto& r4 = seq(4);
    const auto& r7 = seq(7);
    rep.notes.push_back("n=4 domain edge: L(7) > L(4) " +
                        std::string(r7.l > r4.l ? "holds" : "FAILS") + " (" + fmt_rec(r4) + ", " +
                        fmt_rec(r7) + "); checked from n=5");
  }
  if (rep.id == CheckId::L2_2) {
    rep.notes.push_back("minimal n0 = " + std::to_string(lemma22_minimal_n()) +
                        " (stabilization window " + std::to_string(kLemma22Window) + ")");
  }
  if (rep.id == CheckId::L2_1 && rep.n_end == kLemma21MaxN) {
    rep.notes.push_back("exhaustive over n <= " + std::to_string(kLemma21MaxN));
  }
}

}  // namespace detail

// Runs each check over [n_start, n_end] clipped to its own domain; the
// sequence is computed once and shared by all checks.
inline std::vector<VerificationReport> verify_many(std::span<const CheckId> ids, Index n_start,
                                                   Index n_end, const RangeOptions& opts = {}) {
  if (n_end < n_start) {
    throw DomainError("inverted range [" + std::to_string(n_start) + ", " +
                      std::to_string(n_end) + "]");
  }
  std::vector<SequenceRecord> records;
  const bool needs_sequence = std::any_of(ids.begin(), ids.end(), [](CheckId id) {
    return id != CheckId::L2_1 && id != CheckId::L2_2;
  });
  if (needs_sequence && n_end >= 3) records = compute_range(3, n_end + 3, opts);
  const detail::SequenceView seq(records);

  std::vector<VerificationReport> reports;
  for (CheckId id : ids) {
    const Index lo = std::max(n_start, check_domain_start(id));
    Index hi = n_end;
    if (id == CheckId::L2_1) hi = std::min(hi, kLemma21MaxN);
    VerificationReport rep;
    if (lo > hi) {
      rep = {id, lo, hi, 0, {}, {}};
    } else if (id == CheckId::L2_1) {
      rep = detail::verify_lemma21(lo, hi);
    } else if (id == CheckId::L2_2) {
      rep = detail::verify_lemma22(lo, hi);
    } else {
      rep = detail::verify_on(id, lo, hi, seq);
    }
    detail::add_edge_notes(rep, n_start, seq);
    reports.push_back(std::move(rep));
  }
  return reports;
}

inline VerificationReport verify(CheckId id, Index n_start, Index n_end, const RangeOptions& opts = {}) {
  const CheckId ids[] = {id};
  return std::move(verify_many(ids, n_start, n_end, opts).front());
}

}  // namespace binthr
