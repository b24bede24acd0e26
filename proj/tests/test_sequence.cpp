#include <gtest/gtest.h>

#include <random>

#include "binthr/parallel.hpp"
#include "binthr/sequence.hpp"
#include "oracles.hpp"

namespace binthr {
namespace {

// Reference values of f(n) and L(n) for n = 3..23.
const std::vector<SequenceRecord> kTableOne = {
    {3, 1, 1},   {4, 1, 2},   {5, 2, 2},   {6, 2, 2},   {7, 2, 2},   {8, 3, 3},   {9, 3, 3},
    {10, 3, 3},  {11, 4, 4},  {12, 4, 4},  {13, 4, 4},  {14, 5, 5},  {15, 5, 5},  {16, 5, 5},
    {17, 6, 6},  {18, 6, 6},  {19, 6, 7},  {20, 7, 7},  {21, 7, 7},  {22, 8, 8},  {23, 8, 8},
};

TEST(ComputeSingle, TableOneValues) {
  for (const auto& r : kTableOne) {
    EXPECT_EQ(compute_f(r.n), r.f) << r.n;
    EXPECT_EQ(compute_L(r.n), r.l) << r.n;
  }
}

TEST(ComputeSingle, MatchesLinearScanAt200) {
  EXPECT_EQ(compute_f(200), oracle::linear_scan(200, ThresholdKind::F));
  EXPECT_EQ(compute_L(200), oracle::linear_scan(200, ThresholdKind::L));
  EXPECT_EQ(compute_f(200), 85);
}

TEST(ComputeSingle, RejectsSmallN) {
  EXPECT_THROW(compute_f(2), DomainError);
  EXPECT_THROW(compute_L(-5), DomainError);
}

TEST(ComputeRange, ReproducesTableOne) {
  EXPECT_EQ(compute_range(3, 23), kTableOne);
  const auto one = compute_range(5, 5);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.front(), (SequenceRecord{5, 2, 2}));
}

TEST(ComputeRange, Errors) {
  EXPECT_THROW(compute_range(10, 9), DomainError);
  EXPECT_THROW(compute_range(2, 9), DomainError);
}

TEST(ComputeRange, AgreesWithPerNSearchAndLinearScan) {
  const auto table = build_table(500);
  const auto records = compute_range(3, 500, table);
  ASSERT_EQ(records.size(), 498u);
  for (const auto& r : records) {
    ASSERT_EQ(r.f, compute_f(r.n, table)) << r.n;
    ASSERT_EQ(r.l, compute_L(r.n, table)) << r.n;
    ASSERT_EQ(r.f, oracle::linear_scan(r.n, ThresholdKind::F)) << r.n;
    ASSERT_EQ(r.l, oracle::linear_scan(r.n, ThresholdKind::L)) << r.n;
  }
}

TEST(ComputeRange, PartitionedEqualsSequential) {
  const auto table = build_table(20'000);
  RangeOptions one;
  one.threads = 1;
  RangeOptions many;
  many.threads = 5;
  EXPECT_EQ(compute_range(3, 20'000, table, one), compute_range(3, 20'000, table, many));
}

TEST(ComputeRange, ReportsProgress) {
  RangeOptions opts;
  opts.threads = 1;
  std::size_t last = 0;
  int calls = 0;
  opts.progress = [&](std::size_t done, std::size_t total) {
    EXPECT_EQ(total, 25'000u);
    EXPECT_GE(done, last);
    last = done;
    ++calls;
  };
  compute_range(3, 25'002, opts);
  EXPECT_EQ(last, 25'000u);
  EXPECT_EQ(calls, 3);  // 10k, 20k, final
}

TEST(ExtendRange, ContinuesFromAnyPrefix) {
  const auto table = build_table(3000);
  const auto full = compute_range(3, 3000, table);
  for (Index split : {3, 4, 23, 999, 2999, 3000}) {
    auto prefix = compute_range(3, split, table);
    const auto rest = extend_range(prefix.back(), 3000, table);
    prefix.insert(prefix.end(), rest.begin(), rest.end());
    EXPECT_EQ(prefix, full) << "split=" << split;
  }
  EXPECT_TRUE(extend_range(full.back(), 3000, table).empty());
}

TEST(SequenceRecord, Invariants) {
  EXPECT_TRUE(satisfies_invariants({19, 6, 7}));
  EXPECT_FALSE(satisfies_invariants({19, 7, 6}));
  EXPECT_FALSE(satisfies_invariants({19, 5, 7}));
  EXPECT_FALSE(satisfies_invariants({10, 3, 6}));
  EXPECT_FALSE(satisfies_invariants({10, 0, 1}));
  EXPECT_FALSE(satisfies_invariants({2, 1, 1}));
}

TEST(Verify, TheoremOnePointThreeOverTableOne) {
  const auto rep = verify(CheckId::T1_3, 3, 23);
  EXPECT_EQ(rep.checked, 21u);
  EXPECT_TRUE(rep.passed());
}

TEST(Verify, TheoremOnePointFourAtNineteen) {
  ASSERT_TRUE(exceeds(19, 7 - 1, ThresholdKind::F));
  const auto rows = compute_range(17, 21);
  for (Index n : {17, 18, 19}) EXPECT_EQ(rows[n - 17].f, 6);
  for (Index n : {19, 20, 21}) EXPECT_EQ(rows[n - 17].l, 7);
  const auto rep = verify(CheckId::T1_4, 19, 19);
  EXPECT_EQ(rep.checked, 1u);
  EXPECT_TRUE(rep.passed());
}

TEST(Verify, TheoremOnePointFourFlagsTheNEqualsFourEdge) {
  const auto rep = verify(CheckId::T1_4, 3, 30);
  EXPECT_EQ(rep.n_start, 5);
  EXPECT_EQ(rep.checked, 26u);
  ASSERT_EQ(rep.notes.size(), 1u);
  EXPECT_NE(rep.notes[0].find("n=4"), std::string::npos);
  EXPECT_NE(rep.notes[0].find("premise holds"), std::string::npos);
}

TEST(Verify, TheoremOnePointFiveTo2000) {
  const auto rep = verify(CheckId::T1_5, 3, 2000);
  EXPECT_EQ(rep.checked, 1998u);
  EXPECT_TRUE(rep.passed());
}

// L(4) = L(7) = 2, so the L analogue of
// f(n+3) > f(n) fails at n = 4 and nowhere else up to 10^5.
TEST(Verify, LAnalogueOfTheoremOnePointFiveFailsOnlyAtFour) {
  const auto rows = compute_range(4, 7);
  EXPECT_EQ(rows.front().l, rows.back().l);

  const auto rep = verify(CheckId::R1_1, 3, 2000);
  EXPECT_EQ(rep.n_start, 5);
  EXPECT_TRUE(rep.passed());
  ASSERT_EQ(rep.notes.size(), 1u);
  EXPECT_NE(rep.notes[0].find("FAILS"), std::string::npos);

  auto records = compute_range(3, 60);
  const detail::SequenceView view(records);
  const auto edge = detail::verify_on(CheckId::R1_1, 3, 50, view);
  ASSERT_EQ(edge.violations.size(), 1u);
  EXPECT_EQ(edge.violations.front().n, 4);
}

TEST(Verify, DomainsClipTheRange) {
  EXPECT_EQ(verify(CheckId::T1_2, 3, 10).checked, 7u);
  EXPECT_EQ(verify(CheckId::L2_2, 3, 100).checked, 13u);
  EXPECT_EQ(verify(CheckId::L2_2, 3, 50).checked, 0u);
  EXPECT_EQ(verify(CheckId::L2_1, 3, 10).checked, 3u + 4 + 5 + 6 + 7 + 8 + 9 + 10);
  EXPECT_EQ(verify(CheckId::L2_1, 1, 1000).n_end, kLemma21MaxN);
}

TEST(Verify, AllChecksPassTo1000) {
  const auto reports = verify_many(kAllChecks, 3, 1000);
  ASSERT_EQ(reports.size(), std::size(kAllChecks));
  for (const auto& rep : reports) EXPECT_TRUE(rep.passed()) << to_string(rep.id);
}

TEST(Verify, DetectsPlantedCounterexamples) {
  auto records = compute_range(3, 60);
  records[20 - 3].f += 1;  // f(20) jumps by two
  const detail::SequenceView view(records);
  EXPECT_FALSE(detail::verify_on(CheckId::T1_1, 10, 30, view).passed());

  records = compute_range(3, 60);
  records[19 - 3].f = 7;  // claims f(19) = L(19) although C(19,6) clears 2^19/20
  const detail::SequenceView view1(records);
  EXPECT_FALSE(detail::verify_on(CheckId::C1_1, 10, 30, view1).passed());

  records = compute_range(3, 60);
  records[40 - 3].l = records[40 - 3].f + 2;
  const detail::SequenceView view2(records);
  EXPECT_FALSE(detail::verify_on(CheckId::T1_3, 3, 50, view2).passed());
}

TEST(Verify, UnknownCheckIsAUsageError) {
  EXPECT_THROW(parse_check_id("T9.9"), UsageError);
  EXPECT_EQ(parse_check_id("C1.1"), CheckId::C1_1);
}

TEST(Lemma22, MinimalThreshold) {
  EXPECT_FALSE(lemma22_inequality_holds(9));  // 10 * 84 = 840 > 512
  EXPECT_FALSE(lemma22_inequality_holds(34));
  const Index n0 = lemma22_minimal_n();
  EXPECT_EQ(n0, 35);  // exhaustive scan n = 3..300 outside this code
  EXPECT_LE(n0, 88);
  for (Index n = 88; n <= 400; ++n) ASSERT_TRUE(lemma22_inequality_holds(n)) << n;
}

TEST(PartitionRange, CoversContiguously) {
  std::mt19937_64 rng(5);
  for (int s = 0; s < 200; ++s) {
    const Index begin = std::uniform_int_distribution<Index>(0, 1000)(rng);
    const Index end = begin + std::uniform_int_distribution<Index>(0, 5000)(rng);
    const unsigned parts = std::uniform_int_distribution<unsigned>(1, 16)(rng);
    const Index min_len = std::uniform_int_distribution<Index>(1, 700)(rng);
    const auto chunks = partition_range(begin, end, parts, min_len);
    ASSERT_FALSE(chunks.empty());
    ASSERT_LE(chunks.size(), parts);
    ASSERT_EQ(chunks.front().begin, begin);
    ASSERT_EQ(chunks.back().end, end);
    for (std::size_t i = 1; i < chunks.size(); ++i) {
      ASSERT_EQ(chunks[i].begin, chunks[i - 1].end + 1);
      ASSERT_GE(chunks[i].end - chunks[i].begin + 1, std::min(min_len, end - begin + 1));
    }
  }
  EXPECT_TRUE(partition_range(5, 4, 3).empty());
}

TEST(ForEachChunk, PropagatesWorkerExceptions) {
  const auto chunks = partition_range(0, 99, 4);
  EXPECT_THROW(for_each_chunk(chunks,
                              [](std::size_t i, const Chunk&) {
                                if (i == 2) throw DomainError("boom");
                              }),
               DomainError);
}

}  // namespace
}  // namespace binthr
