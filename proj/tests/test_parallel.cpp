#include <gtest/gtest.h>

#include <cstdlib>
#include <cstring>

#include "kloos/parallel.hpp"

using namespace kloos;

TEST(Parallel, PrefixSumsMatchSerial) {
  const i64 count = 3000;
  const std::vector<i64> stops{0, 1, 255, 256, 257, 1000, 1000, 3000};
  auto term = [](i64 i) { return cplx(1.0 / (i + 1.0), std::sin(static_cast<double>(i))); };
  const auto got = ordered_prefix_sums(count, stops, 3, term);
  for (std::size_t s = 0; s < stops.size(); ++s) {
    cplx want{0.0, 0.0};
    for (i64 i = 0; i < stops[s]; ++i) want += term(i);
    EXPECT_NEAR(std::abs(got[s] - want), 0.0, 1e-10) << stops[s];
  }
}

TEST(Parallel, BitIdenticalAcrossThreadCounts) {
  auto term = [](i64 i) { return cplx(std::cos(0.37 * i) / (i + 1.0), 0.0); };
  const std::vector<i64> stops{10, 500, 4096, 10000};
  const auto ref = ordered_prefix_sums(10000, stops, 1, term);
  for (int t : {2, 5, 16}) {
    const auto got = ordered_prefix_sums(10000, stops, t, term);
    EXPECT_EQ(std::memcmp(ref.data(), got.data(), ref.size() * sizeof(cplx)), 0) << t;
  }
}

TEST(Parallel, RejectsBadStops) {
  auto term = [](i64) { return cplx(1.0, 0.0); };
  EXPECT_THROW(ordered_prefix_sums(10, std::vector<i64>{5, 3}, 1, term), PreconditionViolation);
  EXPECT_THROW(ordered_prefix_sums(10, std::vector<i64>{11}, 1, term), PreconditionViolation);
}

TEST(Parallel, ChunkedSumAndMap) {
  EXPECT_EQ(chunked_sum(1, 1000, 4, [](i64 i) { return static_cast<double>(i); }), cplx(500500.0, 0.0));
  EXPECT_EQ(chunked_sum(5, 4, 4, [](i64) { return 1.0; }), cplx(0.0, 0.0));
  const auto sq = parallel_map<i64>(3, 1000, 4, [](i64 i) { return i * i; });
  ASSERT_EQ(sq.size(), 1000u);
  EXPECT_EQ(sq[0], 9);
  EXPECT_EQ(sq[999], 1002 * 1002);
}

TEST(Parallel, ExceptionsPropagate) {
  EXPECT_THROW(for_each_chunk(50, 4,
                              [](i64 k) {
                                if (k == 17) throw PreconditionViolation("boom");
                              }),
               PreconditionViolation);
}

TEST(Parallel, EnvironmentOverridesThreads) {
  ::setenv("EXPSUM_THREADS", "3", 1);
  EXPECT_EQ(resolve_threads(8), 3);
  ::setenv("EXPSUM_THREADS", "junk", 1);
  EXPECT_EQ(resolve_threads(8), 8);
  ::unsetenv("EXPSUM_THREADS");
  EXPECT_EQ(resolve_threads(2), 2);
  EXPECT_GE(resolve_threads(0), 1);
}
