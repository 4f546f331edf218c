#include <gtest/gtest.h>

#include "kloos/cusps.hpp"

using namespace kloos;

TEST(Cusps, Width) {
  EXPECT_EQ(width(4, 2), 1);
  EXPECT_EQ(width(12, 2), 3);
  EXPECT_EQ(width(13, 1), 13);
  EXPECT_EQ(width(36, 6), 1);
  EXPECT_THROW(width(12, 5), PreconditionViolation);
}

TEST(Cusps, Representatives) {
  const auto one = cusp_representatives(1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].q, 1);
  EXPECT_EQ(one[0].r, 1);

  const auto four = cusp_representatives(4);
  ASSERT_EQ(four.size(), 3u);
  EXPECT_EQ(four[0].q, 1);
  EXPECT_EQ(four[1].q, 2);
  EXPECT_EQ(four[2].q, 4);

  EXPECT_EQ(cusp_numerators(36, 6), (std::vector<i64>{1, 5}));
}

TEST(Cusps, CountMatchesDivisorSum) {
  for (i64 level = 1; level <= 200; ++level) {
    i64 expect = 0;
    for (i64 q : divisors(level)) expect += euler_phi(std::gcd(q, level / q));
    const auto reps = cusp_representatives(level);
    EXPECT_EQ(static_cast<i64>(reps.size()), expect) << level;
    for (const auto& c : reps) {
      EXPECT_EQ(std::gcd(c.r, level), 1);
      EXPECT_EQ(c.width, width(level, c.q));
    }
  }
}

TEST(Cusps, ScalingMatrixExamples) {
  const auto a = scaling_matrix(4, 2, 1);
  EXPECT_EQ(a.integer_part(), (Mat2{1, 0, 2, 1}));
  const auto b = scaling_matrix(1, 1, 1);
  EXPECT_EQ(b.integer_part(), (Mat2{1, 0, 1, 1}));
  const auto c = scaling_matrix(12, 3, 1);
  EXPECT_EQ(c.y, 1);
  EXPECT_EQ(c.x, 0);
}

TEST(Cusps, StabilizerExamples) {
  EXPECT_EQ(stabilizer_generator(4, 2, 1), (Mat2{-1, 1, -4, 3}));
  EXPECT_EQ(stabilizer_generator(1, 1, 1), (Mat2{0, 1, -1, 2}));
}

TEST(Cusps, ScalingAndStabilizerStructure) {
  for (i64 level = 1; level <= 120; ++level) {
    for (const auto& cusp : cusp_representatives(level)) {
      const auto s = scaling_matrix(level, cusp.q, cusp.r);
      const Mat2 m = s.integer_part();
      EXPECT_EQ(m.det(), 1);
      EXPECT_EQ(s.x % (level / cusp.q), 0);
      EXPECT_GE(s.y, 1);
      EXPECT_LE(s.y, level);

      const Mat2 g = stabilizer_generator(level, cusp.q, cusp.r);
      EXPECT_EQ(g.det(), 1);
      EXPECT_EQ(g.c % level, 0);  // in Gamma_0(Q)
      // conjugated back to infinity it is translation by the width
      EXPECT_EQ(m.inverse_sl2() * g * m, (Mat2{1, cusp.width, 0, 1})) << level << ' ' << cusp.q;
    }
  }
}

TEST(Cusps, AllowedModulus) {
  EXPECT_TRUE(allowed_modulus_infty_rq(4, 2, 1));
  EXPECT_FALSE(allowed_modulus_infty_rq(4, 2, 2));
  for (i64 c = 1; c <= 20; ++c) EXPECT_TRUE(allowed_modulus_infty_rq(30, 30, c));
}
