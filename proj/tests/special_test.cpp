// Copyright 2026 The rankdiv Authors.
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "rankdiv/special.hpp"

namespace {

using namespace rankdiv::special;

TEST(IncompleteBeta, MatchesBoostOnGrid) {
  for (double a : {0.5, 1.0, 2.5, 7.0, 30.0}) {
    for (double b : {0.5, 1.0, 3.0, 12.0, 45.0}) {
      for (double x : {0.001, 0.05, 0.3, 0.5, 0.77, 0.95, 0.999}) {
        EXPECT_NEAR(incomplete_beta(a, b, x), boost::math::ibeta(a, b, x), 1e-10) << a << " " << b << " " << x;
      }
    }
  }
}

TEST(IncompleteBeta, Endpoints) {
  EXPECT_EQ(incomplete_beta(2, 3, 0.0), 0.0);
  EXPECT_EQ(incomplete_beta(2, 3, 1.0), 1.0);
  EXPECT_THROW(incomplete_beta(0, 1, 0.5), rankdiv::Error);
  EXPECT_THROW(incomplete_beta(1, 1, 1.5), rankdiv::Error);
}

TEST(IncompleteGamma, MatchesBoostOnGrid) {
  for (double s : {0.5, 1.0, 1.5, 4.0, 10.0, 25.0}) {
    for (double x : {0.01, 0.5, 1.0, 3.0, 8.0, 20.0, 60.0}) {
      EXPECT_NEAR(incomplete_gamma_p(s, x), boost::math::gamma_p(s, x), 1e-10) << s << " " << x;
      EXPECT_NEAR(incomplete_gamma_q(s, x), boost::math::gamma_q(s, x), 1e-10) << s << " " << x;
    }
  }
}

TEST(Tails, KnownValues) {
  // F(2, 6) at 3.0: (1 + 3*2/6)^-3 = 1/8
  EXPECT_NEAR(f_upper_tail(3.0, 2, 6), 0.125, 1e-12);
  // chi2(2) tail is exp(-x/2)
  EXPECT_NEAR(chi2_upper_tail(3.0, 2), std::exp(-1.5), 1e-12);
  EXPECT_EQ(f_upper_tail(0.0, 2, 6), 1.0);
  EXPECT_EQ(f_upper_tail(std::numeric_limits<double>::infinity(), 2, 6), 0.0);
  EXPECT_EQ(chi2_upper_tail(0.0, 3), 1.0);
}

}  // namespace
