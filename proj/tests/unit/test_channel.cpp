#include <cmath>

#include <gtest/gtest.h>

#include "ledgerage/channel.hpp"
#include "ledgerage/errors.hpp"

using namespace ledgerage;
using namespace ledgerage::channel;

// Reference digits from tests/oracles (40-digit mpmath root of stp(eps) = zeta).
TEST(Stp, PinnedAtOneMegabit) {
  EXPECT_NEAR(stp(1e6, ChannelParams{}), 0.82909811652368287819, 1e-15);
}

TEST(Stp, ZeroRateIsCertain) { EXPECT_EQ(stp(0.0, ChannelParams{}), 1.0); }

TEST(Stp, DecreasingInRateAndDistance) {
  ChannelParams p;
  double prev = 1.0;
  for (double eps = 1e4; eps < 5e6; eps *= 1.3) {
    const double s = stp(eps, p);
    EXPECT_LT(s, prev);
    EXPECT_GT(s, 0.0);
    prev = s;
  }
  ChannelParams far = p;
  far.l = 60.0;
  EXPECT_LT(stp(1e6, far), stp(1e6, p));
}

TEST(Stp, NegativeRateRejected) { EXPECT_THROW(stp(-1.0, ChannelParams{}), DomainError); }

TEST(ChannelParams, Validation) {
  ChannelParams p;
  EXPECT_NO_THROW(p.validate());
  p.n = 2.0;
  EXPECT_THROW(p.validate(), DomainError);
  p = {};
  p.N0 = 0.0;
  EXPECT_THROW(p.validate(), DomainError);
  p = {};
  p.lambda_bs = -1.0;
  EXPECT_THROW(p.validate(), DomainError);
}

TEST(MaxRate, PinnedValues) {
  const ChannelParams p;
  EXPECT_NEAR(max_rate(p, 0.3), 2892207.1473108483814, 1e-9 * 2.9e6);
  EXPECT_NEAR(max_rate(p, 0.6), 1897479.3707132425142, 1e-9 * 1.9e6);
  EXPECT_NEAR(max_rate(p, 0.9), 643552.93962014702996, 1e-9 * 6.4e5);
}

TEST(MaxRate, RoundTrip) {
  const ChannelParams p;
  for (double zeta = 0.05; zeta <= 0.95 + 1e-12; zeta += 0.01) {
    EXPECT_NEAR(stp(max_rate(p, zeta), p), zeta, 1e-9) << "zeta=" << zeta;
  }
}

TEST(MaxRate, RoundTripOtherExponent) {
  ChannelParams p;
  p.n = 3.5;
  for (double zeta : {0.2, 0.5, 0.8}) EXPECT_NEAR(stp(max_rate(p, zeta), p), zeta, 1e-9);
}

TEST(MaxRate, BisectionMatchesClosedForm) {
  const ChannelParams p;
  for (double zeta : {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.999}) {
    const double closed = max_rate_n4(p, zeta);
    EXPECT_NEAR(max_rate(p, zeta), closed, 1e-9 * closed);
  }
}

TEST(MaxRate, MonotoneInZeta) {
  const ChannelParams p;
  double prev_rate = INFINITY;
  double prev_latency = 0.0;
  for (double zeta = 0.05; zeta < 1.0; zeta += 0.05) {
    const double r = max_rate(p, zeta);
    EXPECT_LE(r, prev_rate);
    const double t = tx_latency(5e5, r);
    EXPECT_GE(t, prev_latency);
    prev_rate = r;
    prev_latency = t;
  }
}

TEST(MaxRate, CertainDeliveryHasZeroRate) {
  EXPECT_EQ(max_rate(ChannelParams{}, 1.0), 0.0);
  EXPECT_EQ(max_rate_n4(ChannelParams{}, 1.0), 0.0);
}

TEST(MaxRate, Domain) {
  EXPECT_THROW(max_rate(ChannelParams{}, 0.0), DomainError);
  EXPECT_THROW(max_rate(ChannelParams{}, 1.2), DomainError);
  ChannelParams p;
  p.n = 3.0;
  EXPECT_THROW(max_rate_n4(p, 0.5), DomainError);
}

TEST(TxLatency, Basics) {
  EXPECT_EQ(tx_latency(5e5, 1e6), 0.5);
  const double r = max_rate(ChannelParams{}, 0.6);
  EXPECT_NEAR(tx_latency(5e5, r), 0.26350747613770117838, 1e-9);
  EXPECT_EQ(tx_latency(2.5e5, r), 0.5 * tx_latency(5e5, r));
  EXPECT_THROW(tx_latency(5e5, 0.0), InfiniteLatencyError);
  EXPECT_THROW(tx_latency(0.0, 1e6), DomainError);
  EXPECT_THROW(tx_latency(5e5, -1.0), DomainError);
}
