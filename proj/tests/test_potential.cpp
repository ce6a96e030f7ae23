#include "framepot/potential.hpp"
#include "framepot/random.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace framepot;

TEST(FramePotential, LiftedEtfClosedForm) {
  auto rng = stream_rng(3, 0);
  std::uniform_real_distribution<double> unif(1e-3, 2.0);
  for (int d = 2; d <= 8; ++d)
    for (int k = 1; k <= d; ++k) {
      const Configuration X = lifted_etf(d, k);
      for (int s = 0; s < 50; ++s) {
        const double p = unif(rng);
        EXPECT_NEAR(frame_potential(X, PotentialParams(p)), (k + 1) * std::pow(k, 1 - p), 1e-10);
      }
    }
}

TEST(FramePotential, MatchesOrderedPairOracle) {
  auto rng = stream_rng(3, 1);
  for (int trial = 0; trial < 30; ++trial) {
    const Configuration X = random_configuration(6, 3, rng);
    for (double p : {0.3, 1.0, 1.7, 3.0})
      EXPECT_NEAR(frame_potential(X, PotentialParams(p)), oracle::frame_potential(to_rows(X), p),
                  1e-12);
  }
}

TEST(FramePotential, Examples) {
  EXPECT_DOUBLE_EQ(frame_potential(onb_plus_repeats(2, 1), PotentialParams(1.0)), 2.0);
  EXPECT_EQ(frame_potential(onb_plus_repeats(5, 0), PotentialParams(0.3)), 0.0);
  EXPECT_NEAR(frame_potential(lifted_etf(2, 2), PotentialParams(2.0)), 1.5, 1e-14);
}

TEST(FramePotential, StructuralZerosStayZeroForSmallP) {
  // Without the threshold, 1e-17 rounding noise would contribute 1e-17^0.05 ~ 0.14.
  EXPECT_NEAR(frame_potential(lifted_etf(6, 1), PotentialParams(0.05)), 2.0, 1e-12);
}

TEST(PotentialParams, RejectsNonPositive) {
  EXPECT_THROW(PotentialParams(0.0), std::invalid_argument);
  EXPECT_THROW(PotentialParams(-1.0), std::invalid_argument);
}

TEST(Coherence, Examples) {
  EXPECT_NEAR(coherence(lifted_etf(3, 2)), 0.5, 1e-15);
  EXPECT_EQ(coherence(onb_plus_repeats(4, 0)), 0.0);
  EXPECT_NEAR(coherence(onb_plus_repeats(3, 1)), 1.0, 1e-15);
  EXPECT_THROW(coherence(onb_plus_repeats(1, 0)), std::invalid_argument);
}

TEST(Bounds, Sidelnikov) {
  EXPECT_NEAR(sidelnikov_bound(3, 2, 1).value, 1.5, 1e-15);
  for (int d = 1; d <= 6; ++d) EXPECT_NEAR(sidelnikov_bound(d, d, 1).value, 0.0, 1e-12);
  EXPECT_NEAR(sidelnikov_bound(4, 3, 2).value, -0.8, 1e-14);
}

TEST(Bounds, EhlerOkoudjou) {
  EXPECT_NEAR(ehler_okoudjou_bound(3, 2, 2.0).value, 1.5, 1e-15);
  EXPECT_FALSE(ehler_okoudjou_bound(3, 2, 2.0).valid);
  EXPECT_EQ(ehler_okoudjou_bound(4, 4, 3.0).value, 0.0);
  const Bound b = ehler_okoudjou_bound(3, 2, 4.0);
  EXPECT_TRUE(b.valid);
  EXPECT_NEAR(b.value, 0.375, 1e-15);
  EXPECT_NEAR(frame_potential(lifted_etf(2, 2), PotentialParams(4.0)), 0.375, 1e-15);
  EXPECT_THROW(ehler_okoudjou_bound(2, 3, 3.0), std::invalid_argument);
}

TEST(Bounds, Glazyrin) {
  for (int d = 2; d <= 8; ++d) EXPECT_NEAR(glazyrin_bound(d + 1, d, 1.0).value, 2.0, 1e-15);
  EXPECT_EQ(glazyrin_bound(4, 4, 1.3).value, 0.0);
  // 4 / (1.5^0.75 * 0.5^0.25), evaluated independently at 30 digits.
  EXPECT_NEAR(glazyrin_bound(5, 3, 1.5).value, 3.50953070120664656, 1e-13);
  // Limit value at p = 2: 2(N-d)/2.
  EXPECT_NEAR(glazyrin_bound(5, 3, 2.0).value, 2.0, 1e-15);
  EXPECT_FALSE(glazyrin_bound(5, 3, 0.5).valid);
  EXPECT_TRUE(glazyrin_bound(5, 3, 2.0).valid);
}

TEST(Regimes, Table) {
  const RegimeTable t2 = regime_boundaries(2);
  ASSERT_EQ(t2.boundaries.size(), 3u);
  EXPECT_EQ(t2.boundaries[0], 0.0);
  EXPECT_NEAR(t2.boundaries[1], std::log(3.0) / std::log(2.0), 1e-15);
  EXPECT_NEAR(t2.boundaries[1], 1.58496250072115618, 1e-14);
  EXPECT_EQ(t2.boundaries[2], 2.0);
  EXPECT_NEAR(regime_boundaries(4).boundaries[2], 1.70951129135145478, 1e-14);

  for (int d = 1; d <= 12; ++d) {
    const RegimeTable t = regime_boundaries(d);
    EXPECT_EQ(t.alpha_thresholds[static_cast<std::size_t>(d)], 1.0);
    EXPECT_TRUE(std::isinf(t.alpha_thresholds[0]));
    for (int k = 1; k <= d; ++k) {
      EXPECT_LT(t.boundaries[static_cast<std::size_t>(k - 1)],
                t.boundaries[static_cast<std::size_t>(k)]);
      EXPECT_GT(t.alpha_thresholds[static_cast<std::size_t>(k - 1)],
                t.alpha_thresholds[static_cast<std::size_t>(k)]);
    }
    for (int k = 1; k < d; ++k) {
      const double pk = t.boundaries[static_cast<std::size_t>(k)];
      EXPECT_NEAR(t.alpha_thresholds[static_cast<std::size_t>(k)], 0.5 + 0.5 / (pk - 1.0), 1e-12);
    }
  }
  const RegimeTable t1 = regime_boundaries(1);
  EXPECT_EQ(t1.boundaries, (std::vector<double>{0.0, 2.0}));
}

TEST(Regimes, Index) {
  EXPECT_EQ(regime_index(4, 0.5), (Regime{1, false}));
  EXPECT_EQ(regime_index(2, std::log(3.0) / std::log(2.0)), (Regime{1, true}));
  EXPECT_NEAR(regime_boundary(3), 1.77566026069146653, 1e-14);
  EXPECT_EQ(regime_index(4, 1.95), (Regime{4, false}));
  EXPECT_EQ(regime_index(4, 1.72), (Regime{3, false}));
  EXPECT_THROW(regime_index(3, 0.0), std::invalid_argument);
  EXPECT_THROW(regime_index(3, 2.0), std::invalid_argument);
}

TEST(TheoremValue, Examples) {
  const TheoremValue a = theorem_min_value(2, 1.0);
  EXPECT_EQ(a.regime, (Regime{1, false}));
  EXPECT_DOUBLE_EQ(a.value, 2.0);

  const TheoremValue b = theorem_min_value(2, regime_boundary(1));
  EXPECT_TRUE(b.regime.boundary);
  EXPECT_NEAR(b.value, 2.0, 1e-12);
  EXPECT_NEAR(lifted_etf_potential(2, regime_boundary(1)), 2.0, 1e-12);

  const TheoremValue c = theorem_min_value(3, 1.9);
  EXPECT_EQ(c.regime.k, 3);
  EXPECT_NEAR(c.value, 1.48816423204520588, 1e-13);
  EXPECT_THROW(theorem_min_value(3, 2.5), std::invalid_argument);
  EXPECT_THROW(theorem_min_value(1, 1.0), std::invalid_argument);
}

TEST(TheoremValue, ChampionIsStrictInsideRegime) {
  auto rng = stream_rng(4, 0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int d = 2; d <= 8; ++d) {
    const RegimeTable t = regime_boundaries(d);
    for (int k = 1; k <= d; ++k) {
      for (int s = 0; s < 10; ++s) {
        const double lo = t.boundaries[static_cast<std::size_t>(k - 1)];
        const double hi = t.boundaries[static_cast<std::size_t>(k)];
        const double p = lo + (0.05 + 0.9 * unif(rng)) * (hi - lo);
        const double champion = theorem_min_value(d, p).value;
        for (int j = 1; j <= d; ++j)
          if (j != k) {
            EXPECT_GT(frame_potential(lifted_etf(d, j), PotentialParams(p)), champion + 1e-9)
                << "d=" << d << " k=" << k << " j=" << j << " p=" << p;
          }
      }
    }
    for (int k = 1; k < d; ++k) {
      const PotentialParams pk(t.boundaries[static_cast<std::size_t>(k)]);
      EXPECT_NEAR(frame_potential(lifted_etf(d, k), pk), frame_potential(lifted_etf(d, k + 1), pk),
                  1e-10);
    }
  }
}

TEST(TheoremValue, RandomConfigurationsRespectLowerBounds) {
  auto rng = stream_rng(4, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 4;
    const Configuration X = random_configuration(d + 1, d, rng);
    for (double p : {1.0, 1.3, 1.7, 1.95}) {
      const double fp = frame_potential(X, PotentialParams(p));
      EXPECT_GE(fp, theorem_min_value(d, p).value - 1e-9);
      EXPECT_GE(fp, glazyrin_bound(d + 1, d, p).value - 1e-9);
    }
  }
}

TEST(TheoremValue, SimplexAttainsFuntfBound) {
  for (int d = 2; d <= 8; ++d) {
    const double fp = frame_potential(lifted_etf(d, d), PotentialParams(2.0));
    EXPECT_NEAR(fp, (d + 1.0) / d, 1e-10);
    EXPECT_NEAR(fp, sidelnikov_bound(d + 1, d, 1).value, 1e-10);
  }
}

TEST(AlphaOfP, Values) {
  EXPECT_DOUBLE_EQ(alpha_of_p(1.5), 1.5);
  for (int k = 1; k < 10; ++k) EXPECT_NEAR(alpha_of_p(regime_boundary(k)), alpha_threshold(k), 1e-12);
  EXPECT_NEAR(alpha_of_p(2.0 - 1e-9), 1.0, 1e-8);
  EXPECT_GT(alpha_of_p(2.0 - 1e-9), 1.0);
  EXPECT_THROW(alpha_of_p(1.0), std::invalid_argument);
  EXPECT_THROW(alpha_of_p(2.0), std::invalid_argument);
}
