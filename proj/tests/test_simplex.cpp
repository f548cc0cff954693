#include "cohere/simplex.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "cohere/sampling.hpp"
#include "support/oracles.hpp"

using namespace cohere;

TEST(simplex, construction_clamps_and_validates) {
  const ProbVector x({0.5, 0.5 + 1e-13, -1e-13});
  EXPECT_EQ(x[2], 0.0);
  EXPECT_THROW(ProbVector({0.5, 0.6, -0.1}), NormalizationError);
  EXPECT_THROW(ProbVector({0.5, 0.4}), NormalizationError);
  EXPECT_THROW(ProbVector(std::vector<double>{}), DimensionError);
}

TEST(simplex, sorted_desc) {
  EXPECT_EQ(sorted_desc({0.2, 0.5, 0.3}).vec(), (std::vector<double>{0.5, 0.3, 0.2}));
  EXPECT_EQ(sorted_desc({1, 0, 0}).vec(), (std::vector<double>{1, 0, 0}));
  const double t = 1.0 / 3.0;
  EXPECT_EQ(sorted_desc({t, t, t}).vec(), (std::vector<double>{t, t, t}));
}

TEST(simplex, tail_sum) {
  EXPECT_NEAR(tail_sum({0.8, 0.1, 0.1}, 2), 0.2, 1e-15);
  EXPECT_EQ(tail_sum({1, 0, 0}, 2), 0.0);
  EXPECT_NEAR(tail_sum({0.1, 0.7, 0.2}, 1), 1.0, 1e-9);
  EXPECT_THROW(tail_sum({0.5, 0.5}, 0), IndexError);
  EXPECT_THROW(tail_sum({0.5, 0.5}, 3), IndexError);
}

TEST(simplex, tail_sum_matches_subset_oracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 1 + trial % 7;
    const ProbVector x = random_prob_vector(d, rng, 0.2);
    double prev = 2.0;
    for (std::size_t l = 1; l <= d; ++l) {
      const double t = tail_sum(x, l);
      EXPECT_NEAR(t, oracle::tail_sum(x.vec(), l), 1e-14);
      EXPECT_LE(t, prev + 1e-15);
      prev = t;
    }
    EXPECT_NEAR(tail_sum(x, 1), 1.0, 1e-9);
  }
}

TEST(simplex, majorizes_examples) {
  EXPECT_TRUE(majorizes({0.7, 0.3}, {0.5, 0.5}));
  EXPECT_FALSE(majorizes({0.5, 0.5}, {0.7, 0.3}));
  const double t = 1.0 / 3.0;
  EXPECT_TRUE(majorizes({0.5, 0.3, 0.2}, {t, t, t}));
  EXPECT_THROW(majorizes({0.5, 0.5}, {1, 0, 0}), DimensionError);
}

TEST(simplex, majorizes_properties) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t d = 1 + trial % 6;
    const ProbVector x = random_prob_vector(d, rng, 0.2);
    const ProbVector y = random_prob_vector(d, rng, 0.2);
    EXPECT_TRUE(majorizes(x, x));
    EXPECT_TRUE(majorizes(x, ProbVector::uniform(d)));
    EXPECT_TRUE(majorizes(ProbVector::vertex(d, 0), x));
    EXPECT_EQ(majorizes(y, x), oracle::majorized(x.vec(), y.vec(), 1e-9));
  }
}

TEST(simplex, ttransform_preserves_sum) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> v = random_prob_vector(6, rng).vec();
  std::uniform_int_distribution<std::size_t> idx(0, 5);
  for (int step = 0; step < 1000; ++step) {
    const double before = std::accumulate(v.begin(), v.end(), 0.0);
    const std::size_t i = idx(rng);
    const std::size_t j = (i + 1 + idx(rng) % 5) % 6;
    TTransform{i, j, unit(rng)}.apply(v);
    EXPECT_NEAR(std::accumulate(v.begin(), v.end(), 0.0), before, 1e-12);
  }
}

TEST(simplex, ttransform_chain_examples) {
  EXPECT_TRUE(ttransform_chain({0.5, 0.5}, {0.5, 0.5}).empty());

  const auto chain = ttransform_chain({0.5, 0.5}, {0.7, 0.3});
  ASSERT_EQ(chain.size(), 1u);
  EXPECT_EQ(chain[0].i, 0u);
  EXPECT_EQ(chain[0].j, 1u);
  EXPECT_NEAR(chain[0].t, 0.5, 1e-15);

  const double t = 1.0 / 3.0;
  const ProbVector x{t, t, t};
  const auto chain3 = ttransform_chain(x, {0.5, 0.3, 0.2});
  EXPECT_LE(chain3.size(), 2u);
  const auto out = apply_chain(chain3, {0.5, 0.3, 0.2});
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(out[k], x[k], 1e-9);
}

TEST(simplex, ttransform_chain_rejects_bad_input) {
  EXPECT_THROW(ttransform_chain({0.7, 0.3}, {0.5, 0.5}), PreconditionError);
  EXPECT_THROW(ttransform_chain({0.3, 0.7}, {1.0, 0.0}), PreconditionError);
  EXPECT_THROW(ttransform_chain({0.5, 0.5}, {1.0, 0.0, 0.0}), DimensionError);
}

// Inner surplus/deficit pattern where pivoting on the last deficit and the
// first surplus would break majorization after one step.
TEST(simplex, ttransform_chain_handles_interleaved_discrepancies) {
  const ProbVector x{0.3, 0.3, 0.2, 0.2};
  const ProbVector y{0.5, 0.25, 0.25, 0.0};
  const auto chain = ttransform_chain(x, y);
  EXPECT_LE(chain.size(), 3u);
  const auto out = apply_chain(chain, y.vec());
  for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(out[k], x[k], 1e-12);
}

TEST(simplex, ttransform_chain_property) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 1 + trial % 8;
    const ProbVector y = sorted_desc(random_prob_vector(d, rng, 0.2));
    const ProbVector x = sorted_desc(random_majorized_by(y, rng));
    const auto chain = ttransform_chain(x, y);
    ASSERT_LE(chain.size(), d == 0 ? 0 : d - 1);

    // Replay the chain and check that each step closes a discrepancy.
    std::vector<double> v = y.vec();
    auto mismatches = [&] {
      std::size_t n = 0;
      for (std::size_t k = 0; k < d; ++k) n += std::abs(v[k] - x[k]) > 1e-9;
      return n;
    };
    std::size_t before = mismatches();
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      EXPECT_NE(it->i, it->j);
      EXPECT_GE(it->t, 0.0);
      EXPECT_LE(it->t, 1.0);
      it->apply(v);
      const std::size_t after = mismatches();
      EXPECT_LT(after, before);
      before = after;
    }
    for (std::size_t k = 0; k < d; ++k) EXPECT_NEAR(v[k], x[k], 1e-9);
  }
}
