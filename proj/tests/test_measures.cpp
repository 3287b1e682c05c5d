#include <gtest/gtest.h>

#include "copulim/errors.hpp"
#include "copulim/marginal.hpp"
#include "copulim/tensor_measure.hpp"
#include "generators.hpp"
#include "oracles/oracles.hpp"

using namespace copulim;

namespace {

Marginal coin() { return Marginal::atomic({{0.0, 0.5}, {1.0, 0.5}}); }

}  // namespace

TEST(ExtReal, OrderPlacesInfinitiesAtTheEnds) {
  EXPECT_LT(ExtReal::neg_inf(), ExtReal(-1e308));
  EXPECT_LT(ExtReal(1e308), ExtReal::pos_inf());
  EXPECT_EQ(parse_ext_real(to_string(ExtReal(0.1))), ExtReal(0.1));
  EXPECT_EQ(parse_ext_real("-inf"), ExtReal::neg_inf());
  EXPECT_THROW(ExtReal(std::nan("")), DomainError);
  EXPECT_THROW(parse_ext_real("abc"), ParseError);
}

TEST(Marginal, RejectsBrokenInvariants) {
  EXPECT_THROW(Marginal::atomic({{0.0, 0.6}, {1.0, 0.5}}), ValidationError);
  EXPECT_THROW(Marginal::atomic({{1.0, 0.5}, {0.0, 0.5}}), ValidationError);
  EXPECT_THROW(Marginal::atomic({{0.0, -0.1}, {1.0, 1.1}}), ValidationError);
  EXPECT_THROW(Marginal::continuous({{0.0, 0.0}}), ValidationError);
  EXPECT_THROW(Marginal::continuous({{0.0, 0.0}, {1.0, 0.5}, {2.0, 0.5}, {3.0, 1.0}}), ValidationError);
  EXPECT_THROW(Marginal::continuous({{0.0, 0.1}, {1.0, 1.0}}), ValidationError);
}

TEST(CdfEval, Examples) {
  EXPECT_EQ(cdf_eval(Marginal::dirac(0.0), -1.0), 0.0);
  EXPECT_EQ(cdf_eval(coin(), 0.0), 0.5);
  EXPECT_EQ(cdf_eval(Marginal::uniform(), 0.25), 0.25);
  EXPECT_EQ(cdf_eval(coin(), ExtReal::pos_inf()), 1.0);
  EXPECT_EQ(cdf_eval(Marginal::uniform(), ExtReal::pos_inf()), 1.0);
  EXPECT_EQ(cdf_eval(Marginal::uniform(), ExtReal::neg_inf()), 0.0);
}

TEST(Quantile, Examples) {
  EXPECT_EQ(quantile(Marginal::uniform(), 0.7), ExtReal(0.7));
  EXPECT_EQ(quantile(coin(), 0.5), ExtReal(0.0));
  EXPECT_EQ(oracle::atomic_quantile({{0.0, 0.5}, {1.0, 0.5}}, 0.5), ExtReal(0.0));
  EXPECT_EQ(quantile(Marginal::dirac(0.0), 1.0), ExtReal(0.0));
  EXPECT_THROW(quantile(coin(), 1.5), DomainError);
  EXPECT_THROW(quantile(coin(), -0.1), DomainError);
}

TEST(Quantile, ZeroUsesSmallestSupportPoint) {
  const Marginal m = Marginal::atomic({{-3.0, 0.0}, {2.0, 0.25}, {5.0, 0.75}});
  EXPECT_EQ(quantile(m, 0.0), ExtReal(2.0));
  EXPECT_EQ(quantile(Marginal::continuous({{-1.0, 0.0}, {4.0, 1.0}}), 0.0), ExtReal(-1.0));
  EXPECT_EQ(quantile(Marginal::dirac(7.0), 0.3), ExtReal(7.0));
}

TEST(Quantile, InfiniteAtomsFollowTheExtendedInfimum) {
  const Marginal m = Marginal::atomic({{ExtReal::neg_inf(), 0.25}, {0.0, 0.5}, {ExtReal::pos_inf(), 0.25}});
  EXPECT_EQ(quantile(m, 0.2), ExtReal::neg_inf());
  EXPECT_EQ(quantile(m, 0.75), ExtReal(0.0));
  EXPECT_EQ(quantile(m, 0.9), ExtReal::pos_inf());
  EXPECT_EQ(cdf_eval(m, ExtReal::neg_inf()), 0.25);
}

TEST(Quantile, MatchesScanOfTheDefinitionOnDyadicWeights) {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = gen::integer(rng, 1, 6);
    const auto xs = gen::positions(rng, static_cast<std::size_t>(k), true);
    std::vector<int> quanta(static_cast<std::size_t>(k), 0);
    for (int q = 0; q < 64; ++q) ++quanta[static_cast<std::size_t>(gen::integer(rng, 0, k - 1))];
    std::vector<Atom> atoms;
    for (int i = 0; i < k; ++i) atoms.push_back({xs[static_cast<std::size_t>(i)], quanta[static_cast<std::size_t>(i)] / 64.0});
    const Marginal m = Marginal::atomic(atoms);
    for (int q = 0; q <= 64; ++q) {
      const double u = q / 64.0;
      EXPECT_EQ(quantile(m, u), oracle::atomic_quantile(atoms, u));
    }
  }
}

TEST(Quantile, GaloisAdjunctionOnRandomMarginals) {
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const Marginal m = trial % 3 == 0 ? gen::continuous(rng) : gen::atomic(rng);
    std::vector<ExtReal> probes;
    if (m.is_atomic())
      for (const Atom& a : m.atoms()) probes.push_back(a.x);
    else
      for (const Knot& k : m.knots()) probes.emplace_back(k.x);
    for (int k = 0; k < 5; ++k) probes.emplace_back(gen::uniform(rng, -25.0, 25.0));
    for (int k = 0; k < 20; ++k) {
      const double u = k == 0 ? 1.0 : gen::uniform(rng, 1e-9, 1.0);
      for (ExtReal x : probes) EXPECT_EQ(quantile(m, u) <= x, u <= cdf_eval(m, x));
    }
  }
}

TEST(CdfEval, MonotoneAndRightContinuous) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Marginal m = gen::atomic(rng);
    double prev = 0.0;
    for (double x = -21.0; x <= 21.0; x += 0.125) {
      const double F = cdf_eval(m, x);
      EXPECT_GE(F, prev);
      prev = F;
    }
    for (const Atom& a : m.atoms()) {
      if (!a.x.is_finite()) continue;
      EXPECT_EQ(cdf_eval(m, a.x), cdf_eval(m, std::nextafter(a.x.value(), 1e300)));
    }
  }
}

TEST(Quantile, ContinuousQuantileInvertsTheCdf) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Marginal m = gen::continuous(rng);
    auto knots = m.knots();
    for (std::size_t k = 0; k < knots.size(); ++k) {
      EXPECT_EQ(quantile(m, cdf_eval(m, knots[k].x)), ExtReal(knots[k].x));
      EXPECT_EQ(cdf_eval(m, quantile(m, knots[k].F)), knots[k].F);
      if (k + 1 < knots.size()) {
        const double xm = 0.5 * (knots[k].x + knots[k + 1].x);
        const double um = 0.5 * (knots[k].F + knots[k + 1].F);
        EXPECT_NEAR(quantile(m, cdf_eval(m, xm)).value(), xm, 1e-12);
        EXPECT_NEAR(cdf_eval(m, quantile(m, um)), um, 1e-12);
      }
    }
  }
}

TEST(Atomize, PushesIntervalMassToTheUpperGridPoint) {
  const Marginal u = Marginal::uniform(0.0, 1.0);
  const Marginal a = atomize(u, std::vector<ExtReal>{0.0, 0.25, 0.5});
  ASSERT_EQ(a.atoms().size(), 4u);
  EXPECT_EQ(a.atoms()[0].w, 0.0);
  EXPECT_DOUBLE_EQ(a.atoms()[1].w, 0.25);
  EXPECT_DOUBLE_EQ(a.atoms()[3].w, 0.5);
  EXPECT_EQ(a.atoms()[3].x, ExtReal(1.0));
  EXPECT_THROW(atomize(coin(), std::vector<ExtReal>{0.5, 1.0}), ConfigurationError);
}

TEST(TensorMeasure, RejectsBrokenInvariants) {
  Eigen::VectorXd m(2);
  m << 0.5, 0.6;
  EXPECT_THROW(TensorMeasure(IndexSubset{1}, Grid{{0.0, 1.0}}, m), ValidationError);
  m << 0.5, 0.5;
  EXPECT_THROW(TensorMeasure(IndexSubset{1}, Grid{{1.0, 0.0}}, m), ValidationError);
  EXPECT_THROW(TensorMeasure(IndexSubset{1, 2}, Grid{{0.0, 1.0}}, m), IndexError);
  EXPECT_THROW(TensorMeasure(IndexSubset{1}, Grid{{0.0, 1.0, 2.0}}, m), IndexError);
  m << -0.5, 1.5;
  EXPECT_THROW(TensorMeasure(IndexSubset{1}, Grid{{0.0, 1.0}}, m), ValidationError);
}

TEST(MarginalizeTensor, Examples) {
  const TensorMeasure t = TensorMeasure::product({{1, coin()}, {2, Marginal::atomic({{-1.0, 0.25}, {3.0, 0.75}})}});
  EXPECT_EQ(marginalize_tensor(t, {1, 2}), t);
  EXPECT_EQ(marginalize_tensor(t, {1}), TensorMeasure::from_marginal(1, coin()));
  EXPECT_THROW(marginalize_tensor(t, {3}), IndexError);
  EXPECT_THROW(marginalize_tensor(t, IndexSubset{}), IndexError);
}

TEST(MarginalizeTensor, AgreesWithBruteForceSummation) {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const TensorMeasure t = gen::tensor(rng, {1, 2, 3});
    const TensorMeasure m = marginalize_tensor(t, {1, 3});
    const auto expected = oracle::marginal_masses(t, {0, 2});
    for (const auto& [idx, mass] : expected) EXPECT_NEAR(m.at(idx), mass, 1e-15);
  }
}

TEST(MarginalizeTensor, ProjectionLawsHoldExactlyOnDyadicMasses) {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const TensorMeasure t = gen::tensor(rng, {1, 2, 3}, 4, true);
    EXPECT_EQ(marginalize_tensor(t, t.index_subset()), t);
    EXPECT_EQ(marginalize_tensor(marginalize_tensor(t, {1, 2}), {1}), marginalize_tensor(t, {1}));
    EXPECT_EQ(marginalize_tensor(marginalize_tensor(t, {2, 3}), {3}), marginalize_tensor(t, {3}));
    EXPECT_EQ(marginalize_tensor(marginalize_tensor(t, {1, 3}), {1}), marginalize_tensor(t, {1}));
  }
}

TEST(PushforwardTensor, Examples) {
  const TensorMeasure t = TensorMeasure::product({{1, coin()}, {2, coin()}});
  EXPECT_EQ(pushforward_tensor(t, t.grid()), t);

  const TensorMeasure c = pushforward_tensor(t, {{7.0, 7.0}, {0.0, 1.0}});
  EXPECT_EQ(marginalize_tensor(c, {1}), TensorMeasure::from_marginal(1, Marginal::dirac(7.0)));

  const TensorMeasure two = TensorMeasure::from_marginal(1, Marginal::atomic({{0.0, 0.3}, {1.0, 0.7}}));
  const TensorMeasure merged = pushforward_tensor(two, {{5.0, 5.0}});
  ASSERT_EQ(merged.axis(0).size(), 1u);
  EXPECT_EQ(merged.axis(0)[0], ExtReal(5.0));
  EXPECT_DOUBLE_EQ(merged.mass()[0], 1.0);

  EXPECT_THROW(pushforward_tensor(t, {{0.0}, {0.0, 1.0}}), DomainError);
  EXPECT_THROW(pushforward_tensor(t, {{1.0, 0.0}, {0.0, 1.0}}), DomainError);
}

TEST(PushforwardTensor, PreservesTotalMass) {
  Rng rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const TensorMeasure t = gen::tensor(rng, {0, 1});
    std::vector<Axis> maps;
    for (const Axis& ax : t.grid()) {
      Axis img;
      for (ExtReal x : ax) img.emplace_back(x.is_finite() ? std::floor(x.value() / 5.0) : 0.0);
      std::sort(img.begin(), img.end());
      maps.push_back(img);
    }
    EXPECT_NEAR(pushforward_tensor(t, maps).mass().sum(), 1.0, 1e-15);
  }
}

TEST(CdfEvalTensor, Examples) {
  const TensorMeasure coins = TensorMeasure::product({{1, coin()}, {2, coin()}});
  EXPECT_EQ(cdf_eval_tensor(coins, {0.0, 0.0}), 0.25);
  EXPECT_EQ(oracle::tensor_cdf(coins, {0.0, 0.0}), 0.25);
  EXPECT_NEAR(cdf_eval_tensor(coins, {ExtReal::pos_inf(), ExtReal::pos_inf()}), 1.0, 1e-15);
  EXPECT_EQ(cdf_eval_tensor(coins, {ExtReal::neg_inf(), 3.0}), 0.0);
  EXPECT_THROW(cdf_eval_tensor(coins, {0.0}), IndexError);
}

TEST(CdfEvalTensor, MatchesDominationCountAndIsMonotone) {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const TensorMeasure t = gen::tensor(rng, {0, 1, 2});
    std::vector<ExtReal> x(3);
    for (int k = 0; k < 20; ++k) {
      for (auto& c : x) c = ExtReal(gen::uniform(rng, -22.0, 22.0));
      const double F = cdf_eval_tensor(t, x);
      EXPECT_NEAR(F, oracle::tensor_cdf(t, x), 1e-15);
      auto y = x;
      y[static_cast<std::size_t>(k % 3)] = ExtReal(x[static_cast<std::size_t>(k % 3)].value() + 3.0);
      EXPECT_GE(cdf_eval_tensor(t, y), F);
    }
  }
}
