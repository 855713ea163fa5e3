// Copyright 2026 The pridec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pridec/dec.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"
#include "pridec/error.h"

namespace pridec {
namespace {

// Two arms, two models with opposite optimal arms and loss gap 1/2.
ModelClass Opposed() { return MabClass({{0.8, -0.2}, {-0.2, 0.8}}); }

Model Midpoint(const ModelClass& c) {
  const Model* ms[] = {&c.model(0), &c.model(1)};
  const double w[] = {0.5, 0.5};
  return Model::Mixture(ms, w);
}

TEST(OffsetPacTest, SingletonIsZero) {
  const int member[] = {1};
  const ModelClass one = Opposed().Subclass(member);
  const DecCertificate c = OffsetPacDecLdp(one, one.model(0), 3.0);
  EXPECT_EQ(c.value, 0.0);
  EXPECT_DOUBLE_EQ(c.p[one.OptimalDecision(0)], 1.0);
}

TEST(OffsetPacTest, ZeroGammaIsMatrixGame) {
  // Pure-strategy enumeration of [[0, 1/2], [1/2, 0]] gives 1/4.
  const ModelClass c = Opposed();
  EXPECT_NEAR(OffsetPacDecLdp(c, Midpoint(c), 0.0).value, 0.25, 1e-12);
  EXPECT_NEAR(OffsetDecHellinger(c, Midpoint(c), 0.0, false).value, 0.25, 1e-12);
}

TEST(OffsetPacTest, FrozenGridValues) {
  // Dual grid with step 1/200.
  const ModelClass c = Opposed();
  const Model ref = Midpoint(c);
  EXPECT_NEAR(OffsetPacDecLdp(c, ref, 1.0).value, 0.1875, 1e-9);
  EXPECT_NEAR(OffsetPacDecLdp(c, ref, 100.0).value, -6.0, 1e-9);
  // Primal (p, q) grid with step 0.05.
  EXPECT_NEAR(OffsetDecHellinger(c, ref, 100.0, false).value, -3.7452341384, 1e-9);
}

TEST(OffsetPacTest, MatchesDualGrid) {
  CounterRng rng(41);
  for (int i = 0; i < 5; ++i) {
    const auto inst = oracle::MakeRandomInstance(rng, 3, 2, 2, 3);
    const DecTable t = LdpTable(inst.cls, inst.ref);
    for (double g : {0.5, 2.0}) {
      EXPECT_NEAR(OffsetPacDecLdp(inst.cls, inst.ref, g).value,
                  oracle::OffsetPacGrid(t, g, 20), 0.02);
      EXPECT_NEAR(OffsetRegDecLdp(inst.cls, inst.ref, g).value,
                  oracle::OffsetRegGrid(t, g, 20), 0.02);
    }
  }
}

TEST(OffsetCertificateTest, ReEvaluates) {
  CounterRng rng(43);
  const auto inst = oracle::MakeRandomInstance(rng, 4, 3, 3, 3);
  const DecTable t = LdpTable(inst.cls, inst.ref);
  const DecCertificate pac = SolveOffsetPac(t, 1.5);
  EXPECT_NEAR(OffsetObjective(t, 1.5, pac.p, pac.q), pac.value, 1e-9);
  const DecCertificate reg = SolveOffsetReg(t, 1.5);
  EXPECT_NEAR(OffsetRegObjective(t, 1.5, reg.q), reg.value, 1e-9);
  EXPECT_EQ(pac.mode, CertMode::kExactLp);
  EXPECT_TRUE(pac.upper_bound_only);
}

TEST(ConstrainedTest, VacuousConstraintIsMatrixGame) {
  const ModelClass c = Opposed();
  EXPECT_NEAR(ConstrainedPacDecLdp(c, c.model(0), 1.0).value, 0.25, 1e-12);
}

TEST(ConstrainedTest, OnlyReferenceFeasible) {
  const ModelClass c = Opposed();
  EXPECT_NEAR(ConstrainedPacDecLdp(c, c.model(0), 0.0).value, 0.0, 1e-12);
}

TEST(ConstrainedTest, MatchesPrimalGrid) {
  CounterRng rng(47);
  for (int i = 0; i < 4; ++i) {
    const auto inst = oracle::MakeRandomInstance(rng, 3, 2, 1, 2);
    const DecTable t = LdpTable(inst.cls, inst.cls.model(0));
    for (double eps : {0.1, 0.3}) {
      const DecCertificate c = SolveConstrained(t, eps);
      EXPECT_EQ(c.mode, CertMode::kExactEnum);
      const double grid = oracle::ConstrainedPrimalGrid(t, eps, 20);
      EXPECT_LE(c.value, grid + 1e-9);
      EXPECT_NEAR(c.value, grid, 0.02);
      EXPECT_NEAR(ConstrainedObjective(t, eps, c.p, c.q), c.value, 1e-9);
    }
  }
}

TEST(ConstrainedTest, HeuristicIsAnUpperBound) {
  CounterRng rng(53);
  const auto inst = oracle::MakeRandomInstance(rng, 4, 3, 2, 3);
  SearchConfig heuristic;
  heuristic.exact_model_cap = 0;
  for (double eps : {0.05, 0.2}) {
    const DecCertificate exact = ConstrainedPacDecLdp(inst.cls, inst.cls.model(1), eps);
    const DecCertificate h = ConstrainedPacDecLdp(inst.cls, inst.cls.model(1), eps, heuristic);
    EXPECT_EQ(h.mode, CertMode::kHeuristicUpper);
    EXPECT_GE(h.value, exact.value - 1e-9);
  }
}

TEST(ConstrainedTest, Sandwich) {
  CounterRng rng(59);
  for (int i = 0; i < 5; ++i) {
    const auto inst = oracle::MakeRandomInstance(rng, 3, 3, 2, 3);
    const Model& ref = inst.cls.model(0);
    for (double eps : {0.1, 0.3}) {
      const double value = ConstrainedPacDecLdp(inst.cls, ref, eps).value;
      EXPECT_GE(value, OffsetPacDecLdp(inst.cls, ref, 1.0 / (eps * eps)).value - 1e-6);
      for (double g : {1.0, 4.0, 16.0, 64.0}) {
        EXPECT_LE(value, OffsetPacDecLdp(inst.cls, ref, g).value + g * eps * eps + 1e-6);
      }
    }
  }
}

TEST(QuantileLossTest, Examples) {
  EXPECT_DOUBLE_EQ(QuantileLoss({0, 1, 0}, {0.2, 0.7, 0.1}, 0.3), 0.7);
  EXPECT_DOUBLE_EQ(QuantileLoss({0.5, 0.5}, {0, 1}, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(QuantileLoss({0.2, 0.8, 0.0}, {0.4, 0.9, 0.1}, 1.0), 0.4);
}

TEST(QuantilePacTest, CertificateReEvaluates) {
  const ModelClass c = CanonicalMab(3);
  const DecCertificate cert = QuantilePacDec(c, c.model(0), 0.3, 0.5);
  const DecTable t = LdpTable(c, c.model(0));
  EXPECT_NEAR(QuantileObjective(t, 0.3, 0.5, cert.p, cert.q), cert.value, 1e-9);
}

TEST(LocalDecTest, Examples) {
  const ModelClass c = Opposed();
  const int member[] = {0};
  EXPECT_DOUBLE_EQ(LocalDec(c.Subclass(member), 0, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(LocalDec(c, 0, 0.0), 0.0);
  // TV between the two models is 1/2 under either arm.
  EXPECT_DOUBLE_EQ(LocalDec(c, 0, 0.49), 0.0);
  EXPECT_NEAR(LocalDec(c, 0, 0.5), 0.5, 1e-12);
}

TEST(TvModulusTest, TwoPoint) {
  const ModelClass c = Opposed();
  EXPECT_NEAR(TvModulus(c, 0, 0.5, {1.0, 3.0}), 2.0, 1e-12);
  EXPECT_NEAR(TvModulus(c, 0, 0.1, {1.0, 3.0}), 0.0, 1e-12);
}

TEST(FractionalCoveringTest, Examples) {
  EXPECT_DOUBLE_EQ(FractionalCovering(MabClass({{0.1, 0.3}}), 0.0).n_frac, 1.0);
  for (int k = 2; k <= 6; ++k) {
    EXPECT_NEAR(FractionalCovering(CanonicalMab(k), 0.5).n_frac, k, 1e-9);
  }
  EXPECT_NEAR(FractionalCovering(MabClass({{0.9, 0.8, -1}, {0.8, -1, 0.9}}), 0.1).n_frac,
              1.0, 1e-9);
}

QueryModelClass TwoDistributions() {
  const FiniteSpace z = FiniteSpace::Indexed(2);
  return StatisticalQueryClass({FiniteDist(z, {0.8, 0.2}), FiniteDist(z, {0.2, 0.8})},
                               {{1, 0}}, FiniteSpace::Indexed(2), {{0, 1}, {1, 0}});
}

RandomizedQueryModel EvenMixture(const QueryModelClass& q) {
  RandomizedQueryModel mu(1);
  mu[0].prob = {0.5, 0.5};
  mu[0].values = {q.Response(0, 0), q.Response(1, 0)};
  return mu;
}

TEST(SqDecTest, WideToleranceIsMatrixGame) {
  const QueryModelClass q = TwoDistributions();
  EXPECT_NEAR(SqDec(q, EvenMixture(q), 0.3, 0.7).value, 0.5, 1e-12);
}

TEST(SqDecTest, Singleton) {
  const QueryModelClass q = TwoDistributions();
  EXPECT_DOUBLE_EQ(SqDec(q, AsRandomized(q, 0), 0.0, 0.1).value, 0.0);
}

TEST(SqDecTest, MatchesGrid) {
  const QueryModelClass q = TwoDistributions();
  const RandomizedQueryModel mu = EvenMixture(q);
  for (double tau : {0.1, 0.7}) {
    for (double eps : {0.3, 0.8}) {
      EXPECT_NEAR(SqDec(q, mu, eps, tau).value,
                  oracle::ConstrainedPrimalGrid(SqTable(q, mu, tau), eps, 20), 1e-9);
    }
  }
}

TEST(RobustOffsetTest, ZeroBetaIsHellinger) {
  CounterRng rng(61);
  const auto inst = oracle::MakeRandomInstance(rng, 3, 2, 1, 3);
  for (bool regret : {false, true}) {
    EXPECT_NEAR(RobustOffsetDec(inst.cls, inst.ref, 2.0, 0.0, regret).value,
                OffsetDecHellinger(inst.cls, inst.ref, 2.0, regret).value, 1e-9);
  }
}

TEST(RobustOffsetTest, FullContaminationIsMatrixGame) {
  const ModelClass c = Opposed();
  EXPECT_NEAR(RobustOffsetDec(c, Midpoint(c), 5.0, 1.0, false).value, 0.25, 1e-12);
  const DecTable t = RobustTable(c, Midpoint(c), 1.0);
  for (const auto& row : t.div) {
    for (double d : row) EXPECT_EQ(d, 0.0);
  }
}

TEST(RobustOffsetTest, FrozenGridValue) {
  // Dual grid (step 1/200) over a P' grid with step 1e-3.
  const ModelClass c = Opposed();
  EXPECT_NEAR(RobustOffsetDec(c, Midpoint(c), 4.0, 0.2, false).value, 0.2268209534, 1e-9);
  EXPECT_THROW(RobustOffsetDec(c, Midpoint(c), 4.0, 1.2, false), Error);
}

TEST(CorrelationTest, SelfIsZero) {
  const FiniteSpace z = FiniteSpace::Indexed(3);
  const FiniteDist d(z, {0.2, 0.3, 0.5});
  EXPECT_NEAR(PairwiseCorrelation(d, d, d), 0.0, 1e-15);
  EXPECT_THROW(PairwiseCorrelation(d, d, FiniteDist(z, {0.5, 0.5, 0.0})), Error);
}

TEST(CorrelationTest, Parity) {
  for (int d : {2, 3}) {
    const ParityInstance p = ParityClass(d, 0.5);
    const FiniteDist ref = p.reference.Dist(0);
    EXPECT_NEAR(PairwiseCorrelation(p.cls.model(0).Dist(0), p.cls.model(0).Dist(0), ref),
                0.5, 1e-12);
    EXPECT_NEAR(PairwiseCorrelation(p.cls.model(0).Dist(0), p.cls.model(1).Dist(0), ref),
                -0.5 / ((1 << d) - 1), 1e-12);
  }
}

TEST(CorrelationTest, MinCorrelationFindsParityFamily) {
  const ParityInstance p = ParityClass(2, 0.5);
  const CorrelationReport r = MinCorrelation(p.cls, 0.1, {p.reference.Dist(0)});
  EXPECT_EQ(r.reference, 0);
  EXPECT_GE(r.family.size(), 2u);
  EXPECT_TRUE(std::isfinite(r.eps_correlated_at));
}

TEST(FixedPointTest, ScalarCase) {
  const FixedPointResult r = SolveFixedPointU({{1.0}}, {1.0}, 0.5);
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.u[0][0], 1.0 / 1.5, 1e-6);
}

TEST(FixedPointTest, SymmetricCase) {
  for (double l0 : {0.25, 0.5, 2.0}) {
    const FixedPointResult r = SolveFixedPointU({{1, 0}, {-1, 0}, {0, 1}, {0, -1}},
                                                {0.25, 0.25, 0.25, 0.25}, l0);
    EXPECT_NEAR(r.u[0][0], 2.0 / (1.0 + 2.0 * l0), 1e-6);
    EXPECT_NEAR(r.u[0][1], 0.0, 1e-9);
    EXPECT_LE(r.residual, 1e-8);
    EXPECT_LE(r.trace_expect, 2.0);
  }
}

TEST(HalfspaceTest, ZeroMap) {
  const FiniteSpace z = FiniteSpace::Indexed(3);
  const LDictionary d = GaussianHalfspaceDictionary(z, {{0, 0}, {0, 0}, {0, 0}}, 20, 1);
  for (const ScalarFn& l : d.entries()) EXPECT_DOUBLE_EQ(l.Max(), 0.0);
}

TEST(HalfspaceTest, SignSymmetry) {
  constexpr int kN = 10000;
  const FiniteSpace z = FiniteSpace::Indexed(2);
  const LDictionary d = GaussianHalfspaceDictionary(z, {{1.0}, {1.0}}, kN, 9);
  int ones = 0;
  for (const ScalarFn& l : d.entries()) ones += l.Min() == 1.0;
  // Four standard deviations of a Binomial(kN, 1/2).
  EXPECT_NEAR(ones, kN / 2, 200);
}

TEST(HalfspaceTest, RejectsLongVectors) {
  const FiniteSpace z = FiniteSpace::Indexed(1);
  EXPECT_THROW(GaussianHalfspaceDictionary(z, {{1.0, 1.0}}, 5, 1), Error);
}

}  // namespace
}  // namespace pridec
