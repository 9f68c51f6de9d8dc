#include <prosparse/numerics.hpp>

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

using namespace prosparse;

namespace {

ComplexVec random_vec(Index n, std::uint64_t seed) {
  Rng rng(seed);
  ComplexVec v(n);
  for (Index i = 0; i < n; ++i) v[i] = Complex{rng.normal(), rng.normal()};
  return v;
}

}  // namespace

TEST(Dft, MatchesDirectDefinition) {
  for (Index n : {1, 2, 3, 5, 8, 12, 16, 33}) {
    const ComplexVec v = random_vec(n, 100 + static_cast<std::uint64_t>(n));
    for (bool inverse : {false, true}) {
      const ComplexVec got = dft(v, inverse);
      const ComplexVec want = oracles::naive_dft(v, inverse);
      ASSERT_EQ(got.size(), n);
      EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-12 * v.norm() + 1e-14)
          << "n=" << n << " inverse=" << inverse;
    }
  }
}

TEST(Dft, SpikeSynthesizesFlatSpectrum) {
  const Index n = 16;
  ComplexVec spike = ComplexVec::Zero(n);
  spike[0] = 1.0;
  const ComplexVec flat = dft(spike);
  for (Index i = 0; i < n; ++i) {
    EXPECT_NEAR(flat[i].real(), 1.0 / std::sqrt(16.0), 1e-15);
    EXPECT_NEAR(flat[i].imag(), 0.0, 1e-15);
  }
}

TEST(Dft, UnitaryRoundTrip) {
  const ComplexVec v = random_vec(24, 7);
  EXPECT_NEAR(dft(v).norm(), v.norm(), 1e-12);
  EXPECT_LT((dft(dft(v), true) - v).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(RootOfUnity, EqualResiduesAreBitIdentical) {
  const Index n = 12;
  for (Index k = 0; k < n; ++k) {
    const Complex a = root_of_unity(k, n);
    const Complex b = root_of_unity(k + 5 * n, n);
    EXPECT_EQ(a.real(), b.real());
    EXPECT_EQ(a.imag(), b.imag());
    EXPECT_NEAR(std::abs(a), 1.0, 1e-15);
  }
  EXPECT_EQ(root_of_unity(0, n), (Complex{1.0, 0.0}));
}

TEST(RootOfUnity, ProductAddsPhases) {
  const Index n = 40;
  const Complex a = root_of_unity(7, n);
  const Complex b = root_of_unity(13, n);
  EXPECT_LT(std::abs(a * b - root_of_unity(20, n)), 1e-15);
}

TEST(Toeplitz, LayoutOnKnownSequence) {
  ComplexVec y(5);
  y << 10.0, 20.0, 30.0, 40.0, 50.0;
  const ToeplitzSystem t = build_toeplitz(y, 2, 0, false);
  ASSERT_EQ(t.entries.rows(), 2);
  ASSERT_EQ(t.entries.cols(), 3);
  // Row i holds samples start+order+i down to start+i.
  EXPECT_EQ(t.entries(0, 0).real(), 30.0);
  EXPECT_EQ(t.entries(0, 1).real(), 20.0);
  EXPECT_EQ(t.entries(0, 2).real(), 10.0);
  EXPECT_EQ(t.entries(1, 0).real(), 40.0);
  EXPECT_EQ(t.entries(1, 1).real(), 30.0);
  EXPECT_EQ(t.entries(1, 2).real(), 20.0);
}

TEST(Toeplitz, PeriodicWrapReducesIndices) {
  ComplexVec y(5);
  y << 10.0, 20.0, 30.0, 40.0, 50.0;
  const ToeplitzSystem t = build_toeplitz(y, 2, 3, true);
  EXPECT_EQ(t.entries(0, 0).real(), 10.0);  // y[5 mod 5]
  EXPECT_EQ(t.entries(0, 1).real(), 50.0);
  EXPECT_EQ(t.entries(0, 2).real(), 40.0);
  EXPECT_EQ(t.entries(1, 0).real(), 20.0);  // y[6 mod 5]
  EXPECT_EQ(t.entries(1, 1).real(), 10.0);
  EXPECT_EQ(t.entries(1, 2).real(), 50.0);
}

TEST(Nullspace, AnnihilatesTheActiveModes) {
  const Index n = 16;
  const Complex r0 = root_of_unity(3, n);
  const Complex r1 = root_of_unity(11, n);
  ComplexVec y(6);
  for (Index t = 0; t < 6; ++t) y[t] = 2.0 * std::pow(r0, t) + Complex{0.0, 3.0} * std::pow(r1, t);
  const ToeplitzSystem sys = build_toeplitz(y, 2, 0, false);
  const auto out = nullspace_vector(sys, 1e-8);
  ASSERT_TRUE(std::holds_alternative<NullspaceVector>(out));
  const auto& ns = std::get<NullspaceVector>(out);
  EXPECT_EQ(ns.rank, 2);
  EXPECT_EQ(ns.h[0], (Complex{1.0, 0.0}));
  ComplexVec roots(2);
  roots << r0, r1;
  const RealVec mags = eval_poly_at_nodes(ns.h, roots);
  EXPECT_LT(mags.maxCoeff(), 1e-10);
}

TEST(Nullspace, ReportsRankDeficit) {
  const Index n = 16;
  const Complex r0 = root_of_unity(5, n);
  ComplexVec y(6);
  for (Index t = 0; t < 6; ++t) y[t] = 1.5 * std::pow(r0, t);
  const ToeplitzSystem sys = build_toeplitz(y, 2, 0, false);
  const auto out = nullspace_vector(sys, 1e-8);
  ASSERT_TRUE(std::holds_alternative<Reject>(out));
  const auto& rej = std::get<Reject>(out);
  EXPECT_EQ(rej.reason, RejectReason::DegenerateRank);
  EXPECT_EQ(rej.rank, 1);
}

TEST(Nullspace, NonPositiveTolBypassesTheRankGate) {
  const Index n = 16;
  const Complex r0 = root_of_unity(5, n);
  ComplexVec y(6);
  for (Index t = 0; t < 6; ++t) y[t] = 1.5 * std::pow(r0, t);
  const ToeplitzSystem sys = build_toeplitz(y, 2, 0, false);
  const auto out = nullspace_vector(sys, 0.0);
  ASSERT_TRUE(std::holds_alternative<NullspaceVector>(out));
  // The forced vector must still kill the one mode that is actually there.
  ComplexVec roots(1);
  roots << r0;
  EXPECT_LT(eval_poly_at_nodes(std::get<NullspaceVector>(out).h, roots).maxCoeff(), 1e-8);
}

TEST(PolyGrid, FrozenMagnitudesForLinearFactor) {
  ComplexVec h(2);
  h << Complex{1.0, 0.0}, Complex{-1.0, 0.0};  // P(x) = x - 1
  const RealVec mags = eval_poly_on_root_grid(h, 4);
  ASSERT_EQ(mags.size(), 4);
  EXPECT_LE(mags[0], 1e-15);
  EXPECT_NEAR(mags[1], std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(mags[2], 2.0, 1e-12);
  EXPECT_NEAR(mags[3], std::sqrt(2.0), 1e-12);
}

TEST(Weights, ReferencedToGlobalSampleIndex) {
  const Index n = 32;
  const std::vector<Index> grid = {4, 19};
  const Complex w0{0.7, -0.2};
  const Complex w1{-1.1, 0.4};
  ComplexVec y(n);
  for (Index t = 0; t < n; ++t)
    y[t] = w0 * root_of_unity(4 * t, n) + w1 * root_of_unity(19 * t, n);

  const Index start = 5;
  const ComplexVec window = y.segment(start, 4);
  ComplexVec roots(2);
  roots << root_of_unity(4, n), root_of_unity(19, n);

  const WeightSolution free = solve_weights(roots, window, start);
  EXPECT_LT(std::abs(free.weights[0] - w0), 1e-10);
  EXPECT_LT(std::abs(free.weights[1] - w1), 1e-10);
  EXPECT_LT(free.residual, 1e-10);

  const WeightSolution snapped = solve_weights_on_grid(grid, n, window, start);
  EXPECT_LT(std::abs(snapped.weights[0] - w0), 1e-12);
  EXPECT_LT(std::abs(snapped.weights[1] - w1), 1e-12);
}

TEST(Weights, RejectsCoincidentRoots) {
  ComplexVec roots(2);
  roots << Complex{1.0, 0.0}, Complex{1.0, 1e-12};
  ComplexVec samples(4);
  samples << 1.0, 1.0, 1.0, 1.0;
  EXPECT_THROW(solve_weights(roots, samples, 0), std::invalid_argument);
}

TEST(Rng, FrozenStream) {
  Rng rng(99);
  const std::vector<Index> idx = rng.distinct_indices(16, 4);
  const std::vector<Index> want = {3, 6, 8, 10};
  EXPECT_EQ(idx, want);
}

TEST(Rng, SameSeedSameDraws) {
  Rng a(12345);
  Rng b(12345);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.next_u64(), b.next_u64());
  }
  EXPECT_EQ(a.uniform01(), b.uniform01());
  EXPECT_EQ(a.unit_phase(), b.unit_phase());
  EXPECT_EQ(a.normal(), b.normal());
}

TEST(Rng, DistinctIndicesAreSortedUniqueInRange) {
  Rng rng(5);
  for (int round = 0; round < 50; ++round) {
    const Index n = 3 + static_cast<Index>(rng.uniform_int(0, 60));
    const Index k = 1 + static_cast<Index>(rng.uniform_int(0, std::min<Index>(n, 8) - 1));
    const std::vector<Index> idx = rng.distinct_indices(n, k);
    ASSERT_EQ(static_cast<Index>(idx.size()), k);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      EXPECT_GE(idx[i], 0);
      EXPECT_LT(idx[i], n);
      if (i > 0) EXPECT_LT(idx[i - 1], idx[i]);
    }
  }
}

TEST(Rng, UnitPhaseHasUnitMagnitude) {
  Rng rng(77);
  for (int i = 0; i < 20; ++i) {
    EXPECT_NEAR(std::abs(rng.unit_phase()), 1.0, 1e-12);
  }
}
