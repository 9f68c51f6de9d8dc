#include <prosparse/bases.hpp>

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

void check_operator_consistency(const BasisPtr& basis, std::uint64_t seed) {
  const Index n = basis->size();
  const ComplexVec v = random_vec(n, seed);
  const ComplexMat dense = basis->dense();

  EXPECT_LT((basis->apply(v) - dense * v).cwiseAbs().maxCoeff(), 1e-10 * (1.0 + v.norm()));
  EXPECT_LT((basis->apply(basis->solve(v)) - v).cwiseAbs().maxCoeff(), 1e-9 * (1.0 + v.norm()));
  for (Index j : {Index{0}, n / 2, n - 1}) {
    EXPECT_LT((basis->atom(j) - dense.col(j)).cwiseAbs().maxCoeff(), 1e-12);
  }
  SparseCoeffs sparse = {{1, Complex{0.5, -1.0}}, {n - 1, Complex{0.0, 2.0}}};
  ComplexVec scattered = ComplexVec::Zero(n);
  scattered[1] = sparse[0].value;
  scattered[n - 1] = sparse[1].value;
  EXPECT_LT((basis->apply_sparse(sparse) - dense * scattered).cwiseAbs().maxCoeff(), 1e-10);
}

}  // namespace

TEST(Bases, OperatorsAgreeWithDenseForms) {
  check_operator_consistency(make_fourier(12), 1);
  check_operator_consistency(make_canonical(9), 2);
  check_operator_consistency(make_dct(16), 3);
  check_operator_consistency(make_local_fourier(16, 4), 4);
  check_operator_consistency(make_banded(16, 3, 99), 5);
  check_operator_consistency(make_gaussian(12, 42), 6);
}

TEST(Bases, FourierSegmentRecoveryWrapsCyclically) {
  const Index n = 32;
  const BasisPtr fourier = make_fourier(n);
  EXPECT_TRUE(fourier->segment_recoverable());
  EXPECT_TRUE(fourier->periodic_windows());
  EXPECT_EQ(fourier->segment_need(3), 6);

  ComplexVec c = ComplexVec::Zero(n);
  c[6] = Complex{1.0, -0.5};
  c[25] = Complex{0.0, 2.0};
  const ComplexVec y = fourier->apply(c);

  const Index start = 30;  // window 30,31,0,1
  ComplexVec seg(4);
  for (Index i = 0; i < 4; ++i) seg[i] = y[(start + i) % n];
  const auto out = fourier->recover_segment(seg, start, 2, Tolerances{});
  ASSERT_TRUE(std::holds_alternative<SparseCoeffs>(out));
  const auto& got = std::get<SparseCoeffs>(out);
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[0].index, 6);
  EXPECT_LT(std::abs(got[0].value - c[6]), 1e-9);
  EXPECT_EQ(got[1].index, 25);
  EXPECT_LT(std::abs(got[1].value - c[25]), 1e-9);
}

TEST(Bases, DctMatrixIsTheOrthonormalCosineBank) {
  // Synthesis convention: the half-sample shift rides on the coefficient
  // index, so sample t of atom j is b_t sqrt(2/n) cos(pi t (j + 1/2) / n).
  // That is what lets a window of samples read as powers of one node per
  // active coefficient.
  const Index n = 16;
  const ComplexMat d = make_dct(n)->dense();
  EXPECT_LT(d.imag().cwiseAbs().maxCoeff(), 1e-14);
  const ComplexMat gram = d.adjoint() * d;
  EXPECT_LT((gram - ComplexMat::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
  for (Index t = 0; t < n; ++t) {
    EXPECT_NEAR(d(0, t).real(), 1.0 / std::sqrt(16.0), 1e-12);  // sample 0 weighs all atoms evenly
    const double bt = t == 0 ? 1.0 / std::sqrt(2.0) : 1.0;
    EXPECT_NEAR(d(t, 5).real(),
                bt * std::sqrt(2.0 / 16.0) * std::cos(M_PI * t * 5.5 / 16.0), 1e-12);
  }
}

TEST(Bases, DctSegmentRecoveryIncludingAdjacentFrequencies) {
  const Index n = 64;
  const BasisPtr dct = make_dct(n);
  EXPECT_TRUE(dct->segment_recoverable());
  EXPECT_FALSE(dct->periodic_windows());
  EXPECT_EQ(dct->segment_need(2), 8);

  // Far-apart and adjacent index pairs; the latter nearly collapses the
  // node-domain fit and exercises the rescue path.
  for (const std::vector<Index>& support :
       {std::vector<Index>{5, 40}, std::vector<Index>{10, 11}}) {
    ComplexVec c = ComplexVec::Zero(n);
    c[support[0]] = Complex{1.0, 0.0};
    c[support[1]] = Complex{-0.7, 0.2};
    const ComplexVec y = dct->apply(c);
    for (Index start : {Index{0}, Index{21}, n - 8}) {
      const auto out = dct->recover_segment(y.segment(start, 8), start, 2, Tolerances{});
      ASSERT_TRUE(std::holds_alternative<SparseCoeffs>(out))
          << "support {" << support[0] << "," << support[1] << "} start " << start;
      const auto& got = std::get<SparseCoeffs>(out);
      ASSERT_EQ(got.size(), 2u);
      EXPECT_EQ(got[0].index, support[0]);
      EXPECT_EQ(got[1].index, support[1]);
      EXPECT_LT(std::abs(got[0].value - c[support[0]]), 1e-8);
      EXPECT_LT(std::abs(got[1].value - c[support[1]]), 1e-8);
    }
  }
}

TEST(Bases, LocalFourierAtomsLiveInTheirBlock) {
  const Index n = 16;
  const Index l = 4;
  const BasisPtr lf = make_local_fourier(n, l);
  ASSERT_TRUE(lf->support_length().has_value());
  EXPECT_EQ(*lf->support_length(), l);
  for (Index j = 0; j < n; ++j) {
    const ComplexVec a = lf->atom(j);
    const Index block = j / l;
    for (Index t = 0; t < n; ++t) {
      if (t / l != block) EXPECT_EQ(std::abs(a[t]), 0.0) << "atom " << j << " leaks to " << t;
    }
  }
  const ComplexMat d = lf->dense();
  EXPECT_LT((d.adjoint() * d - ComplexMat::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(make_local_fourier(16, 5), SolverError);  // block must divide n
}

TEST(Bases, BandedHasUnitDiagonalAndBoundedSupport) {
  const Index n = 16;
  const Index l = 3;
  const BasisPtr banded = make_banded(n, l, 7);
  ASSERT_TRUE(banded->support_length().has_value());
  EXPECT_EQ(*banded->support_length(), l);
  const ComplexMat d = banded->dense();
  for (Index j = 0; j < n; ++j) {
    EXPECT_EQ(d(j, j), (Complex{1.0, 0.0}));
    for (Index t = 0; t < n; ++t) {
      const bool inside = t >= j && t < j + l;
      if (!inside) EXPECT_EQ(std::abs(d(t, j)), 0.0);
    }
  }
  EXPECT_FALSE(banded->segment_recoverable());
}

TEST(Bases, GaussianScheduleRespectsItsFloors) {
  GaussianCalibration calib;
  calib.c1 = 1.5;
  calib.floor_len = 13;
  const Index n = 64;
  const BasisPtr g = make_gaussian(n, 11, calib);
  ASSERT_TRUE(g->segment_recoverable());
  // Rows are iid, so a window that wraps past the end is as good as any other.
  EXPECT_TRUE(g->periodic_windows());
  Index prev = 0;
  for (Index k = 1; k <= n / 2; ++k) {
    const Index s = g->segment_need(k);
    EXPECT_GE(s, 2 * k) << "k=" << k;  // otherwise k modes are underdetermined
    EXPECT_GE(s, prev) << "k=" << k;   // schedule must be monotone
    EXPECT_LE(s, n);
    prev = s;
  }
  EXPECT_EQ(g->segment_need(n / 2), n);
}

TEST(Bases, UncalibratedGaussianCannotBeSwept) {
  // The capability flag stays on (calibration can be attached later), but
  // asking for a window length before calibrating must fail loudly.
  const BasisPtr g = make_gaussian(16, 3);
  EXPECT_TRUE(g->segment_recoverable());
  EXPECT_THROW(g->segment_need(1), SolverError);
  try {
    g->segment_need(2);
    FAIL() << "segment_need accepted an uncalibrated basis";
  } catch (const SolverError& e) {
    EXPECT_NE(std::string(e.what()).find("calibrat"), std::string::npos);
  }
}

TEST(Bases, GaussianCalibrationIsDeterministic) {
  const auto a = gaussian_calibrate(32, 7, 1, 2, 0.9, 11, 8);
  const auto b = gaussian_calibrate(32, 7, 1, 2, 0.9, 11, 8);
  EXPECT_EQ(a.c1, b.c1);
  EXPECT_EQ(a.rates, b.rates);
  ASSERT_EQ(a.rates.size(), 2u);
  for (double r : a.rates) EXPECT_GE(r, 0.9);
}

TEST(Dictionary, CoherenceMatchesBruteForce) {
  const Dictionary fc = make_fourier_canonical(16);
  EXPECT_NEAR(mutual_coherence(fc), 0.25, 1e-14);  // 1/sqrt(n)
  EXPECT_NEAR(mutual_coherence(fc), oracles::brute_coherence(fc), 1e-14);

  const Dictionary fl = make_fourier_local(16, 4);
  EXPECT_NEAR(mutual_coherence(fl), 0.5, 1e-12);  // sqrt(l/n)
  EXPECT_NEAR(mutual_coherence(fl), oracles::brute_coherence(fl), 1e-14);

  // The cosine/spike pair sits strictly below the sqrt(2/n) envelope.
  const Dictionary dc32 = make_dct_canonical(32);
  const double mu32 = mutual_coherence(dc32);
  EXPECT_NEAR(mu32, oracles::brute_coherence(dc32), 1e-14);
  EXPECT_NEAR(mu32, 0.24969886405129343, 1e-12);
  EXPECT_LT(mu32, std::sqrt(2.0 / 32.0));

  const Dictionary dc64 = make_dct_canonical(64);
  EXPECT_LT(mutual_coherence(dc64), std::sqrt(2.0 / 64.0));
}

TEST(Dictionary, SynthesizeMatchesDenseConcatenation) {
  const Dictionary dict = make_fourier_local(16, 4);
  SparseCoeffs left = {{2, Complex{1.0, 1.0}}, {9, Complex{-0.5, 0.0}}};
  SparseCoeffs right = {{5, Complex{0.0, 3.0}}};
  ComplexVec stacked = ComplexVec::Zero(32);
  stacked[2] = left[0].value;
  stacked[9] = left[1].value;
  stacked[16 + 5] = right[0].value;
  EXPECT_LT((dict.synthesize(left, right) - dict.dense() * stacked).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Dictionary, EnforcesSideCapabilities) {
  // Left side must be segment-recoverable.
  EXPECT_THROW((Dictionary{make_banded(16, 3, 1), make_canonical(16)}), SolverError);
  // Right side must have bounded atom support.
  EXPECT_THROW((Dictionary{make_fourier(16), make_fourier(16)}), SolverError);
  // Mismatched sizes.
  EXPECT_THROW((Dictionary{make_fourier(16), make_canonical(8)}), SolverError);
}

TEST(Dictionary, RejectsIllConditionedPrecondition) {
  ComplexMat bad = ComplexMat::Identity(8, 8);
  bad(7, 7) = 1e-15;
  EXPECT_THROW((Dictionary{make_fourier(8), make_canonical(8), bad}), SolverError);

  ComplexMat fine = ComplexMat::Identity(8, 8) * Complex{0.0, 2.0};
  const Dictionary dict{make_fourier(8), make_canonical(8), fine};
  SparseCoeffs left = {{1, Complex{1.0, 0.0}}};
  const ComplexVec y = dict.synthesize(left, {});
  EXPECT_LT((y - fine * make_fourier(8)->atom(1)).cwiseAbs().maxCoeff(), 1e-12);
}
