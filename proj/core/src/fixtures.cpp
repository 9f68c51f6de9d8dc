#include "prosparse/fixtures.hpp"

#include <algorithm>
#include <cmath>

#include "prosparse/numerics.hpp"

namespace prosparse {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw SolverError(what);
}

ComplexVec synthesize_fourier_pair(const SparseCoeffs& left, const SparseCoeffs& right, Index n) {
  ComplexVec y = ComplexVec::Zero(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (const auto& e : left) {
    for (Index i = 0; i < n; ++i) y[i] += e.value * scale * root_of_unity(i * e.index, n);
  }
  for (const auto& e : right) y[e.index] += e.value;
  return y;
}

double l1_norm(const SparseCoeffs& a, const SparseCoeffs& b) {
  double total = 0.0;
  for (const auto& e : a) total += std::abs(e.value);
  for (const auto& e : b) total += std::abs(e.value);
  return total;
}

}  // namespace

ComplexVec make_picket_fence_kernel(int d) {
  require(d >= 1, "picket fence kernel needs d >= 1");
  const Index n = Index{1} << (2 * d - 1);
  const Index spacing = Index{1} << d;

  ComplexVec comb = ComplexVec::Zero(n);
  for (Index i = 0; i < n; i += spacing) comb[i] = Complex{std::sqrt(2.0), 0.0};

  const ComplexVec spectrum = dft(comb, false);
  // The comb's spectrum must itself be a picket fence of ones; anything else
  // means the transform convention drifted. Snap to the exact pattern so the
  // kernel's support is exact too.
  const Index dual_spacing = Index{1} << (d - 1);
  ComplexVec snapped = ComplexVec::Zero(n);
  for (Index i = 0; i < n; ++i) {
    const Complex expected = (i % dual_spacing == 0) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
    require(std::abs(spectrum[i] - expected) <= 1e-10, "picket fence spectrum mismatch");
    snapped[i] = expected;
  }

  ComplexVec kernel(2 * n);
  kernel.head(n) = comb;
  kernel.tail(n) = -snapped;
  return kernel;
}

CounterexampleInstance make_bp_counterexample(int d) {
  require(d >= 4, "counterexample needs d >= 4 for a positive l1 gap");
  CounterexampleInstance out;
  out.d = d;
  out.n = Index{1} << (2 * d - 1);
  out.kernel = make_picket_fence_kernel(d);

  const Index n = out.n;
  const Index comb_spacing = Index{1} << d;
  const Index dual_spacing = Index{1} << (d - 1);
  const Index comb_count = n / comb_spacing;
  const Index k = static_cast<Index>(std::floor(std::sqrt(static_cast<double>(n))));

  // The k largest kernel entries: the whole sqrt(2) comb, then the earliest of
  // the unit spikes.
  PlantedInstance planted;
  for (Index j = 0; j < comb_count; ++j) {
    planted.left.push_back({j * comb_spacing, -2.0 * out.kernel[j * comb_spacing]});
  }
  require(k > comb_count, "counterexample support should extend past the comb");
  for (Index j = 0; j < k - comb_count; ++j) {
    planted.right.push_back({j * dual_spacing, -2.0 * out.kernel[n + j * dual_spacing]});
  }
  planted.samples = synthesize_fourier_pair(planted.left, planted.right, n);
  out.instance = std::move(planted);

  // The competitor is the planted representation plus the kernel: denser, but
  // cheaper in l1 because the kernel cancels the doubled comb.
  for (Index j = 0; j < comb_count; ++j) {
    const Index idx = j * comb_spacing;
    out.alt_left.push_back({idx, out.instance.left[static_cast<std::size_t>(j)].value +
                                     out.kernel[idx]});
  }
  for (Index i = 0; i < n; ++i) {
    Complex v = out.kernel[n + i];
    for (const auto& e : out.instance.right) {
      if (e.index == i) v += e.value;
    }
    if (std::abs(v) > 0.0) out.alt_right.push_back({i, v});
  }

  out.planted_l1 = l1_norm(out.instance.left, out.instance.right);
  out.alt_l1 = l1_norm(out.alt_left, out.alt_right);
  out.gap = out.planted_l1 - out.alt_l1;
  require(out.gap > 0.0, "counterexample gap must be positive");

  const ComplexVec alt_y = synthesize_fourier_pair(out.alt_left, out.alt_right, n);
  const double yscale = out.instance.samples.cwiseAbs().maxCoeff();
  require((alt_y - out.instance.samples).cwiseAbs().maxCoeff() <= 1e-10 * yscale,
          "counterexample representations disagree on the signal");

  const double root2 = std::sqrt(2.0);
  const double expect_planted = 2.0 * root2 * comb_count + 2.0 * (k - comb_count);
  const double expect_alt = root2 * comb_count + 2.0 * comb_count;
  require(std::abs(out.planted_l1 - expect_planted) <= 1e-9, "planted l1 drifted");
  require(std::abs(out.alt_l1 - expect_alt) <= 1e-9, "competitor l1 drifted");

  return out;
}

TwoSolutionInstance make_two_solution_instance(int d, std::uint64_t seed) {
  require(d >= 2, "two-solution instance needs d >= 2");
  TwoSolutionInstance out;
  out.d = d;
  out.n = Index{1} << (2 * d - 1);
  const ComplexVec kernel = make_picket_fence_kernel(d);

  std::vector<Index> positions;
  for (Index i = 0; i < kernel.size(); ++i) {
    if (std::abs(kernel[i]) > 0.0) positions.push_back(i);
  }
  const Index l = static_cast<Index>(positions.size());
  require(l % 2 == 0, "kernel support should split evenly");
  const Index k = l / 2;

  Rng rng(seed);
  const std::vector<Index> picks = rng.distinct_indices(l, k);
  std::vector<char> taken(static_cast<std::size_t>(l), 0);
  for (Index p : picks) taken[static_cast<std::size_t>(p)] = 1;

  PlantedInstance planted;
  for (Index p = 0; p < l; ++p) {
    const Index idx = positions[static_cast<std::size_t>(p)];
    if (taken[static_cast<std::size_t>(p)]) {
      // x0 copies the kernel on the chosen half.
      if (idx < out.n) {
        planted.left.push_back({idx, kernel[idx]});
      } else {
        planted.right.push_back({idx - out.n, kernel[idx]});
      }
    } else {
      // x1 = x0 - kernel lives on the complement.
      if (idx < out.n) {
        out.alt_left.push_back({idx, -kernel[idx]});
      } else {
        out.alt_right.push_back({idx - out.n, -kernel[idx]});
      }
    }
  }
  planted.samples = synthesize_fourier_pair(planted.left, planted.right, out.n);
  out.instance = std::move(planted);

  const ComplexVec alt_y = synthesize_fourier_pair(out.alt_left, out.alt_right, out.n);
  const double yscale = std::max(out.instance.samples.cwiseAbs().maxCoeff(), 1e-300);
  require((alt_y - out.instance.samples).cwiseAbs().maxCoeff() <= 1e-10 * yscale,
          "two-solution halves disagree on the signal");
  return out;
}

PlantedInstance make_random_planted_fourier(Index n, Index kp, Index kq, Rng& rng) {
  require(n >= 1 && kp >= 0 && kq >= 0 && kp <= n && kq <= n, "bad planted shape");
  PlantedInstance out;
  const std::vector<Index> left_support = rng.distinct_indices(n, kp);
  const std::vector<Index> right_support = rng.distinct_indices(n, kq);
  for (Index idx : left_support) out.left.push_back({idx, rng.unit_phase()});
  for (Index idx : right_support) out.right.push_back({idx, rng.unit_phase()});
  out.samples = synthesize_fourier_pair(out.left, out.right, n);
  return out;
}

PlantedInstance make_random_planted(const Dictionary& dict, Index kp, Index kq, Rng& rng) {
  const Index n = dict.size();
  require(kp >= 0 && kq >= 0 && kp <= n && kq <= n, "bad planted shape");
  PlantedInstance out;
  const std::vector<Index> left_support = rng.distinct_indices(n, kp);
  const std::vector<Index> right_support = rng.distinct_indices(n, kq);
  for (Index idx : left_support) out.left.push_back({idx, rng.unit_phase()});
  for (Index idx : right_support) out.right.push_back({idx, rng.unit_phase()});
  out.samples = dict.synthesize(out.left, out.right);
  return out;
}

}  // namespace prosparse
