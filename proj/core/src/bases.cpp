#include "prosparse/bases.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "prosparse/bp.hpp"
#include "prosparse/numerics.hpp"

namespace prosparse {

namespace {

constexpr double kSupportPeel = 1e-6;    // support threshold relative to the peak entry
constexpr double kDebiasReject = 1e-6;   // residual gate relative to the segment norm
constexpr double kMaxPreconditionCond = 1e12;

Complex unit_root(double angle) { return std::polar(1.0, angle); }

/** Caches the synthesis matrix and a full-pivot factorization for apply/solve. */
class DenseBasis : public Basis {
 public:
  explicit DenseBasis(ComplexMat mat) : mat_(std::move(mat)), lu_(mat_) {
    if (mat_.rows() == 0 || mat_.rows() != mat_.cols()) {
      throw SolverError("basis matrix must be square and non-empty");
    }
    if (!lu_.isInvertible()) {
      throw SolverError("basis matrix is singular");
    }
  }

  Index size() const override { return mat_.rows(); }
  ComplexVec apply(const ComplexVec& coeffs) const override {
    if (coeffs.size() != size()) throw SolverError("apply: coefficient length mismatch");
    return mat_ * coeffs;
  }
  ComplexVec solve(const ComplexVec& samples) const override {
    if (samples.size() != size()) throw SolverError("solve: sample length mismatch");
    return lu_.solve(samples);
  }
  ComplexVec atom(Index j) const override {
    if (j < 0 || j >= size()) throw SolverError("atom index out of range");
    return mat_.col(j);
  }
  ComplexMat dense() const override { return mat_; }

 protected:
  ComplexMat mat_;
  Eigen::FullPivLU<ComplexMat> lu_;
};

class FourierBasis : public Basis {
 public:
  explicit FourierBasis(Index n) : n_(n) {
    if (n <= 0) throw SolverError("basis size must be positive");
  }

  BasisKind kind() const override { return BasisKind::Fourier; }
  Index size() const override { return n_; }
  ComplexVec apply(const ComplexVec& coeffs) const override {
    if (coeffs.size() != n_) throw SolverError("apply: coefficient length mismatch");
    return dft(coeffs, false);
  }
  ComplexVec solve(const ComplexVec& samples) const override {
    if (samples.size() != n_) throw SolverError("solve: sample length mismatch");
    return dft(samples, true);
  }
  ComplexVec atom(Index j) const override {
    if (j < 0 || j >= n_) throw SolverError("atom index out of range");
    ComplexVec col(n_);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    for (Index i = 0; i < n_; ++i) col[i] = scale * root_of_unity(i * j, n_);
    return col;
  }
  ComplexMat dense() const override {
    ComplexMat m(n_, n_);
    for (Index j = 0; j < n_; ++j) m.col(j) = atom(j);
    return m;
  }

  bool segment_recoverable() const override { return true; }
  bool periodic_windows() const override { return true; }
  Index segment_need(Index k) const override {
    if (k <= 0) throw SolverError("segment_need: order must be positive");
    return 2 * k;
  }
  RecoverOutcome recover_segment(const ComplexVec& segment, Index start, Index k,
                                 const Tolerances& tol) const override {
    auto outcome = prony_fit(segment, k, n_, start, true, tol);
    if (auto* rej = std::get_if<Reject>(&outcome)) return *rej;
    return fourier_coeffs_from_model(std::get<PronyModel>(outcome), n_);
  }

 private:
  Index n_;
};

class CanonicalBasis : public Basis {
 public:
  explicit CanonicalBasis(Index n) : n_(n) {
    if (n <= 0) throw SolverError("basis size must be positive");
  }

  BasisKind kind() const override { return BasisKind::Canonical; }
  Index size() const override { return n_; }
  ComplexVec apply(const ComplexVec& coeffs) const override {
    if (coeffs.size() != n_) throw SolverError("apply: coefficient length mismatch");
    return coeffs;
  }
  ComplexVec solve(const ComplexVec& samples) const override {
    if (samples.size() != n_) throw SolverError("solve: sample length mismatch");
    return samples;
  }
  ComplexVec atom(Index j) const override {
    if (j < 0 || j >= n_) throw SolverError("atom index out of range");
    ComplexVec col = ComplexVec::Zero(n_);
    col[j] = Complex{1.0, 0.0};
    return col;
  }
  ComplexMat dense() const override { return ComplexMat::Identity(n_, n_); }
  std::optional<Index> support_length() const override { return 1; }

 private:
  Index n_;
};

class LocalFourierBasis : public Basis {
 public:
  LocalFourierBasis(Index n, Index l) : n_(n), l_(l) {
    if (n <= 0 || l <= 0 || n % l != 0) {
      throw SolverError("local fourier basis needs block length dividing the size");
    }
  }

  BasisKind kind() const override { return BasisKind::LocalFourier; }
  Index size() const override { return n_; }
  ComplexVec apply(const ComplexVec& coeffs) const override {
    if (coeffs.size() != n_) throw SolverError("apply: coefficient length mismatch");
    ComplexVec out(n_);
    for (Index b = 0; b < n_ / l_; ++b) {
      out.segment(b * l_, l_) = dft(coeffs.segment(b * l_, l_).eval(), false);
    }
    return out;
  }
  ComplexVec solve(const ComplexVec& samples) const override {
    if (samples.size() != n_) throw SolverError("solve: sample length mismatch");
    ComplexVec out(n_);
    for (Index b = 0; b < n_ / l_; ++b) {
      out.segment(b * l_, l_) = dft(samples.segment(b * l_, l_).eval(), true);
    }
    return out;
  }
  ComplexVec atom(Index j) const override {
    if (j < 0 || j >= n_) throw SolverError("atom index out of range");
    ComplexVec col = ComplexVec::Zero(n_);
    const Index b = j / l_;
    const Index k = j % l_;
    const double scale = 1.0 / std::sqrt(static_cast<double>(l_));
    for (Index r = 0; r < l_; ++r) col[b * l_ + r] = scale * root_of_unity(r * k, l_);
    return col;
  }
  ComplexMat dense() const override {
    ComplexMat m = ComplexMat::Zero(n_, n_);
    for (Index j = 0; j < n_; ++j) m.col(j) = atom(j);
    return m;
  }
  std::optional<Index> support_length() const override { return l_; }

 private:
  Index n_;
  Index l_;
};

class BandedBasis : public DenseBasis {
 public:
  BandedBasis(Index n, Index l, std::uint64_t seed) : DenseBasis(build(n, l, seed)), l_(l) {}

  BasisKind kind() const override { return BasisKind::Banded; }
  std::optional<Index> support_length() const override { return l_; }

 private:
  static ComplexMat build(Index n, Index l, std::uint64_t seed) {
    if (n <= 0 || l <= 0 || l > n) throw SolverError("banded basis needs 1 <= l <= n");
    Rng rng(seed);
    ComplexMat m = ComplexMat::Identity(n, n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = j + 1; i < std::min(j + l, n); ++i) {
        const double mag = 0.3 + 0.7 * rng.uniform01();
        m(i, j) = std::polar(mag, 2.0 * std::numbers::pi * rng.uniform01());
      }
    }
    return m;
  }

  Index l_;
};

FactorizedBasis dct_factorization(Index n) {
  FactorizedBasis fb;
  fb.n = n;
  fb.modes = 2 * n;
  fb.expansion = 2;
  fb.lambda.resize(n);
  const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(n));
  for (Index i = 0; i < n; ++i) {
    fb.lambda[i] = (i == 0) ? scale / std::sqrt(2.0) : scale;
  }
  fb.nodes.resize(2 * n);
  for (Index m = 0; m < n; ++m) {
    const double angle = std::numbers::pi * (static_cast<double>(m) + 0.5) / static_cast<double>(n);
    fb.nodes[m] = unit_root(-angle);
    fb.nodes[n + m] = unit_root(angle);
  }
  fb.mixing.resize(n);
  for (Index m = 0; m < n; ++m) {
    fb.mixing[m] = {{m, Complex{1.0, 0.0}}, {n + m, Complex{1.0, 0.0}}};
  }
  fb.validate();
  return fb;
}

ComplexMat dct_matrix(Index n) {
  ComplexMat m(n, n);
  const double scale = std::sqrt(2.0 / static_cast<double>(n));
  for (Index i = 0; i < n; ++i) {
    const double b = (i == 0) ? 1.0 / std::sqrt(2.0) : 1.0;
    for (Index j = 0; j < n; ++j) {
      const double angle = std::numbers::pi * static_cast<double>(i) *
                           (static_cast<double>(j) + 0.5) / static_cast<double>(n);
      m(i, j) = Complex{b * scale * std::cos(angle), 0.0};
    }
  }
  return m;
}

class DctBasis : public DenseBasis {
 public:
  explicit DctBasis(Index n) : DenseBasis(dct_matrix(n)), factorization_(dct_factorization(n)) {}

  BasisKind kind() const override { return BasisKind::Dct; }
  ComplexVec solve(const ComplexVec& samples) const override {
    if (samples.size() != size()) throw SolverError("solve: sample length mismatch");
    return mat_.transpose() * samples;  // real orthonormal rows
  }

  bool segment_recoverable() const override { return true; }
  Index segment_need(Index k) const override {
    if (k <= 0) throw SolverError("segment_need: order must be positive");
    return 4 * k;
  }
  RecoverOutcome recover_segment(const ComplexVec& segment, Index start, Index k,
                                 const Tolerances& tol) const override {
    return generalized_prony_fit(segment, start, factorization_, k, tol);
  }

 private:
  FactorizedBasis factorization_;
};

class FactorizedWrapper : public DenseBasis {
 public:
  explicit FactorizedWrapper(FactorizedBasis fb)
      : DenseBasis(checked(fb).dense_synthesis()), factorization_(std::move(fb)) {}

  BasisKind kind() const override { return BasisKind::Factorized; }
  bool segment_recoverable() const override { return true; }
  Index segment_need(Index k) const override {
    if (k <= 0) throw SolverError("segment_need: order must be positive");
    return 2 * factorization_.expansion * k;
  }
  RecoverOutcome recover_segment(const ComplexVec& segment, Index start, Index k,
                                 const Tolerances& tol) const override {
    return generalized_prony_fit(segment, start, factorization_, k, tol);
  }

 private:
  static FactorizedBasis& checked(FactorizedBasis& fb) {
    fb.validate();
    return fb;
  }
  FactorizedBasis factorization_;
};

ComplexMat gaussian_matrix(Index n, std::uint64_t seed) {
  if (n <= 0) throw SolverError("basis size must be positive");
  Rng rng(seed);
  ComplexMat m(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) m(i, j) = Complex{rng.normal(), 0.0};
  }
  return m;
}

Index gaussian_need(Index n, Index floor_len, double c1, Index k) {
  if (k <= 0) throw SolverError("segment_need: order must be positive");
  if (k >= n) return n;
  const double raw = c1 * static_cast<double>(k) *
                     std::log(static_cast<double>(n) / static_cast<double>(k));
  const Index capped = std::min<Index>(n, static_cast<Index>(std::ceil(raw)));
  // The log schedule dips for k near n; never go below the 2k samples that a
  // unique k-sparse determination needs, so sweeps terminate.
  return std::min<Index>(n, std::max({floor_len, capped, 2 * k}));
}

/** l1 segment decode shared by the basis and its calibration: pick the window
 *  rows, solve the equality-constrained l1 program, peel the support, and only
 *  accept when a least-squares refit on that support reproduces the segment.
 */
RecoverOutcome gaussian_recover(const ComplexMat& g, const ComplexVec& segment, Index start,
                                Index k, const Tolerances& tol) {
  const Index n = g.rows();
  const Index s = segment.size();
  if (s <= 0 || s > n || k <= 0) throw SolverError("gaussian recovery: bad window");
  ComplexMat rows(s, n);
  for (Index i = 0; i < s; ++i) rows.row(i) = g.row((start + i) % n);

  ComplexVec raw;
  if (s == n) {
    raw = Eigen::PartialPivLU<ComplexMat>(rows).solve(segment);
  } else {
    L1Options sub;
    sub.feas_tol = 1e-8;
    sub.max_iter = 1000;
    sub.trailing_window = 0;
    raw = l1_equality_solve(rows, segment, sub).x;
  }

  std::vector<Index> support = threshold_support(raw, kSupportPeel);
  if (static_cast<Index>(support.size()) > k) {
    std::stable_sort(support.begin(), support.end(), [&](Index a, Index b) {
      return std::abs(raw[a]) > std::abs(raw[b]);
    });
    support.resize(static_cast<std::size_t>(k));
    std::sort(support.begin(), support.end());
  }

  const DebiasResult fit = debias_on_support(rows, segment, support);
  if (fit.residual > kDebiasReject * segment.norm()) {
    return Reject{RejectReason::SegmentSolveFailed, -1};
  }
  double peak = 0.0;
  for (Index i = 0; i < fit.coeffs.size(); ++i) peak = std::max(peak, std::abs(fit.coeffs[i]));
  SparseCoeffs out;
  for (std::size_t j = 0; j < support.size(); ++j) {
    const Complex v = fit.coeffs[static_cast<Index>(j)];
    if (std::abs(v) > tol.weight_floor * peak) out.push_back({support[j], v});
  }
  return out;
}

class GaussianBasis : public DenseBasis {
 public:
  GaussianBasis(Index n, std::uint64_t seed, std::optional<GaussianCalibration> calibration)
      : DenseBasis(gaussian_matrix(n, seed)), calibration_(std::move(calibration)) {}

  BasisKind kind() const override { return BasisKind::Gaussian; }
  bool segment_recoverable() const override { return true; }
  bool periodic_windows() const override { return true; }
  Index segment_need(Index k) const override {
    if (!calibration_) {
      throw SolverError("gaussian basis has no calibration; run gaussian_calibrate first");
    }
    return gaussian_need(size(), calibration_->floor_len, calibration_->c1, k);
  }
  RecoverOutcome recover_segment(const ComplexVec& segment, Index start, Index k,
                                 const Tolerances& tol) const override {
    return gaussian_recover(mat_, segment, start, k, tol);
  }

 private:
  std::optional<GaussianCalibration> calibration_;
};

}  // namespace

ComplexVec Basis::apply(const ComplexVec& coeffs) const { return dense() * coeffs; }

ComplexVec Basis::solve(const ComplexVec& samples) const {
  return Eigen::FullPivLU<ComplexMat>(dense()).solve(samples);
}

ComplexVec Basis::atom(Index j) const {
  if (j < 0 || j >= size()) throw SolverError("atom index out of range");
  return dense().col(j);
}

ComplexVec Basis::apply_sparse(const SparseCoeffs& coeffs) const {
  ComplexVec out = ComplexVec::Zero(size());
  for (const auto& e : coeffs) {
    if (e.index < 0 || e.index >= size()) throw SolverError("sparse coefficient out of range");
    out += e.value * atom(e.index);
  }
  return out;
}

Index Basis::segment_need(Index) const {
  throw SolverError("basis is not segment-recoverable");
}

RecoverOutcome Basis::recover_segment(const ComplexVec&, Index, Index, const Tolerances&) const {
  throw SolverError("basis is not segment-recoverable");
}

const char* to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::Fourier: return "fourier";
    case BasisKind::Canonical: return "canonical";
    case BasisKind::Dct: return "dct";
    case BasisKind::LocalFourier: return "local-fourier";
    case BasisKind::Banded: return "banded";
    case BasisKind::Factorized: return "factorized";
    case BasisKind::Gaussian: return "gaussian";
  }
  return "unknown";
}

BasisPtr make_fourier(Index n) { return std::make_shared<FourierBasis>(n); }
BasisPtr make_canonical(Index n) { return std::make_shared<CanonicalBasis>(n); }
BasisPtr make_dct(Index n) { return std::make_shared<DctBasis>(n); }
BasisPtr make_local_fourier(Index n, Index l) {
  return std::make_shared<LocalFourierBasis>(n, l);
}
BasisPtr make_banded(Index n, Index l, std::uint64_t seed) {
  return std::make_shared<BandedBasis>(n, l, seed);
}
BasisPtr make_factorized(FactorizedBasis factorization) {
  return std::make_shared<FactorizedWrapper>(std::move(factorization));
}
BasisPtr make_gaussian(Index n, std::uint64_t seed,
                       std::optional<GaussianCalibration> calibration) {
  return std::make_shared<GaussianBasis>(n, seed, std::move(calibration));
}

GaussianCalibration gaussian_calibrate(Index n, std::uint64_t matrix_seed, Index k_min,
                                       Index k_max, double target_rate,
                                       std::uint64_t trial_seed, int trials_per_k) {
  if (n <= 0 || k_min <= 0 || k_max < k_min || k_max > n || trials_per_k <= 0) {
    throw SolverError("gaussian_calibrate: bad parameters");
  }
  const ComplexMat g = gaussian_matrix(n, matrix_seed);
  const Index floor_len =
      static_cast<Index>(std::ceil(3.0 * std::log(static_cast<double>(n))));
  const Tolerances tol;

  GaussianCalibration best;
  for (int step = 1; step <= 24; ++step) {
    const double c1 = 0.5 * step;
    std::vector<double> rates;
    double worst = 1.0;
    for (Index k = k_min; k <= k_max; ++k) {
      const Index s = gaussian_need(n, floor_len, c1, k);
      int hits = 0;
      Rng rng(trial_seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(step) +
              static_cast<std::uint64_t>(k));
      for (int t = 0; t < trials_per_k; ++t) {
        const std::vector<Index> support = rng.distinct_indices(n, k);
        ComplexVec coeffs = ComplexVec::Zero(n);
        for (Index idx : support) coeffs[idx] = rng.unit_phase();
        const Index start = rng.uniform_int(0, n - 1);
        ComplexVec segment(s);
        for (Index i = 0; i < s; ++i) segment[i] = g.row((start + i) % n) * coeffs;

        const RecoverOutcome got = gaussian_recover(g, segment, start, k, tol);
        const auto* rec = std::get_if<SparseCoeffs>(&got);
        if (rec == nullptr || rec->size() != support.size()) continue;
        bool match = true;
        for (std::size_t j = 0; j < support.size(); ++j) {
          if ((*rec)[j].index != support[j] ||
              std::abs((*rec)[j].value - coeffs[support[j]]) > 1e-6) {
            match = false;
            break;
          }
        }
        if (match) ++hits;
      }
      rates.push_back(static_cast<double>(hits) / trials_per_k);
      worst = std::min(worst, rates.back());
    }
    best = GaussianCalibration{c1, floor_len, target_rate, trials_per_k, trial_seed, rates};
    if (worst >= target_rate) return best;
  }
  return best;  // schedule grid exhausted; caller sees the achieved rates
}

Dictionary::Dictionary(BasisPtr left_basis, BasisPtr right_basis,
                       std::optional<ComplexMat> precondition_matrix)
    : left(std::move(left_basis)),
      right(std::move(right_basis)),
      precondition(std::move(precondition_matrix)) {
  if (!left || !right) throw SolverError("dictionary needs two bases");
  if (left->size() != right->size()) throw SolverError("dictionary bases disagree on size");
  if (!left->segment_recoverable()) {
    throw SolverError("dictionary left basis must be segment-recoverable");
  }
  if (!right->support_length()) {
    throw SolverError("dictionary right basis must have bounded atom support");
  }
  if (precondition) {
    if (precondition->rows() != left->size() || precondition->cols() != left->size()) {
      throw SolverError("precondition matrix size mismatch");
    }
    const Eigen::JacobiSVD<ComplexMat> svd(*precondition);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    const double smax = svd.singularValues()(0);
    if (!(smin > 0.0) || smax / smin > kMaxPreconditionCond) {
      throw SolverError("precondition matrix is too ill-conditioned");
    }
  }
}

ComplexVec Dictionary::synthesize(const SparseCoeffs& left_coeffs,
                                  const SparseCoeffs& right_coeffs) const {
  ComplexVec v = left->apply_sparse(left_coeffs) + right->apply_sparse(right_coeffs);
  if (precondition) return (*precondition) * v;
  return v;
}

ComplexMat Dictionary::dense() const {
  const Index n = size();
  ComplexMat m(n, 2 * n);
  m.leftCols(n) = left->dense();
  m.rightCols(n) = right->dense();
  if (precondition) return (*precondition) * m;
  return m;
}

Dictionary make_fourier_canonical(Index n) {
  return Dictionary(make_fourier(n), make_canonical(n));
}
Dictionary make_fourier_local(Index n, Index l) {
  return Dictionary(make_fourier(n), make_local_fourier(n, l));
}
Dictionary make_dct_canonical(Index n) { return Dictionary(make_dct(n), make_canonical(n)); }
Dictionary make_gaussian_canonical(Index n, std::uint64_t seed,
                                   std::optional<GaussianCalibration> calibration) {
  return Dictionary(make_gaussian(n, seed, std::move(calibration)), make_canonical(n));
}

double mutual_coherence(const Dictionary& dict) {
  ComplexMat l = dict.left->dense();
  ComplexMat r = dict.right->dense();
  if (dict.precondition) {
    l = (*dict.precondition) * l;
    r = (*dict.precondition) * r;
  }
  for (Index j = 0; j < l.cols(); ++j) l.col(j) /= l.col(j).norm();
  for (Index j = 0; j < r.cols(); ++j) r.col(j) /= r.col(j).norm();
  double best = 0.0;
  for (Index i = 0; i < l.cols(); ++i) {
    for (Index j = 0; j < r.cols(); ++j) {
      best = std::max(best, std::abs(l.col(i).dot(r.col(j))));
    }
  }
  return best;
}

}  // namespace prosparse
