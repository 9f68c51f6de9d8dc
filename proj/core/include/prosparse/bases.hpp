#pragma once

#include <memory>
#include <optional>
#include <variant>

#include "prosparse/prony.hpp"
#include "prosparse/types.hpp"

namespace prosparse {

enum class BasisKind { Fourier, Canonical, Dct, LocalFourier, Banded, Factorized, Gaussian };

const char* to_string(BasisKind kind);

using RecoverOutcome = std::variant<SparseCoeffs, Reject>;

/** A square invertible synthesis operator on C^N.
 *
 *  Two optional capabilities matter to the solvers. A basis with bounded atom
 *  support (support_length) can play the residual side: every atom touches at
 *  most that many consecutive samples. A segment-recoverable basis can
 *  reconstruct a k-sparse coefficient vector from segment_need(k) consecutive
 *  samples of its output; periodic_windows says whether those segments may wrap
 *  around the end of the signal.
 */
class Basis {
 public:
  virtual ~Basis() = default;

  virtual BasisKind kind() const = 0;
  virtual Index size() const = 0;

  /** Synthesis: coefficients to samples. */
  virtual ComplexVec apply(const ComplexVec& coeffs) const;
  /** Analysis: samples to coefficients (exact inverse of apply). */
  virtual ComplexVec solve(const ComplexVec& samples) const;
  /** Column j of the synthesis matrix. */
  virtual ComplexVec atom(Index j) const;
  virtual ComplexMat dense() const = 0;

  ComplexVec apply_sparse(const SparseCoeffs& coeffs) const;

  /** Max number of consecutive samples any atom touches; empty for global atoms. */
  virtual std::optional<Index> support_length() const { return std::nullopt; }

  virtual bool segment_recoverable() const { return false; }
  /** Samples needed to recover a k-sparse coefficient vector; throws when the
   *  basis is not segment-recoverable. */
  virtual Index segment_need(Index k) const;
  /** True when recovery segments may wrap cyclically. */
  virtual bool periodic_windows() const { return false; }
  /** Recover at most k coefficients from samples [start, start + segment.size())
   *  of the synthesized signal. */
  virtual RecoverOutcome recover_segment(const ComplexVec& segment, Index start, Index k,
                                         const Tolerances& tol) const;
};

using BasisPtr = std::shared_ptr<const Basis>;

BasisPtr make_fourier(Index n);
BasisPtr make_canonical(Index n);
BasisPtr make_dct(Index n);
/** Block-diagonal local Fourier atoms of length l; l must divide n. */
BasisPtr make_local_fourier(Index n, Index l);
/** Unit-diagonal lower-banded random basis; every atom lives in a window of l
 *  consecutive samples. */
BasisPtr make_banded(Index n, Index l, std::uint64_t seed);
/** Wraps an explicit node-domain factorization (diagonal times Vandermonde
 *  times mixing) as a segment-recoverable basis. */
BasisPtr make_factorized(FactorizedBasis factorization);

struct GaussianCalibration {
  double c1 = 0.0;
  Index floor_len = 0;
  double target_rate = 0.0;
  int trials_per_k = 0;
  std::uint64_t seed = 0;
  std::vector<double> rates;  // achieved per-order rates at the accepted c1
};

/** Dense iid-Gaussian basis. Segment recovery solves an l1 program on the
 *  selected rows, so the basis needs a calibration fixing the sample-count
 *  schedule before it can be swept.
 */
BasisPtr make_gaussian(Index n, std::uint64_t seed,
                       std::optional<GaussianCalibration> calibration = std::nullopt);

/** Smallest schedule constant c1 (on a step grid) whose Monte-Carlo windowed
 *  recovery rate meets target_rate for every order in [k_min, k_max], using the
 *  same matrix make_gaussian(n, matrix_seed) would build.
 */
GaussianCalibration gaussian_calibrate(Index n, std::uint64_t matrix_seed, Index k_min,
                                       Index k_max, double target_rate,
                                       std::uint64_t trial_seed, int trials_per_k = 40);

/** A union of two bases: samples = left coefficients + right coefficients in
 *  synthesis form, optionally pushed through a conditioning matrix a, i.e.
 *  y = a * (left x1 + right x2). left must be segment-recoverable and right
 *  must have bounded atom support. precondition, when present, must be well
 *  conditioned (condition number at most 1e12).
 */
struct Dictionary {
  BasisPtr left;
  BasisPtr right;
  std::optional<ComplexMat> precondition;

  Dictionary(BasisPtr left_basis, BasisPtr right_basis,
             std::optional<ComplexMat> precondition_matrix = std::nullopt);

  Index size() const { return left->size(); }
  ComplexVec synthesize(const SparseCoeffs& left_coeffs, const SparseCoeffs& right_coeffs) const;
  /** Horizontal concatenation [left right], preconditioned when applicable. */
  ComplexMat dense() const;
};

Dictionary make_fourier_canonical(Index n);
Dictionary make_fourier_local(Index n, Index l);
Dictionary make_dct_canonical(Index n);
Dictionary make_gaussian_canonical(Index n, std::uint64_t seed,
                                   std::optional<GaussianCalibration> calibration = std::nullopt);

/** Largest normalized inner product between columns from opposite sides. */
double mutual_coherence(const Dictionary& dict);

}  // namespace prosparse
