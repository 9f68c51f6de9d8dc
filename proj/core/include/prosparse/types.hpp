#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace prosparse {

using Index = Eigen::Index;
using Complex = std::complex<double>;
using ComplexVec = Eigen::VectorXcd;
using ComplexMat = Eigen::MatrixXcd;
using RealVec = Eigen::VectorXd;

/** One nonzero entry of a sparse coefficient vector. */
struct CoeffEntry {
  Index index = 0;
  Complex value{0.0, 0.0};
};

using SparseCoeffs = std::vector<CoeffEntry>;

/** Numerical knobs shared by the fitting and admission steps.
 *
 *  All thresholds are relative: rank against the leading singular value,
 *  root against 1 + sum |h_k|, the rest against the sup norm of the data
 *  they are applied to.
 */
struct Tolerances {
  double rank = 1e-8;          // Toeplitz rank decision
  double root = 1e-7;          // polynomial magnitude for root grid acceptance
  double zero = 1e-8;          // residual entries below this count as zero
  double weight_floor = 1e-9;  // recovered weights at or below this reject the fit
  double resynth = 1e-6;       // window resynthesis mismatch that rejects a fit
};

/** Why a window fit was discarded. Rejects are expected control flow,
 *  not errors: a rejected window simply contributes no solution.
 */
enum class RejectReason {
  DegenerateRank,        // Toeplitz rank below the declared order
  UnstableNormalization, // annihilator's leading entry too small to scale to 1
  RootCountMismatch,     // candidate roots found, but not exactly the declared order
  OffGridRoots,          // no candidate node looks like a root at all
  WeightUnderflow,       // a recovered weight sits at the noise floor
  WeightFitFailed,       // weights do not reproduce the window samples
  SegmentSolveFailed,    // sparse segment solve did not reach a usable solution
};

struct Reject {
  RejectReason reason;
  Index rank = -1;  // effective rank payload for DegenerateRank
};

const char* to_string(RejectReason r);

/** Hard invariant violation inside a solver. Unlike Reject this is a bug
 *  (or corrupted input) and surfaces as an exception.
 */
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/** Deterministic random source. Wraps mt19937_64 with explicit sampling
 *  arithmetic so streams are identical across standard libraries.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /** Uniform double in [0, 1). */
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /** Uniform integer in [lo, hi], inclusive. */
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  /** Standard normal via Box-Muller. */
  double normal();

  /** Unit-magnitude complex number with uniform phase. */
  Complex unit_phase();

  /** k distinct indices drawn uniformly from [0, n), returned sorted. */
  std::vector<Index> distinct_indices(Index n, Index k);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace prosparse
