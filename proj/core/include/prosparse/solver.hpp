#pragma once

#include <cstddef>

#include "prosparse/types.hpp"

namespace prosparse {

/** Where a representation was found: the trivial all-residual seed, a direct
 *  window scan of the samples, a scan of the spectrum (whose findings are
 *  mapped back), or a direct basis inversion.
 */
struct Discovery {
  enum class Pass { Trivial, Direct, Dual, Inversion };
  Pass pass = Pass::Trivial;
  Index sweep_order = 0;  // model order of the scan that produced it
  Index window = -1;      // window start; -1 when not window-based
};

const char* to_string(Discovery::Pass pass);

/** One admitted representation y = sum(left) + sum(right) in dictionary form.
 *  left holds the segment-recoverable side, right the residual side;
 *  resynthesis_error is the sup-norm misfit against the input samples.
 */
struct SparseSolution {
  SparseCoeffs left;
  SparseCoeffs right;
  Discovery found;
  double resynthesis_error = 0.0;

  Index kp() const { return static_cast<Index>(left.size()); }
  Index kq() const { return static_cast<Index>(right.size()); }
};

std::vector<Index> support_of(const SparseCoeffs& coeffs);

/** Deduplicated representations in canonical order: total sparsity, then left
 *  sparsity, then lexicographic supports. Assembly keeps the first discovery of
 *  each support pair; a later discovery of the same supports whose coefficients
 *  disagree beyond match_tol (relative) raises SolverError, since the windows
 *  it came from would be contradicting each other.
 */
class SolutionSet {
 public:
  SolutionSet() = default;
  static SolutionSet assemble(std::vector<SparseSolution> discovered, double match_tol = 1e-8);

  const std::vector<SparseSolution>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const SparseSolution& operator[](std::size_t i) const { return items_[i]; }

  const SparseSolution* find(const std::vector<Index>& left_support,
                             const std::vector<Index>& right_support) const;
  SolutionSet filtered_by_total(Index k_max) const;

 private:
  std::vector<SparseSolution> items_;
};

struct SolveOptions {
  Tolerances tol;
  int threads = 1;
};

/** All sparse representations of y against the size-N Fourier/spike pair that
 *  pass the admission rule. Window scans run over every model order up to
 *  ceil(sqrt(N/2) - 1) and every cyclic window start; a second scan of the
 *  spectrum picks up the representations whose heavy side is the spike one.
 *  Within the admission region the returned set provably contains every
 *  representation present.
 */
SolutionSet prosparse_solve(const ComplexVec& y, const SolveOptions& opts = {});

/** prosparse_solve filtered to total sparsity at most k_max. */
SolutionSet total_sparsity_solve(const ComplexVec& y, Index k_max, const SolveOptions& opts = {});

/** Number of cyclic windows of window_len consecutive samples avoiding every
 *  listed spike position, by the cyclic gap formula. spikes must be sorted,
 *  distinct, in [0, n).
 */
Index count_clean_windows(Index n, Index window_len, const std::vector<Index>& spikes);

/** Guaranteed floor max(0, n - 2*kp*kq) for the clean-window count at model
 *  order kp against kq spikes. */
Index clean_window_floor(Index n, Index kp, Index kq);

}  // namespace prosparse
