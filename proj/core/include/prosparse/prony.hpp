#pragma once

#include <optional>
#include <variant>

#include "prosparse/numerics.hpp"
#include "prosparse/types.hpp"

namespace prosparse {

/** Exponential model y_n ~ sum_k weights[k] * roots[k]^n.
 *
 *  When the roots were matched against a candidate grid, grid_indices holds the
 *  matched positions (same order as roots) and resynthesis uses exact integer
 *  phase arithmetic; otherwise powers are accumulated numerically.
 */
struct PronyModel {
  Index order = 0;
  Index signal_length = 0;          // N used for grid phases (0 when off grid)
  ComplexVec roots;
  ComplexVec weights;
  std::vector<Index> grid_indices;  // empty for free (off-grid) fits

  bool on_grid() const { return !grid_indices.empty(); }

  /** Model samples for global indices start .. start+count-1. */
  ComplexVec resynthesize(Index start, Index count) const;
};

using PronyOutcome = std::variant<PronyModel, Reject>;

/** Fit an order-K exponential model to 2K consecutive samples.
 *
 *  segment holds samples start .. start+2K-1 of a length-n signal (the caller
 *  resolves any cyclic wraparound before slicing). With require_grid the roots
 *  must land on the N-th root-of-unity grid: a grid point qualifies when its
 *  polynomial magnitude is at most tol.root * (1 + sum |h_k|) and is among the
 *  K smallest over the grid; anything else rejects the window. Without
 *  require_grid the annihilator's roots are taken from a companion matrix and
 *  only distinctness is enforced.
 *
 *  A fit must also survive the weight floor and reproduce its own window to
 *  tol.resynth * max |segment|; those guards are what keep rejects reliable
 *  once the arithmetic is inexact.
 */
PronyOutcome prony_fit(const ComplexVec& segment, Index k, Index n, Index start,
                       bool require_grid, const Tolerances& tol);

/** prony_fit against an explicit candidate node list instead of the unitary
 *  root grid. grid_indices of the result index into nodes.
 */
PronyOutcome prony_fit_nodes(const ComplexVec& segment, Index k, const ComplexVec& nodes,
                             Index start, const Tolerances& tol);

/** Fourier coefficients c[m] = sqrt(N) * weight for an on-grid model, sorted by
 *  index. The scaling matches the unitary synthesis y = F c.
 */
SparseCoeffs fourier_coeffs_from_model(const PronyModel& model, Index n);

/** Synthesis operator in factored form Psi = Lambda * V * S, where Lambda is
 *  diagonal, V is the transposed Vandermonde of the node list (V(n, m) =
 *  nodes[m]^n) and S is a sparse mixing matrix with at most expansion nonzeros
 *  per column. A signal samples y = Psi c then obeys, entrywise,
 *  y_n / lambda_n = sum_m x_m nodes_m^n with x = S c, so a K-sparse c pumps at
 *  most expansion*K exponential modes into the normalized samples.
 */
struct FactorizedBasis {
  Index n = 0;                // signal length (rows of Psi)
  Index modes = 0;            // M, number of nodes / rows of S
  Index expansion = 1;        // D, max nonzeros per column of S
  ComplexVec lambda;          // length n, all nonzero
  ComplexVec nodes;           // length M, pairwise distinct
  // Column c of S as (row, value) pairs; column count equals n.
  std::vector<std::vector<std::pair<Index, Complex>>> mixing;

  /** Samples needed to pin down a K-sparse coefficient vector. */
  Index segment_need(Index k) const { return 2 * expansion * k; }

  ComplexMat dense_synthesis() const;

  /** Structural checks plus an invertibility estimate on the dense matrix.
   *  Throws invalid_argument on violation.
   */
  void validate() const;
};

/** Recover a sparse coefficient vector from consecutive samples of y = Psi c.
 *
 *  segment holds samples start .. start+2DK-1 (no wraparound). The fit runs at
 *  order DK against the node list; when the Toeplitz rank comes back r < DK the
 *  fit is retried at order r, since fewer modes than the worst case may be
 *  active (columns with under-full support, or a sparser c). Node weights are
 *  then folded back through the mixing matrix by least squares. When 2DK >= n
 *  the segment must be the entire signal and the routine degenerates to a dense
 *  solve of Psi c = y.
 */
std::variant<SparseCoeffs, Reject> generalized_prony_fit(const ComplexVec& segment, Index start,
                                                         const FactorizedBasis& basis, Index k,
                                                         const Tolerances& tol);

}  // namespace prosparse
