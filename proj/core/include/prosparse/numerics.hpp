#pragma once

#include <variant>

#include "prosparse/types.hpp"

namespace prosparse {

/** e^{2 pi i k / n}, with the phase reduced to an exact integer ratio first so
 *  equal phases mod n give bit-identical values. */
Complex root_of_unity(Index k, Index n);

/** Unitary DFT, direct O(N^2) evaluation.
 *
 *  Forward maps coefficients to samples: out[n] = sum_m v[m] e^{+2 pi i n m / N} / sqrt(N),
 *  so the forward transform of a spike is a flat vector of 1/sqrt(N). The inverse
 *  conjugates the kernel. Both directions preserve the 2-norm.
 */
ComplexVec dft(const ComplexVec& v, bool inverse = false);

/** Rectangular K x (K+1) Toeplitz slice of a sample sequence.
 *
 *  entries(i, j) = y[start + order + i - j], indices reduced mod source_length
 *  when periodic. Row i therefore holds samples start+order+i down to start+i,
 *  and the block consumes the 2*order samples starting at start.
 */
struct ToeplitzSystem {
  Index order = 0;          // K, number of rows
  Index start = 0;          // first sample index consumed
  Index source_length = 0;  // N of the originating signal
  bool periodic = false;
  ComplexMat entries;       // K x (K+1)
};

ToeplitzSystem build_toeplitz(const ComplexVec& y, Index order, Index start, bool periodic);

/** Annihilating vector of a Toeplitz slice, scaled so h[0] = 1. */
struct NullspaceVector {
  ComplexVec h;     // length order+1
  Index rank = 0;   // effective rank, equals order on success
};

/** SVD-based nullspace extraction.
 *
 *  Effective rank counts singular values above rank_tol relative to the largest.
 *  Rank below the declared order reports DegenerateRank (with the rank as payload),
 *  which callers treat as "this window holds fewer modes than asked for".
 *
 *  A non-positive rank_tol skips the rank gate and hands back the trailing
 *  singular vector regardless; only callers that verify the fit downstream
 *  (root snapping, weight floor, window reproduction) should do that.
 */
std::variant<NullspaceVector, Reject> nullspace_vector(const ToeplitzSystem& t, double rank_tol);

/** |P(x)| on the N-th root grid x = e^{2 pi i m / N}, m = 0..N-1,
 *  where P(x) = x^K + h[1] x^{K-1} + ... + h[K] and h[0] = 1.
 */
RealVec eval_poly_on_root_grid(const ComplexVec& h, Index n);

/** |P(x)| at an arbitrary list of candidate nodes. */
RealVec eval_poly_at_nodes(const ComplexVec& h, const ComplexVec& nodes);

struct WeightSolution {
  ComplexVec weights;
  double residual = 0.0;  // 2-norm of the least-squares misfit
};

/** Least-squares weights for samples[i] = sum_k w_k roots_k^{start+i}.
 *
 *  Powers are referenced to the global index start so the weights are the ones
 *  valid for the whole signal, not just the local window. Throws invalid_argument
 *  when two roots sit closer than 1e-9; the Vandermonde system is singular there
 *  and the caller should have rejected the root set already.
 */
WeightSolution solve_weights(const ComplexVec& roots, const ComplexVec& samples, Index start);

/** solve_weights specialised to exact root-grid nodes e^{2 pi i m / N}.
 *  Powers are computed from integer phases, so no drift for large exponents.
 */
WeightSolution solve_weights_on_grid(const std::vector<Index>& grid, Index n,
                                     const ComplexVec& samples, Index start);

}  // namespace prosparse
