#pragma once

#include "prosparse/bases.hpp"
#include "prosparse/solver.hpp"

namespace prosparse {

struct GenSolveOptions {
  Tolerances tol;
  int threads = 1;
  Index sweep_limit = -1;  // max left-side order to sweep; -1 means the signal size
};

/** All admitted representations y = left x1 + right x2 for a general
 *  dictionary. For each left-side order the sweep slides a window of
 *  segment_need(k) consecutive samples (cyclically when the left basis allows
 *  it), recovers the left coefficients from every window, and keeps what passes
 *  the admission rule (S + L - 1) * (kq + t) < N + t * L, where S is the sample
 *  need at the recovered order, L the right atom support length, and t is 1 for
 *  windows that cannot wrap and 0 for windows that can. Once the sample need
 *  reaches the full signal the sweep finishes with one direct inversion.
 *  A dictionary carrying a conditioning matrix routes through
 *  preconditioned_solve.
 */
SolutionSet gen_prosparse_solve(const Dictionary& dict, const ComplexVec& y,
                                const GenSolveOptions& opts = {});

/** Undoes the dictionary's conditioning matrix, solves against the bare pair,
 *  and reports solutions of the original system. Requires the matrix to be
 *  present and well conditioned.
 */
SolutionSet preconditioned_solve(const Dictionary& dict, const ComplexVec& y,
                                 const GenSolveOptions& opts = {});

/** Clean-interval count by direct enumeration: window starts whose window
 *  avoids the union of the given atom supports. periodic selects cyclic starts
 *  (all n) versus aligned starts (0 .. n - window_len).
 */
Index count_clean_intervals(Index n, Index window_len, bool periodic,
                            const std::vector<std::vector<Index>>& supports);

/** Guaranteed floor max(0, n + t*l - (s + l - 1) * (k + t)) for the
 *  clean-interval count: s window length, l atom support length, k atom count,
 *  t as in the admission rule. */
Index clean_interval_floor(Index n, Index s, Index l, Index k, int tau);

}  // namespace prosparse
