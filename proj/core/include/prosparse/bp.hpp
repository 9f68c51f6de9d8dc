#pragma once

#include "prosparse/types.hpp"

namespace prosparse {

struct L1Options {
  double feas_tol = 1e-9;   // relative primal/dual residual target
  int max_iter = 50000;
  double penalty = 1.0;     // initial ADMM penalty
  int balance_every = 100;  // residual-balancing cadence, 0 disables
  int trailing_window = 100;  // objective history length kept in the result
};

/** Result of min ||x||_1 subject to A x = y.
 *
 *  x is the affine-projected iterate, so A x = y holds to machine precision
 *  regardless of how far the shrinkage iterate still is; feasibility reports
 *  the achieved ||A x - y||_2. trailing_objectives holds the last
 *  trailing_window objective values in chronological order.
 */
struct L1Result {
  ComplexVec x;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double feasibility = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> trailing_objectives;
};

/** Basis pursuit by ADMM over the splitting min ||z||_1 + i_{Ax=y}(x), x = z.
 *
 *  The affine projection uses a Cholesky factorization of A A^H computed once;
 *  for a union of two orthonormal bases that matrix is 2I and the projection is
 *  exact. Shrinkage acts on the magnitude and preserves the phase. The penalty
 *  is rebalanced every balance_every iterations by comparing primal and dual
 *  residuals; rebalancing rescales the dual variable and needs no
 *  refactorization because the projection does not depend on the penalty.
 */
L1Result l1_equality_solve(const ComplexMat& a, const ComplexVec& y, const L1Options& opts = {});

/** Indices with magnitude above rel_tol times the largest magnitude. */
std::vector<Index> threshold_support(const ComplexVec& x, double rel_tol);

/** Least-squares refit of y against the chosen columns of a. Returns the
 *  refitted coefficients (aligned with support) and the 2-norm misfit.
 */
struct DebiasResult {
  ComplexVec coeffs;
  double residual = 0.0;
};
DebiasResult debias_on_support(const ComplexMat& a, const ComplexVec& y,
                               const std::vector<Index>& support);

}  // namespace prosparse
