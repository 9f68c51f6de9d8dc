#pragma once

#include "prosparse/types.hpp"

namespace prosparse {

/** Recoverability conditions for a sparsity split (kp, kq) at coherence mu:
 *
 *    p0_unique   kp + kq < 1 / mu            the sparsest representation is unique
 *    bp_tight    2 mu^2 kp kq + mu max(kp, kq) < 1   l1 recovers it
 *    bp_simple   kp + kq < (sqrt(2) - 1/2) / mu      weaker closed form of the above
 *    product     2 kp kq < n                 the admission region of the search
 *    total       kp + kq < sqrt(2 n)         coherence-free form of product
 *
 *  Strict inequalities carry a relative guard band of 1e-9: values inside the
 *  band count as not satisfied and set the matching boundary flag instead, so
 *  exact ties (picket-fence configurations) land on the boundary rather than
 *  on either side by rounding luck. product and total are decided in integer
 *  arithmetic and have exact boundaries.
 */
struct BoundFlags {
  bool p0_unique = false;
  bool bp_tight = false;
  bool bp_simple = false;
  bool product = false;
  bool total = false;
  bool p0_boundary = false;
  bool bp_tight_boundary = false;
  bool bp_simple_boundary = false;
  bool product_boundary = false;
  bool total_boundary = false;
};

BoundFlags classify_pair(Index n, double mu, Index kp, Index kq);

struct BoundCell {
  Index kp = 0;
  Index kq = 0;
  BoundFlags flags;
};

struct BoundReport {
  Index n = 0;
  double mu = 0.0;
  Index grid_limit = 0;
  Index max_total_p0 = 0;        // largest kp + kq with p0_unique
  Index max_total_bp_simple = 0; // largest kp + kq with bp_simple
  Index max_total_overall = 0;   // largest kp + kq with total
  std::vector<BoundCell> grid;   // kp, kq in [0, grid_limit]^2, kq fastest
};

/** Full classification grid plus the closed-form maxima. grid_limit of -1
 *  picks a limit just past the total-sparsity frontier. */
BoundReport evaluate_bounds(Index n, double mu, Index grid_limit = -1);

/** Frontier view: for each kp, the largest kq each condition still admits
 *  (-1 when kq = 0 already fails). */
struct BoundCurveRow {
  Index kp = 0;
  Index p0 = -1;
  Index bp_tight = -1;
  Index bp_simple = -1;
  Index product = -1;
  Index total = -1;
};
std::vector<BoundCurveRow> bound_curves(Index n, double mu, Index kp_limit);

}  // namespace prosparse
