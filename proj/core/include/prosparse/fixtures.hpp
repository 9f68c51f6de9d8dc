#pragma once

#include "prosparse/bases.hpp"
#include "prosparse/types.hpp"

namespace prosparse {

/** A signal together with the representation it was built from. */
struct PlantedInstance {
  ComplexVec samples;
  SparseCoeffs left;
  SparseCoeffs right;
};

/** Nullspace direction of the size-N Fourier/spike pair stacked as a length-2N
 *  coefficient vector: a sqrt(2)-amplitude spike comb against the negated
 *  picket-fence spectrum it synthesizes. d fixes the scale: N = 2^(2d-1), comb
 *  spacing 2^d. Checked to reproduce the zero signal at construction.
 */
ComplexVec make_picket_fence_kernel(int d);

/** An instance whose sparsest representation loses to a denser one in l1 norm.
 *  instance carries the sparsest representation x (the floor(sqrt(N)) largest
 *  kernel entries, scaled by -2); alt is x plus the kernel, strictly cheaper in
 *  l1 but much denser. Needs d >= 4 for the l1 gap to be positive.
 */
struct CounterexampleInstance {
  int d = 0;
  Index n = 0;
  ComplexVec kernel;
  PlantedInstance instance;
  SparseCoeffs alt_left;
  SparseCoeffs alt_right;
  double planted_l1 = 0.0;
  double alt_l1 = 0.0;
  double gap = 0.0;  // planted_l1 - alt_l1, positive
};
CounterexampleInstance make_bp_counterexample(int d);

/** An instance with two equally sparse representations: the kernel's support
 *  split at random into two halves, x0 on one half and x0 minus the kernel on
 *  the other. Both synthesize the same signal by construction.
 */
struct TwoSolutionInstance {
  int d = 0;
  Index n = 0;
  PlantedInstance instance;  // carries x0
  SparseCoeffs alt_left;     // x1 = x0 - kernel
  SparseCoeffs alt_right;
};
TwoSolutionInstance make_two_solution_instance(int d, std::uint64_t seed);

/** Random instance against the Fourier/spike pair: kp unit-magnitude spectrum
 *  coefficients and kq unit-magnitude spikes on disjoint draws of distinct
 *  indices, random phases.
 */
PlantedInstance make_random_planted_fourier(Index n, Index kp, Index kq, Rng& rng);

/** Random instance against an arbitrary dictionary, same drawing scheme. */
PlantedInstance make_random_planted(const Dictionary& dict, Index kp, Index kq, Rng& rng);

}  // namespace prosparse
