#pragma once

#include <functional>

#include "prosparse/types.hpp"

namespace prosparse::detail {

/** len samples starting at start, wrapping cyclically. */
ComplexVec cyclic_slice(const ComplexVec& v, Index start, Index len);

/** Runs fn(0..count-1), splitting across up to thread_count workers. Results
 *  must be written to caller-owned per-index slots; iteration order across
 *  workers is unspecified, so fn must not touch shared state.
 */
void parallel_for(Index count, int thread_count, const std::function<void(Index)>& fn);

}  // namespace prosparse::detail
