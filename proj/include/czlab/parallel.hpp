#pragma once

#include <cstddef>
#include <span>

namespace czlab {

// Thread count used by every OpenMP kernel. Kernels never reduce across
// threads in a scheduling-dependent order, so results do not depend on it.
void set_thread_count(int threads);
int thread_count();

// Order-fixed pairwise summation.
double pairwise_sum(std::span<const double> values);

}  // namespace czlab
