#include "czlab/parallel.hpp"

#include <omp.h>

#include "czlab/error.hpp"

namespace czlab {

void set_thread_count(int threads) {
  require(threads >= 1, ErrorKind::kInvalidArgument, "thread count must be positive");
  omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace czlab
