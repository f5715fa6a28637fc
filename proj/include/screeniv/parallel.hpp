#ifndef SCREENIV_PARALLEL_HPP_
#define SCREENIV_PARALLEL_HPP_

#include <cstdint>
#include <functional>

namespace screeniv::internal {

// Runs body(lo, hi) over a block partition of [0, n). Callers own
// determinism: work items must not depend on thread scheduling.
void parallel_for(std::int64_t n, int threads,
                  const std::function<void(std::int64_t, std::int64_t)>& body);

}  // namespace screeniv::internal

#endif  // SCREENIV_PARALLEL_HPP_
