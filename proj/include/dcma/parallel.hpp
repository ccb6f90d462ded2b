#ifndef DCMA_PARALLEL_HPP
#define DCMA_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <functional>

namespace dcma {

/// Runs fn(i) for i in [0, n). Work items must write to disjoint slots so the
/// result is identical for any thread count. threads == 0 uses the hardware
/// count; 1 runs inline. The first exception thrown by any item is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  unsigned threads = 0);

} // namespace dcma

#endif
