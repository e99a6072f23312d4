#pragma once

#include <cstddef>
#include <functional>

namespace nlpsa {

/// Worker count for data-parallel loops. Results never depend on it: work is
/// split into items that each write their own output slot.
struct Parallelism {
  unsigned threads = 1;
};

/// Calls body(i) for every i in [0, count), spread over `par.threads`
/// workers. The first exception thrown by a body is rethrown on the caller.
void parallel_for(std::size_t count, Parallelism par, const std::function<void(std::size_t)>& body);

/// Number of fixed-size blocks covering `count` items.
inline std::size_t block_count(std::size_t count, std::size_t block) {
  return (count + block - 1) / block;
}

}  // namespace nlpsa
