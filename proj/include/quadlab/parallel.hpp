#pragma once

#include <cstddef>
#include <functional>

namespace quadlab {

// Worker count comes from QUADLAB_WORKERS when set, else hardware concurrency.
std::size_t worker_count();

//! Runs body(i) for i in [0, n). Blocks are claimed dynamically, so callers
//! that need deterministic results must write into per-index slots and
//! reduce them in index order afterwards.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace quadlab
