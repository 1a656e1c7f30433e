#pragma once

#include <cstddef>
#include <functional>

namespace vibron {

/// Runs body(i) for i in [0, count). Compute modules take one of these instead of
/// spawning threads; the CLI supplies a pooled implementation.
using ParallelFor = std::function<void(std::size_t count, const std::function<void(std::size_t)>& body)>;

inline void serial_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < count; ++i) body(i);
}

}  // namespace vibron
