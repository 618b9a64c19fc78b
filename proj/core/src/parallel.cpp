#include "dudley/parallel.hpp"

#include <cstdlib>
#include <string>

namespace dudley {

std::size_t worker_count() {
  std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DUDLEY_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (...) {
      // unparsable values fall back to auto
    }
  }
  return hw;
}

}  // namespace dudley
