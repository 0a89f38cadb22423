#include "fnsc/parallel.hpp"

#include <cstdlib>
#include <string>

namespace fnsc {

std::size_t worker_count() {
  static const std::size_t count = [] {
    std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FNSC_THREADS")) {
      try {
        const long cap = std::stol(env);
        if (cap > 0) hw = std::min<std::size_t>(hw, static_cast<std::size_t>(cap));
      } catch (...) {
        // unparsable values leave the default in place
      }
    }
    return hw;
  }();
  return count;
}

}  // namespace fnsc
