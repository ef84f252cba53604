#include "loccode/parallel.hpp"

#include <cstdlib>
#include <string>

namespace loccode {

int resolve_thread_count(std::optional<int> requested) {
  if (const char* env = std::getenv("LOCCODE_THREADS")) {
    try {
      int v = std::stoi(env);
      if (v >= 1) return v;
    } catch (...) {
      // fall through to the other sources
    }
  }
  if (requested && *requested >= 1) return *requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace loccode
