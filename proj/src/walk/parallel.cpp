#include "rcm/walk/parallel.hpp"

#include <cstdlib>
#include <string>

#include "rcm/error.hpp"

namespace rcm {

int resolve_threads(int requested) {
  if (const char* env = std::getenv("RCM_THREADS"); env && *env) {
    try {
      int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("RCM_THREADS must be a positive integer, got '") + env + "'");
  }
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

}  // namespace rcm
