#pragma once

#include <cstdlib>
#include <filesystem>

namespace gridhop {

/// Location of the shipped packs, prompts, name pools and ASP assets:
/// $GRIDHOP_DATA if set, otherwise the source tree's data/ directory.
inline std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("GRIDHOP_DATA"); env && *env) return env;
#ifdef GRIDHOP_DATA_DIR
  return GRIDHOP_DATA_DIR;
#else
  return "data";
#endif
}

inline std::filesystem::path resolve_data_dir(const std::filesystem::path& p) {
  return p.empty() ? default_data_dir() : p;
}

}  // namespace gridhop
