#pragma once

#include <string>

inline std::string repo_path(const std::string& rel) {
  return std::string(VPINN_SOURCE_DIR) + "/" + rel;
}

inline std::string fixture(const std::string& rel) {
  return repo_path("data/" + rel);
}
