#pragma once

#include <filesystem>
#include <string>

#include "cuefid/lexicon.hpp"
#include "cuefid/util.hpp"

#ifndef CUEFID_DATA_DIR
#error "CUEFID_DATA_DIR must point at the data directory"
#endif

namespace test_support {

inline std::string data_path(const std::string& name) {
  return std::string(CUEFID_DATA_DIR) + "/" + name;
}

inline cuefid::CompiledLexicon seed_lexicon() {
  return cuefid::compile_lexicon(
      cuefid::parse_lexicon(cuefid::read_file(data_path("seed_lexicon.tsv"))));
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("cuefid_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace test_support
