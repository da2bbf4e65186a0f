#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "culinary/corpus.hpp"

namespace testing {

inline std::filesystem::path source_dir() { return CULINARY_SOURCE_DIR; }
inline std::filesystem::path data_dir() { return source_dir() / "tests" / "data"; }

inline culinary::Recipe recipe(std::string id, std::string cuisine, std::vector<std::string> ingredients) {
    culinary::Recipe r;
    r.id = std::move(id);
    r.cuisine = std::move(cuisine);
    r.raw_ingredients = ingredients;
    r.std_ingredients = std::move(ingredients);
    return r;
}

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Fresh empty directory under the build tree.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::path(CULINARY_BINARY_DIR) / "scratch" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace testing
