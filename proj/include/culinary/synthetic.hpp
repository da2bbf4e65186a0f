#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "culinary/corpus.hpp"

namespace culinary::synthetic {

/// Classes with disjoint "signature" ingredients plus a shared noise pool.
struct PlantedClassificationSpec {
    std::size_t classes = 3;
    std::size_t per_class = 500;
    std::size_t signature = 20;
    std::size_t noise = 30;
    std::size_t signature_per_recipe = 5;
    std::size_t noise_per_recipe = 4;
    std::uint64_t seed = 1;
};

/// Already standardized; cuisines are "class_0", "class_1", ...
RecipeCorpus planted_classification(const PlantedClassificationSpec& spec);

/// A multi-region world of cuisines with raw ingredient strings, flavors,
/// ratings, nutrition and country tables.
struct WorldSpec {
    /// Taken from a built-in list of 100 cuisine names.
    std::size_t cuisines = 100;
    std::size_t min_recipes = 40;
    std::size_t max_recipes = 160;
    std::uint64_t seed = 7;
    /// Recipe sugar = factor * country obesity + noise (sd).
    double sugar_noise = 2.0;
    /// Allow cuisines that map to more than one country.
    bool multi_country = true;
    /// Fraction of recipes made mostly of unmappable raws.
    double junk_recipe_rate = 0.01;
};

struct World {
    std::vector<Recipe> recipes;
    std::set<std::string> reference;
    std::vector<std::pair<std::string, std::string>> aliases;
    /// Rows of the three country CSVs, header excluded.
    std::vector<std::pair<std::string, std::string>> cuisine_countries;
    std::vector<std::pair<std::string, std::string>> country_regions;
    std::vector<std::string> country_stats;
};

World make_world(const WorldSpec& spec);

/// recipes.jsonl, reference.txt, aliases.tsv, cuisine_country.csv,
/// country_region.csv and country_stats.csv under `dir`.
void write_world(const World& world, const std::filesystem::path& dir);

/// Parses, standardizes (min_mapped 0.5) and loads the tables in memory.
struct LoadedWorld {
    RecipeCorpus corpus;
    CountryTables tables;
};
LoadedWorld load_world(const World& world);

}  // namespace culinary::synthetic
