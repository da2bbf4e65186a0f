#include <doctest.h>

#include <set>

#include "culinary/synthetic.hpp"
#include "helpers.hpp"

using namespace culinary;
namespace fs = std::filesystem;

TEST_CASE("planted classification shape") {
    const auto corpus = synthetic::planted_classification({});
    CHECK(corpus.recipes.size() == 1500);
    CHECK(corpus.cuisines.size() == 3);
    CHECK(corpus.members("class_1").size() == 500);
    CHECK(corpus.standardized);
    CHECK(corpus.vocabulary_size() == 3 * 20 + 30);
    for (const auto& r : corpus.recipes) {
        CHECK(r.std_ingredients.size() == 9);
        const std::string prefix = "sig_0" + r.cuisine.substr(6) + "_";
        std::size_t own = 0;
        for (const auto& id : r.std_ingredients) {
            CHECK((id.rfind(prefix, 0) == 0 || id.rfind("noise_", 0) == 0));
            own += id.rfind(prefix, 0) == 0;
        }
        CHECK(own == 5);
    }
}

TEST_CASE("world generation is deterministic and seed-sensitive") {
    synthetic::WorldSpec spec;
    spec.cuisines = 10;
    const auto a = synthetic::make_world(spec);
    const auto b = synthetic::make_world(spec);
    CHECK(a.recipes.size() == b.recipes.size());
    for (std::size_t i = 0; i < a.recipes.size(); ++i) {
        CHECK(a.recipes[i].id == b.recipes[i].id);
        CHECK(a.recipes[i].raw_ingredients == b.recipes[i].raw_ingredients);
        CHECK(a.recipes[i].nutrition == b.recipes[i].nutrition);
    }
    CHECK(a.country_stats == b.country_stats);
    spec.seed = 8;
    const auto c = synthetic::make_world(spec);
    CHECK((c.recipes.size() != a.recipes.size() || c.recipes[0].raw_ingredients != a.recipes[0].raw_ingredients));

    std::set<std::string> cuisines;
    for (const auto& r : a.recipes) cuisines.insert(r.cuisine);
    CHECK(cuisines.size() == 10);
    const auto loaded = synthetic::load_world(a);
    CHECK(loaded.corpus.standardized);
    CHECK(loaded.corpus.standardize_report.retained > loaded.corpus.standardize_report.dropped);
    for (const auto& cuisine : cuisines) CHECK(loaded.tables.region_of_cuisine(cuisine).has_value());
}

TEST_CASE("bundled fixture matches a fresh regeneration") {
    const auto fixture = testing::source_dir() / "data" / "fixture";
    REQUIRE(fs::exists(fixture / "recipes.jsonl"));
    const auto out = testing::scratch_dir("fixture_regen");
    synthetic::write_world(synthetic::make_world({}), out);
    for (const auto name : {"recipes.jsonl", "reference.txt", "aliases.tsv", "cuisine_country.csv",
                            "country_region.csv", "country_stats.csv"}) {
        INFO(name);
        CHECK(testing::slurp(out / name) == testing::slurp(fixture / name));
    }
}
