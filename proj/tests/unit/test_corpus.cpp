#include <doctest.h>

#include <sstream>

#include "culinary/corpus.hpp"
#include "culinary/error.hpp"
#include "culinary/rng.hpp"
#include "helpers.hpp"

using namespace culinary;

namespace {

RecipeCorpus mini_standardized() {
    const auto lexicon = build_lexicon(testing::data_dir() / "mini_reference.txt",
                                       testing::data_dir() / "mini_aliases.tsv");
    return standardize(parse_corpus(testing::data_dir() / "mini.jsonl"), lexicon, 0.5);
}

}  // namespace

TEST_CASE("normalize_ingredient examples") {
    CHECK(normalize_ingredient("2 cups Chopped Tomatoes") == "chopped tomatoes");
    CHECK(normalize_ingredient("salt") == "salt");
    CHECK(normalize_ingredient("100g") == "");
    CHECK(normalize_ingredient("  Ajo (minced, [fresh]) ") == "ajo");
    CHECK(normalize_ingredient("1/2 tsp. Sea-Salt!") == "sea salt");
    CHECK(normalize_ingredient("\xC2\xBD cup cr\xC3\xA8me fra\xC3\xAE" "che") == "cr\xC3\xA8me fra\xC3\xAE" "che");
    CHECK(normalize_ingredient("baker's yeast") == "bakers yeast");
}

TEST_CASE("normalize_ingredient is idempotent") {
    const std::vector<std::string> samples = {
        "2 cups Chopped Tomatoes", "((nested) brackets) onion", "3-4 LB pork shoulder, trimmed", "x", "",
        "tsp", "1 1/2 cups all-purpose flour", "Sel de Gu\xC3\xA9rande", "[garnish] parsley (optional"};
    for (const auto& s : samples) {
        const auto once = normalize_ingredient(s);
        CHECK(normalize_ingredient(once) == once);
    }
    Rng rng(1);
    const std::string alphabet = "aB3 ,.()[]-/gcupTSP'x\xC2\xBD";
    for (int i = 0; i < 2000; ++i) {
        std::string s;
        const auto len = rng.below(24);
        for (std::size_t k = 0; k < len; ++k) s.push_back(alphabet[rng.below(alphabet.size())]);
        const auto once = normalize_ingredient(s);
        REQUIRE(normalize_ingredient(once) == once);
    }
}

TEST_CASE("unit list is configurable") {
    CHECK(normalize_ingredient("3 punnets strawberries") == "punnets strawberries");
    UnitList units = UnitList::defaults();
    units.tokens.insert("punnets");
    CHECK(normalize_ingredient("3 punnets strawberries", units) == "strawberries");
    const auto shipped = UnitList::load(testing::source_dir() / "data" / "units.txt");
    CHECK(shipped.tokens == UnitList::defaults().tokens);
}

TEST_CASE("build_lexicon examples") {
    SUBCASE("reference plus one alias gives two resolvable keys") {
        IngredientLexicon lex({"tomato"}, {{"roma tomato", "tomato"}});
        CHECK(lex.reference().size() == 1);
        CHECK(lex.resolvable_keys() == 2);
        CHECK(lex.resolve("2 Roma Tomatoes (ripe)") == std::nullopt);
        CHECK(lex.resolve("2 Roma Tomato") == std::optional<std::string>("tomato"));
    }
    SUBCASE("alias to a missing id is rejected and reported") {
        IngredientLexicon lex({"tomato"}, {{"x", "nonexistent"}});
        REQUIRE(lex.rejected_aliases().size() == 1);
        CHECK(lex.rejected_aliases()[0].target == "nonexistent");
        CHECK(lex.lookup("x") == std::nullopt);
    }
    SUBCASE("conflicting duplicate keys raise an error listing them") {
        try {
            IngredientLexicon lex({"tomato", "potato"}, {{"tater", "tomato"}, {"Tater", "potato"}});
            FAIL("expected a conflict");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("tater") != std::string::npos);
        }
    }
    SUBCASE("identical duplicates are fine") {
        IngredientLexicon lex({"tomato"}, {{"tom", "tomato"}, {"tom", "tomato"}});
        CHECK(lex.resolvable_keys() == 2);
    }
    SUBCASE("alias keys are stored normalized") {
        IngredientLexicon lex({"olive oil"}, {{"Extra-Virgin Olive Oil", "olive oil"}});
        for (const auto& [key, target] : lex.alias_map()) CHECK(normalize_ingredient(key) == key);
        CHECK(lex.resolve("extra virgin olive oil") == std::optional<std::string>("olive oil"));
    }
    SUBCASE("missing files are errors") {
        CHECK_THROWS_AS(build_lexicon("/no/such/reference.txt", testing::data_dir() / "mini_aliases.tsv"), Error);
    }
}

TEST_CASE("parse_corpus on the 10-line fixture") {
    // Hand count: line 4 is truncated JSON; the other nine are valid.
    const auto corpus = parse_corpus(testing::data_dir() / "mini.jsonl");
    CHECK(corpus.recipes.size() == 9);
    CHECK(corpus.parse_report.records == 10);
    CHECK(corpus.parse_report.malformed == 1);
    CHECK(corpus.parse_report.rejected == 0);
    REQUIRE(corpus.parse_report.problems.size() == 1);
    CHECK(corpus.parse_report.problems[0].rfind("line 4", 0) == 0);

    const auto& m03 = corpus.recipes[*corpus.find("m03")];
    CHECK_FALSE(m03.rating.has_value());
    for (const auto& f : m03.flavors) CHECK_FALSE(f.has_value());
    CHECK(m03.nutrition[static_cast<std::size_t>(Nutrient::calories)] == std::optional<double>(420.0));
    CHECK_FALSE(m03.nutrition[static_cast<std::size_t>(Nutrient::protein)].has_value());
}

TEST_CASE("parse_corpus bounds and degenerate input") {
    std::stringstream empty;
    try {
        parse_corpus(empty);
        FAIL("expected an error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("zero valid records") != std::string::npos);
    }

    std::stringstream lines;
    lines << R"({"id":"a","cuisine":"X","ingredients":["salt"],"rating":7})" << "\n"
          << R"({"id":"b","cuisine":"X","ingredients":["salt"],"rating":4})" << "\n"
          << R"({"id":"c","cuisine":"X","ingredients":["salt"],"flavors":{"salty":1.5}})" << "\n"
          << R"({"id":"d","cuisine":"X","ingredients":["salt"],"nutrition":{"fat":-1}})" << "\n"
          << R"({"id":"b","cuisine":"Y","ingredients":["salt"]})" << "\n"
          << R"({"id":"e","cuisine":"X","ingredients":[]})" << "\n"
          << R"({"id":"f","cuisine":"X","ingredients":"salt"})" << "\n"
          << R"([1,2,3])" << "\n"
          << "\n";
    const auto corpus = parse_corpus(lines);
    CHECK(corpus.recipes.size() == 1);
    CHECK(corpus.parse_report.records == 8);
    CHECK(corpus.parse_report.rejected == 5);
    CHECK(corpus.parse_report.malformed == 2);
    CHECK(corpus.parse_report.loaded + corpus.parse_report.rejected + corpus.parse_report.malformed ==
          corpus.parse_report.records);

    std::stringstream one(R"({"id":"a","cuisine":"X","ingredients":["salt"]})");
    CHECK_THROWS_AS(parse_corpus(one, "csv"), ConfigError);
    CHECK_THROWS_AS(parse_corpus(std::filesystem::path("/no/such/file.jsonl")), Error);
}

TEST_CASE("standardize examples") {
    IngredientLexicon lex({"salt", "tomato"}, {});
    std::vector<Recipe> recipes;
    Recipe dup;
    dup.id = "dup";
    dup.cuisine = "X";
    dup.raw_ingredients = {"Salt", "2 tsp salt"};
    recipes.push_back(dup);
    Recipe sparse;
    sparse.id = "sparse";
    sparse.cuisine = "X";
    sparse.raw_ingredients = {"salt", "moon dust", "stardust", "unobtainium"};
    recipes.push_back(sparse);
    RecipeCorpus corpus;
    corpus.recipes = recipes;
    corpus.rebuild_indexes();

    const auto out = standardize(corpus, lex, 0.5);
    REQUIRE(out.recipes.size() == 1);
    CHECK(out.recipes[0].std_ingredients == std::vector<std::string>{"salt"});
    CHECK(out.standardize_report.dropped == 1);
    CHECK(out.vocabulary == std::vector<std::string>{"salt"});
}

TEST_CASE("standardize on the fixture matches hand counts") {
    const auto corpus = mini_standardized();
    // m08 maps 1 of 4 raws and is dropped; the other eight survive.
    CHECK(corpus.recipes.size() == 8);
    CHECK(corpus.standardize_report.dropped == 1);
    CHECK(corpus.standardize_report.mapped_raws == 24);
    CHECK(corpus.standardize_report.unmapped_raws == 6);
    // Distinct mapped ids over the surviving recipes, counted by hand.
    const std::vector<std::string> expected = {"basil", "butter", "egg",  "flour", "garlic",    "ginger",
                                               "olive oil", "rice", "salt", "soy sauce", "sugar", "tomato"};
    CHECK(corpus.vocabulary == expected);
    CHECK(corpus.vocabulary_size() == 12);
    for (std::size_t i = 0; i < expected.size(); ++i) CHECK(corpus.ingredient_index.at(expected[i]) == i);

    CHECK(corpus.recipes[*corpus.find("m02")].std_ingredients ==
          std::vector<std::string>{"basil", "olive oil", "salt"});
    CHECK(corpus.recipes[*corpus.find("m07")].std_ingredients == std::vector<std::string>{"ginger", "soy sauce"});
    CHECK(corpus.members("Italian").size() == 3);
    CHECK(corpus.members("Japanese").size() == 3);
    CHECK(corpus.members("Mexican").size() == 2);
    CHECK(corpus.lexicon.rejected_aliases().size() == 1);
    CHECK(corpus.max_ingredients() == 3);

    // parsed = retained + dropped + rejected
    CHECK(corpus.parse_report.records - corpus.parse_report.malformed ==
          corpus.recipes.size() + corpus.standardize_report.dropped + corpus.parse_report.rejected);
}

TEST_CASE("standardized corpora respect the lexicon and serialize deterministically") {
    const auto a = mini_standardized();
    const auto b = mini_standardized();
    std::ostringstream sa;
    std::ostringstream sb;
    write_standardized_jsonl(a, sa);
    write_standardized_jsonl(b, sb);
    CHECK(sa.str() == sb.str());
    CHECK_FALSE(sa.str().empty());
    for (const auto& r : a.recipes) {
        CHECK_FALSE(r.std_ingredients.empty());
        for (const auto& id : r.std_ingredients) CHECK(a.lexicon.reference().count(id) == 1);
    }
    // Cuisine lists partition the recipes.
    std::size_t total = 0;
    for (const auto& [name, members] : a.cuisines) total += members.size();
    CHECK(total == a.recipes.size());
}

TEST_CASE("load_country_tables") {
    const auto tables = load_country_tables({testing::data_dir() / "mini_cuisine_country.csv",
                                             testing::data_dir() / "mini_country_region.csv",
                                             testing::data_dir() / "mini_country_stats.csv"});
    CHECK(tables.health.at("ITA").obesity_pct == std::optional<double>(19.9));
    CHECK(tables.cuisine_to_country.at("Mexican") == std::vector<std::string>{"MEX", "USA"});
    CHECK(tables.country_to_region.at("JPN") == Region::east_asia);
    CHECK(tables.region_of_cuisine("Italian") == std::optional<Region>(Region::western_europe));
    CHECK(tables.net_migration.at("USA") == 1000000.0);

    auto load = [](const std::string& cc, const std::string& cr, const std::string& cs) {
        std::stringstream a(cc);
        std::stringstream b(cr);
        std::stringstream c(cs);
        return load_country_tables(a, b, c);
    };
    const std::string cc = "cuisine,country\nItalian,ITA\n";
    const std::string cs = "country,obesity_pct,diabetes_pct,health_expenditure_pct_gdp,net_migration\n";
    CHECK_THROWS_AS(load(cc, "country,region\nITA,Atlantis\n", cs), DataError);
    CHECK_THROWS_AS(load(cc, "country,region\nITA,Western Europe\n", cs + "ITA,abc,1,1,1\n"), DataError);
    CHECK_THROWS_AS(load(cc, "country,region\nITA,Western Europe\n", cs + "ITA,101,1,1,1\n"), DataError);
    CHECK_THROWS_AS(load("cuisine;country\n", "country,region\n", cs), DataError);
    const auto gaps = load(cc, "country,region\nITA,Western Europe\n", cs + "ITA,19.9,NA,,..\n");
    CHECK_FALSE(gaps.health.at("ITA").diabetes_pct.has_value());
    CHECK(gaps.net_migration.count("ITA") == 0);
}
