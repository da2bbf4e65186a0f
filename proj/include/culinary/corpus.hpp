#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace culinary {

// ---------------------------------------------------------------------------
// Recipe attributes
// ---------------------------------------------------------------------------

/// The six taste scores attached to a recipe, in input-schema order.
enum class Flavor : std::size_t { salty, sour, sweet, bitter, meaty, piquant };
inline constexpr std::size_t kFlavorCount = 6;
/// JSON keys of the flavor object, indexed by Flavor.
inline constexpr std::array<std::string_view, kFlavorCount> kFlavorKeys = {
    "salty", "sour", "sweet", "bitter", "meaty", "piquant"};

enum class Nutrient : std::size_t {
    calories, protein, fat, saturated_fat, sodium, fiber, sugar, carbohydrate
};
inline constexpr std::size_t kNutrientCount = 8;
inline constexpr std::array<std::string_view, kNutrientCount> kNutrientKeys = {
    "calories", "protein", "fat", "saturated_fat", "sodium", "fiber", "sugar", "carbohydrate"};

/// Parses a nutrient name; accepts the JSON keys plus the singular forms
/// used on the command line ("calorie", "carbohydrates").
std::optional<Nutrient> parse_nutrient(std::string_view name);

using FlavorScores = std::array<std::optional<double>, kFlavorCount>;
using NutritionFacts = std::array<std::optional<double>, kNutrientCount>;

struct Recipe {
    std::string id;
    std::string cuisine;
    std::vector<std::string> raw_ingredients;
    /// Sorted, deduplicated standardized ids; empty until standardize().
    std::vector<std::string> std_ingredients;
    /// Absent scores stay absent; 0 is a legitimate score.
    FlavorScores flavors{};
    std::optional<double> rating;
    NutritionFacts nutrition{};

    bool has_complete_flavors() const;
    bool has_any_nutrition() const;
};

// ---------------------------------------------------------------------------
// Ingredient normalization and lexicon
// ---------------------------------------------------------------------------

/// Measurement-unit tokens stripped during normalization.
struct UnitList {
    std::set<std::string> tokens;

    /// Built-in list; identical to data/units.txt.
    static const UnitList& defaults();
    /// One token per line; blank lines and '#' comments ignored.
    static UnitList load(const std::filesystem::path& path);
};

/// Lowercases, drops bracketed content, digits, punctuation and unit tokens,
/// and collapses whitespace. Idempotent.
std::string normalize_ingredient(std::string_view raw, const UnitList& units = UnitList::defaults());

struct RejectedAlias {
    std::string key;
    std::string target;
};

class IngredientLexicon {
public:
    IngredientLexicon() = default;

    /// Aliases whose target is not in `reference` are dropped into
    /// rejected_aliases(). Keys are normalized on the way in; two keys that
    /// normalize to the same string with different targets raise DataError.
    IngredientLexicon(std::set<std::string> reference,
                      const std::vector<std::pair<std::string, std::string>>& aliases,
                      UnitList units = UnitList::defaults());

    const std::set<std::string>& reference() const { return reference_; }
    const std::map<std::string, std::string>& alias_map() const { return alias_map_; }
    const std::vector<RejectedAlias>& rejected_aliases() const { return rejected_; }
    const UnitList& units() const { return units_; }

    /// Standardized id for an already-normalized key. Explicit aliases take
    /// precedence over the implicit self-mapping of reference ids.
    std::optional<std::string> lookup(std::string_view normalized) const;
    /// normalize_ingredient followed by lookup.
    std::optional<std::string> resolve(std::string_view raw) const;

    /// Number of distinct keys that resolve to an id.
    std::size_t resolvable_keys() const;

private:
    std::set<std::string> reference_;
    std::map<std::string, std::string> alias_map_;
    std::map<std::string, std::string> self_keys_;
    std::vector<RejectedAlias> rejected_;
    UnitList units_;
};

IngredientLexicon build_lexicon(const std::filesystem::path& reference_path,
                                const std::filesystem::path& alias_path,
                                const UnitList& units = UnitList::defaults());
IngredientLexicon build_lexicon(std::istream& reference, std::istream& aliases,
                                const UnitList& units = UnitList::defaults());

// ---------------------------------------------------------------------------
// Corpus
// ---------------------------------------------------------------------------

struct ParseReport {
    std::size_t records = 0;    ///< non-blank lines
    std::size_t malformed = 0;  ///< not JSON, or wrong shape
    std::size_t rejected = 0;   ///< well-formed but out of bounds
    std::size_t loaded = 0;
    std::vector<std::string> problems;  ///< "line N: reason"
};

struct StandardizeReport {
    double min_mapped = 0.5;
    std::size_t input = 0;
    std::size_t retained = 0;
    std::size_t dropped = 0;
    std::size_t mapped_raws = 0;
    std::size_t unmapped_raws = 0;
    /// Normalized form of every unmapped raw with its frequency.
    std::map<std::string, std::size_t> unmapped;
};

struct RecipeCorpus {
    std::vector<Recipe> recipes;
    /// cuisine -> positions in `recipes`, ascending.
    std::map<std::string, std::vector<std::size_t>> cuisines;
    IngredientLexicon lexicon;
    /// standardized id -> dense index; ids in lexicographic order.
    std::map<std::string, std::size_t> ingredient_index;
    /// Inverse of ingredient_index.
    std::vector<std::string> vocabulary;

    bool standardized = false;
    ParseReport parse_report;
    StandardizeReport standardize_report;

    std::size_t vocabulary_size() const { return vocabulary.size(); }
    const std::vector<std::size_t>& members(const std::string& cuisine) const;
    std::optional<std::size_t> find(std::string_view recipe_id) const;
    /// Corpus-wide maximum number of standardized ingredients per recipe.
    std::size_t max_ingredients() const;

    /// Recomputes cuisines, ingredient_index and vocabulary from `recipes`.
    void rebuild_indexes();

private:
    std::unordered_map<std::string, std::size_t> id_index_;
};

/// Reads one JSON recipe per line. `schema` must be "jsonl".
RecipeCorpus parse_corpus(const std::filesystem::path& path, std::string_view schema = "jsonl");
RecipeCorpus parse_corpus(std::istream& input, std::string_view schema = "jsonl");

RecipeCorpus standardize(const RecipeCorpus& corpus, const IngredientLexicon& lexicon,
                         double min_mapped = 0.5);

/// Wraps recipes whose std_ingredients are already filled in.
RecipeCorpus make_standardized_corpus(std::vector<Recipe> recipes, IngredientLexicon lexicon = {});

/// One JSON object per recipe, recipe order, fixed key order.
void write_standardized_jsonl(const RecipeCorpus& corpus, std::ostream& out);

// ---------------------------------------------------------------------------
// Country tables
// ---------------------------------------------------------------------------

enum class Region : std::size_t {
    north_america, latin_america, africa, western_europe, eastern_europe,
    middle_east, south_asia, east_asia, oceania
};
inline constexpr std::size_t kRegionCount = 9;

std::string_view region_name(Region region);
/// Two-letter abbreviation: NA, LA, AF, WE, EE, ME, SA, EA, OC.
std::string_view region_code(Region region);
/// Accepts the full name (any case, '_' or ' ') or the two-letter code.
std::optional<Region> parse_region(std::string_view text);

enum class HealthMeasure : std::size_t { obesity, diabetes, expenditure };
inline constexpr std::size_t kHealthMeasureCount = 3;
std::string_view measure_name(HealthMeasure measure);
std::optional<HealthMeasure> parse_measure(std::string_view text);

struct HealthRecord {
    std::optional<double> obesity_pct;
    std::optional<double> diabetes_pct;
    std::optional<double> health_expenditure_pct_gdp;

    std::optional<double> get(HealthMeasure measure) const;
};

struct CountryTables {
    std::map<std::string, std::vector<std::string>> cuisine_to_country;
    /// Keys are country codes, or cuisine names when a cuisine is tagged directly.
    std::map<std::string, Region> country_to_region;
    std::map<std::string, HealthRecord> health;
    std::map<std::string, double> net_migration;

    /// A direct cuisine entry wins; otherwise the region of the first mapped
    /// country that has one.
    std::optional<Region> region_of_cuisine(const std::string& cuisine) const;
};

struct CountryTablePaths {
    std::filesystem::path cuisine_countries;  ///< cuisine,country
    std::filesystem::path country_regions;    ///< country,region
    std::filesystem::path country_stats;      ///< country,obesity_pct,diabetes_pct,...
};

CountryTables load_country_tables(const CountryTablePaths& paths);
CountryTables load_country_tables(std::istream& cuisine_countries, std::istream& country_regions,
                                  std::istream& country_stats);

}  // namespace culinary
