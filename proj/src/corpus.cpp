#include "culinary/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "culinary/error.hpp"
#include "culinary/format.hpp"

namespace culinary {

namespace {

constexpr const char* kModule = "corpus";

using nlohmann::json;

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(kModule, "cannot read file: " + path.string());
    return in;
}

bool is_fraction_glyph(std::string_view s, std::size_t i, std::size_t& length) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 == 0xC2 && i + 1 < s.size()) {
        const auto b1 = static_cast<unsigned char>(s[i + 1]);
        if (b1 >= 0xBC && b1 <= 0xBE) {
            length = 2;
            return true;
        }
    }
    if (b0 == 0xE2 && i + 2 < s.size() && static_cast<unsigned char>(s[i + 1]) == 0x85) {
        const auto b2 = static_cast<unsigned char>(s[i + 2]);
        if (b2 >= 0x90 && b2 <= 0x9E) {
            length = 3;
            return true;
        }
    }
    return false;
}

bool is_right_quote(std::string_view s, std::size_t i) {
    return i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
           static_cast<unsigned char>(s[i + 1]) == 0x80 &&
           (static_cast<unsigned char>(s[i + 2]) == 0x99 ||
            static_cast<unsigned char>(s[i + 2]) == 0x98);
}

std::optional<double> read_number(const json& object, std::string_view key, bool& malformed) {
    const auto it = object.find(key);
    if (it == object.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) {
        malformed = true;
        return std::nullopt;
    }
    return it->get<double>();
}

struct LineOutcome {
    enum class Kind { ok, malformed, rejected } kind = Kind::ok;
    std::string reason;
    Recipe recipe;
};

LineOutcome parse_recipe_line(std::string_view line) {
    LineOutcome outcome;
    auto malformed = [&](std::string reason) {
        outcome.kind = LineOutcome::Kind::malformed;
        outcome.reason = std::move(reason);
        return outcome;
    };
    auto rejected = [&](std::string reason) {
        outcome.kind = LineOutcome::Kind::rejected;
        outcome.reason = std::move(reason);
        return outcome;
    };

    const json object = json::parse(line, nullptr, false);
    if (object.is_discarded()) return malformed("invalid JSON");
    if (!object.is_object()) return malformed("record is not a JSON object");

    const auto id = object.find("id");
    const auto cuisine = object.find("cuisine");
    const auto ingredients = object.find("ingredients");
    if (id == object.end() || !id->is_string()) return malformed("missing string field 'id'");
    if (cuisine == object.end() || !cuisine->is_string())
        return malformed("missing string field 'cuisine'");
    if (ingredients == object.end() || !ingredients->is_array())
        return malformed("missing array field 'ingredients'");

    Recipe& recipe = outcome.recipe;
    recipe.id = id->get<std::string>();
    recipe.cuisine = cuisine->get<std::string>();
    if (recipe.id.empty()) return malformed("empty id");
    if (recipe.cuisine.empty()) return malformed("empty cuisine");
    for (const auto& item : *ingredients) {
        if (!item.is_string()) return malformed("non-string ingredient");
        recipe.raw_ingredients.push_back(item.get<std::string>());
    }

    bool shape_error = false;
    if (const auto flavors = object.find("flavors"); flavors != object.end() && !flavors->is_null()) {
        if (!flavors->is_object()) return malformed("'flavors' is not an object");
        for (std::size_t f = 0; f < kFlavorCount; ++f) {
            recipe.flavors[f] = read_number(*flavors, kFlavorKeys[f], shape_error);
        }
    }
    recipe.rating = read_number(object, "rating", shape_error);
    if (const auto nutrition = object.find("nutrition");
        nutrition != object.end() && !nutrition->is_null()) {
        if (!nutrition->is_object()) return malformed("'nutrition' is not an object");
        for (std::size_t n = 0; n < kNutrientCount; ++n) {
            recipe.nutrition[n] = read_number(*nutrition, kNutrientKeys[n], shape_error);
        }
    }
    if (shape_error) return malformed("non-numeric flavor, rating or nutrition value");

    if (recipe.raw_ingredients.empty()) return rejected("no ingredients");
    for (std::size_t f = 0; f < kFlavorCount; ++f) {
        const auto& score = recipe.flavors[f];
        if (score && !(*score >= 0.0 && *score <= 1.0)) {
            return rejected("flavor '" + std::string(kFlavorKeys[f]) + "' outside [0,1]: " +
                            format_double(*score));
        }
    }
    if (recipe.rating && !(*recipe.rating >= 1.0 && *recipe.rating <= 5.0)) {
        return rejected("rating outside [1,5]: " + format_double(*recipe.rating));
    }
    for (std::size_t n = 0; n < kNutrientCount; ++n) {
        const auto& value = recipe.nutrition[n];
        if (value && !(*value >= 0.0 && std::isfinite(*value))) {
            return rejected("negative or non-finite nutrition '" + std::string(kNutrientKeys[n]) +
                            "'");
        }
    }
    return outcome;
}

}  // namespace

// ---------------------------------------------------------------------------

std::optional<Nutrient> parse_nutrient(std::string_view name) {
    const std::string key = to_lower_ascii(trim(name));
    for (std::size_t n = 0; n < kNutrientCount; ++n) {
        if (key == kNutrientKeys[n]) return static_cast<Nutrient>(n);
    }
    if (key == "calorie") return Nutrient::calories;
    if (key == "carbohydrates" || key == "carbs") return Nutrient::carbohydrate;
    if (key == "sugars") return Nutrient::sugar;
    if (key == "proteins") return Nutrient::protein;
    return std::nullopt;
}

bool Recipe::has_complete_flavors() const {
    return std::all_of(flavors.begin(), flavors.end(), [](const auto& f) { return f.has_value(); });
}

bool Recipe::has_any_nutrition() const {
    return std::any_of(nutrition.begin(), nutrition.end(), [](const auto& n) { return n.has_value(); });
}

// ---------------------------------------------------------------------------

const UnitList& UnitList::defaults() {
    static const UnitList units{{
        "cup", "cups", "tablespoon", "tablespoons", "tbsp", "tbsps", "tbs", "tsp", "tsps",
        "teaspoon", "teaspoons", "ml", "milliliter", "milliliters", "millilitre", "millilitres",
        "cl", "dl", "l", "liter", "liters", "litre", "litres", "pint", "pints", "quart", "quarts",
        "qt", "gallon", "gallons", "fl", "floz", "g", "gr", "gram", "grams", "gramme", "grammes",
        "kg", "kilogram", "kilograms", "mg", "oz", "ounce", "ounces", "lb", "lbs", "pound",
        "pounds", "cm", "mm", "inch", "inches", "pinch", "pinches", "dash", "dashes", "can",
        "cans", "package", "packages", "pkg", "packet", "packets", "jar", "jars", "bunch",
        "bunches", "handful", "handfuls", "x",
    }};
    return units;
}

UnitList UnitList::load(const std::filesystem::path& path) {
    auto in = open_input(path);
    UnitList units;
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::string token = to_lower_ascii(trim(line));
        if (!token.empty()) units.tokens.insert(std::move(token));
    }
    return units;
}

namespace {

std::string normalize_once(std::string_view raw, const UnitList& units) {
    // Pass 1: drop bracketed spans and apostrophes, map everything that is
    // not a letter to a space.
    std::string cleaned;
    cleaned.reserve(raw.size());
    int depth = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const char c = raw[i];
        if (c == '(' || c == '[' || c == '{') {
            ++depth;
            cleaned += ' ';
            continue;
        }
        if (c == ')' || c == ']' || c == '}') {
            if (depth > 0) --depth;
            cleaned += ' ';
            continue;
        }
        if (depth > 0) continue;
        if (c == '\'' || c == '`') continue;
        if (is_right_quote(raw, i)) {
            i += 2;
            continue;
        }
        std::size_t glyph = 0;
        if (is_fraction_glyph(raw, i, glyph)) {
            cleaned += ' ';
            i += glyph - 1;
            continue;
        }
        const auto byte = static_cast<unsigned char>(c);
        if (byte >= 0x80) {
            cleaned += c;
        } else if (c >= 'A' && c <= 'Z') {
            cleaned += static_cast<char>(c - 'A' + 'a');
        } else if (c >= 'a' && c <= 'z') {
            cleaned += c;
        } else {
            cleaned += ' ';
        }
    }

    // Pass 2: drop unit tokens and collapse whitespace.
    std::string out;
    std::size_t pos = 0;
    while (pos < cleaned.size()) {
        while (pos < cleaned.size() && cleaned[pos] == ' ') ++pos;
        const std::size_t start = pos;
        while (pos < cleaned.size() && cleaned[pos] != ' ') ++pos;
        if (start == pos) break;
        const std::string token = cleaned.substr(start, pos - start);
        if (units.tokens.count(token)) continue;
        if (!out.empty()) out += ' ';
        out += token;
    }
    return out;
}

}  // namespace

std::string normalize_ingredient(std::string_view raw, const UnitList& units) {
    // Deleting an apostrophe can splice stray bytes into a fraction glyph,
    // so repeat until stable. Each pass never lengthens the string.
    std::string current = normalize_once(raw, units);
    for (;;) {
        std::string next = normalize_once(current, units);
        if (next == current) return current;
        current = std::move(next);
    }
}

// ---------------------------------------------------------------------------

IngredientLexicon::IngredientLexicon(std::set<std::string> reference,
                                     const std::vector<std::pair<std::string, std::string>>& aliases,
                                     UnitList units)
    : reference_(std::move(reference)), units_(std::move(units)) {
    for (const auto& id : reference_) {
        const std::string key = normalize_ingredient(id, units_);
        if (!key.empty()) self_keys_.emplace(key, id);
    }

    std::map<std::string, std::set<std::string>> targets;
    for (const auto& [raw_key, target] : aliases) {
        const std::string key = normalize_ingredient(raw_key, units_);
        if (key.empty() || !reference_.count(target)) {
            rejected_.push_back({raw_key, target});
            continue;
        }
        targets[key].insert(target);
    }

    std::vector<std::string> conflicts;
    for (auto& [key, set] : targets) {
        if (set.size() > 1) {
            std::string entry = "'" + key + "' -> {";
            bool first = true;
            for (const auto& t : set) {
                entry += (first ? "" : ", ") + t;
                first = false;
            }
            conflicts.push_back(entry + "}");
            continue;
        }
        alias_map_.emplace(key, *set.begin());
    }
    if (!conflicts.empty()) {
        std::string message = "conflicting alias targets: ";
        for (std::size_t i = 0; i < conflicts.size(); ++i) {
            message += (i ? "; " : "") + conflicts[i];
        }
        throw DataError(kModule, message);
    }
}

std::optional<std::string> IngredientLexicon::lookup(std::string_view normalized) const {
    const std::string key(normalized);
    if (const auto it = alias_map_.find(key); it != alias_map_.end()) return it->second;
    if (const auto it = self_keys_.find(key); it != self_keys_.end()) return it->second;
    return std::nullopt;
}

std::optional<std::string> IngredientLexicon::resolve(std::string_view raw) const {
    const std::string key = normalize_ingredient(raw, units_);
    if (key.empty()) return std::nullopt;
    return lookup(key);
}

std::size_t IngredientLexicon::resolvable_keys() const {
    std::size_t count = alias_map_.size();
    for (const auto& [key, id] : self_keys_) {
        if (!alias_map_.count(key)) ++count;
    }
    return count;
}

IngredientLexicon build_lexicon(std::istream& reference, std::istream& aliases,
                                const UnitList& units) {
    std::set<std::string> ids;
    std::string line;
    while (std::getline(reference, line)) {
        std::string id = trim(line);
        if (!id.empty()) ids.insert(std::move(id));
    }
    if (ids.empty()) throw DataError(kModule, "reference ingredient list is empty");

    std::vector<std::pair<std::string, std::string>> pairs;
    std::size_t line_no = 0;
    while (std::getline(aliases, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw DataError(kModule, "alias line " + std::to_string(line_no) + ": expected two tab-separated columns");
        }
        pairs.emplace_back(trim(line.substr(0, tab)), trim(line.substr(tab + 1)));
    }
    return IngredientLexicon(std::move(ids), pairs, units);
}

IngredientLexicon build_lexicon(const std::filesystem::path& reference_path,
                                const std::filesystem::path& alias_path, const UnitList& units) {
    auto reference = open_input(reference_path);
    auto aliases = open_input(alias_path);
    return build_lexicon(reference, aliases, units);
}

// ---------------------------------------------------------------------------

const std::vector<std::size_t>& RecipeCorpus::members(const std::string& cuisine) const {
    const auto it = cuisines.find(cuisine);
    if (it == cuisines.end()) throw DataError(kModule, "unknown cuisine: " + cuisine);
    return it->second;
}

std::optional<std::size_t> RecipeCorpus::find(std::string_view recipe_id) const {
    const auto it = id_index_.find(std::string(recipe_id));
    if (it == id_index_.end()) return std::nullopt;
    return it->second;
}

std::size_t RecipeCorpus::max_ingredients() const {
    std::size_t best = 0;
    for (const auto& r : recipes) best = std::max(best, r.std_ingredients.size());
    return best;
}

void RecipeCorpus::rebuild_indexes() {
    cuisines.clear();
    id_index_.clear();
    ingredient_index.clear();
    vocabulary.clear();
    std::set<std::string> ids;
    for (std::size_t i = 0; i < recipes.size(); ++i) {
        cuisines[recipes[i].cuisine].push_back(i);
        id_index_.emplace(recipes[i].id, i);
        ids.insert(recipes[i].std_ingredients.begin(), recipes[i].std_ingredients.end());
    }
    vocabulary.assign(ids.begin(), ids.end());
    for (std::size_t j = 0; j < vocabulary.size(); ++j) ingredient_index.emplace(vocabulary[j], j);
}

RecipeCorpus parse_corpus(std::istream& input, std::string_view schema) {
    if (schema != "jsonl") {
        throw ConfigError(kModule, "unsupported corpus schema: " + std::string(schema));
    }
    RecipeCorpus corpus;
    ParseReport& report = corpus.parse_report;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(input, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        ++report.records;
        LineOutcome outcome = parse_recipe_line(line);
        if (outcome.kind == LineOutcome::Kind::ok && !seen.insert(outcome.recipe.id).second) {
            outcome.kind = LineOutcome::Kind::rejected;
            outcome.reason = "duplicate id '" + outcome.recipe.id + "'";
        }
        switch (outcome.kind) {
            case LineOutcome::Kind::ok:
                corpus.recipes.push_back(std::move(outcome.recipe));
                ++report.loaded;
                break;
            case LineOutcome::Kind::malformed:
                ++report.malformed;
                report.problems.push_back("line " + std::to_string(line_no) + ": malformed: " + outcome.reason);
                break;
            case LineOutcome::Kind::rejected:
                ++report.rejected;
                report.problems.push_back("line " + std::to_string(line_no) + ": rejected: " + outcome.reason);
                break;
        }
    }
    if (corpus.recipes.empty()) throw DataError(kModule, "zero valid records");
    corpus.rebuild_indexes();
    return corpus;
}

RecipeCorpus parse_corpus(const std::filesystem::path& path, std::string_view schema) {
    auto in = open_input(path);
    return parse_corpus(in, schema);
}

RecipeCorpus standardize(const RecipeCorpus& corpus, const IngredientLexicon& lexicon,
                         double min_mapped) {
    if (!(min_mapped >= 0.0 && min_mapped <= 1.0)) {
        throw ConfigError(kModule, "min_mapped must lie in [0,1]");
    }
    RecipeCorpus out;
    out.lexicon = lexicon;
    out.parse_report = corpus.parse_report;
    StandardizeReport& report = out.standardize_report;
    report.min_mapped = min_mapped;
    report.input = corpus.recipes.size();

    for (const Recipe& source : corpus.recipes) {
        std::set<std::string> ids;
        std::size_t mapped = 0;
        for (const auto& raw : source.raw_ingredients) {
            const std::string key = normalize_ingredient(raw, lexicon.units());
            std::optional<std::string> id;
            if (!key.empty()) id = lexicon.lookup(key);
            if (id) {
                ++mapped;
                ++report.mapped_raws;
                ids.insert(std::move(*id));
            } else {
                ++report.unmapped_raws;
                ++report.unmapped[key];
            }
        }
        const auto total = source.raw_ingredients.size();
        const bool keep = !ids.empty() && static_cast<double>(mapped) >= min_mapped * static_cast<double>(total);
        if (!keep) {
            ++report.dropped;
            continue;
        }
        Recipe recipe = source;
        recipe.std_ingredients.assign(ids.begin(), ids.end());
        out.recipes.push_back(std::move(recipe));
    }
    report.retained = out.recipes.size();
    out.standardized = true;
    out.rebuild_indexes();
    return out;
}

RecipeCorpus make_standardized_corpus(std::vector<Recipe> recipes, IngredientLexicon lexicon) {
    RecipeCorpus corpus;
    for (auto& r : recipes) {
        std::sort(r.std_ingredients.begin(), r.std_ingredients.end());
        r.std_ingredients.erase(std::unique(r.std_ingredients.begin(), r.std_ingredients.end()),
                                r.std_ingredients.end());
    }
    corpus.recipes = std::move(recipes);
    corpus.lexicon = std::move(lexicon);
    corpus.standardized = true;
    corpus.parse_report.records = corpus.parse_report.loaded = corpus.recipes.size();
    corpus.standardize_report.input = corpus.standardize_report.retained = corpus.recipes.size();
    corpus.rebuild_indexes();
    return corpus;
}

void write_standardized_jsonl(const RecipeCorpus& corpus, std::ostream& out) {
    for (const Recipe& r : corpus.recipes) {
        json object = json::object();
        object["id"] = r.id;
        object["cuisine"] = r.cuisine;
        object["ingredients"] = r.std_ingredients;
        json flavors = json::object();
        for (std::size_t f = 0; f < kFlavorCount; ++f) {
            if (r.flavors[f]) flavors[std::string(kFlavorKeys[f])] = *r.flavors[f];
        }
        if (!flavors.empty()) object["flavors"] = flavors;
        if (r.rating) object["rating"] = *r.rating;
        json nutrition = json::object();
        for (std::size_t n = 0; n < kNutrientCount; ++n) {
            if (r.nutrition[n]) nutrition[std::string(kNutrientKeys[n])] = *r.nutrition[n];
        }
        if (!nutrition.empty()) object["nutrition"] = nutrition;
        out << object.dump() << '\n';
    }
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::string_view, kRegionCount> kRegionNames = {
    "North America", "Latin America", "Africa", "Western Europe", "Eastern Europe",
    "Middle East", "South Asia", "East Asia", "Oceania"};
constexpr std::array<std::string_view, kRegionCount> kRegionCodes = {
    "NA", "LA", "AF", "WE", "EE", "ME", "SA", "EA", "OC"};
constexpr std::array<std::string_view, kHealthMeasureCount> kMeasureNames = {
    "obesity", "diabetes", "expenditure"};

std::vector<std::vector<std::string>> read_csv(std::istream& in, const std::vector<std::string>& header,
                                               const std::string& table) {
    std::string line;
    if (!std::getline(in, line)) throw DataError(kModule, table + ": empty file");
    auto columns = split_csv_line(line);
    for (auto& c : columns) c = to_lower_ascii(trim(c));
    if (columns != header) {
        std::string expected;
        for (std::size_t i = 0; i < header.size(); ++i) expected += (i ? "," : "") + header[i];
        throw DataError(kModule, table + ": expected header '" + expected + "'");
    }
    std::vector<std::vector<std::string>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw DataError(kModule, table + " line " + std::to_string(line_no) + ": expected " +
                                         std::to_string(header.size()) + " fields");
        }
        for (auto& f : fields) f = trim(f);
        rows.push_back(std::move(fields));
    }
    return rows;
}

std::optional<double> parse_optional_number(const std::string& text, const std::string& where) {
    if (text.empty() || text == "NA" || text == "na" || text == "..") return std::nullopt;
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (consumed != text.size() || !std::isfinite(value)) {
        throw DataError(kModule, where + ": non-numeric value '" + text + "'");
    }
    return value;
}

}  // namespace

std::string_view region_name(Region region) { return kRegionNames[static_cast<std::size_t>(region)]; }
std::string_view region_code(Region region) { return kRegionCodes[static_cast<std::size_t>(region)]; }

std::optional<Region> parse_region(std::string_view text) {
    std::string key = trim(text);
    std::replace(key.begin(), key.end(), '_', ' ');
    for (std::size_t r = 0; r < kRegionCount; ++r) {
        if (key == kRegionCodes[r] || to_lower_ascii(key) == to_lower_ascii(kRegionNames[r])) {
            return static_cast<Region>(r);
        }
    }
    return std::nullopt;
}

std::string_view measure_name(HealthMeasure measure) {
    return kMeasureNames[static_cast<std::size_t>(measure)];
}

std::optional<HealthMeasure> parse_measure(std::string_view text) {
    const std::string key = to_lower_ascii(trim(text));
    for (std::size_t m = 0; m < kHealthMeasureCount; ++m) {
        if (key == kMeasureNames[m]) return static_cast<HealthMeasure>(m);
    }
    if (key == "obesity_pct") return HealthMeasure::obesity;
    if (key == "diabetes_pct") return HealthMeasure::diabetes;
    if (key == "health_expenditure" || key == "health_expenditure_pct_gdp")
        return HealthMeasure::expenditure;
    return std::nullopt;
}

std::optional<double> HealthRecord::get(HealthMeasure measure) const {
    switch (measure) {
        case HealthMeasure::obesity: return obesity_pct;
        case HealthMeasure::diabetes: return diabetes_pct;
        case HealthMeasure::expenditure: return health_expenditure_pct_gdp;
    }
    return std::nullopt;
}

std::optional<Region> CountryTables::region_of_cuisine(const std::string& cuisine) const {
    if (const auto direct = country_to_region.find(cuisine); direct != country_to_region.end()) {
        return direct->second;
    }
    const auto countries = cuisine_to_country.find(cuisine);
    if (countries == cuisine_to_country.end()) return std::nullopt;
    for (const auto& country : countries->second) {
        if (const auto it = country_to_region.find(country); it != country_to_region.end()) {
            return it->second;
        }
    }
    return std::nullopt;
}

CountryTables load_country_tables(std::istream& cuisine_countries, std::istream& country_regions,
                                  std::istream& country_stats) {
    CountryTables tables;

    for (const auto& row : read_csv(cuisine_countries, {"cuisine", "country"}, "cuisine/country table")) {
        if (row[0].empty() || row[1].empty()) throw DataError(kModule, "cuisine/country table: empty field");
        auto& list = tables.cuisine_to_country[row[0]];
        if (std::find(list.begin(), list.end(), row[1]) == list.end()) list.push_back(row[1]);
    }

    for (const auto& row : read_csv(country_regions, {"country", "region"}, "country/region table")) {
        const auto region = parse_region(row[1]);
        if (!region) throw DataError(kModule, "unknown region '" + row[1] + "' for " + row[0]);
        tables.country_to_region[row[0]] = *region;
    }

    const std::vector<std::string> stats_header = {
        "country", "obesity_pct", "diabetes_pct", "health_expenditure_pct_gdp", "net_migration"};
    for (const auto& row : read_csv(country_stats, stats_header, "country statistics table")) {
        const std::string& country = row[0];
        HealthRecord record;
        record.obesity_pct = parse_optional_number(row[1], country + " obesity_pct");
        record.diabetes_pct = parse_optional_number(row[2], country + " diabetes_pct");
        record.health_expenditure_pct_gdp =
            parse_optional_number(row[3], country + " health_expenditure_pct_gdp");
        for (const auto& pct : {record.obesity_pct, record.diabetes_pct, record.health_expenditure_pct_gdp}) {
            if (pct && (*pct < 0.0 || *pct > 100.0)) {
                throw DataError(kModule, country + ": percentage outside [0,100]");
            }
        }
        tables.health[country] = record;
        if (const auto migration = parse_optional_number(row[4], country + " net_migration")) {
            tables.net_migration[country] = *migration;
        }
    }
    return tables;
}

CountryTables load_country_tables(const CountryTablePaths& paths) {
    auto a = open_input(paths.cuisine_countries);
    auto b = open_input(paths.country_regions);
    auto c = open_input(paths.country_stats);
    return load_country_tables(a, b, c);
}

}  // namespace culinary
