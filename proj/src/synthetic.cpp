#include "culinary/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "culinary/error.hpp"
#include "culinary/format.hpp"
#include "culinary/rng.hpp"

namespace culinary::synthetic {

namespace {

struct CuisineInfo {
    const char* name;
    const char* countries;  // '|' separated ISO codes
    Region region;
};

using R = Region;
constexpr std::array<CuisineInfo, 100> kCuisines = {{
    {"American", "USA", R::north_america}, {"Southern US", "USA", R::north_america},
    {"Cajun", "USA", R::north_america}, {"Tex-Mex", "USA|MEX", R::north_america},
    {"Canadian", "CAN", R::north_america}, {"Hawaiian", "USA", R::north_america},
    {"Mexican", "MEX", R::latin_america}, {"Brazilian", "BRA", R::latin_america},
    {"Argentine", "ARG", R::latin_america}, {"Peruvian", "PER", R::latin_america},
    {"Cuban", "CUB", R::latin_america}, {"Colombian", "COL", R::latin_america},
    {"Chilean", "CHL", R::latin_america}, {"Venezuelan", "VEN", R::latin_america},
    {"Jamaican", "JAM", R::latin_america}, {"Puerto Rican", "PRI", R::latin_america},
    {"Ecuadorian", "ECU", R::latin_america}, {"Guatemalan", "GTM", R::latin_america},
    {"Italian", "ITA", R::western_europe}, {"French", "FRA", R::western_europe},
    {"Spanish", "ESP", R::western_europe}, {"Portuguese", "PRT", R::western_europe},
    {"German", "DEU", R::western_europe}, {"British", "GBR", R::western_europe},
    {"English", "GBR", R::western_europe}, {"Irish", "IRL", R::western_europe},
    {"Scottish", "GBR", R::western_europe}, {"Welsh", "GBR", R::western_europe},
    {"Dutch", "NLD", R::western_europe}, {"Belgian", "BEL", R::western_europe},
    {"Swiss", "CHE", R::western_europe}, {"Austrian", "AUT", R::western_europe},
    {"Swedish", "SWE", R::western_europe}, {"Norwegian", "NOR", R::western_europe},
    {"Danish", "DNK", R::western_europe}, {"Finnish", "FIN", R::western_europe},
    {"Icelandic", "ISL", R::western_europe}, {"Greek", "GRC", R::western_europe},
    {"Sicilian", "ITA", R::western_europe}, {"Basque", "ESP|FRA", R::western_europe},
    {"Polish", "POL", R::eastern_europe}, {"Russian", "RUS", R::eastern_europe},
    {"Ukrainian", "UKR", R::eastern_europe}, {"Hungarian", "HUN", R::eastern_europe},
    {"Czech", "CZE", R::eastern_europe}, {"Romanian", "ROU", R::eastern_europe},
    {"Bulgarian", "BGR", R::eastern_europe}, {"Serbian", "SRB", R::eastern_europe},
    {"Croatian", "HRV", R::eastern_europe}, {"Slovak", "SVK", R::eastern_europe},
    {"Lithuanian", "LTU", R::eastern_europe}, {"Georgian", "GEO", R::eastern_europe},
    {"Turkish", "TUR", R::middle_east}, {"Lebanese", "LBN", R::middle_east},
    {"Persian", "IRN", R::middle_east}, {"Israeli", "ISR", R::middle_east},
    {"Syrian", "SYR", R::middle_east}, {"Iraqi", "IRQ", R::middle_east},
    {"Saudi", "SAU", R::middle_east}, {"Jordanian", "JOR", R::middle_east},
    {"Palestinian", "PSE", R::middle_east}, {"Armenian", "ARM", R::middle_east},
    {"Yemeni", "YEM", R::middle_east}, {"Moroccan", "MAR", R::africa},
    {"Ethiopian", "ETH", R::africa}, {"Egyptian", "EGY", R::africa},
    {"Tunisian", "TUN", R::africa}, {"Nigerian", "NGA", R::africa},
    {"South African", "ZAF", R::africa}, {"Kenyan", "KEN", R::africa},
    {"Ghanaian", "GHA", R::africa}, {"Senegalese", "SEN", R::africa},
    {"Algerian", "DZA", R::africa}, {"Indian", "IND", R::south_asia},
    {"Pakistani", "PAK", R::south_asia}, {"Bangladeshi", "BGD", R::south_asia},
    {"Sri Lankan", "LKA", R::south_asia}, {"Nepalese", "NPL", R::south_asia},
    {"Afghan", "AFG", R::south_asia}, {"Punjabi", "IND", R::south_asia},
    {"Bengali", "IND|BGD", R::south_asia}, {"Chinese", "CHN", R::east_asia},
    {"Japanese", "JPN", R::east_asia}, {"Korean", "KOR", R::east_asia},
    {"Thai", "THA", R::east_asia}, {"Vietnamese", "VNM", R::east_asia},
    {"Filipino", "PHL", R::east_asia}, {"Indonesian", "IDN", R::east_asia},
    {"Malaysian", "MYS", R::east_asia}, {"Cantonese", "CHN", R::east_asia},
    {"Sichuan", "CHN", R::east_asia}, {"Taiwanese", "TWN", R::east_asia},
    {"Lao", "LAO", R::east_asia}, {"Cambodian", "KHM", R::east_asia},
    {"Burmese", "MMR", R::east_asia}, {"Mongolian", "MNG", R::east_asia},
    {"Australian", "AUS", R::oceania}, {"New Zealand", "NZL", R::oceania},
    {"Fijian", "FJI", R::oceania}, {"Samoan", "WSM", R::oceania},
}};

const std::vector<std::string> kStaples = {
    "salt", "water", "sugar", "onion", "garlic", "butter", "olive oil", "all purpose flour", "egg",
    "black pepper", "milk", "vegetable oil", "tomato", "lemon", "carrot", "potato", "chicken", "beef",
    "rice", "honey", "parsley", "bay leaf", "cinnamon", "paprika", "cumin", "ginger", "vinegar",
    "cream", "cheese", "bread", "pork", "bell pepper", "celery", "thyme", "baking powder",
    "vanilla extract", "chicken stock", "green onion", "lime", "cabbage"};

const std::array<std::vector<std::string>, kRegionCount> kRegional = {{
    {"maple syrup", "cornmeal", "bourbon", "cheddar cheese", "bacon", "pecan", "buttermilk", "molasses",
     "barbecue sauce", "cajun seasoning", "sweet potato", "cranberry", "okra", "pumpkin", "ranch dressing"},
    {"black beans", "corn tortilla", "jalapeno", "cilantro", "avocado", "chipotle", "queso fresco",
     "plantain", "cassava", "achiote", "pinto beans", "tomatillo", "aji amarillo", "dulce de leche", "chayote"},
    {"berbere", "teff", "harissa", "couscous", "peanut", "yam", "millet", "preserved lemon", "baobab",
     "fufu", "egusi seeds", "palm oil", "ras el hanout", "sorghum", "fenugreek"},
    {"parmesan", "mozzarella", "basil", "oregano", "rosemary", "white wine", "dijon mustard", "shallot",
     "prosciutto", "mascarpone", "leek", "gruyere", "pancetta", "capers", "tarragon"},
    {"sour cream", "dill", "beetroot", "rye flour", "caraway seeds", "buckwheat", "horseradish",
     "quark", "sauerkraut", "kielbasa", "poppy seeds", "smetana", "paprika paste", "pickled cucumber", "lard"},
    {"tahini", "sumac", "pomegranate molasses", "bulgur", "chickpeas", "za atar", "pistachio", "saffron",
     "rose water", "lamb", "pine nuts", "dried apricot", "mint", "labneh", "freekeh"},
    {"garam masala", "turmeric", "ghee", "cardamom", "mustard seeds", "curry leaves", "paneer",
     "basmati rice", "coriander seeds", "asafoetida", "tamarind", "red lentils", "chaat masala",
     "fenugreek leaves", "jaggery"},
    {"soy sauce", "sesame oil", "fish sauce", "rice vinegar", "mirin", "tofu", "shiitake mushroom",
     "lemongrass", "star anise", "oyster sauce", "miso", "kimchi", "coconut milk", "bok choy", "nori"},
    {"lamb chops", "kiwi", "macadamia", "vegemite", "beetroot relish", "barramundi", "passion fruit",
     "kumara", "pavlova meringue", "golden syrup", "taro", "coconut cream", "mango", "snapper", "pineapple"},
}};

// Mean taste profile per region (salty, sour, sweet, bitter, meaty, piquant).
const std::array<std::array<double, kFlavorCount>, kRegionCount> kRegionFlavors = {{
    {0.55, 0.25, 0.50, 0.20, 0.55, 0.20},
    {0.50, 0.40, 0.30, 0.15, 0.50, 0.55},
    {0.45, 0.30, 0.25, 0.25, 0.55, 0.60},
    {0.50, 0.30, 0.35, 0.20, 0.50, 0.15},
    {0.55, 0.40, 0.30, 0.20, 0.60, 0.10},
    {0.45, 0.45, 0.35, 0.20, 0.55, 0.30},
    {0.50, 0.35, 0.30, 0.30, 0.45, 0.75},
    {0.75, 0.35, 0.40, 0.20, 0.65, 0.40},
    {0.50, 0.30, 0.55, 0.15, 0.45, 0.15},
}};

// Alternate spellings that need the alias table.
const std::vector<std::pair<std::string, std::string>> kForeignAliases = {
    {"sel", "salt"}, {"knoblauch", "garlic"}, {"ajo", "garlic"}, {"zwiebel", "onion"},
    {"cebolla", "onion"}, {"oeufs", "egg"}, {"eggs", "egg"}, {"huevo", "egg"}, {"beurre", "butter"},
    {"mantequilla", "butter"}, {"tomatoes", "tomato"}, {"roma tomato", "tomato"}, {"tomate", "tomato"},
    {"extra virgin olive oil", "olive oil"}, {"kosher salt", "salt"}, {"sea salt", "salt"},
    {"plain flour", "all purpose flour"}, {"flour", "all purpose flour"}, {"ground cumin", "cumin"},
    {"fresh ginger", "ginger"}, {"scallion", "green onion"}, {"spring onions", "green onion"},
    {"cilantro leaves", "cilantro"}, {"coriander leaves", "cilantro"}, {"shoyu", "soy sauce"},
    {"garbanzo beans", "chickpeas"}, {"parmigiano reggiano", "parmesan"}, {"leche", "milk"},
    {"lait", "milk"}, {"azucar", "sugar"}, {"sucre", "sugar"}, {"zucker", "sugar"},
    {"ground black pepper", "black pepper"}, {"haldi", "turmeric"}, {"jeera", "cumin"}};

const std::vector<std::string> kJunk = {"love", "garnish", "toppings of choice", "secret sauce",
                                        "ice cubes", "whatever is in the fridge"};

const std::vector<std::string> kUnitsPicked = {"cups", "cup", "tbsp", "tsp", "g", "oz", "ml", "lb",
                                               "pinch", "tablespoons", "teaspoon", "kg"};
const std::vector<std::string> kQuantities = {"1", "2", "3", "1/2", "1 1/2", "100", "250", "\xC2\xBD", "4-5", "0.25"};

std::string decorate(const std::string& surface, Rng& rng) {
    std::string text = surface;
    const double style = rng.uniform();
    if (style < 0.2) {
        text[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    } else if (style < 0.25) {
        text = to_lower_ascii(text);
        for (char& c : text) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    if (rng.bernoulli(0.7)) {
        std::string prefix = kQuantities[rng.below(kQuantities.size())];
        if (rng.bernoulli(0.8)) {
            const auto& unit = kUnitsPicked[rng.below(kUnitsPicked.size())];
            prefix += (rng.bernoulli(0.2) && unit.size() <= 2) ? unit : " " + unit;
        }
        text = prefix + " " + text;
    }
    if (rng.bernoulli(0.1)) text += " (to taste)";
    if (rng.bernoulli(0.05)) text += ",";
    return text;
}

double round4(double v) { return std::round(v * 1e4) / 1e4; }

}  // namespace

RecipeCorpus planted_classification(const PlantedClassificationSpec& spec) {
    if (spec.signature_per_recipe > spec.signature || spec.noise_per_recipe > spec.noise || spec.classes < 2) {
        throw ConfigError("synthetic", "invalid planted classification spec");
    }
    Rng rng(derive_seed(spec.seed, "planted-classification"));
    std::vector<Recipe> recipes;
    auto pick = [&](std::size_t pool, std::size_t count) {
        std::vector<std::size_t> idx(pool);
        for (std::size_t i = 0; i < pool; ++i) idx[i] = i;
        for (std::size_t i = 0; i < count; ++i) std::swap(idx[i], idx[i + rng.below(pool - i)]);
        idx.resize(count);
        return idx;
    };
    char buffer[32];
    for (std::size_t c = 0; c < spec.classes; ++c) {
        for (std::size_t i = 0; i < spec.per_class; ++i) {
            Recipe r;
            std::snprintf(buffer, sizeof(buffer), "p%02zu-%05zu", c, i);
            r.id = buffer;
            r.cuisine = "class_" + std::to_string(c);
            for (const auto s : pick(spec.signature, spec.signature_per_recipe)) {
                std::snprintf(buffer, sizeof(buffer), "sig_%02zu_%02zu", c, s);
                r.std_ingredients.emplace_back(buffer);
            }
            for (const auto s : pick(spec.noise, spec.noise_per_recipe)) {
                std::snprintf(buffer, sizeof(buffer), "noise_%02zu", s);
                r.std_ingredients.emplace_back(buffer);
            }
            r.raw_ingredients = r.std_ingredients;
            recipes.push_back(std::move(r));
        }
    }
    return make_standardized_corpus(std::move(recipes));
}

World make_world(const WorldSpec& spec) {
    if (spec.cuisines < 2 || spec.cuisines > kCuisines.size()) {
        throw ConfigError("synthetic", "cuisine count must lie in 2.." + std::to_string(kCuisines.size()));
    }
    if (spec.min_recipes == 0 || spec.min_recipes > spec.max_recipes) {
        throw ConfigError("synthetic", "invalid recipe count range");
    }
    World world;
    Rng rng(derive_seed(spec.seed, "world"));

    // Vocabulary: staples first, then region lists.
    std::vector<std::string> vocab = kStaples;
    std::vector<int> home(vocab.size(), -1);
    for (std::size_t r = 0; r < kRegionCount; ++r) {
        for (const auto& id : kRegional[r]) {
            vocab.push_back(id);
            home.push_back(static_cast<int>(r));
        }
    }
    world.reference.insert(vocab.begin(), vocab.end());

    std::map<std::string, std::vector<std::string>> surfaces;
    for (const auto& id : vocab) surfaces[id].push_back(id);
    for (const auto& [alias, target] : kForeignAliases) {
        world.aliases.emplace_back(alias, target);
        surfaces[target].push_back(alias);
    }
    // One referentially broken alias, reported at load time.
    world.aliases.emplace_back("unicorn horn", "unicorn");

    // Countries and their statistics.
    std::map<std::string, Region> country_region;
    std::vector<std::pair<std::string, std::vector<std::string>>> cuisine_countries;
    for (std::size_t c = 0; c < spec.cuisines; ++c) {
        const auto& info = kCuisines[c];
        auto countries = split(info.countries, '|');
        if (!spec.multi_country) countries.resize(1);
        for (const auto& country : countries) {
            country_region.emplace(country, info.region);
            world.cuisine_countries.emplace_back(info.name, country);
        }
        cuisine_countries.emplace_back(info.name, countries);
    }
    std::map<std::string, double> obesity;
    for (const auto& [country, region] : country_region) {
        world.country_regions.emplace_back(country, std::string(region_name(region)));
        Rng crng(derive_seed(spec.seed, "country/" + country));
        const double ob = round4(crng.uniform(3.0, 36.0));
        const double diabetes = round4(std::clamp(2.0 + 0.25 * ob + crng.normal() * 1.5, 1.0, 25.0));
        const double expenditure = round4(crng.uniform(2.5, 17.0));
        const double migration = std::round(crng.normal() * 60000.0 + 8000.0);
        obesity[country] = ob;
        std::string row = country + "," + format_double(ob) + ",";
        // Sparse gaps, as in the real indicator tables.
        if (crng.uniform() >= 0.05) row += format_double(diabetes);
        row += "," + format_double(expenditure) + "," + format_double(migration);
        world.country_stats.push_back(row);
    }

    std::size_t next_id = 0;
    for (std::size_t c = 0; c < spec.cuisines; ++c) {
        const auto& info = kCuisines[c];
        const auto region = static_cast<std::size_t>(info.region);
        Rng crng(derive_seed(spec.seed, std::string("cuisine/") + info.name));

        std::vector<double> weights(vocab.size());
        for (std::size_t j = 0; j < vocab.size(); ++j) {
            double base = home[j] < 0 ? 3.0 : (static_cast<std::size_t>(home[j]) == region ? 6.0 : 0.15);
            weights[j] = base * std::exp(0.8 * crng.normal());
        }
        const double mean_size = crng.uniform(5.0, 13.0);
        std::array<double, kFlavorCount> taste{};
        for (std::size_t f = 0; f < kFlavorCount; ++f) {
            taste[f] = std::clamp(kRegionFlavors[region][f] + 0.06 * crng.normal(), 0.05, 0.95);
        }
        const double primary_obesity = obesity.at(cuisine_countries[c].second.front());
        const std::size_t count = spec.min_recipes + crng.below(spec.max_recipes - spec.min_recipes + 1);

        for (std::size_t i = 0; i < count; ++i) {
            Recipe recipe;
            char id[16];
            std::snprintf(id, sizeof(id), "r%06zu", next_id++);
            recipe.id = id;
            recipe.cuisine = info.name;

            std::size_t size = 1;
            while (size < 30 && crng.uniform() < 1.0 - 1.0 / mean_size) ++size;
            size = std::max<std::size_t>(size, 2);
            std::vector<double> w = weights;
            const bool junk = crng.uniform() < spec.junk_recipe_rate;
            for (std::size_t k = 0; k < size; ++k) {
                double total = 0.0;
                for (const double x : w) total += x;
                double u = crng.uniform() * total;
                std::size_t j = 0;
                while (j + 1 < w.size() && u >= w[j]) u -= w[j++];
                w[j] = 0.0;
                const auto& forms = surfaces[vocab[j]];
                const auto& surface = forms[crng.below(forms.size())];
                recipe.raw_ingredients.push_back(decorate(surface, crng));
            }
            const std::size_t junk_count = junk ? size + 1 : (crng.bernoulli(0.05) ? 1 : 0);
            for (std::size_t k = 0; k < junk_count; ++k) {
                recipe.raw_ingredients.push_back(decorate(kJunk[crng.below(kJunk.size())], crng));
            }

            const double flavor_roll = crng.uniform();
            if (flavor_roll >= 0.1) {
                for (std::size_t f = 0; f < kFlavorCount; ++f) {
                    recipe.flavors[f] = round4(std::clamp(taste[f] + 0.15 * crng.normal(), 0.0, 1.0));
                }
                if (flavor_roll < 0.12) recipe.flavors[crng.below(kFlavorCount)].reset();
            }
            if (crng.uniform() < 0.75) recipe.rating = std::round(crng.uniform(2.0, 5.0) * 10.0) / 10.0;
            if (crng.uniform() < 0.85) {
                auto set = [&](Nutrient n, double v) {
                    recipe.nutrition[static_cast<std::size_t>(n)] = round4(std::max(0.0, v));
                };
                const double sugar = 0.8 * primary_obesity + spec.sugar_noise * crng.normal();
                const double protein = 40.0 - 0.6 * primary_obesity + 4.0 * crng.normal();
                const double fat = crng.uniform(5.0, 35.0);
                const double carbs = 20.0 + sugar + crng.uniform(0.0, 40.0);
                set(Nutrient::sugar, sugar);
                set(Nutrient::protein, protein);
                set(Nutrient::fat, fat);
                set(Nutrient::saturated_fat, fat * crng.uniform(0.2, 0.5));
                set(Nutrient::carbohydrate, carbs);
                set(Nutrient::fiber, crng.uniform(0.0, 12.0));
                set(Nutrient::sodium, crng.uniform(0.1, 2.5));
                set(Nutrient::calories, 4.0 * (std::max(0.0, protein) + carbs) + 9.0 * fat);
            }
            world.recipes.push_back(std::move(recipe));
        }
    }
    return world;
}

void write_world(const World& world, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) throw DataError("synthetic", "cannot write " + (dir / name).string());
        return out;
    };
    {
        auto out = open("recipes.jsonl");
        for (const auto& r : world.recipes) {
            nlohmann::ordered_json j;
            j["id"] = r.id;
            j["cuisine"] = r.cuisine;
            j["ingredients"] = r.raw_ingredients;
            if (std::any_of(r.flavors.begin(), r.flavors.end(), [](const auto& f) { return f.has_value(); })) {
                nlohmann::ordered_json f = nlohmann::ordered_json::object();
                for (std::size_t i = 0; i < kFlavorCount; ++i) {
                    if (r.flavors[i]) f[std::string(kFlavorKeys[i])] = *r.flavors[i];
                }
                j["flavors"] = f;
            }
            if (r.rating) j["rating"] = *r.rating;
            if (r.has_any_nutrition()) {
                nlohmann::ordered_json n = nlohmann::ordered_json::object();
                for (std::size_t i = 0; i < kNutrientCount; ++i) {
                    if (r.nutrition[i]) n[std::string(kNutrientKeys[i])] = *r.nutrition[i];
                }
                j["nutrition"] = n;
            }
            out << j.dump() << '\n';
        }
    }
    {
        auto out = open("reference.txt");
        for (const auto& id : world.reference) out << id << '\n';
    }
    {
        auto out = open("aliases.tsv");
        for (const auto& [key, target] : world.aliases) out << key << '\t' << target << '\n';
    }
    {
        auto out = open("cuisine_country.csv");
        out << "cuisine,country\n";
        for (const auto& [cuisine, country] : world.cuisine_countries) out << csv_field(cuisine) << ',' << country << '\n';
    }
    {
        auto out = open("country_region.csv");
        out << "country,region\n";
        for (const auto& [country, region] : world.country_regions) out << country << ',' << region << '\n';
    }
    {
        auto out = open("country_stats.csv");
        out << "country,obesity_pct,diabetes_pct,health_expenditure_pct_gdp,net_migration\n";
        for (const auto& row : world.country_stats) out << row << '\n';
    }
}

LoadedWorld load_world(const World& world) {
    std::stringstream jsonl;
    for (const auto& r : world.recipes) {
        nlohmann::json j;
        j["id"] = r.id;
        j["cuisine"] = r.cuisine;
        j["ingredients"] = r.raw_ingredients;
        nlohmann::json f = nlohmann::json::object();
        for (std::size_t i = 0; i < kFlavorCount; ++i) {
            if (r.flavors[i]) f[std::string(kFlavorKeys[i])] = *r.flavors[i];
        }
        if (!f.empty()) j["flavors"] = f;
        if (r.rating) j["rating"] = *r.rating;
        nlohmann::json n = nlohmann::json::object();
        for (std::size_t i = 0; i < kNutrientCount; ++i) {
            if (r.nutrition[i]) n[std::string(kNutrientKeys[i])] = *r.nutrition[i];
        }
        if (!n.empty()) j["nutrition"] = n;
        jsonl << j.dump() << '\n';
    }
    std::stringstream reference;
    for (const auto& id : world.reference) reference << id << '\n';
    std::stringstream aliases;
    for (const auto& [key, target] : world.aliases) aliases << key << '\t' << target << '\n';
    std::stringstream cc;
    cc << "cuisine,country\n";
    for (const auto& [cuisine, country] : world.cuisine_countries) cc << csv_field(cuisine) << ',' << country << '\n';
    std::stringstream cr;
    cr << "country,region\n";
    for (const auto& [country, region] : world.country_regions) cr << country << ',' << region << '\n';
    std::stringstream cs;
    cs << "country,obesity_pct,diabetes_pct,health_expenditure_pct_gdp,net_migration\n";
    for (const auto& row : world.country_stats) cs << row << '\n';

    const RecipeCorpus parsed = parse_corpus(jsonl);
    const IngredientLexicon lexicon = build_lexicon(reference, aliases);
    return {standardize(parsed, lexicon, 0.5), load_country_tables(cc, cr, cs)};
}

}  // namespace culinary::synthetic
