#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "culinary/corpus.hpp"

namespace culinary {

/// How recipes without a rating are weighted.
enum class MissingRating { corpus_mean, one };

struct CountryNutrition {
    std::string country;
    /// Rating-weighted mean per nutrient; absent when no recipe reports it.
    std::array<std::optional<double>, kNutrientCount> averages{};
    /// Sum of weights over nutrition-bearing recipes.
    double weights_used = 0.0;
    std::size_t n_recipes = 0;

    std::optional<double> get(Nutrient nutrient) const { return averages[static_cast<std::size_t>(nutrient)]; }
};

struct NutritionSummary {
    std::map<std::string, CountryNutrition> countries;
    /// Countries mapped from some cuisine but with no nutrition-bearing recipe.
    std::vector<std::string> excluded;
    /// Weight given to unrated recipes.
    double missing_rating_weight = 1.0;
};

/// Pools every recipe of every cuisine mapped to a country; a cuisine mapped
/// to several countries contributes to each.
NutritionSummary country_nutrition(const RecipeCorpus& corpus, const CountryTables& tables,
                                   MissingRating policy = MissingRating::corpus_mean);

/// Product-moment correlation. Needs n >= 3 and nonzero variance.
double pearson(std::span<const double> x, std::span<const double> y);

/// Kendall tau-b (tie-corrected), O(n log n).
double kendall_tau(std::span<const double> x, std::span<const double> y);

struct CorrelationResult {
    HealthMeasure measure = HealthMeasure::obesity;
    Nutrient nutrient = Nutrient::calories;
    double pearson = 0.0;
    double kendall_tau = 0.0;
    /// Paired countries.
    std::size_t n = 0;
    /// Countries with this nutrient but no value for the measure.
    std::size_t dropped = 0;
};

inline constexpr std::array<HealthMeasure, 3> kDefaultMeasures = {
    HealthMeasure::obesity, HealthMeasure::diabetes, HealthMeasure::expenditure};
inline constexpr std::array<Nutrient, 5> kDefaultNutrients = {
    Nutrient::calories, Nutrient::protein, Nutrient::fat, Nutrient::carbohydrate, Nutrient::sugar};

/// One row per (measure, nutrient), measures outermost.
std::vector<CorrelationResult> correlation_table(const NutritionSummary& nutrition, const CountryTables& tables,
                                                 std::span<const HealthMeasure> measures = kDefaultMeasures,
                                                 std::span<const Nutrient> nutrients = kDefaultNutrients);

/// Countries with both values, as (country, nutrient, measure), sorted
/// ascending by nutrient with ties broken by country code.
std::vector<std::tuple<std::string, double, double>> paired_countries(const NutritionSummary& nutrition,
                                                                      const CountryTables& tables,
                                                                      Nutrient nutrient, HealthMeasure measure);

/// Point k is the mean measure over the k lowest-nutrient countries.
std::vector<std::pair<std::size_t, double>> bottomk_curve(const NutritionSummary& nutrition,
                                                          const CountryTables& tables, Nutrient nutrient,
                                                          HealthMeasure measure);

}  // namespace culinary
