#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "culinary/corpus.hpp"

namespace culinary {

/// Equal-size random subsample of every cuisine large enough to provide one.
struct BalancedSample {
    std::size_t n = 100;
    std::uint64_t seed = 0;
    /// cuisine -> exactly n positions into RecipeCorpus::recipes, ascending.
    std::map<std::string, std::vector<std::size_t>> per_cuisine;
    /// Cuisines with fewer than n recipes.
    std::vector<std::string> excluded;

    const std::vector<std::size_t>& members(const std::string& cuisine) const;
    std::vector<std::string> cuisines() const;
};

/// Samples n recipes per cuisine without replacement. Each cuisine draws
/// from its own stream, derive_seed(seed, "sample/" + cuisine).
BalancedSample sample_balanced(const RecipeCorpus& corpus, std::size_t n, std::uint64_t seed);

/// Ingredient distribution of one cuisine over the full vocabulary.
struct CuisineDistribution {
    std::string cuisine;
    std::vector<double> probs;
    std::size_t support_size = 0;
};

/// Number of distinct standardized ingredients in the cuisine's sample.
std::size_t global_diversity(const BalancedSample& sample, const std::string& cuisine,
                             const RecipeCorpus& corpus);

/// probs[j] = (#sampled recipes containing j) / (total ingredient occurrences).
CuisineDistribution ingredient_distribution(const BalancedSample& sample, const std::string& cuisine,
                                            const RecipeCorpus& corpus);

/// Shannon entropy in nats over the nonzero entries.
double entropy(std::span<const double> probs);
inline double local_diversity(const CuisineDistribution& dist) { return entropy(dist.probs); }

/// Per-country mean of a per-cuisine metric.
struct CountrySeries {
    std::string metric;
    std::map<std::string, double> values;
    /// country -> contributing cuisines.
    std::map<std::string, std::vector<std::string>> provenance;
    /// Cuisines with no country mapping.
    std::vector<std::string> skipped;
};

CountrySeries map_to_countries(const std::map<std::string, double>& per_cuisine,
                               const CountryTables& tables, std::string metric = "value");

/// Distribution of unique-ingredient counts per dish. Both vectors have
/// length max_count + 1; index 0 is unused and always 0.
struct ComplexityDistribution {
    std::string cuisine;
    std::vector<double> pmf;
    std::vector<double> ccd;

    std::size_t max_count() const { return pmf.empty() ? 0 : pmf.size() - 1; }
};

/// Support padded to the corpus-wide maximum (RecipeCorpus::max_ingredients).
ComplexityDistribution complexity_distribution(const BalancedSample& sample, const std::string& cuisine,
                                               const RecipeCorpus& corpus);

/// Builds a complexity distribution from raw per-dish counts on 1..max_count.
ComplexityDistribution complexity_from_counts(std::span<const std::size_t> dish_sizes,
                                              std::size_t max_count, std::string cuisine = {});

/// Reciprocal of the area under the CCD over 1..max_count.
double complexity_score(const ComplexityDistribution& cd);

struct PolynomialFit {
    /// Ascending powers: y = c[0] + c[1] x + ... + c[d] x^d.
    std::vector<double> coefficients;
    double residual_norm = 0.0;

    double operator()(double x) const;
};

/// Least-squares polynomial fit. Throws NumericError on a rank-deficient design.
PolynomialFit fit_polynomial(std::span<const std::pair<double, double>> points, std::size_t degree);

}  // namespace culinary
