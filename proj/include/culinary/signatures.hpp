#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "culinary/corpus.hpp"
#include "culinary/metrics.hpp"

namespace culinary {

/// TF-IDF over cuisines-as-documents. Rows follow `cuisines` (sorted),
/// columns follow the corpus vocabulary.
struct TfIdfTable {
    std::vector<std::string> cuisines;
    std::vector<std::string> ingredients;
    /// Per-recipe-presence counts, row-major cuisines x ingredients.
    std::vector<std::size_t> tf;
    std::vector<double> weights;
    /// Number of cuisines whose sample contains each ingredient.
    std::vector<std::size_t> df;
    std::size_t n_docs = 0;

    double weight(std::size_t cuisine, std::size_t ingredient) const {
        return weights[cuisine * ingredients.size() + ingredient];
    }
    std::size_t row_of(const std::string& cuisine) const;
};

/// Builds the table from raw term counts (row-major, cuisines x ingredients).
/// weight = tf * ln(n_docs / df).
TfIdfTable tfidf_from_counts(std::vector<std::string> cuisines, std::vector<std::string> ingredients,
                             std::vector<std::size_t> tf);

/// Counts each ingredient once per sampled recipe. Needs at least two cuisines.
TfIdfTable tfidf(const BalancedSample& sample, const RecipeCorpus& corpus);

struct NotableIngredient {
    std::string ingredient;
    double weight = 0.0;
};

/// Top-k nonzero weights, descending; equal weights ordered by ingredient id.
std::vector<NotableIngredient> notable_ingredients(const TfIdfTable& table, const std::string& cuisine,
                                                   std::size_t k);

}  // namespace culinary
