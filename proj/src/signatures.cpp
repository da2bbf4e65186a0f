#include "culinary/signatures.hpp"

#include <algorithm>
#include <cmath>

#include "culinary/error.hpp"

namespace culinary {

namespace {
constexpr const char* kModule = "signatures";
}

std::size_t TfIdfTable::row_of(const std::string& cuisine) const {
    const auto it = std::lower_bound(cuisines.begin(), cuisines.end(), cuisine);
    if (it == cuisines.end() || *it != cuisine) throw DataError(kModule, "unknown cuisine: " + cuisine);
    return static_cast<std::size_t>(it - cuisines.begin());
}

TfIdfTable tfidf_from_counts(std::vector<std::string> cuisines, std::vector<std::string> ingredients,
                             std::vector<std::size_t> tf) {
    if (cuisines.size() < 2) throw DataError(kModule, "TF-IDF needs at least two cuisines");
    if (!std::is_sorted(cuisines.begin(), cuisines.end()) ||
        std::adjacent_find(cuisines.begin(), cuisines.end()) != cuisines.end()) {
        throw DataError(kModule, "cuisine names must be sorted and unique");
    }
    const std::size_t rows = cuisines.size();
    const std::size_t cols = ingredients.size();
    if (tf.size() != rows * cols) throw DataError(kModule, "term-count matrix has wrong shape");

    TfIdfTable table;
    table.n_docs = rows;
    table.df.assign(cols, 0);
    for (std::size_t c = 0; c < rows; ++c) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (tf[c * cols + j] > 0) ++table.df[j];
        }
    }
    std::vector<double> idf(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) {
        if (table.df[j] > 0) {
            idf[j] = std::log(static_cast<double>(rows) / static_cast<double>(table.df[j]));
        }
    }
    table.weights.assign(rows * cols, 0.0);
    for (std::size_t c = 0; c < rows; ++c) {
        for (std::size_t j = 0; j < cols; ++j) {
            const auto count = tf[c * cols + j];
            if (count > 0) table.weights[c * cols + j] = static_cast<double>(count) * idf[j];
        }
    }
    table.cuisines = std::move(cuisines);
    table.ingredients = std::move(ingredients);
    table.tf = std::move(tf);
    return table;
}

TfIdfTable tfidf(const BalancedSample& sample, const RecipeCorpus& corpus) {
    std::vector<std::string> cuisines = sample.cuisines();
    const std::size_t cols = corpus.vocabulary_size();
    std::vector<std::size_t> tf(cuisines.size() * cols, 0);
    for (std::size_t c = 0; c < cuisines.size(); ++c) {
        for (const auto r : sample.members(cuisines[c])) {
            for (const auto& id : corpus.recipes[r].std_ingredients) {
                ++tf[c * cols + corpus.ingredient_index.at(id)];
            }
        }
    }
    return tfidf_from_counts(std::move(cuisines), corpus.vocabulary, std::move(tf));
}

std::vector<NotableIngredient> notable_ingredients(const TfIdfTable& table, const std::string& cuisine,
                                                   std::size_t k) {
    if (k == 0) throw ConfigError(kModule, "k must be at least 1");
    const std::size_t row = table.row_of(cuisine);
    std::vector<NotableIngredient> ranked;
    for (std::size_t j = 0; j < table.ingredients.size(); ++j) {
        const double w = table.weight(row, j);
        if (w > 0.0) ranked.push_back({table.ingredients[j], w});
    }
    const auto order = [](const NotableIngredient& a, const NotableIngredient& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return a.ingredient < b.ingredient;
    };
    const std::size_t keep = std::min(k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(), order);
    ranked.resize(keep);
    return ranked;
}

}  // namespace culinary
