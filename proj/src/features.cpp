#include <algorithm>
#include <cmath>
#include <numeric>

#include "culinary/classify.hpp"
#include "culinary/error.hpp"
#include "culinary/rng.hpp"

namespace culinary {

namespace {
constexpr const char* kModule = "classify";
}

std::string_view label_kind_name(LabelKind kind) {
    return kind == LabelKind::cuisine ? "cuisine" : "region";
}

std::optional<LabelKind> parse_label_kind(std::string_view text) {
    if (text == "cuisine") return LabelKind::cuisine;
    if (text == "region") return LabelKind::region;
    return std::nullopt;
}

std::vector<std::size_t> FeatureMatrix::class_counts() const {
    std::vector<std::size_t> counts(num_classes(), 0);
    for (const auto label : labels) ++counts[label];
    return counts;
}

std::vector<double> FeatureMatrix::dense_row(std::size_t i) const {
    std::vector<double> row(dimension(), 0.0);
    for (const auto j : rows[i]) row[j] = 1.0;
    return row;
}

FeatureMatrix FeatureMatrix::subset(std::span<const std::size_t> positions) const {
    FeatureMatrix out;
    out.label_kind = label_kind;
    out.feature_names = feature_names;
    out.class_names = class_names;
    out.rows.reserve(positions.size());
    for (const auto p : positions) {
        out.rows.push_back(rows.at(p));
        out.labels.push_back(labels.at(p));
        out.row_ids.push_back(row_ids.at(p));
    }
    return out;
}

FeatureMatrix featurize(const RecipeCorpus& corpus, LabelKind kind, std::size_t min_recipes,
                        const CountryTables* tables) {
    if (!corpus.standardized) throw DataError(kModule, "featurize needs a standardized corpus");

    FeatureMatrix fm;
    fm.label_kind = kind;
    fm.feature_names = corpus.vocabulary;

    // cuisine -> class id
    std::map<std::string, std::size_t> class_of;
    if (kind == LabelKind::cuisine) {
        for (const auto& [cuisine, members] : corpus.cuisines) {
            if (members.size() > min_recipes) {
                class_of[cuisine] = fm.class_names.size();
                fm.class_names.push_back(cuisine);
            }
        }
    } else {
        if (tables == nullptr) throw ConfigError(kModule, "region labels need country/region tables");
        std::map<std::string, Region> region_of;
        std::vector<bool> present(kRegionCount, false);
        for (const auto& [cuisine, members] : corpus.cuisines) {
            if (const auto region = tables->region_of_cuisine(cuisine)) {
                region_of[cuisine] = *region;
                present[static_cast<std::size_t>(*region)] = true;
            }
        }
        std::vector<std::size_t> region_class(kRegionCount, 0);
        for (std::size_t r = 0; r < kRegionCount; ++r) {
            if (present[r]) {
                region_class[r] = fm.class_names.size();
                fm.class_names.emplace_back(region_name(static_cast<Region>(r)));
            }
        }
        for (const auto& [cuisine, region] : region_of) {
            class_of[cuisine] = region_class[static_cast<std::size_t>(region)];
        }
    }
    if (fm.class_names.empty()) throw DataError(kModule, "no class satisfies the labeling rules");

    std::vector<std::size_t> order(corpus.recipes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return corpus.recipes[a].id < corpus.recipes[b].id;
    });
    for (const auto r : order) {
        const Recipe& recipe = corpus.recipes[r];
        const auto it = class_of.find(recipe.cuisine);
        if (it == class_of.end()) {
            ++fm.dropped_rows;
            continue;
        }
        std::vector<std::uint32_t> active;
        active.reserve(recipe.std_ingredients.size());
        for (const auto& id : recipe.std_ingredients) {
            active.push_back(static_cast<std::uint32_t>(corpus.ingredient_index.at(id)));
        }
        std::sort(active.begin(), active.end());
        fm.rows.push_back(std::move(active));
        fm.labels.push_back(it->second);
        fm.row_ids.push_back(recipe.id);
    }
    return fm;
}

TrainTestSplit split(const FeatureMatrix& features, double train_frac, std::uint64_t seed) {
    if (!(train_frac > 0.0 && train_frac < 1.0)) {
        throw ConfigError(kModule, "train fraction must lie strictly between 0 and 1");
    }
    std::vector<std::vector<std::size_t>> by_class(features.num_classes());
    for (std::size_t i = 0; i < features.size(); ++i) by_class[features.labels[i]].push_back(i);

    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto& members = by_class[c];
        if (members.size() < 2) {
            throw DataError(kModule, "class '" + features.class_names[c] + "' has fewer than 2 members");
        }
        Rng rng(derive_seed(derive_seed(seed, "split"), static_cast<std::uint64_t>(c)));
        rng.shuffle(std::span<std::size_t>(members));
        const double wanted = static_cast<double>(members.size()) * train_frac;
        const auto n_train = static_cast<std::size_t>(std::ceil(wanted - 1e-9));
        const std::size_t n_test = members.size() - std::min(n_train, members.size());
        test.insert(test.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(n_test));
        train.insert(train.end(), members.begin() + static_cast<std::ptrdiff_t>(n_test), members.end());
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {features.subset(train), features.subset(test)};
}

std::size_t argmax(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

EvalReport evaluate(std::span<const std::size_t> truth, std::span<const std::size_t> predicted,
                    std::vector<std::string> class_names) {
    if (truth.empty()) throw DataError(kModule, "evaluation needs a nonempty test set");
    if (truth.size() != predicted.size()) throw DataError(kModule, "prediction count mismatch");
    const std::size_t k = class_names.size();

    EvalReport report;
    report.class_names = std::move(class_names);
    report.confusion.assign(k, std::vector<std::size_t>(k, 0));
    std::size_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] >= k || predicted[i] >= k) throw DataError(kModule, "class id out of range");
        ++report.confusion[truth[i]][predicted[i]];
        if (truth[i] == predicted[i]) ++correct;
    }
    report.accuracy = static_cast<double>(correct) / static_cast<double>(truth.size());

    report.per_class.resize(k);
    double f1_sum = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        ClassScores& s = report.per_class[c];
        for (std::size_t j = 0; j < k; ++j) {
            s.support += report.confusion[c][j];
            s.predicted += report.confusion[j][c];
        }
        const auto tp = static_cast<double>(report.confusion[c][c]);
        s.precision = s.predicted ? tp / static_cast<double>(s.predicted) : 0.0;
        s.recall = s.support ? tp / static_cast<double>(s.support) : 0.0;
        s.f1 = (s.precision + s.recall) > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
        f1_sum += s.f1;

        std::optional<std::size_t> worst;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == c || report.confusion[c][j] == 0) continue;
            if (!worst || report.confusion[c][j] > report.confusion[c][*worst]) worst = j;
        }
        report.top_confusion.push_back(worst);
    }
    report.macro_f1 = k ? f1_sum / static_cast<double>(k) : 0.0;
    return report;
}

EvalReport evaluate(const LinearModel& model, const FeatureMatrix& test) {
    const auto predicted = predict(model, test);
    return evaluate(test.labels, predicted, model.class_names);
}

EvalReport evaluate(const MlpModel& model, const FeatureMatrix& test) {
    const auto predicted = predict(model, test);
    return evaluate(test.labels, predicted, model.class_names);
}

}  // namespace culinary
