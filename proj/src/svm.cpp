#include <algorithm>
#include <cmath>
#include <numeric>

#include "culinary/classify.hpp"
#include "culinary/error.hpp"
#include "culinary/rng.hpp"

namespace culinary {

namespace {

constexpr const char* kModule = "classify";

void check_training_set(const FeatureMatrix& train) {
    if (train.size() == 0) throw DataError(kModule, "empty training set");
    const auto counts = train.class_counts();
    const auto populated = std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; });
    if (populated < 2) throw DataError(kModule, "training needs at least two populated classes");
}

}  // namespace

double LinearModel::score(std::size_t k, std::span<const std::uint32_t> active) const {
    const double* row = weights.data() + k * dimension();
    double s = biases[k];
    for (const auto j : active) s += row[j];
    return s;
}

std::vector<double> svm_class_weights(const FeatureMatrix& train, const SvmConfig& config) {
    const std::size_t k = train.num_classes();
    if (!config.class_weights.empty()) {
        if (config.class_weights.size() != k) throw ConfigError(kModule, "class weight count must equal K");
        return config.class_weights;
    }
    std::vector<double> weights(k, 1.0);
    if (!config.balance_classes) return weights;
    const auto counts = train.class_counts();
    const auto n = static_cast<double>(train.size());
    for (std::size_t c = 0; c < k; ++c) {
        weights[c] = counts[c] ? n / (static_cast<double>(k) * static_cast<double>(counts[c])) : 0.0;
    }
    return weights;
}

BinarySvm train_binary_svm(const FeatureMatrix& train, std::size_t positive,
                           std::span<const double> class_weights, const SvmConfig& config,
                           std::uint64_t seed) {
    if (!(config.l2 > 0.0) || !(config.lr > 0.0)) throw ConfigError(kModule, "lr and l2 must be positive");
    if (config.epochs == 0) throw ConfigError(kModule, "epochs must be at least 1");
    const std::size_t dim = train.dimension();
    const std::size_t n = train.size();

    // w = scale * v; slot `dim` holds the bias, which is regularized like
    // any other weight.
    std::vector<double> v(dim + 1, 0.0);
    double scale = 1.0;
    auto margin_of = [&](std::size_t i) {
        double s = v[dim];
        for (const auto j : train.rows[i]) s += v[j];
        return scale * s;
    };

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    BinarySvm result;
    std::uint64_t t = 0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        for (const auto i : order) {
            ++t;
            const double eta = config.lr / (config.l2 * static_cast<double>(t));
            const double y = train.labels[i] == positive ? 1.0 : -1.0;
            const double weight = class_weights[train.labels[i]];
            const double margin = y * margin_of(i);
            const double decay = 1.0 - eta * config.l2;
            if (decay <= 0.0) {
                std::fill(v.begin(), v.end(), 0.0);
                scale = 1.0;
            } else {
                scale *= decay;
            }
            if (margin < 1.0 && weight > 0.0) {
                const double step = eta * weight * y / scale;
                for (const auto j : train.rows[i]) v[j] += step;
                v[dim] += step;
            }
            if (scale < 1e-9) {
                for (auto& x : v) x *= scale;
                scale = 1.0;
            }
        }

        double norm_sq = 0.0;
        for (const double x : v) norm_sq += x * x;
        double hinge = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double y = train.labels[i] == positive ? 1.0 : -1.0;
            hinge += class_weights[train.labels[i]] * std::max(0.0, 1.0 - y * margin_of(i));
        }
        const double objective = 0.5 * config.l2 * scale * scale * norm_sq + hinge / static_cast<double>(n);
        if (!std::isfinite(objective)) {
            throw NumericError(kModule, "SVM training diverged (non-finite loss); use a smaller lr");
        }
        result.loss_history.push_back(objective);
    }

    result.weights.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) result.weights[j] = scale * v[j];
    result.bias = scale * v[dim];
    return result;
}

LinearModel train_svm(const FeatureMatrix& train, const SvmConfig& config) {
    check_training_set(train);
    LinearModel model;
    model.feature_names = train.feature_names;
    model.class_names = train.class_names;
    model.class_weights = svm_class_weights(train, config);
    const std::size_t k = train.num_classes();
    const std::size_t dim = train.dimension();
    model.weights.assign(k * dim, 0.0);
    model.biases.assign(k, 0.0);
    model.loss_history.assign(config.epochs, 0.0);
    const std::uint64_t base_seed = derive_seed(config.seed, "svm");
    for (std::size_t c = 0; c < k; ++c) {
        const BinarySvm binary = train_binary_svm(train, c, model.class_weights, config,
                                                  derive_seed(base_seed, static_cast<std::uint64_t>(c)));
        std::copy(binary.weights.begin(), binary.weights.end(), model.weights.begin() + static_cast<std::ptrdiff_t>(c * dim));
        model.biases[c] = binary.bias;
        for (std::size_t e = 0; e < config.epochs; ++e) model.loss_history[e] += binary.loss_history[e];
    }
    return model;
}

std::vector<std::size_t> predict(const LinearModel& model, const FeatureMatrix& rows) {
    if (rows.dimension() != model.dimension()) throw DataError(kModule, "feature dimension mismatch");
    std::vector<std::size_t> out;
    out.reserve(rows.size());
    std::vector<double> scores(model.num_classes());
    for (const auto& active : rows.rows) {
        for (std::size_t k = 0; k < scores.size(); ++k) scores[k] = model.score(k, active);
        out.push_back(argmax(scores));
    }
    return out;
}

std::size_t predict(const LinearModel& model, std::span<const double> dense_row) {
    if (dense_row.size() != model.dimension()) throw DataError(kModule, "feature dimension mismatch");
    std::vector<double> scores(model.num_classes());
    for (std::size_t k = 0; k < scores.size(); ++k) {
        const double* w = model.weights.data() + k * model.dimension();
        double s = model.biases[k];
        for (std::size_t j = 0; j < dense_row.size(); ++j) s += w[j] * dense_row[j];
        scores[k] = s;
    }
    return argmax(scores);
}

}  // namespace culinary
