#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "culinary/classify.hpp"
#include "culinary/error.hpp"
#include "culinary/rng.hpp"

namespace culinary {

namespace {

constexpr const char* kModule = "classify";

struct ForwardCache {
    std::vector<Eigen::MatrixXd> pre;   // Z_l, per layer
    std::vector<Eigen::MatrixXd> post;  // A_l for hidden layers (after dropout)
    std::vector<Eigen::MatrixXd> mask;  // scaled keep masks, hidden layers
    Eigen::MatrixXd log_probs;
};

struct Gradients {
    std::vector<Eigen::MatrixXd> w;
    std::vector<Eigen::VectorXd> b;
};

// Column-wise log-softmax with max shift.
Eigen::MatrixXd log_softmax(const Eigen::MatrixXd& logits) {
    Eigen::MatrixXd out(logits.rows(), logits.cols());
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
        const double shift = logits.col(c).maxCoeff();
        const double lse = std::log((logits.col(c).array() - shift).exp().sum()) + shift;
        out.col(c) = logits.col(c).array() - lse;
    }
    return out;
}

Eigen::MatrixXd affine(const DenseLayer& layer, const Eigen::SparseMatrix<double>& x) {
    Eigen::MatrixXd z = layer.weights * x;
    z.colwise() += layer.bias;
    return z;
}

Eigen::MatrixXd affine(const DenseLayer& layer, const Eigen::MatrixXd& x) {
    Eigen::MatrixXd z = layer.weights * x;
    z.colwise() += layer.bias;
    return z;
}

ForwardCache forward(const MlpModel& model, const Eigen::SparseMatrix<double>& x, double dropout, Rng* rng) {
    ForwardCache cache;
    const std::size_t depth = model.layers.size();
    const double keep = 1.0 - dropout;
    for (std::size_t l = 0; l < depth; ++l) {
        Eigen::MatrixXd z = l == 0 ? affine(model.layers[0], x) : affine(model.layers[l], cache.post.back());
        if (l + 1 == depth) {
            cache.log_probs = log_softmax(z);
            cache.pre.push_back(std::move(z));
            break;
        }
        Eigen::MatrixXd a = z.cwiseMax(0.0);
        if (rng != nullptr && dropout > 0.0) {
            Eigen::MatrixXd m(a.rows(), a.cols());
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = rng->uniform() < keep ? 1.0 / keep : 0.0;
            }
            a = a.cwiseProduct(m);
            cache.mask.push_back(std::move(m));
        }
        cache.pre.push_back(std::move(z));
        cache.post.push_back(std::move(a));
    }
    return cache;
}

double backward(const MlpModel& model, const Eigen::SparseMatrix<double>& x,
                std::span<const std::size_t> labels, const ForwardCache& cache, Gradients& grads) {
    const std::size_t depth = model.layers.size();
    const auto batch = static_cast<double>(labels.size());
    double loss = 0.0;
    Eigen::MatrixXd delta = cache.log_probs.array().exp();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto col = static_cast<Eigen::Index>(i);
        const auto row = static_cast<Eigen::Index>(labels[i]);
        loss -= cache.log_probs(row, col);
        delta(row, col) -= 1.0;
    }
    delta /= batch;

    grads.w.resize(depth);
    grads.b.resize(depth);
    for (std::size_t l = depth; l-- > 0;) {
        grads.b[l] = delta.rowwise().sum();
        if (l == 0) {
            grads.w[0] = delta * x.transpose();
            break;
        }
        grads.w[l] = delta * cache.post[l - 1].transpose();
        Eigen::MatrixXd upstream = model.layers[l].weights.transpose() * delta;
        upstream = upstream.cwiseProduct((cache.pre[l - 1].array() > 0.0).cast<double>().matrix());
        if (!cache.mask.empty()) upstream = upstream.cwiseProduct(cache.mask[l - 1]);
        delta = std::move(upstream);
    }
    return loss / batch;
}

template <typename Param>
void adadelta_apply(Param& param, const Param& grad, Param& mean_sq_grad, Param& mean_sq_update, double rho,
                    double eps) {
    mean_sq_grad.array() = rho * mean_sq_grad.array() + (1.0 - rho) * grad.array().square();
    const auto update =
        (-((mean_sq_update.array() + eps).sqrt() / (mean_sq_grad.array() + eps).sqrt()) * grad.array()).eval();
    mean_sq_update.array() = rho * mean_sq_update.array() + (1.0 - rho) * update.square();
    param.array() += update;
}

}  // namespace

double adadelta_step(double grad, double& mean_sq_grad, double& mean_sq_update, double rho, double eps) {
    mean_sq_grad = rho * mean_sq_grad + (1.0 - rho) * grad * grad;
    const double update = -std::sqrt(mean_sq_update + eps) / std::sqrt(mean_sq_grad + eps) * grad;
    mean_sq_update = rho * mean_sq_update + (1.0 - rho) * update * update;
    return update;
}

std::vector<std::size_t> MlpModel::layer_sizes() const {
    std::vector<std::size_t> sizes;
    if (layers.empty()) return sizes;
    sizes.push_back(static_cast<std::size_t>(layers.front().weights.cols()));
    for (const auto& layer : layers) sizes.push_back(static_cast<std::size_t>(layer.weights.rows()));
    return sizes;
}

std::size_t MlpModel::parameter_count() const {
    std::size_t count = 0;
    for (const auto& layer : layers) {
        count += static_cast<std::size_t>(layer.weights.size() + layer.bias.size());
    }
    return count;
}

std::vector<double> MlpModel::flat_parameters() const {
    std::vector<double> flat;
    flat.reserve(parameter_count());
    for (const auto& layer : layers) {
        flat.insert(flat.end(), layer.weights.data(), layer.weights.data() + layer.weights.size());
        flat.insert(flat.end(), layer.bias.data(), layer.bias.data() + layer.bias.size());
    }
    return flat;
}

void MlpModel::set_flat_parameters(std::span<const double> values) {
    if (values.size() != parameter_count()) throw DataError(kModule, "parameter vector has wrong length");
    std::size_t offset = 0;
    for (auto& layer : layers) {
        std::copy_n(values.data() + offset, layer.weights.size(), layer.weights.data());
        offset += static_cast<std::size_t>(layer.weights.size());
        std::copy_n(values.data() + offset, layer.bias.size(), layer.bias.data());
        offset += static_cast<std::size_t>(layer.bias.size());
    }
}

MlpModel init_mlp(std::vector<std::string> feature_names, std::vector<std::string> class_names,
                  const MlpConfig& config) {
    if (!(config.dropout >= 0.0 && config.dropout < 1.0)) throw ConfigError(kModule, "dropout must lie in [0,1)");
    if (!(config.rho > 0.0 && config.rho < 1.0)) throw ConfigError(kModule, "rho must lie in (0,1)");
    if (!(config.eps > 0.0)) throw ConfigError(kModule, "eps must be positive");
    if (feature_names.empty() || class_names.size() < 2) {
        throw DataError(kModule, "network needs a nonempty vocabulary and at least two classes");
    }
    MlpModel model;
    model.dropout_rate = config.dropout;
    model.rho = config.rho;
    model.eps = config.eps;

    std::vector<std::size_t> sizes{feature_names.size()};
    for (const auto h : config.hidden) {
        if (h == 0) throw ConfigError(kModule, "hidden layer sizes must be positive");
        sizes.push_back(h);
    }
    sizes.push_back(class_names.size());

    Rng rng(derive_seed(config.seed, "mlp/init"));
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const auto in = static_cast<Eigen::Index>(sizes[l]);
        const auto out = static_cast<Eigen::Index>(sizes[l + 1]);
        const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
        DenseLayer layer;
        layer.weights.resize(out, in);
        for (Eigen::Index c = 0; c < in; ++c) {
            for (Eigen::Index r = 0; r < out; ++r) layer.weights(r, c) = rng.uniform(-limit, limit);
        }
        layer.bias = Eigen::VectorXd::Zero(out);
        layer.mean_sq_grad_w = Eigen::MatrixXd::Zero(out, in);
        layer.mean_sq_update_w = Eigen::MatrixXd::Zero(out, in);
        layer.mean_sq_grad_b = Eigen::VectorXd::Zero(out);
        layer.mean_sq_update_b = Eigen::VectorXd::Zero(out);
        model.layers.push_back(std::move(layer));
    }
    model.feature_names = std::move(feature_names);
    model.class_names = std::move(class_names);
    return model;
}

Eigen::SparseMatrix<double> to_input(const FeatureMatrix& features, std::span<const std::size_t> positions) {
    std::vector<Eigen::Triplet<double>> entries;
    for (std::size_t c = 0; c < positions.size(); ++c) {
        for (const auto j : features.rows[positions[c]]) {
            entries.emplace_back(static_cast<int>(j), static_cast<int>(c), 1.0);
        }
    }
    Eigen::SparseMatrix<double> x(static_cast<Eigen::Index>(features.dimension()),
                                  static_cast<Eigen::Index>(positions.size()));
    x.setFromTriplets(entries.begin(), entries.end());
    return x;
}

Eigen::SparseMatrix<double> to_input(const Eigen::MatrixXd& dense_columns) {
    return dense_columns.sparseView(0.0, 0.0);
}

Eigen::MatrixXd mlp_forward(const MlpModel& model, const Eigen::SparseMatrix<double>& inputs) {
    if (static_cast<std::size_t>(inputs.rows()) != model.dimension()) {
        throw DataError(kModule, "feature dimension mismatch");
    }
    return forward(model, inputs, 0.0, nullptr).log_probs.array().exp();
}

Eigen::MatrixXd mlp_forward_training(const MlpModel& model, const Eigen::SparseMatrix<double>& inputs,
                                     double dropout, std::uint64_t seed) {
    if (static_cast<std::size_t>(inputs.rows()) != model.dimension()) {
        throw DataError(kModule, "feature dimension mismatch");
    }
    if (dropout < 0.0 || dropout >= 1.0) throw ConfigError(kModule, "dropout must lie in [0, 1)");
    Rng rng(seed);
    return forward(model, inputs, dropout, &rng).log_probs.array().exp();
}

LossGradient mlp_loss_gradient(const MlpModel& model, const Eigen::SparseMatrix<double>& inputs,
                               std::span<const std::size_t> labels) {
    if (static_cast<std::size_t>(inputs.cols()) != labels.size()) throw DataError(kModule, "label count mismatch");
    const ForwardCache cache = forward(model, inputs, 0.0, nullptr);
    Gradients grads;
    LossGradient out;
    out.loss = backward(model, inputs, labels, cache, grads);
    out.gradient.reserve(model.parameter_count());
    for (std::size_t l = 0; l < grads.w.size(); ++l) {
        out.gradient.insert(out.gradient.end(), grads.w[l].data(), grads.w[l].data() + grads.w[l].size());
        out.gradient.insert(out.gradient.end(), grads.b[l].data(), grads.b[l].data() + grads.b[l].size());
    }
    return out;
}

MlpModel train_mlp(const FeatureMatrix& train, const MlpConfig& config) {
    if (train.size() == 0) throw DataError(kModule, "empty training set");
    const auto counts = train.class_counts();
    if (std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) < 2) {
        throw DataError(kModule, "training needs at least two populated classes");
    }
    if (config.batch == 0 || config.epochs == 0) throw ConfigError(kModule, "batch and epochs must be positive");

    MlpModel model = init_mlp(train.feature_names, train.class_names, config);
    Rng rng(derive_seed(config.seed, "mlp/train"));
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Gradients grads;
    std::vector<std::size_t> labels;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch) {
            const std::size_t end = std::min(order.size(), start + config.batch);
            const std::span<const std::size_t> batch(order.data() + start, end - start);
            labels.clear();
            for (const auto i : batch) labels.push_back(train.labels[i]);
            const auto x = to_input(train, batch);
            const ForwardCache cache = forward(model, x, config.dropout, &rng);
            const double loss = backward(model, x, labels, cache, grads);
            if (!std::isfinite(loss)) throw NumericError(kModule, "network training diverged (non-finite loss)");
            epoch_loss += loss * static_cast<double>(batch.size());
            for (std::size_t l = 0; l < model.layers.size(); ++l) {
                DenseLayer& layer = model.layers[l];
                adadelta_apply(layer.weights, grads.w[l], layer.mean_sq_grad_w, layer.mean_sq_update_w, config.rho,
                               config.eps);
                adadelta_apply(layer.bias, grads.b[l], layer.mean_sq_grad_b, layer.mean_sq_update_b, config.rho,
                               config.eps);
            }
        }
        model.loss_history.push_back(epoch_loss / static_cast<double>(train.size()));
    }
    return model;
}

std::vector<std::size_t> predict(const MlpModel& model, const FeatureMatrix& rows) {
    if (rows.dimension() != model.dimension()) throw DataError(kModule, "feature dimension mismatch");
    std::vector<std::size_t> out;
    out.reserve(rows.size());
    constexpr std::size_t kChunk = 256;
    std::vector<std::size_t> positions;
    for (std::size_t start = 0; start < rows.size(); start += kChunk) {
        positions.resize(std::min(kChunk, rows.size() - start));
        std::iota(positions.begin(), positions.end(), start);
        const Eigen::MatrixXd probs = mlp_forward(model, to_input(rows, positions));
        for (Eigen::Index c = 0; c < probs.cols(); ++c) {
            const Eigen::VectorXd column = probs.col(c);
            out.push_back(argmax(std::span<const double>(column.data(), static_cast<std::size_t>(column.size()))));
        }
    }
    return out;
}

std::vector<double> predict_proba(const MlpModel& model, std::span<const double> dense_row) {
    if (dense_row.size() != model.dimension()) throw DataError(kModule, "feature dimension mismatch");
    const Eigen::Map<const Eigen::VectorXd> column(dense_row.data(), static_cast<Eigen::Index>(dense_row.size()));
    const Eigen::MatrixXd probs = mlp_forward(model, to_input(Eigen::MatrixXd(column)));
    return {probs.data(), probs.data() + probs.size()};
}

std::size_t predict(const MlpModel& model, std::span<const double> dense_row) {
    const auto probs = predict_proba(model, dense_row);
    return argmax(probs);
}

}  // namespace culinary
