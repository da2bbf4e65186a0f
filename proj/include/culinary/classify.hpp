#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "culinary/corpus.hpp"

namespace culinary {

// ---------------------------------------------------------------------------
// Features
// ---------------------------------------------------------------------------

enum class LabelKind { cuisine, region };
std::string_view label_kind_name(LabelKind kind);
std::optional<LabelKind> parse_label_kind(std::string_view text);

/// Boolean bag-of-ingredients rows, stored as sorted active feature indices.
struct FeatureMatrix {
    LabelKind label_kind = LabelKind::cuisine;
    /// Vocabulary; row length V = feature_names.size().
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;
    std::vector<std::vector<std::uint32_t>> rows;
    std::vector<std::size_t> labels;
    std::vector<std::string> row_ids;
    /// Recipes left out by featurize (small classes, or no region).
    std::size_t dropped_rows = 0;

    std::size_t dimension() const { return feature_names.size(); }
    std::size_t num_classes() const { return class_names.size(); }
    std::size_t size() const { return rows.size(); }
    std::vector<std::size_t> class_counts() const;
    std::vector<double> dense_row(std::size_t i) const;
    /// Rows selected by position, in the given order.
    FeatureMatrix subset(std::span<const std::size_t> positions) const;
};

/// Cuisine mode keeps classes with more than `min_recipes` recipes; region
/// mode needs `tables` and drops recipes whose cuisine has no region. Rows
/// are ordered by recipe id.
FeatureMatrix featurize(const RecipeCorpus& corpus, LabelKind kind, std::size_t min_recipes = 100,
                        const CountryTables* tables = nullptr);

struct TrainTestSplit {
    FeatureMatrix train;
    FeatureMatrix test;
};

/// Stratified split: each class of size m contributes m - ceil(m * train_frac)
/// rows to test. Class c is shuffled with derive_seed(derive_seed(seed, "split"), c).
TrainTestSplit split(const FeatureMatrix& features, double train_frac, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Linear one-vs-rest SVM
// ---------------------------------------------------------------------------

struct SvmConfig {
    std::size_t epochs = 20;
    /// Step size at update t is lr / (l2 * t).
    double lr = 0.5;
    double l2 = 1e-4;
    std::uint64_t seed = 0;
    /// Weight examples of class c by N / (K * n_c).
    bool balance_classes = true;
    /// Explicit per-class example weights; overrides balance_classes when set.
    std::vector<double> class_weights;
};

struct BinarySvm {
    std::vector<double> weights;
    double bias = 0.0;
    /// Regularized weighted hinge objective after each epoch.
    std::vector<double> loss_history;
};

struct LinearModel {
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;
    /// Row-major K x V.
    std::vector<double> weights;
    std::vector<double> biases;
    std::vector<double> class_weights;
    /// Sum over classes of the binary objectives, per epoch.
    std::vector<double> loss_history;

    std::size_t dimension() const { return feature_names.size(); }
    std::size_t num_classes() const { return class_names.size(); }
    double score(std::size_t k, std::span<const std::uint32_t> active) const;
};

/// Per-class example weights used by train_svm.
std::vector<double> svm_class_weights(const FeatureMatrix& train, const SvmConfig& config);

/// One binary hinge problem: rows with label `positive` against the rest.
/// Stochastic subgradient descent with the bias as a regularized feature.
BinarySvm train_binary_svm(const FeatureMatrix& train, std::size_t positive,
                           std::span<const double> class_weights, const SvmConfig& config,
                           std::uint64_t seed);

/// K binary problems; class k uses seed derive_seed(derive_seed(config.seed, "svm"), k).
LinearModel train_svm(const FeatureMatrix& train, const SvmConfig& config);

// ---------------------------------------------------------------------------
// Feed-forward network
// ---------------------------------------------------------------------------

struct MlpConfig {
    std::vector<std::size_t> hidden = {1000, 1000, 500, 500};
    std::size_t epochs = 30;
    std::size_t batch = 128;
    double dropout = 0.5;
    double rho = 0.95;
    double eps = 1e-6;
    std::uint64_t seed = 0;
};

/// One Adadelta step for a single parameter. Updates both running averages
/// and returns the increment to add to the parameter.
double adadelta_step(double grad, double& mean_sq_grad, double& mean_sq_update, double rho, double eps);

struct DenseLayer {
    /// out x in.
    Eigen::MatrixXd weights;
    Eigen::VectorXd bias;
    Eigen::MatrixXd mean_sq_grad_w;
    Eigen::MatrixXd mean_sq_update_w;
    Eigen::VectorXd mean_sq_grad_b;
    Eigen::VectorXd mean_sq_update_b;
};

/// ReLU hidden layers with inverted dropout, softmax output.
struct MlpModel {
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;
    std::vector<DenseLayer> layers;
    double dropout_rate = 0.5;
    double rho = 0.95;
    double eps = 1e-6;
    std::vector<double> loss_history;

    std::size_t dimension() const { return feature_names.size(); }
    std::size_t num_classes() const { return class_names.size(); }
    /// V, hidden..., K.
    std::vector<std::size_t> layer_sizes() const;
    std::size_t parameter_count() const;
    /// Layer by layer: weights (column-major), then bias.
    std::vector<double> flat_parameters() const;
    void set_flat_parameters(std::span<const double> values);
};

/// Glorot-uniform weights, zero biases, zero accumulators.
MlpModel init_mlp(std::vector<std::string> feature_names, std::vector<std::string> class_names,
                  const MlpConfig& config);

/// Column-per-example sparse input (V x batch).
Eigen::SparseMatrix<double> to_input(const FeatureMatrix& features, std::span<const std::size_t> positions);
Eigen::SparseMatrix<double> to_input(const Eigen::MatrixXd& dense_columns);

/// Class probabilities, K x batch. Inference mode (no dropout).
Eigen::MatrixXd mlp_forward(const MlpModel& model, const Eigen::SparseMatrix<double>& inputs);
/// Training-mode pass: hidden activations are dropped with probability
/// `dropout` (masks drawn from `seed`) and survivors scaled by 1/(1-dropout).
Eigen::MatrixXd mlp_forward_training(const MlpModel& model, const Eigen::SparseMatrix<double>& inputs,
                                     double dropout, std::uint64_t seed);

struct LossGradient {
    double loss = 0.0;
    /// Same layout as MlpModel::flat_parameters.
    std::vector<double> gradient;
};

/// Mean cross-entropy and its gradient with dropout disabled.
LossGradient mlp_loss_gradient(const MlpModel& model, const Eigen::SparseMatrix<double>& inputs,
                               std::span<const std::size_t> labels);

/// Minimizes mean cross-entropy with Adadelta over shuffled mini-batches.
MlpModel train_mlp(const FeatureMatrix& train, const MlpConfig& config);

// ---------------------------------------------------------------------------
// Prediction and evaluation
// ---------------------------------------------------------------------------

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(std::span<const double> values);

std::vector<std::size_t> predict(const LinearModel& model, const FeatureMatrix& rows);
std::vector<std::size_t> predict(const MlpModel& model, const FeatureMatrix& rows);
/// Dense rows of length V.
std::size_t predict(const LinearModel& model, std::span<const double> dense_row);
std::size_t predict(const MlpModel& model, std::span<const double> dense_row);
std::vector<double> predict_proba(const MlpModel& model, std::span<const double> dense_row);

struct ClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
    std::size_t predicted = 0;
};

struct EvalReport {
    std::vector<std::string> class_names;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    /// confusion[actual][predicted].
    std::vector<std::vector<std::size_t>> confusion;
    std::vector<ClassScores> per_class;
    /// Column of the largest off-diagonal count in each row, if any.
    std::vector<std::optional<std::size_t>> top_confusion;
};

EvalReport evaluate(std::span<const std::size_t> truth, std::span<const std::size_t> predicted,
                    std::vector<std::string> class_names);
EvalReport evaluate(const LinearModel& model, const FeatureMatrix& test);
EvalReport evaluate(const MlpModel& model, const FeatureMatrix& test);

// ---------------------------------------------------------------------------
// Model files
// ---------------------------------------------------------------------------

using Model = std::variant<LinearModel, MlpModel>;

/// Little-endian binary layout, documented in README.md.
void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace culinary
