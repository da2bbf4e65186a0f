#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "culinary/corpus.hpp"
#include "culinary/metrics.hpp"

namespace culinary {

// ---------------------------------------------------------------------------
// Ingredient-based similarity
// ---------------------------------------------------------------------------

/// Jensen-Shannon divergence with base-2 logs, so the result lies in [0, 1].
/// Both inputs must be probability vectors of equal length.
double js_divergence(std::span<const double> p, std::span<const double> q);
double js_divergence(const CuisineDistribution& p, const CuisineDistribution& q);

/// 1 - JS(p, q).
double ingredient_similarity(std::span<const double> p, std::span<const double> q);
double ingredient_similarity(const CuisineDistribution& p, const CuisineDistribution& q);

// ---------------------------------------------------------------------------
// Flavor-based similarity
// ---------------------------------------------------------------------------

using FlavorVector = Eigen::Matrix<double, 6, 1>;
using FlavorMatrix = Eigen::Matrix<double, 6, 6>;

struct FlavorGaussian {
    std::string cuisine;
    FlavorVector mean = FlavorVector::Zero();
    FlavorMatrix cov = FlavorMatrix::Identity();
    /// Recipes with all six scores that entered the fit.
    std::size_t n = 0;
    /// Sampled recipes skipped for missing scores.
    std::size_t excluded = 0;
};

inline constexpr double kDefaultRidge = 1e-6;
inline constexpr double kDefaultSimilarityCap = 1e9;

/// Maximum-likelihood fit (covariance divided by n) plus ridge * I.
/// Needs at least 7 complete vectors.
FlavorGaussian fit_flavor_gaussian(std::span<const std::array<double, kFlavorCount>> vectors,
                                   double ridge = kDefaultRidge, std::string cuisine = {});
FlavorGaussian fit_flavor_gaussian(const BalancedSample& sample, const std::string& cuisine,
                                   const RecipeCorpus& corpus, double ridge = kDefaultRidge);

/// KL(P || Q) between multivariate normals of any dimension, closed form.
double gaussian_kl(const Eigen::VectorXd& mean_p, const Eigen::MatrixXd& cov_p,
                   const Eigen::VectorXd& mean_q, const Eigen::MatrixXd& cov_q);

/// (KL(P||Q) + KL(Q||P)) / 2; exactly symmetric, 0 for identical parameters.
double gaussian_symkl(const Eigen::VectorXd& mean_p, const Eigen::MatrixXd& cov_p,
                      const Eigen::VectorXd& mean_q, const Eigen::MatrixXd& cov_q);
double gaussian_symkl(const FlavorGaussian& a, const FlavorGaussian& b);

/// 1 / symkl, or `cap` once symkl drops below 1 / cap.
double similarity_from_symkl(double symkl, double cap = kDefaultSimilarityCap);
double flavor_similarity(const FlavorGaussian& a, const FlavorGaussian& b,
                         double cap = kDefaultSimilarityCap);

// ---------------------------------------------------------------------------
// Similarity matrices and graphs
// ---------------------------------------------------------------------------

struct SimilarityMatrix {
    std::vector<std::string> names;
    /// Row-major names.size() x names.size().
    std::vector<double> values;

    std::size_t size() const { return names.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * names.size() + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * names.size() + j]; }
};

/// Pairwise 1 - JS; diagonal is 1. Pairs are split over `threads` workers.
SimilarityMatrix ingredient_similarity_matrix(const std::vector<CuisineDistribution>& dists,
                                              unsigned threads = 1);
/// Pairwise flavor similarity; diagonal is `cap`.
SimilarityMatrix flavor_similarity_matrix(const std::vector<FlavorGaussian>& gaussians,
                                          double cap = kDefaultSimilarityCap, unsigned threads = 1);

enum class GraphKind { ingredient, flavor };
std::string_view graph_kind_name(GraphKind kind);
std::optional<GraphKind> parse_graph_kind(std::string_view text);

struct GraphNode {
    std::string name;
    std::optional<Region> region;

    bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
    std::string source;
    std::string target;
    double weight = 0.0;

    bool operator==(const GraphEdge&) const = default;
};

/// Directed top-k graph. Nodes sorted by name; edges sorted by (source, target).
struct SimilarityGraph {
    GraphKind kind = GraphKind::ingredient;
    std::size_t k = 0;
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;

    bool operator==(const SimilarityGraph&) const = default;
};

/// Links every node to its k most similar others; equal weights go to the
/// lexicographically smaller name. All chosen weights must be positive.
SimilarityGraph build_similarity_graph(const SimilarityMatrix& matrix, const CountryTables& regions,
                                       std::size_t k, GraphKind kind = GraphKind::ingredient);

enum class GraphFormat { dot, graphml, json };
std::optional<GraphFormat> parse_graph_format(std::string_view text);
std::string_view graph_format_extension(GraphFormat format);

void export_graph(const SimilarityGraph& graph, GraphFormat format, std::ostream& out);
void export_graph(const SimilarityGraph& graph, GraphFormat format, const std::filesystem::path& path);

/// Reads the JSON export back.
SimilarityGraph parse_graph_json(std::istream& in);

/// CSV `cuisine,region`.
void write_region_legend(const SimilarityGraph& graph, std::ostream& out);

}  // namespace culinary
