#include "culinary/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

#include <Eigen/Cholesky>
#include <nlohmann/json.hpp>

#include "culinary/error.hpp"
#include "culinary/format.hpp"

namespace culinary {

namespace {

constexpr const char* kModule = "similarity";
constexpr double kDistributionTolerance = 1e-9;

void check_distribution(std::span<const double> p, const char* label) {
    double sum = 0.0;
    for (const double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw DataError(kModule, std::string(label) + " has a negative or non-finite entry");
        }
        sum += v;
    }
    if (std::abs(sum - 1.0) > kDistributionTolerance) {
        throw DataError(kModule, std::string(label) + " does not sum to 1");
    }
}

// sum_i p_i log2(p_i / m_i) over p_i > 0
double kl_to_mixture(std::span<const double> p, std::span<const double> q) {
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) {
            const double m = 0.5 * (p[i] + q[i]);
            kl += p[i] * std::log2(p[i] / m);
        }
    }
    return kl;
}

// Splits [0, count) into contiguous chunks, one per worker.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    threads = std::max(1u, threads);
    if (threads == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> workers;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = t * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) break;
        workers.emplace_back([&fn, begin, end] {
            for (std::size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& w : workers) w.join();
}

std::string dot_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string xml_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string region_label(const std::optional<Region>& region) {
    return region ? std::string(region_name(*region)) : std::string();
}

}  // namespace

double js_divergence(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) {
        throw DataError(kModule, "distribution length mismatch: " + std::to_string(p.size()) + " vs " +
                                     std::to_string(q.size()));
    }
    check_distribution(p, "first distribution");
    check_distribution(q, "second distribution");
    const double js = 0.5 * (kl_to_mixture(p, q) + kl_to_mixture(q, p));
    return std::clamp(js, 0.0, 1.0);
}

double js_divergence(const CuisineDistribution& p, const CuisineDistribution& q) {
    return js_divergence(p.probs, q.probs);
}

double ingredient_similarity(std::span<const double> p, std::span<const double> q) {
    return 1.0 - js_divergence(p, q);
}

double ingredient_similarity(const CuisineDistribution& p, const CuisineDistribution& q) {
    return 1.0 - js_divergence(p.probs, q.probs);
}

// ---------------------------------------------------------------------------

FlavorGaussian fit_flavor_gaussian(std::span<const std::array<double, kFlavorCount>> vectors,
                                   double ridge, std::string cuisine) {
    constexpr std::size_t d = kFlavorCount;
    if (vectors.size() < d + 1) {
        throw DataError(kModule, "cuisine '" + cuisine + "' has " + std::to_string(vectors.size()) +
                                     " complete flavor vectors; need at least " + std::to_string(d + 1));
    }
    if (!(ridge >= 0.0)) throw ConfigError(kModule, "ridge must be nonnegative");

    FlavorGaussian g;
    g.cuisine = std::move(cuisine);
    g.n = vectors.size();
    const double n = static_cast<double>(vectors.size());
    g.mean.setZero();
    for (const auto& v : vectors) {
        for (std::size_t i = 0; i < d; ++i) g.mean(static_cast<Eigen::Index>(i)) += v[i];
    }
    g.mean /= n;

    g.cov.setZero();
    for (const auto& v : vectors) {
        for (std::size_t i = 0; i < d; ++i) {
            const double di = v[i] - g.mean(static_cast<Eigen::Index>(i));
            for (std::size_t j = i; j < d; ++j) {
                g.cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
                    di * (v[j] - g.mean(static_cast<Eigen::Index>(j)));
            }
        }
    }
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(d); ++i) {
        for (Eigen::Index j = i; j < static_cast<Eigen::Index>(d); ++j) {
            g.cov(i, j) /= n;
            g.cov(j, i) = g.cov(i, j);
        }
        g.cov(i, i) += ridge;
    }
    return g;
}

FlavorGaussian fit_flavor_gaussian(const BalancedSample& sample, const std::string& cuisine,
                                   const RecipeCorpus& corpus, double ridge) {
    std::vector<std::array<double, kFlavorCount>> vectors;
    std::size_t excluded = 0;
    for (const auto r : sample.members(cuisine)) {
        const Recipe& recipe = corpus.recipes[r];
        if (!recipe.has_complete_flavors()) {
            ++excluded;
            continue;
        }
        std::array<double, kFlavorCount> v{};
        for (std::size_t f = 0; f < kFlavorCount; ++f) v[f] = *recipe.flavors[f];
        vectors.push_back(v);
    }
    FlavorGaussian g = fit_flavor_gaussian(vectors, ridge, cuisine);
    g.excluded = excluded;
    return g;
}

double gaussian_kl(const Eigen::VectorXd& mean_p, const Eigen::MatrixXd& cov_p,
                   const Eigen::VectorXd& mean_q, const Eigen::MatrixXd& cov_q) {
    const auto d = mean_p.size();
    if (mean_q.size() != d || cov_p.rows() != d || cov_p.cols() != d || cov_q.rows() != d ||
        cov_q.cols() != d) {
        throw DataError(kModule, "Gaussian dimension mismatch");
    }
    const Eigen::LLT<Eigen::MatrixXd> llt_p(cov_p);
    const Eigen::LLT<Eigen::MatrixXd> llt_q(cov_q);
    if (llt_p.info() != Eigen::Success || llt_q.info() != Eigen::Success) {
        throw NumericError(kModule, "covariance is not positive definite (increase the ridge)");
    }
    const auto log_det = [](const Eigen::LLT<Eigen::MatrixXd>& llt) {
        return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    };
    const double trace = llt_q.solve(cov_p).trace();
    const Eigen::VectorXd diff = mean_q - mean_p;
    const double mahalanobis = diff.dot(llt_q.solve(diff));
    const double kl = 0.5 * (trace + mahalanobis - static_cast<double>(d) + log_det(llt_q) - log_det(llt_p));
    return std::max(0.0, kl);
}

double gaussian_symkl(const Eigen::VectorXd& mean_p, const Eigen::MatrixXd& cov_p,
                      const Eigen::VectorXd& mean_q, const Eigen::MatrixXd& cov_q) {
    const double forward = gaussian_kl(mean_p, cov_p, mean_q, cov_q);
    const double backward = gaussian_kl(mean_q, cov_q, mean_p, cov_p);
    if (mean_p == mean_q && cov_p == cov_q) return 0.0;
    // Commutative sum: swapping the arguments yields the same bits.
    return 0.5 * (forward + backward);
}

double gaussian_symkl(const FlavorGaussian& a, const FlavorGaussian& b) {
    return gaussian_symkl(Eigen::VectorXd(a.mean), Eigen::MatrixXd(a.cov), Eigen::VectorXd(b.mean),
                          Eigen::MatrixXd(b.cov));
}

double similarity_from_symkl(double symkl, double cap) {
    if (!(cap > 0.0)) throw ConfigError(kModule, "similarity cap must be positive");
    if (symkl < 1.0 / cap) return cap;
    return 1.0 / symkl;
}

double flavor_similarity(const FlavorGaussian& a, const FlavorGaussian& b, double cap) {
    return similarity_from_symkl(gaussian_symkl(a, b), cap);
}

// ---------------------------------------------------------------------------

SimilarityMatrix ingredient_similarity_matrix(const std::vector<CuisineDistribution>& dists,
                                              unsigned threads) {
    SimilarityMatrix m;
    for (const auto& d : dists) m.names.push_back(d.cuisine);
    const std::size_t n = dists.size();
    m.values.assign(n * n, 0.0);
    parallel_for(n, threads, [&](std::size_t i) {
        m.at(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) m.at(i, j) = ingredient_similarity(dists[i], dists[j]);
    });
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) m.at(i, j) = m.at(j, i);
    }
    return m;
}

SimilarityMatrix flavor_similarity_matrix(const std::vector<FlavorGaussian>& gaussians, double cap,
                                          unsigned threads) {
    SimilarityMatrix m;
    for (const auto& g : gaussians) m.names.push_back(g.cuisine);
    const std::size_t n = gaussians.size();
    m.values.assign(n * n, 0.0);
    parallel_for(n, threads, [&](std::size_t i) {
        m.at(i, i) = cap;
        for (std::size_t j = i + 1; j < n; ++j) m.at(i, j) = flavor_similarity(gaussians[i], gaussians[j], cap);
    });
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) m.at(i, j) = m.at(j, i);
    }
    return m;
}

std::string_view graph_kind_name(GraphKind kind) {
    return kind == GraphKind::ingredient ? "ingredient" : "flavor";
}

std::optional<GraphKind> parse_graph_kind(std::string_view text) {
    if (text == "ingredient") return GraphKind::ingredient;
    if (text == "flavor") return GraphKind::flavor;
    return std::nullopt;
}

SimilarityGraph build_similarity_graph(const SimilarityMatrix& matrix, const CountryTables& regions,
                                       std::size_t k, GraphKind kind) {
    const std::size_t n = matrix.size();
    if (matrix.values.size() != n * n) throw DataError(kModule, "similarity matrix is not square");
    if (k == 0) throw ConfigError(kModule, "k must be at least 1");
    if (k >= n) {
        throw ConfigError(kModule, "k = " + std::to_string(k) + " must be smaller than the node count " +
                                       std::to_string(n));
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = matrix.at(i, j);
            const double b = matrix.at(j, i);
            if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) {
                throw DataError(kModule, "similarity matrix is not symmetric");
            }
        }
    }

    SimilarityGraph graph;
    graph.kind = kind;
    graph.k = k;
    for (const auto& name : matrix.names) graph.nodes.push_back({name, regions.region_of_cuisine(name)});

    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::size_t> candidates;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) candidates.push_back(j);
        }
        std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k),
                          candidates.end(), [&](std::size_t a, std::size_t b) {
                              const double wa = matrix.at(i, a);
                              const double wb = matrix.at(i, b);
                              if (wa != wb) return wa > wb;
                              return matrix.names[a] < matrix.names[b];
                          });
        for (std::size_t r = 0; r < k; ++r) {
            const std::size_t j = candidates[r];
            const double w = matrix.at(i, j);
            if (!(w > 0.0) || !std::isfinite(w)) {
                throw DataError(kModule, "cuisine '" + matrix.names[i] + "' has fewer than " +
                                             std::to_string(k) + " positive similarities");
            }
            graph.edges.push_back({matrix.names[i], matrix.names[j], w});
        }
    }
    std::sort(graph.nodes.begin(), graph.nodes.end(),
              [](const GraphNode& a, const GraphNode& b) { return a.name < b.name; });
    std::sort(graph.edges.begin(), graph.edges.end(), [](const GraphEdge& a, const GraphEdge& b) {
        return std::tie(a.source, a.target) < std::tie(b.source, b.target);
    });
    return graph;
}

std::optional<GraphFormat> parse_graph_format(std::string_view text) {
    if (text == "dot") return GraphFormat::dot;
    if (text == "graphml") return GraphFormat::graphml;
    if (text == "json") return GraphFormat::json;
    return std::nullopt;
}

std::string_view graph_format_extension(GraphFormat format) {
    switch (format) {
        case GraphFormat::dot: return "dot";
        case GraphFormat::graphml: return "graphml";
        case GraphFormat::json: return "json";
    }
    return "txt";
}

void export_graph(const SimilarityGraph& graph, GraphFormat format, std::ostream& out) {
    const std::string kind(graph_kind_name(graph.kind));
    switch (format) {
        case GraphFormat::dot: {
            out << "digraph \"" << kind << "\" {\n";
            for (const auto& node : graph.nodes) {
                out << "  \"" << dot_escape(node.name) << "\" [region=\"" << dot_escape(region_label(node.region))
                    << "\"];\n";
            }
            for (const auto& e : graph.edges) {
                out << "  \"" << dot_escape(e.source) << "\" -> \"" << dot_escape(e.target)
                    << "\" [weight=" << format_double(e.weight) << "];\n";
            }
            out << "}\n";
            break;
        }
        case GraphFormat::graphml: {
            out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
                << "  <key id=\"region\" for=\"node\" attr.name=\"region\" attr.type=\"string\"/>\n"
                << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
                << "  <graph id=\"" << kind << "\" edgedefault=\"directed\">\n";
            for (const auto& node : graph.nodes) {
                out << "    <node id=\"" << xml_escape(node.name) << "\"><data key=\"region\">"
                    << xml_escape(region_label(node.region)) << "</data></node>\n";
            }
            for (const auto& e : graph.edges) {
                out << "    <edge source=\"" << xml_escape(e.source) << "\" target=\"" << xml_escape(e.target)
                    << "\"><data key=\"weight\">" << format_double(e.weight) << "</data></edge>\n";
            }
            out << "  </graph>\n</graphml>\n";
            break;
        }
        case GraphFormat::json: {
            nlohmann::ordered_json doc;
            doc["kind"] = kind;
            doc["k"] = graph.k;
            doc["nodes"] = nlohmann::ordered_json::array();
            for (const auto& node : graph.nodes) {
                nlohmann::ordered_json n;
                n["id"] = node.name;
                n["region"] = node.region ? nlohmann::ordered_json(std::string(region_name(*node.region)))
                                          : nlohmann::ordered_json(nullptr);
                doc["nodes"].push_back(n);
            }
            doc["edges"] = nlohmann::ordered_json::array();
            for (const auto& e : graph.edges) {
                nlohmann::ordered_json edge;
                edge["source"] = e.source;
                edge["target"] = e.target;
                edge["weight"] = e.weight;
                doc["edges"].push_back(edge);
            }
            out << doc.dump(2) << '\n';
            break;
        }
    }
}

void export_graph(const SimilarityGraph& graph, GraphFormat format, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(kModule, "cannot write " + path.string());
    export_graph(graph, format, out);
}

SimilarityGraph parse_graph_json(std::istream& in) {
    const auto doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw DataError(kModule, "graph JSON is malformed");
    try {
        SimilarityGraph graph;
        const auto kind = parse_graph_kind(doc.at("kind").get<std::string>());
        if (!kind) throw DataError(kModule, "unknown graph kind");
        graph.kind = *kind;
        graph.k = doc.at("k").get<std::size_t>();
        for (const auto& n : doc.at("nodes")) {
            GraphNode node{n.at("id").get<std::string>(), std::nullopt};
            if (!n.at("region").is_null()) {
                node.region = parse_region(n.at("region").get<std::string>());
                if (!node.region) throw DataError(kModule, "unknown region in graph JSON");
            }
            graph.nodes.push_back(std::move(node));
        }
        for (const auto& e : doc.at("edges")) {
            graph.edges.push_back({e.at("source").get<std::string>(), e.at("target").get<std::string>(),
                                   e.at("weight").get<double>()});
        }
        return graph;
    } catch (const nlohmann::json::exception& ex) {
        throw DataError(kModule, std::string("graph JSON: ") + ex.what());
    }
}

void write_region_legend(const SimilarityGraph& graph, std::ostream& out) {
    out << "cuisine,region\n";
    for (const auto& node : graph.nodes) {
        out << csv_field(node.name) << ',' << csv_field(region_label(node.region)) << '\n';
    }
}

}  // namespace culinary
