#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "culinary/classify.hpp"
#include "culinary/config.hpp"
#include "culinary/health.hpp"
#include "culinary/metrics.hpp"
#include "culinary/pipeline.hpp"
#include "culinary/signatures.hpp"
#include "culinary/similarity.hpp"
#include "culinary/synthetic.hpp"

namespace py = pybind11;
using namespace culinary;

namespace {

RunConfig make_config(const std::optional<std::filesystem::path>& config_file,
                      const std::map<std::string, std::string>& overrides) {
    RunConfig config = config_file ? RunConfig::from_file(*config_file) : RunConfig();
    for (const auto& [key, value] : overrides) config.set(key, value);
    return config;
}

}  // namespace

PYBIND11_MODULE(_culinary, m) {
    m.doc() = "Culinary analytics core";
    m.attr("__version__") = std::string(version());

    py::register_exception<Error>(m, "CulinaryError", PyExc_RuntimeError);

    m.def(
        "js_divergence",
        [](const std::vector<double>& p, const std::vector<double>& q) { return js_divergence(p, q); },
        py::arg("p"), py::arg("q"));
    m.def(
        "ingredient_similarity",
        [](const std::vector<double>& p, const std::vector<double>& q) { return ingredient_similarity(p, q); },
        py::arg("p"), py::arg("q"));
    m.def("entropy", [](const std::vector<double>& p) { return entropy(p); }, py::arg("probs"));
    m.def(
        "complexity_score",
        [](const std::vector<std::size_t>& dish_sizes, std::size_t max_count) {
            return complexity_score(complexity_from_counts(dish_sizes, max_count));
        },
        py::arg("dish_sizes"), py::arg("max_count"));
    m.def("gaussian_kl", &gaussian_kl, py::arg("mean_p"), py::arg("cov_p"), py::arg("mean_q"), py::arg("cov_q"));
    m.def("gaussian_symkl",
          py::overload_cast<const Eigen::VectorXd&, const Eigen::MatrixXd&, const Eigen::VectorXd&,
                            const Eigen::MatrixXd&>(&gaussian_symkl),
          py::arg("mean_p"), py::arg("cov_p"), py::arg("mean_q"), py::arg("cov_q"));
    m.def("similarity_from_symkl", &similarity_from_symkl, py::arg("symkl"), py::arg("cap") = kDefaultSimilarityCap);

    m.def(
        "tfidf",
        [](std::vector<std::string> cuisines, std::vector<std::string> ingredients,
           const std::vector<std::vector<std::size_t>>& counts) {
            std::vector<std::size_t> flat;
            for (const auto& row : counts) {
                if (row.size() != ingredients.size()) throw DataError("signatures", "count row length mismatch");
                flat.insert(flat.end(), row.begin(), row.end());
            }
            const auto table = tfidf_from_counts(std::move(cuisines), std::move(ingredients), std::move(flat));
            std::vector<std::vector<double>> weights(table.cuisines.size());
            for (std::size_t c = 0; c < table.cuisines.size(); ++c) {
                for (std::size_t j = 0; j < table.ingredients.size(); ++j) weights[c].push_back(table.weight(c, j));
            }
            return weights;
        },
        py::arg("cuisines"), py::arg("ingredients"), py::arg("counts"),
        "TF-IDF weights, one row per cuisine; cuisines must be sorted.");

    m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); },
          py::arg("x"), py::arg("y"));
    m.def("kendall_tau", [](const std::vector<double>& x, const std::vector<double>& y) { return kendall_tau(x, y); },
          py::arg("x"), py::arg("y"));

    m.def(
        "run",
        [](const std::string& subcommand, std::optional<std::filesystem::path> config_file,
           const std::map<std::string, std::string>& overrides) {
            const auto result = run(subcommand, make_config(config_file, overrides));
            py::dict out;
            out["exit_code"] = result.exit_code;
            out["error_line"] = result.error_line;
            out["manifest"] = result.manifest.generic_string();
            std::vector<std::string> artifacts;
            for (const auto& a : result.artifacts) artifacts.push_back(a.generic_string());
            out["artifacts"] = artifacts;
            return out;
        },
        py::arg("subcommand"), py::arg("config_file") = std::nullopt,
        py::arg("overrides") = std::map<std::string, std::string>{},
        "Runs one CLI subcommand; returns exit_code, error_line, manifest and artifacts.");

    m.def("config_keys", [] {
        std::vector<std::tuple<std::string, std::string, std::string>> keys;
        for (const auto& k : config_keys()) keys.emplace_back(k.name, k.default_value, k.help);
        return keys;
    });

    m.def(
        "write_synthetic_world",
        [](const std::filesystem::path& dir, std::size_t cuisines, std::size_t min_recipes, std::size_t max_recipes,
           std::uint64_t seed, double sugar_noise) {
            synthetic::WorldSpec spec;
            spec.cuisines = cuisines;
            spec.min_recipes = min_recipes;
            spec.max_recipes = max_recipes;
            spec.seed = seed;
            spec.sugar_noise = sugar_noise;
            synthetic::write_world(synthetic::make_world(spec), dir);
        },
        py::arg("out_dir"), py::arg("cuisines") = 100, py::arg("min_recipes") = 40, py::arg("max_recipes") = 160,
        py::arg("seed") = 7, py::arg("sugar_noise") = 2.0);
}
