#include "culinary/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "culinary/classify.hpp"
#include "culinary/corpus.hpp"
#include "culinary/format.hpp"
#include "culinary/health.hpp"
#include "culinary/metrics.hpp"
#include "culinary/signatures.hpp"
#include "culinary/similarity.hpp"

#ifndef CULINARY_VERSION
#define CULINARY_VERSION "0.0.0"
#endif

namespace culinary {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr const char* kModule = "cli";

struct Inputs {
    RecipeCorpus corpus;
    std::optional<CountryTables> tables;
    Json digests = Json::array();
};

// Every file written during one invocation, so a failed run can clean up.
struct RunState {
    std::vector<fs::path> written;
};

class Session {
public:
    Session(const RunConfig& config, std::string subcommand, std::string stem, RunState& state)
        : config_(config), subcommand_(std::move(subcommand)), stem_(std::move(stem)), state_(state),
          out_dir_(config.path("out_dir")) {
        if (out_dir_.empty()) throw ConfigError(kModule, "out_dir must not be empty");
        fs::create_directories(out_dir_);
    }

    const fs::path& out_dir() const { return out_dir_; }
    Json& summary() { return summary_; }
    const std::vector<fs::path>& artifacts() const { return artifacts_; }

    void write(const std::string& name, const std::string& content) { write_to(out_dir_ / name, content); }

    void write_to(const fs::path& path, const std::string& content) {
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError(kModule, "cannot write " + path.string());
        state_.written.push_back(path);
        out << content;
        if (!out.flush()) throw DataError(kModule, "failed writing " + path.string());
        artifacts_.push_back(path);
    }

    /// For files produced by another writer.
    void record(const fs::path& path) {
        state_.written.push_back(path);
        artifacts_.push_back(path);
    }

    fs::path finish(const Json& inputs) {
        Json manifest;
        manifest["tool"] = "culinary";
        manifest["manifest_version"] = 1;
        manifest["subcommand"] = subcommand_;
        manifest["run"] = stem_;
        manifest["versions"] = {{"culinary", CULINARY_VERSION},
                                {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                              "." + std::to_string(EIGEN_MINOR_VERSION)},
                                {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                      std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                      std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
        Json echo = Json::object();
        for (const auto& [key, value] : config_.values()) echo[key] = value;
        manifest["config"] = echo;
        manifest["config_hash"] = sha256_hex(config_.canonical());
        manifest["inputs"] = inputs;
        Json list = Json::array();
        for (const auto& path : artifacts_) {
            list.push_back({{"path", display(path)},
                            {"sha256", sha256_file(path)},
                            {"bytes", static_cast<std::uint64_t>(fs::file_size(path))}});
        }
        manifest["artifacts"] = list;
        manifest["summary"] = summary_;
        const fs::path path = out_dir_ / (stem_ + ".manifest.json");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DataError(kModule, "cannot write " + path.string());
        state_.written.push_back(path);
        out << manifest.dump(2) << '\n';
        if (!out.flush()) throw DataError(kModule, "failed writing " + path.string());
        return path;
    }

    /// Paths inside out_dir are listed relative to it.
    std::string display(const fs::path& path) const {
        const auto rel = path.lexically_relative(out_dir_);
        if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
        return path.generic_string();
    }

private:
    const RunConfig& config_;
    std::string subcommand_;
    std::string stem_;
    RunState& state_;
    fs::path out_dir_;
    Json summary_ = Json::object();
    std::vector<fs::path> artifacts_;
};

fs::path require_file(const RunConfig& config, std::string_view key) {
    if (!config.is_set(key)) throw ConfigError(kModule, "missing required input '" + std::string(key) + "'");
    const fs::path path = config.path(key);
    if (!fs::is_regular_file(path)) {
        throw ConfigError(kModule, std::string(key) + " file not found: " + path.generic_string());
    }
    return path;
}

Json digest(std::string_view role, const fs::path& path) {
    return {{"role", role},
            {"path", path.generic_string()},
            {"sha256", sha256_file(path)},
            {"bytes", static_cast<std::uint64_t>(fs::file_size(path))}};
}

Inputs load_inputs(const RunConfig& config, bool need_tables) {
    Inputs inputs;
    const auto corpus_path = require_file(config, "corpus");
    const auto reference_path = require_file(config, "reference");
    inputs.digests.push_back(digest("corpus", corpus_path));
    inputs.digests.push_back(digest("reference", reference_path));

    UnitList units = UnitList::defaults();
    if (config.is_set("units")) {
        const auto units_path = require_file(config, "units");
        inputs.digests.push_back(digest("units", units_path));
        units = UnitList::load(units_path);
    }
    std::stringstream no_aliases;
    IngredientLexicon lexicon;
    if (config.is_set("aliases")) {
        const auto alias_path = require_file(config, "aliases");
        inputs.digests.push_back(digest("aliases", alias_path));
        lexicon = build_lexicon(reference_path, alias_path, units);
    } else {
        std::ifstream reference(reference_path);
        lexicon = build_lexicon(reference, no_aliases, units);
    }

    const double min_mapped = config.real("min_mapped");
    if (min_mapped < 0.0 || min_mapped > 1.0) throw ConfigError(kModule, "min_mapped must lie in [0, 1]");
    const RecipeCorpus parsed = parse_corpus(corpus_path, config.get("schema"));
    inputs.corpus = standardize(parsed, lexicon, min_mapped);
    if (inputs.corpus.recipes.empty()) throw DataError("corpus", "no recipe survived standardization");

    if (need_tables) {
        CountryTablePaths paths;
        paths.cuisine_countries = require_file(config, "cuisine_country");
        paths.country_regions = require_file(config, "country_region");
        paths.country_stats = require_file(config, "country_stats");
        inputs.digests.push_back(digest("cuisine_country", paths.cuisine_countries));
        inputs.digests.push_back(digest("country_region", paths.country_regions));
        inputs.digests.push_back(digest("country_stats", paths.country_stats));
        inputs.tables = load_country_tables(paths);
    }
    return inputs;
}

bool needs_tables(std::string_view subcommand, const RunConfig& config) {
    if (subcommand == "ingest" || subcommand == "notable") return false;
    if (subcommand == "classify") return config.get("classify.target") == "region";
    return true;
}

BalancedSample make_sample(const RunConfig& config, const RecipeCorpus& corpus) {
    const auto n = config.u64("sample_size");
    if (n == 0) throw ConfigError(kModule, "sample_size must be positive");
    auto sample = sample_balanced(corpus, n, config.u64("seed"));
    if (sample.per_cuisine.empty()) {
        throw DataError("metrics", "no cuisine has at least " + std::to_string(n) + " recipes");
    }
    return sample;
}

std::string value_csv(std::string_view key_header, const std::map<std::string, double>& values) {
    std::string text = std::string(key_header) + ",value\n";
    for (const auto& [key, value] : values) text += csv_field(key) + "," + format_double(value) + "\n";
    return text;
}

Json string_list(const std::vector<std::string>& items) {
    Json list = Json::array();
    for (const auto& item : items) list.push_back(item);
    return list;
}

unsigned thread_count(const RunConfig& config) {
    const auto threads = config.u64("threads");
    if (threads == 0 || threads > 256) throw ConfigError(kModule, "threads must lie in 1..256");
    return static_cast<unsigned>(threads);
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

void run_ingest(const Inputs& inputs, Session& session) {
    const auto& corpus = inputs.corpus;
    std::ostringstream jsonl;
    write_standardized_jsonl(corpus, jsonl);
    session.write("standardized.jsonl", jsonl.str());

    const auto& pr = corpus.parse_report;
    const auto& sr = corpus.standardize_report;
    Json report;
    report["parse"] = {{"records", pr.records},   {"loaded", pr.loaded},
                       {"malformed", pr.malformed}, {"rejected", pr.rejected},
                       {"problems", string_list(pr.problems)}};
    std::vector<std::pair<std::string, std::size_t>> unmapped(sr.unmapped.begin(), sr.unmapped.end());
    std::stable_sort(unmapped.begin(), unmapped.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    Json unmapped_json = Json::array();
    for (const auto& [raw, count] : unmapped) unmapped_json.push_back({{"normalized", raw}, {"count", count}});
    report["standardize"] = {{"min_mapped", sr.min_mapped},   {"input", sr.input},
                             {"retained", sr.retained},       {"dropped", sr.dropped},
                             {"mapped_raws", sr.mapped_raws}, {"unmapped_raws", sr.unmapped_raws},
                             {"unmapped", unmapped_json}};
    Json rejected = Json::array();
    for (const auto& alias : corpus.lexicon.rejected_aliases()) {
        rejected.push_back({{"key", alias.key}, {"target", alias.target}});
    }
    report["lexicon"] = {{"reference", corpus.lexicon.reference().size()},
                         {"aliases", corpus.lexicon.alias_map().size()},
                         {"resolvable_keys", corpus.lexicon.resolvable_keys()},
                         {"rejected_aliases", rejected}};
    Json cuisines = Json::object();
    for (const auto& [name, members] : corpus.cuisines) cuisines[name] = members.size();
    report["corpus"] = {{"recipes", corpus.recipes.size()},
                        {"vocabulary", corpus.vocabulary_size()},
                        {"max_ingredients", corpus.max_ingredients()},
                        {"cuisines", cuisines}};
    session.write("ingest_report.json", report.dump(2) + "\n");

    session.summary() = {{"recipes", corpus.recipes.size()},
                         {"malformed", pr.malformed},
                         {"rejected", pr.rejected},
                         {"dropped", sr.dropped},
                         {"vocabulary", corpus.vocabulary_size()}};
}

void run_diversity(const RunConfig& config, const Inputs& inputs, Session& session, const std::string& metric) {
    if (metric != "global" && metric != "local") {
        throw ConfigError(kModule, "diversity.metric must be global or local, got '" + metric + "'");
    }
    const auto& corpus = inputs.corpus;
    const auto sample = make_sample(config, corpus);
    std::map<std::string, double> per_cuisine;
    for (const auto& cuisine : sample.cuisines()) {
        per_cuisine[cuisine] = metric == "global"
                                   ? static_cast<double>(global_diversity(sample, cuisine, corpus))
                                   : local_diversity(ingredient_distribution(sample, cuisine, corpus));
    }
    const auto series = map_to_countries(per_cuisine, *inputs.tables, metric + "_diversity");
    session.write("diversity_" + metric + "_cuisine.csv", value_csv("cuisine", per_cuisine));
    session.write("diversity_" + metric + "_country.csv", value_csv("country", series.values));

    Json summary = {{"metric", metric},
                    {"sample_size", sample.n},
                    {"cuisines", per_cuisine.size()},
                    {"excluded_cuisines", string_list(sample.excluded)},
                    {"countries", series.values.size()},
                    {"unmapped_cuisines", string_list(series.skipped)}};

    if (config.flag("diversity.fit_migration")) {
        const auto degree = config.u64("diversity.degree");
        std::vector<std::pair<double, double>> points;
        for (const auto& [country, value] : series.values) {
            const auto it = inputs.tables->net_migration.find(country);
            if (it != inputs.tables->net_migration.end()) points.emplace_back(it->second, value);
        }
        const auto fit = fit_polynomial(points, degree);
        Json coefficients = Json::array();
        for (const double c : fit.coefficients) coefficients.push_back(c);
        Json fit_json = {{"x", "net_migration"},
                         {"y", metric + "_diversity"},
                         {"degree", degree},
                         {"points", points.size()},
                         {"coefficients_ascending", coefficients},
                         {"residual_norm", fit.residual_norm}};
        session.write("diversity_" + metric + "_fit.json", fit_json.dump(2) + "\n");
        summary["fit_points"] = points.size();
    }
    session.summary() = summary;
}

void run_complexity(const RunConfig& config, const Inputs& inputs, Session& session) {
    const auto& corpus = inputs.corpus;
    const auto sample = make_sample(config, corpus);
    std::map<std::string, double> scores;
    std::string ccd_csv = "cuisine,ingredients,pmf,ccd\n";
    for (const auto& cuisine : sample.cuisines()) {
        const auto cd = complexity_distribution(sample, cuisine, corpus);
        scores[cuisine] = complexity_score(cd);
        for (std::size_t i = 1; i < cd.pmf.size(); ++i) {
            ccd_csv += csv_field(cuisine) + "," + std::to_string(i) + "," + format_double(cd.pmf[i]) + "," +
                       format_double(cd.ccd[i]) + "\n";
        }
    }
    const auto series = map_to_countries(scores, *inputs.tables, "complexity");
    session.write("complexity_cuisine.csv", value_csv("cuisine", scores));
    session.write("complexity_country.csv", value_csv("country", series.values));
    session.write("complexity_ccd.csv", ccd_csv);
    session.summary() = {{"sample_size", sample.n},
                         {"cuisines", scores.size()},
                         {"excluded_cuisines", string_list(sample.excluded)},
                         {"max_ingredients", corpus.max_ingredients()},
                         {"countries", series.values.size()}};
}

void run_notable(const RunConfig& config, const Inputs& inputs, Session& session) {
    const auto& corpus = inputs.corpus;
    const auto sample = make_sample(config, corpus);
    const auto table = tfidf(sample, corpus);
    const auto top = config.u64("notable.top");
    if (top == 0) throw ConfigError(kModule, "notable.top must be positive");
    const std::string cuisine = config.get("notable.cuisine");
    if (!cuisine.empty()) {
        if (!corpus.cuisines.count(cuisine)) throw DataError("signatures", "unknown cuisine: " + cuisine);
        if (!sample.per_cuisine.count(cuisine)) {
            throw DataError("signatures", "cuisine '" + cuisine + "' has fewer than sample_size recipes");
        }
        std::string csv = "rank,ingredient,weight\n";
        std::size_t rank = 0;
        for (const auto& item : notable_ingredients(table, cuisine, top)) {
            csv += std::to_string(++rank) + "," + csv_field(item.ingredient) + "," + format_double(item.weight) + "\n";
        }
        session.write("notable.csv", csv);
        session.summary() = {{"cuisine", cuisine}, {"ranked", rank}};
        return;
    }
    std::string csv = "cuisine,rank,ingredient,weight\n";
    for (const auto& name : table.cuisines) {
        std::size_t rank = 0;
        for (const auto& item : notable_ingredients(table, name, top)) {
            csv += csv_field(name) + "," + std::to_string(++rank) + "," + csv_field(item.ingredient) + "," +
                   format_double(item.weight) + "\n";
        }
    }
    session.write("notable_all.csv", csv);
    session.summary() = {{"cuisines", table.cuisines.size()}, {"top", top}};
}

void run_similarity(const RunConfig& config, const Inputs& inputs, Session& session) {
    const auto& corpus = inputs.corpus;
    const auto kind = parse_graph_kind(config.get("similarity.kind"));
    if (!kind) throw ConfigError(kModule, "similarity.kind must be ingredient or flavor");
    const auto format = parse_graph_format(config.get("similarity.format"));
    if (!format) throw ConfigError(kModule, "similarity.format must be dot, graphml or json");
    const auto k = config.u64("similarity.top_k");
    const unsigned threads = thread_count(config);
    const auto sample = make_sample(config, corpus);

    SimilarityMatrix matrix;
    std::vector<std::string> skipped;
    if (*kind == GraphKind::ingredient) {
        std::vector<CuisineDistribution> dists;
        for (const auto& cuisine : sample.cuisines()) dists.push_back(ingredient_distribution(sample, cuisine, corpus));
        matrix = ingredient_similarity_matrix(dists, threads);
    } else {
        const double ridge = config.real("similarity.ridge");
        const double cap = config.real("similarity.cap");
        if (ridge < 0.0) throw ConfigError(kModule, "similarity.ridge must be nonnegative");
        if (cap <= 0.0) throw ConfigError(kModule, "similarity.cap must be positive");
        std::vector<FlavorGaussian> gaussians;
        for (const auto& cuisine : sample.cuisines()) {
            std::size_t complete = 0;
            for (const auto r : sample.members(cuisine)) complete += corpus.recipes[r].has_complete_flavors();
            // A 6-D covariance needs more than 6 points.
            if (complete <= kFlavorCount) {
                skipped.push_back(cuisine);
                continue;
            }
            gaussians.push_back(fit_flavor_gaussian(sample, cuisine, corpus, ridge));
        }
        matrix = flavor_similarity_matrix(gaussians, cap, threads);
    }
    if (matrix.size() < 2) {
        throw DataError(kModule, "similarity needs at least two eligible cuisines, found " +
                                     std::to_string(matrix.size()));
    }
    const auto graph = build_similarity_graph(matrix, *inputs.tables, k, *kind);

    const std::string kind_name(graph_kind_name(*kind));
    fs::path out = config.path("similarity.out");
    if (out.empty()) {
        out = session.out_dir() / ("similarity_" + kind_name + "." + std::string(graph_format_extension(*format)));
    }
    std::ostringstream graph_text;
    export_graph(graph, *format, graph_text);
    session.write_to(out, graph_text.str());

    std::ostringstream legend;
    write_region_legend(graph, legend);
    session.write_to(out.parent_path() / (out.stem().string() + "_regions.csv"), legend.str());

    std::string csv = "cuisine";
    for (const auto& name : matrix.names) csv += "," + csv_field(name);
    csv += "\n";
    for (std::size_t i = 0; i < matrix.size(); ++i) {
        csv += csv_field(matrix.names[i]);
        for (std::size_t j = 0; j < matrix.size(); ++j) csv += "," + format_double(matrix.at(i, j));
        csv += "\n";
    }
    session.write("similarity_" + kind_name + "_matrix.csv", csv);

    session.summary() = {{"kind", kind_name},
                         {"top_k", k},
                         {"nodes", graph.nodes.size()},
                         {"edges", graph.edges.size()},
                         {"excluded_cuisines", string_list(sample.excluded)},
                         {"skipped_cuisines", string_list(skipped)}};
}

SvmConfig svm_config(const RunConfig& config) {
    SvmConfig svm;
    svm.epochs = config.u64("svm.epochs");
    svm.lr = config.real("svm.lr");
    svm.l2 = config.real("svm.l2");
    svm.balance_classes = config.flag("svm.balance_classes");
    svm.seed = config.u64("seed");
    if (svm.epochs == 0 || svm.lr <= 0.0 || svm.l2 <= 0.0) {
        throw ConfigError(kModule, "svm.epochs, svm.lr and svm.l2 must be positive");
    }
    return svm;
}

MlpConfig mlp_config(const RunConfig& config) {
    MlpConfig mlp;
    mlp.hidden.clear();
    for (const auto& item : config.list("mlp.hidden")) {
        std::size_t width = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), width);
        if (ec != std::errc{} || ptr != item.data() + item.size() || width == 0) {
            throw ConfigError(kModule, "mlp.hidden must be a comma list of positive widths");
        }
        mlp.hidden.push_back(width);
    }
    mlp.epochs = config.u64("mlp.epochs");
    mlp.batch = config.u64("mlp.batch");
    mlp.dropout = config.real("mlp.dropout");
    mlp.rho = config.real("mlp.rho");
    mlp.eps = config.real("mlp.eps");
    mlp.seed = config.u64("seed");
    if (mlp.epochs == 0 || mlp.batch == 0) throw ConfigError(kModule, "mlp.epochs and mlp.batch must be positive");
    if (mlp.dropout < 0.0 || mlp.dropout >= 1.0) throw ConfigError(kModule, "mlp.dropout must lie in [0, 1)");
    if (mlp.rho <= 0.0 || mlp.rho >= 1.0 || mlp.eps <= 0.0) {
        throw ConfigError(kModule, "mlp.rho must lie in (0, 1) and mlp.eps must be positive");
    }
    return mlp;
}

void run_classify(const RunConfig& config, const Inputs& inputs, Session& session, const std::string& model_name,
                  const std::string& target) {
    const auto kind = parse_label_kind(target);
    if (!kind) throw ConfigError(kModule, "classify.target must be cuisine or region, got '" + target + "'");
    if (model_name != "svm" && model_name != "mlp") {
        throw ConfigError(kModule, "classify.model must be svm or mlp, got '" + model_name + "'");
    }
    const double train_frac = config.real("classify.train_frac");
    if (train_frac <= 0.0 || train_frac >= 1.0) throw ConfigError(kModule, "classify.train_frac must lie in (0, 1)");

    const auto features = featurize(inputs.corpus, *kind, config.u64("min_recipes"),
                                    inputs.tables ? &*inputs.tables : nullptr);
    if (features.num_classes() < 2) throw DataError("classify", "fewer than 2 classes to classify");
    const auto parts = split(features, train_frac, config.u64("seed"));
    if (parts.test.size() == 0) throw DataError("classify", "test split is empty");

    Model model;
    EvalReport eval;
    std::vector<double> loss;
    if (model_name == "svm") {
        auto linear = train_svm(parts.train, svm_config(config));
        eval = evaluate(linear, parts.test);
        loss = linear.loss_history;
        model = std::move(linear);
    } else {
        auto mlp = train_mlp(parts.train, mlp_config(config));
        eval = evaluate(mlp, parts.test);
        loss = mlp.loss_history;
        model = std::move(mlp);
    }

    const std::string stem = "classify_" + model_name + "_" + target;
    Json per_class = Json::array();
    for (std::size_t c = 0; c < eval.class_names.size(); ++c) {
        const auto& s = eval.per_class[c];
        Json row = {{"class", eval.class_names[c]}, {"precision", s.precision}, {"recall", s.recall},
                    {"f1", s.f1},                   {"support", s.support},     {"predicted", s.predicted}};
        row["most_confused_with"] =
            eval.top_confusion[c] ? Json(eval.class_names[*eval.top_confusion[c]]) : Json(nullptr);
        per_class.push_back(row);
    }
    Json loss_json = Json::array();
    for (const double l : loss) loss_json.push_back(l);
    Json metrics = {{"model", model_name},
                    {"target", target},
                    {"features", features.dimension()},
                    {"classes", eval.class_names.size()},
                    {"train_rows", parts.train.size()},
                    {"test_rows", parts.test.size()},
                    {"dropped_rows", features.dropped_rows},
                    {"accuracy", eval.accuracy},
                    {"macro_f1", eval.macro_f1},
                    {"per_class", per_class},
                    {"loss_history", loss_json}};
    session.write(stem + "_metrics.json", metrics.dump(2) + "\n");

    std::string csv = "actual";
    for (const auto& name : eval.class_names) csv += "," + csv_field(name);
    csv += "\n";
    for (std::size_t a = 0; a < eval.confusion.size(); ++a) {
        csv += csv_field(eval.class_names[a]);
        for (const auto count : eval.confusion[a]) csv += "," + std::to_string(count);
        csv += "\n";
    }
    session.write(stem + "_confusion.csv", csv);

    const fs::path model_path = session.out_dir() / (stem + "_model.bin");
    save_model(model, model_path);
    session.record(model_path);

    session.summary() = {{"model", model_name},
                         {"target", target},
                         {"accuracy", eval.accuracy},
                         {"macro_f1", eval.macro_f1},
                         {"classes", eval.class_names.size()}};
}

void run_health(const RunConfig& config, const Inputs& inputs, Session& session) {
    const std::string policy_name = config.get("health.missing_rating");
    MissingRating policy = MissingRating::corpus_mean;
    if (policy_name == "one") {
        policy = MissingRating::one;
    } else if (policy_name != "corpus_mean") {
        throw ConfigError(kModule, "health.missing_rating must be corpus_mean or one");
    }
    std::vector<HealthMeasure> measures;
    for (const auto& item : config.list("health.measures")) {
        const auto m = parse_measure(item);
        if (!m) throw ConfigError(kModule, "unknown health measure '" + item + "'");
        measures.push_back(*m);
    }
    std::vector<Nutrient> nutrients;
    for (const auto& item : config.list("health.nutrients")) {
        const auto n = parse_nutrient(item);
        if (!n) throw ConfigError(kModule, "unknown nutrient '" + item + "'");
        nutrients.push_back(*n);
    }
    if (measures.empty() || nutrients.empty()) throw ConfigError(kModule, "health needs measures and nutrients");

    const auto& tables = *inputs.tables;
    const auto nutrition = country_nutrition(inputs.corpus, tables, policy);
    const auto rows = correlation_table(nutrition, tables, measures, nutrients);

    std::string csv = "measure,nutrient,pearson,kendall,n\n";
    for (const auto& row : rows) {
        csv += std::string(measure_name(row.measure)) + "," +
               std::string(kNutrientKeys[static_cast<std::size_t>(row.nutrient)]) + "," + format_double(row.pearson) +
               "," + format_double(row.kendall_tau) + "," + std::to_string(row.n) + "\n";
    }
    session.write("health_correlations.csv", csv);

    for (const auto measure : measures) {
        for (const auto nutrient : nutrients) {
            const std::string nutrient_name(kNutrientKeys[static_cast<std::size_t>(nutrient)]);
            std::string curve = "k,mean_measure\n";
            for (const auto& [k, mean] : bottomk_curve(nutrition, tables, nutrient, measure)) {
                curve += std::to_string(k) + "," + format_double(mean) + "\n";
            }
            session.write("health_curve_" + std::string(measure_name(measure)) + "_" + nutrient_name + ".csv", curve);
        }
    }

    std::string per_country = "country,recipes";
    for (const auto key : kNutrientKeys) per_country += "," + std::string(key);
    per_country += "\n";
    for (const auto& [country, cn] : nutrition.countries) {
        per_country += country + "," + std::to_string(cn.n_recipes);
        for (const auto& avg : cn.averages) per_country += "," + (avg ? format_double(*avg) : std::string());
        per_country += "\n";
    }
    session.write("health_country_nutrition.csv", per_country);

    Json dropped = Json::array();
    for (const auto& row : rows) {
        dropped.push_back({{"measure", measure_name(row.measure)},
                           {"nutrient", kNutrientKeys[static_cast<std::size_t>(row.nutrient)]},
                           {"paired", row.n},
                           {"dropped", row.dropped}});
    }
    session.summary() = {{"countries", nutrition.countries.size()},
                         {"excluded_countries", string_list(nutrition.excluded)},
                         {"missing_rating_weight", nutrition.missing_rating_weight},
                         {"pairs", dropped}};
}

struct StepResult {
    fs::path manifest;
    std::vector<fs::path> artifacts;
};

template <typename Body>
StepResult step(const RunConfig& config, const Inputs& inputs, RunState& state, const std::string& subcommand,
                const std::string& stem, Body&& body) {
    Session session(config, subcommand, stem, state);
    body(session);
    StepResult result;
    result.manifest = session.finish(inputs.digests);
    result.artifacts = session.artifacts();
    return result;
}

StepResult dispatch(std::string_view subcommand, const RunConfig& config, const Inputs& inputs, RunState& state) {
    const std::string name(subcommand);
    if (name == "ingest") {
        return step(config, inputs, state, name, "ingest", [&](Session& s) { run_ingest(inputs, s); });
    }
    if (name == "diversity") {
        const std::string metric = config.get("diversity.metric");
        return step(config, inputs, state, name, "diversity_" + metric,
                    [&](Session& s) { run_diversity(config, inputs, s, metric); });
    }
    if (name == "complexity") {
        return step(config, inputs, state, name, "complexity", [&](Session& s) { run_complexity(config, inputs, s); });
    }
    if (name == "notable") {
        return step(config, inputs, state, name, "notable", [&](Session& s) { run_notable(config, inputs, s); });
    }
    if (name == "similarity") {
        return step(config, inputs, state, name, "similarity_" + config.get("similarity.kind"),
                    [&](Session& s) { run_similarity(config, inputs, s); });
    }
    if (name == "classify") {
        const std::string model = config.get("classify.model");
        const std::string target = config.get("classify.target");
        return step(config, inputs, state, name, "classify_" + model + "_" + target,
                    [&](Session& s) { run_classify(config, inputs, s, model, target); });
    }
    if (name == "health") {
        return step(config, inputs, state, name, "health", [&](Session& s) { run_health(config, inputs, s); });
    }
    throw ConfigError(kModule, "unknown subcommand '" + name + "'");
}

StepResult run_report(const RunConfig& config, const Inputs& inputs, RunState& state) {
    std::vector<std::pair<std::string, RunConfig>> plan;
    auto with = [&](std::initializer_list<std::pair<std::string_view, std::string>> overrides) {
        RunConfig c = config;
        for (const auto& [key, value] : overrides) c.set(key, value);
        return c;
    };
    plan.emplace_back("ingest", config);
    plan.emplace_back("diversity", with({{"diversity.metric", "global"}}));
    plan.emplace_back("diversity", with({{"diversity.metric", "local"}}));
    plan.emplace_back("complexity", config);
    plan.emplace_back("notable", with({{"notable.cuisine", ""}}));
    plan.emplace_back("similarity", with({{"similarity.kind", "ingredient"}, {"similarity.out", ""}}));
    plan.emplace_back("similarity", with({{"similarity.kind", "flavor"}, {"similarity.out", ""}}));
    for (const auto& model : config.list("report.models")) {
        plan.emplace_back("classify", with({{"classify.model", model}, {"classify.target", "cuisine"}}));
        plan.emplace_back("classify", with({{"classify.model", model}, {"classify.target", "region"}}));
    }
    plan.emplace_back("health", config);

    Session report(config, "report", "report", state);
    Json runs = Json::array();
    for (const auto& [subcommand, sub_config] : plan) {
        const auto result = dispatch(subcommand, sub_config, inputs, state);
        Json files = Json::array();
        for (const auto& path : result.artifacts) {
            files.push_back(report.display(path));
            report.record(path);
        }
        report.record(result.manifest);
        runs.push_back({{"subcommand", subcommand},
                        {"manifest", report.display(result.manifest)},
                        {"artifacts", files}});
    }
    Json index = {{"tool", "culinary"},
                  {"version", CULINARY_VERSION},
                  {"config_hash", sha256_hex(config.canonical())},
                  {"runs", runs}};
    report.write("index.json", index.dump(2) + "\n");
    report.summary() = {{"runs", runs.size()}};
    StepResult result;
    result.manifest = report.finish(inputs.digests);
    result.artifacts = report.artifacts();
    return result;
}

}  // namespace

std::string_view version() { return CULINARY_VERSION; }

std::string format_error_line(std::string_view kind, std::string_view module, std::string_view message) {
    std::string escaped;
    for (const char c : message) {
        if (c == '"' || c == '\\') {
            escaped.push_back('\\');
            escaped.push_back(c);
        } else if (c == '\n' || c == '\r') {
            escaped.push_back(' ');
        } else {
            escaped.push_back(c);
        }
    }
    return "error kind=" + std::string(kind) + " module=" + std::string(module) + " message=\"" + escaped + "\"";
}

RunResult run(std::string_view subcommand, const RunConfig& config) {
    RunResult result;
    RunState state;
    try {
        if (std::find(kSubcommands.begin(), kSubcommands.end(), subcommand) == kSubcommands.end()) {
            throw ConfigError(kModule, "unknown subcommand '" + std::string(subcommand) + "'");
        }
        const bool report = subcommand == "report";
        const Inputs inputs = load_inputs(config, report || needs_tables(subcommand, config));
        const StepResult step_result =
            report ? run_report(config, inputs, state) : dispatch(subcommand, config, inputs, state);
        result.manifest = step_result.manifest;
        result.artifacts = step_result.artifacts;
        return result;
    } catch (const Error& e) {
        result.exit_code = e.exit_code();
        result.error_line = format_error_line(to_string(e.kind()), e.module(), e.what());
    } catch (const std::filesystem::filesystem_error& e) {
        result.exit_code = static_cast<int>(ErrorKind::data);
        result.error_line = format_error_line("data", "io", e.what());
    } catch (const std::exception& e) {
        result.exit_code = 1;
        result.error_line = format_error_line("internal", kModule, e.what());
    }
    // No orphan outputs: a failed run leaves nothing it wrote behind.
    std::error_code ignored;
    for (const auto& path : state.written) fs::remove(path, ignored);
    return result;
}

}  // namespace culinary
