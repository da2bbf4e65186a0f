#include "culinary/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "culinary/error.hpp"
#include "culinary/format.hpp"

namespace culinary {

namespace {

constexpr const char* kModule = "cli";

const std::vector<std::string_view> kPathKeys = {
    "corpus", "reference", "aliases", "units", "cuisine_country", "country_region", "country_stats",
    "out_dir", "similarity.out"};

}  // namespace

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = {
        {"corpus", "", "recipe JSONL file"},
        {"schema", "jsonl", "corpus format id"},
        {"reference", "", "standardized ingredient list, one id per line"},
        {"aliases", "", "alias TSV: normalized_raw <TAB> standard_id"},
        {"units", "", "unit-token list; built-in list when empty"},
        {"cuisine_country", "", "CSV cuisine,country"},
        {"country_region", "", "CSV country,region"},
        {"country_stats", "", "CSV country,obesity_pct,diabetes_pct,health_expenditure_pct_gdp,net_migration"},
        {"out_dir", "out", "output directory"},
        {"seed", "0", "top-level seed; every module derives its own stream from it"},
        {"sample_size", "100", "recipes per cuisine in the balanced sample"},
        {"min_recipes", "100", "classification keeps cuisines with more recipes than this"},
        {"min_mapped", "0.5", "minimum fraction of mapped raws for a recipe to survive"},
        {"threads", "1", "worker threads for similarity matrices"},
        {"diversity.metric", "global", "global | local"},
        {"diversity.degree", "3", "polynomial degree of the migration fit"},
        {"diversity.fit_migration", "false", "also fit country diversity against net migration"},
        {"notable.cuisine", "", "cuisine to report; every sampled cuisine when empty"},
        {"notable.top", "10", "ingredients per cuisine"},
        {"similarity.kind", "ingredient", "ingredient | flavor"},
        {"similarity.top_k", "5", "out-degree of every node"},
        {"similarity.format", "json", "dot | graphml | json"},
        {"similarity.out", "", "graph file; <out_dir>/similarity_<kind>.<ext> when empty"},
        {"similarity.ridge", "1e-6", "diagonal ridge added to flavor covariances"},
        {"similarity.cap", "1e9", "flavor similarity ceiling for near-identical cuisines"},
        {"classify.model", "svm", "svm | mlp"},
        {"classify.target", "cuisine", "cuisine | region"},
        {"classify.train_frac", "0.8", "stratified training fraction"},
        {"svm.epochs", "20", "passes over the training set"},
        {"svm.lr", "0.5", "step-size numerator"},
        {"svm.l2", "1e-4", "L2 regularization strength"},
        {"svm.balance_classes", "true", "weight classes inversely to their frequency"},
        {"mlp.hidden", "1000,1000,500,500", "hidden layer widths"},
        {"mlp.epochs", "30", "passes over the training set"},
        {"mlp.batch", "128", "minibatch size"},
        {"mlp.dropout", "0.5", "dropout rate on hidden layers"},
        {"mlp.rho", "0.95", "Adadelta decay"},
        {"mlp.eps", "1e-6", "Adadelta epsilon"},
        {"health.measures", "obesity,diabetes,expenditure", "health indicators to correlate"},
        {"health.nutrients", "calories,protein,fat,carbohydrate,sugar", "nutrients to correlate"},
        {"health.missing_rating", "corpus_mean", "corpus_mean | one"},
        {"report.models", "svm", "classifiers trained by report"},
    };
    return keys;
}

RunConfig::RunConfig() {
    for (const auto& key : config_keys()) values_.emplace(std::string(key.name), std::string(key.default_value));
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    RunConfig config;
    config.merge_file(path);
    return config;
}

void RunConfig::merge_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(kModule, "cannot read config file " + path.string());
    const auto base = path.parent_path();
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string text = trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(kModule, path.string() + ":" + std::to_string(number) + ": expected key = value");
        }
        const std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));
        const bool is_path = std::find(kPathKeys.begin(), kPathKeys.end(), key) != kPathKeys.end();
        if (is_path && !value.empty() && std::filesystem::path(value).is_relative()) {
            value = (base / value).lexically_normal().generic_string();
        }
        set(key, std::move(value));
    }
}

void RunConfig::set(std::string_view key, std::string value) {
    const auto it = values_.find(std::string(key));
    if (it == values_.end()) throw ConfigError(kModule, "unknown config key '" + std::string(key) + "'");
    it->second = std::move(value);
}

const std::string& RunConfig::get(std::string_view key) const {
    const auto it = values_.find(std::string(key));
    if (it == values_.end()) throw ConfigError(kModule, "unknown config key '" + std::string(key) + "'");
    return it->second;
}

std::uint64_t RunConfig::u64(std::string_view key) const {
    const auto& text = get(key);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError(kModule, std::string(key) + " must be a nonnegative integer, got '" + text + "'");
    }
    return value;
}

double RunConfig::real(std::string_view key) const {
    const auto& text = get(key);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty() || !std::isfinite(value)) {
        throw ConfigError(kModule, std::string(key) + " must be a finite number, got '" + text + "'");
    }
    return value;
}

bool RunConfig::flag(std::string_view key) const {
    const std::string text = to_lower_ascii(get(key));
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError(kModule, std::string(key) + " must be true or false, got '" + get(key) + "'");
}

std::vector<std::string> RunConfig::list(std::string_view key) const {
    std::vector<std::string> items;
    for (const auto& part : split(get(key), ',')) {
        auto item = trim(part);
        if (!item.empty()) items.push_back(std::move(item));
    }
    return items;
}

std::string RunConfig::canonical() const {
    std::string text;
    for (const auto& [key, value] : values_) text += key + "=" + value + "\n";
    return text;
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorKind::numeric, kModule, "SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    hex.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        hex.push_back(kHex[digest[i] >> 4]);
        hex.push_back(kHex[digest[i] & 0xF]);
    }
    return hex;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(kModule, "cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return sha256_hex(buffer.str());
}

}  // namespace culinary
