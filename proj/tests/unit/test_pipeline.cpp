#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <set>

#include <nlohmann/json.hpp>

#include "culinary/config.hpp"
#include "culinary/pipeline.hpp"
#include "helpers.hpp"

using namespace culinary;
namespace fs = std::filesystem;

namespace {

RunConfig mini(const fs::path& out) {
    RunConfig config = RunConfig::from_file(testing::data_dir() / "mini.conf");
    config.set("out_dir", out.string());
    // Three cuisines: out-degree must stay below the node count.
    config.set("similarity.top_k", "1");
    return config;
}

std::set<std::string> listing(const fs::path& dir) {
    std::set<std::string> names;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file()) names.insert(fs::relative(entry.path(), dir).generic_string());
    }
    return names;
}

std::map<std::string, std::string> contents(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& name : listing(dir)) out[name] = testing::slurp(dir / name);
    return out;
}

int cli(const std::string& args, const fs::path& log) {
    const std::string command = std::string("\"") + CULINARY_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("diversity writes both tables and a manifest") {
    const auto out = testing::scratch_dir("pipeline_diversity");
    const auto result = run("diversity", mini(out));
    REQUIRE(result.exit_code == 0);
    CHECK(listing(out) == std::set<std::string>{"diversity_global_country.csv", "diversity_global_cuisine.csv",
                                                "diversity_global.manifest.json"});
    // Sample size 2: Italian {garlic,salt,tomato,basil,olive oil,butter,flour} subsets, etc.
    const auto cuisine_csv = testing::slurp(out / "diversity_global_cuisine.csv");
    CHECK(cuisine_csv.rfind("cuisine,value\n", 0) == 0);
    CHECK(std::count(cuisine_csv.begin(), cuisine_csv.end(), '\n') == 4);
    // Mexican has exactly two recipes, so its sample is fixed: {garlic,salt,tomato} u {rice,tomato}.
    CHECK(cuisine_csv.find("Mexican,4\n") != std::string::npos);
    const auto country_csv = testing::slurp(out / "diversity_global_country.csv");
    CHECK(country_csv.find("MEX,4\n") != std::string::npos);
    CHECK(country_csv.find("USA,4\n") != std::string::npos);

    const auto manifest = nlohmann::json::parse(testing::slurp(result.manifest));
    CHECK(manifest["subcommand"] == "diversity");
    CHECK(manifest["config"]["seed"] == "3");
    CHECK(manifest["artifacts"].size() == 2);
    for (const auto& artifact : manifest["artifacts"]) {
        const auto path = out / artifact["path"].get<std::string>();
        CHECK(artifact["sha256"] == sha256_file(path));
    }
    bool saw_corpus = false;
    for (const auto& input : manifest["inputs"]) saw_corpus |= input["role"] == "corpus";
    CHECK(saw_corpus);
}

TEST_CASE("every subcommand leaves only its manifest and listed artifacts") {
    const auto out = testing::scratch_dir("pipeline_all");
    auto config = mini(out);
    config.set("min_recipes", "1");
    config.set("classify.train_frac", "0.5");
    config.set("notable.cuisine", "Italian");
    std::set<std::string> expected;
    for (const auto name : {"ingest", "diversity", "complexity", "notable", "similarity", "classify", "health"}) {
        const auto result = run(name, config);
        INFO(name << ": " << result.error_line);
        REQUIRE(result.exit_code == 0);
        for (const auto& a : result.artifacts) expected.insert(fs::relative(a, out).generic_string());
        expected.insert(fs::relative(result.manifest, out).generic_string());
    }
    CHECK(listing(out) == expected);
    CHECK(expected.count("standardized.jsonl") == 1);
    CHECK(expected.count("notable.csv") == 1);
    CHECK(expected.count("classify_svm_cuisine_model.bin") == 1);
    CHECK(expected.count("health_correlations.csv") == 1);

    const auto standardized = testing::slurp(out / "standardized.jsonl");
    CHECK(std::count(standardized.begin(), standardized.end(), '\n') == 8);
    const auto report = nlohmann::json::parse(testing::slurp(out / "ingest_report.json"));
    CHECK(report.dump().find("\"malformed\":1") != std::string::npos);
}

TEST_CASE("runs are byte-identical") {
    const auto out = testing::scratch_dir("pipeline_repeat");
    auto config = mini(out);
    for (const auto name : {"diversity", "complexity", "notable", "similarity"}) {
        REQUIRE(run(name, config).exit_code == 0);
        const auto first = contents(out);
        REQUIRE(run(name, config).exit_code == 0);
        CHECK(contents(out) == first);
    }
    config.set("seed", "4");
    REQUIRE(run("diversity", config).exit_code == 0);
}

TEST_CASE("configuration errors map to exit code 2") {
    const auto out = testing::scratch_dir("pipeline_errors");
    RunConfig config;
    config.set("out_dir", out.string());
    const auto missing = run("diversity", config);
    CHECK(missing.exit_code == 2);
    CHECK(missing.error_line.rfind("error kind=config module=", 0) == 0);
    auto bad = mini(out);
    bad.set("corpus", (out / "nope.jsonl").string());
    CHECK(run("ingest", bad).exit_code == 2);
    CHECK(run("frobnicate", mini(out)).exit_code == 2);
    auto metric = mini(out);
    metric.set("diversity.metric", "sideways");
    CHECK(run("diversity", metric).exit_code == 2);
    CHECK(listing(out).empty());
}

TEST_CASE("a failed run leaves no files behind") {
    const auto out = testing::scratch_dir("pipeline_failure");
    // The report gets through several steps before flavor similarity finds
    // no cuisine with enough complete flavor vectors.
    const auto result = run("report", mini(out));
    CHECK(result.exit_code == 3);
    CHECK(result.error_line.find("two eligible cuisines") != std::string::npos);
    CHECK(listing(out).empty());
}

TEST_CASE("error lines escape quotes") {
    CHECK(format_error_line("data", "corpus", "bad \"x\"\nnext") ==
          "error kind=data module=corpus message=\"bad \\\"x\\\" next\"");
}

TEST_CASE("command line: flags override the config file") {
    const auto out = testing::scratch_dir("pipeline_cli");
    const auto conf = (testing::data_dir() / "mini.conf").string();
    const auto log = out / "log.txt";
    CHECK(cli("diversity --config \"" + conf + "\" --out-dir \"" + (out / "a").string() + "\" --metric local", log) == 0);
    CHECK(fs::exists(out / "a" / "diversity_local_cuisine.csv"));
    CHECK(cli("diversity --config \"" + conf + "\" --set out_dir=\"" + (out / "b").string() + "\" --seed 9", log) == 0);
    const auto manifest = nlohmann::json::parse(testing::slurp(out / "b" / "diversity_global.manifest.json"));
    CHECK(manifest["config"]["seed"] == "9");
    CHECK(cli("diversity --config \"" + conf + "\" --bogus", log) == 2);
    CHECK(testing::slurp(log).rfind("error kind=config", 0) == 0);
    CHECK(cli("diversity --config \"" + conf + "\" --set nonsense=1", log) == 2);
    CHECK(cli("keys", log) == 0);
    CHECK(testing::slurp(log).find("similarity.top_k = 5") != std::string::npos);
}
