#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "culinary/config.hpp"
#include "culinary/pipeline.hpp"
#include "culinary/synthetic.hpp"

namespace {

using culinary::RunConfig;

// Flags that override config keys; filled by CLI11, applied after --config.
struct Overrides {
    std::optional<std::string> config_file;
    std::map<std::string, std::optional<std::string>> values;
    std::vector<std::string> assignments;
    bool fit_migration = false;

    void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
        app->add_option(flag, values[key], help);
    }

    RunConfig resolve() const {
        RunConfig config;
        if (config_file) config.merge_file(*config_file);
        for (const auto& assignment : assignments) {
            const auto eq = assignment.find('=');
            if (eq == std::string::npos) {
                throw culinary::ConfigError("cli", "--set expects key=value, got '" + assignment + "'");
            }
            config.set(assignment.substr(0, eq), assignment.substr(eq + 1));
        }
        for (const auto& [key, value] : values) {
            if (value) config.set(key, *value);
        }
        if (fit_migration) config.set("diversity.fit_migration", "true");
        return config;
    }
};

void add_common(CLI::App* app, Overrides& o) {
    app->add_option("--config", o.config_file, "key = value config file; flags override it");
    app->add_option("--set", o.assignments, "override any config key: --set key=value");
    o.add(app, "--corpus", "corpus", "recipe JSONL file");
    o.add(app, "--schema", "schema", "corpus format id");
    o.add(app, "--reference", "reference", "standardized ingredient list");
    o.add(app, "--aliases", "aliases", "alias TSV");
    o.add(app, "--units", "units", "unit-token list");
    o.add(app, "--cuisine-country", "cuisine_country", "CSV cuisine,country");
    o.add(app, "--country-region", "country_region", "CSV country,region");
    o.add(app, "--country-stats", "country_stats", "CSV of country health statistics");
    o.add(app, "--out-dir", "out_dir", "output directory");
    o.add(app, "--seed", "seed", "top-level seed");
    o.add(app, "--sample-size", "sample_size", "recipes per cuisine in the balanced sample");
    o.add(app, "--min-recipes", "min_recipes", "classification cuisine threshold");
    o.add(app, "--min-mapped", "min_mapped", "minimum mapped-raw fraction per recipe");
    o.add(app, "--threads", "threads", "worker threads");
}

int fail(const std::string& line, int code) {
    std::cerr << line << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Culinary analytics over recipe corpora"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(culinary::version()));

    std::map<std::string, Overrides> overrides;
    std::map<std::string, CLI::App*> commands;
    const std::map<std::string, std::string> descriptions = {
        {"ingest", "standardize the corpus and report parse/mapping statistics"},
        {"diversity", "global or local diversity per cuisine and per country"},
        {"complexity", "complexity distributions and scores"},
        {"notable", "top TF-IDF ingredients per cuisine"},
        {"similarity", "k-nearest cuisine similarity graph"},
        {"classify", "train and evaluate a cuisine or region classifier"},
        {"health", "nutrition versus health-indicator correlations"},
        {"report", "run every analysis into one directory with an index"},
    };
    for (const auto name : culinary::kSubcommands) {
        const std::string key(name);
        auto* sub = app.add_subcommand(key, descriptions.at(key));
        add_common(sub, overrides[key]);
        commands[key] = sub;
    }
    auto& div = overrides["diversity"];
    div.add(commands["diversity"], "--metric", "diversity.metric", "global | local");
    div.add(commands["diversity"], "--degree", "diversity.degree", "migration fit degree");
    commands["diversity"]->add_flag("--fit-migration", div.fit_migration, "fit country diversity against net migration");
    auto& notable = overrides["notable"];
    notable.add(commands["notable"], "--cuisine", "notable.cuisine", "cuisine to rank; all when omitted");
    notable.add(commands["notable"], "--top", "notable.top", "ingredients per cuisine");
    auto& sim = overrides["similarity"];
    sim.add(commands["similarity"], "--kind", "similarity.kind", "ingredient | flavor");
    sim.add(commands["similarity"], "--top-k", "similarity.top_k", "out-degree");
    sim.add(commands["similarity"], "--format", "similarity.format", "dot | graphml | json");
    sim.add(commands["similarity"], "--out", "similarity.out", "graph output path");
    sim.add(commands["similarity"], "--ridge", "similarity.ridge", "flavor covariance ridge");
    sim.add(commands["similarity"], "--cap", "similarity.cap", "flavor similarity ceiling");
    auto& cls = overrides["classify"];
    cls.add(commands["classify"], "--model", "classify.model", "svm | mlp");
    cls.add(commands["classify"], "--target", "classify.target", "cuisine | region");
    cls.add(commands["classify"], "--train-frac", "classify.train_frac", "stratified training fraction");
    auto& health = overrides["health"];
    health.add(commands["health"], "--measures", "health.measures", "comma list of measures");
    health.add(commands["health"], "--nutrients", "health.nutrients", "comma list of nutrients");
    health.add(commands["health"], "--missing-rating", "health.missing_rating", "corpus_mean | one");
    auto& report = overrides["report"];
    report.add(commands["report"], "--models", "report.models", "comma list of classifiers");

    auto* keys = app.add_subcommand("keys", "list every config key with its default");

    culinary::synthetic::WorldSpec world;
    std::string synth_dir;
    auto* synth = app.add_subcommand("synth", "write a synthetic world corpus with lexicon and country tables");
    synth->add_option("--out-dir", synth_dir, "destination directory")->required();
    synth->add_option("--cuisines", world.cuisines, "number of cuisines (2..100)");
    synth->add_option("--min-recipes", world.min_recipes, "fewest recipes per cuisine");
    synth->add_option("--max-recipes", world.max_recipes, "most recipes per cuisine");
    synth->add_option("--seed", world.seed, "generator seed");
    synth->add_option("--sugar-noise", world.sugar_noise, "sd of recipe sugar around the planted relation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(culinary::format_error_line("config", "cli", e.what()), 2);
    }

    try {
        if (keys->parsed()) {
            for (const auto& key : culinary::config_keys()) {
                std::cout << key.name << " = " << key.default_value << "    # " << key.help << '\n';
            }
            return 0;
        }
        if (synth->parsed()) {
            culinary::synthetic::write_world(culinary::synthetic::make_world(world), synth_dir);
            return 0;
        }
        for (const auto& [name, sub] : commands) {
            if (!sub->parsed()) continue;
            const RunConfig config = overrides[name].resolve();
            const auto result = culinary::run(name, config);
            if (result.exit_code != 0) return fail(result.error_line, result.exit_code);
            std::cout << "manifest " << result.manifest.generic_string() << '\n';
            return 0;
        }
    } catch (const culinary::Error& e) {
        return fail(culinary::format_error_line(culinary::to_string(e.kind()), e.module(), e.what()), e.exit_code());
    } catch (const std::exception& e) {
        return fail(culinary::format_error_line("internal", "cli", e.what()), 1);
    }
    return 1;
}
