#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "culinary/error.hpp"
#include "culinary/metrics.hpp"
#include "culinary/rng.hpp"
#include "culinary/synthetic.hpp"
#include "helpers.hpp"

using namespace culinary;
using testing::recipe;

namespace {

RecipeCorpus small_corpus() {
    std::vector<Recipe> rs;
    rs.push_back(recipe("a1", "A", {"a", "b"}));
    rs.push_back(recipe("a2", "A", {"b", "c"}));
    rs.push_back(recipe("b1", "B", {"a", "b"}));
    rs.push_back(recipe("b2", "B", {"a"}));
    rs.push_back(recipe("c1", "C", {"x"}));
    return make_standardized_corpus(std::move(rs));
}

std::vector<double> random_distribution(Rng& rng, std::size_t n) {
    std::vector<double> p(n);
    double total = 0.0;
    for (auto& x : p) {
        x = rng.uniform() < 0.2 ? 0.0 : -std::log(1.0 - rng.uniform());
        total += x;
    }
    if (total == 0.0) {
        p[0] = 1.0;
        return p;
    }
    for (auto& x : p) x /= total;
    return p;
}

const synthetic::LoadedWorld& world() {
    static const auto loaded = [] {
        synthetic::WorldSpec spec;
        spec.cuisines = 12;
        spec.min_recipes = 60;
        spec.max_recipes = 120;
        return synthetic::load_world(synthetic::make_world(spec));
    }();
    return loaded;
}

}  // namespace

TEST_CASE("sample_balanced thresholds and determinism") {
    const auto corpus = small_corpus();
    const auto s = sample_balanced(corpus, 2, 1);
    CHECK(s.per_cuisine.at("A").size() == 2);  // exactly n: all retained
    CHECK(s.per_cuisine.count("C") == 0);      // n - 1: excluded
    CHECK(s.excluded == std::vector<std::string>{"C"});
    CHECK_THROWS_AS(sample_balanced(corpus, 0, 1), ConfigError);

    const auto& big = world().corpus;
    const auto x = sample_balanced(big, 50, 9);
    const auto y = sample_balanced(big, 50, 9);
    CHECK(x.per_cuisine == y.per_cuisine);
    const auto z = sample_balanced(big, 50, 10);
    CHECK(x.per_cuisine != z.per_cuisine);
    for (const auto& [cuisine, members] : x.per_cuisine) {
        CHECK(members.size() == 50);
        CHECK(std::set<std::size_t>(members.begin(), members.end()).size() == 50);
        for (const auto m : members) CHECK(big.recipes[m].cuisine == cuisine);
    }
    std::size_t eligible = 0;
    for (const auto& [cuisine, members] : big.cuisines) eligible += members.size() >= 50;
    CHECK(x.per_cuisine.size() == eligible);
}

TEST_CASE("global diversity") {
    const auto corpus = small_corpus();
    const auto s = sample_balanced(corpus, 2, 1);
    CHECK(global_diversity(s, "A", corpus) == 3);  // {a,b} u {b,c}
    CHECK_THROWS_AS(global_diversity(s, "C", corpus), DataError);

    std::vector<Recipe> same;
    for (int i = 0; i < 4; ++i) same.push_back(recipe("s" + std::to_string(i), "S", {"p", "q"}));
    same.push_back(recipe("t0", "T", {"z"}));
    const auto sc = make_standardized_corpus(std::move(same));
    CHECK(global_diversity(sample_balanced(sc, 3, 1), "S", sc) == 2);

    // Exhaustive union oracle on a generated corpus.
    const auto& big = world().corpus;
    const auto bs = sample_balanced(big, 40, 2);
    for (const auto& cuisine : bs.cuisines()) {
        std::set<std::string> all;
        for (const auto r : bs.members(cuisine)) {
            all.insert(big.recipes[r].std_ingredients.begin(), big.recipes[r].std_ingredients.end());
        }
        CHECK(global_diversity(bs, cuisine, big) == all.size());
    }
}

TEST_CASE("global diversity grows with nested samples") {
    const auto& big = world().corpus;
    for (const auto& cuisine : sample_balanced(big, 60, 4).cuisines()) {
        std::size_t previous = 0;
        for (std::size_t n = 5; n <= 60; n += 5) {
            const auto s = sample_balanced(big, n, 4);
            const auto bigger = sample_balanced(big, n + 5 <= 60 ? n + 5 : n, 4);
            const auto& small_m = s.members(cuisine);
            const auto& big_m = bigger.members(cuisine);
            CHECK(std::includes(big_m.begin(), big_m.end(), small_m.begin(), small_m.end()));
            const auto g = global_diversity(s, cuisine, big);
            CHECK(g >= previous);
            previous = g;
        }
    }
}

TEST_CASE("ingredient distribution") {
    std::vector<Recipe> rs = {recipe("1", "A", {"a", "b"}), recipe("2", "A", {"a"}), recipe("3", "B", {"a"})};
    const auto corpus = make_standardized_corpus(std::move(rs));
    const auto s = sample_balanced(corpus, 1, 0);
    const auto s2 = sample_balanced(corpus, 2, 0);
    const auto d = ingredient_distribution(s2, "A", corpus);
    REQUIRE(d.probs.size() == 2);
    CHECK(d.probs[corpus.ingredient_index.at("a")] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(d.probs[corpus.ingredient_index.at("b")] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(d.support_size == 2);
    const auto single = ingredient_distribution(s, "B", corpus);
    CHECK(single.probs[corpus.ingredient_index.at("a")] == 1.0);

    // Brute-force counting oracle.
    const auto& big = world().corpus;
    const auto bs = sample_balanced(big, 40, 3);
    for (const auto& cuisine : bs.cuisines()) {
        std::map<std::string, double> counts;
        double total = 0.0;
        for (const auto r : bs.members(cuisine)) {
            for (const auto& id : big.recipes[r].std_ingredients) {
                counts[id] += 1.0;
                total += 1.0;
            }
        }
        const auto dist = ingredient_distribution(bs, cuisine, big);
        CHECK(dist.probs.size() == big.vocabulary_size());
        double sum = 0.0;
        for (std::size_t j = 0; j < dist.probs.size(); ++j) {
            const auto it = counts.find(big.vocabulary[j]);
            const double expected = it == counts.end() ? 0.0 : it->second / total;
            CHECK(std::abs(dist.probs[j] - expected) <= 1e-12);
            sum += dist.probs[j];
        }
        CHECK(std::abs(sum - 1.0) <= 1e-9);
        CHECK(dist.support_size == counts.size());
    }
}

TEST_CASE("entropy examples and bounds") {
    const std::vector<double> point = {0.0, 1.0, 0.0};
    CHECK(entropy(point) == 0.0);
    const std::vector<double> uniform(8, 0.125);
    CHECK(entropy(uniform) == doctest::Approx(std::log(8.0)).epsilon(1e-14));
    CHECK(std::log(8.0) == doctest::Approx(2.0794).epsilon(1e-4));
    const std::vector<double> two = {2.0 / 3.0, 1.0 / 3.0};
    const double expected = -(2.0 / 3.0) * std::log(2.0 / 3.0) - (1.0 / 3.0) * std::log(1.0 / 3.0);
    CHECK(entropy(two) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(entropy(two) == doctest::Approx(0.6365).epsilon(1e-4));

    Rng rng(21);
    for (int t = 0; t < 1000; ++t) {
        const auto p = random_distribution(rng, 2 + rng.below(30));
        const auto support = static_cast<double>(std::count_if(p.begin(), p.end(), [](double x) { return x > 0; }));
        const double h = entropy(p);
        CHECK(h >= 0.0);
        CHECK(h <= std::log(support) + 1e-12);
    }
}

TEST_CASE("merging two equal-probability outcomes lowers entropy") {
    Rng rng(8);
    for (int t = 0; t < 1000; ++t) {
        auto p = random_distribution(rng, 3 + rng.below(20));
        // Force two positive equal entries, then merge them.
        const double share = 0.5 * (p[0] + p[1]);
        if (share == 0.0) continue;
        p[0] = p[1] = share;
        const double before = entropy(p);
        std::vector<double> merged(p.begin() + 1, p.end());
        merged[0] = 2.0 * share;
        CHECK(entropy(merged) < before);
        // Grouping identity: the loss is exactly 2*share*ln 2.
        CHECK(before - entropy(merged) == doctest::Approx(2.0 * share * std::log(2.0)).epsilon(1e-9));
    }
}

TEST_CASE("map_to_countries") {
    CountryTables tables;
    tables.cuisine_to_country = {{"Solo", {"AAA"}}, {"Left", {"BBB"}}, {"Right", {"BBB", "CCC"}}};
    const std::map<std::string, double> values = {{"Solo", 5.0}, {"Left", 4.0}, {"Right", 6.0}, {"Orphan", 1.0}};
    const auto series = map_to_countries(values, tables, "m");
    CHECK(series.values.at("AAA") == 5.0);
    CHECK(series.values.at("BBB") == 5.0);
    CHECK(series.values.at("CCC") == 6.0);
    CHECK(series.provenance.at("BBB") == std::vector<std::string>{"Left", "Right"});
    CHECK(series.skipped == std::vector<std::string>{"Orphan"});
    CHECK_THROWS_AS(map_to_countries({{"Orphan", 1.0}}, tables), DataError);
}

TEST_CASE("map_to_countries on the fixture matches hand means") {
    const auto tables = load_country_tables({testing::data_dir() / "mini_cuisine_country.csv",
                                             testing::data_dir() / "mini_country_region.csv",
                                             testing::data_dir() / "mini_country_stats.csv"});
    const auto series = map_to_countries({{"Italian", 7.0}, {"Japanese", 6.0}, {"Mexican", 5.0}}, tables);
    CHECK(series.values == std::map<std::string, double>{{"ITA", 7.0}, {"JPN", 6.0}, {"MEX", 5.0}, {"USA", 5.0}});
}

TEST_CASE("complexity distribution examples") {
    const std::vector<std::size_t> threes(5, 3);
    const auto all3 = complexity_from_counts(threes, 6);
    CHECK(all3.pmf[3] == 1.0);
    CHECK(all3.pmf.size() == 7);
    const std::vector<std::size_t> mixed = {2, 4, 2, 4};
    const auto half = complexity_from_counts(mixed, 4);
    CHECK(half.pmf[2] == 0.5);
    CHECK(half.pmf[4] == 0.5);
    CHECK(half.ccd[4] == 1.0);

    const std::vector<std::size_t> ones(10, 1);
    CHECK(complexity_score(complexity_from_counts(ones, 20)) == doctest::Approx(0.05).epsilon(1e-15));
    const std::vector<std::size_t> full(10, 20);
    CHECK(complexity_score(complexity_from_counts(full, 20)) == 1.0);
}

TEST_CASE("complexity distribution matches a brute-force histogram") {
    const auto& big = world().corpus;
    const auto s = sample_balanced(big, 40, 5);
    const auto imax = big.max_ingredients();
    for (const auto& cuisine : s.cuisines()) {
        const auto cd = complexity_distribution(s, cuisine, big);
        REQUIRE(cd.max_count() == imax);
        std::vector<double> hist(imax + 1, 0.0);
        for (const auto r : s.members(cuisine)) hist[big.recipes[r].std_ingredients.size()] += 1.0;
        double running = 0.0;
        for (std::size_t i = 1; i <= imax; ++i) {
            CHECK(std::abs(cd.pmf[i] - hist[i] / 40.0) <= 1e-12);
            running += hist[i] / 40.0;
            CHECK(std::abs(cd.ccd[i] - running) <= 1e-12);
            // pmf and ccd are exactly consistent.
            CHECK(cd.ccd[i] - cd.ccd[i - 1] == cd.pmf[i]);
            CHECK(cd.ccd[i] >= cd.ccd[i - 1]);
        }
        CHECK(std::abs(cd.ccd[imax] - 1.0) <= 1e-9);
    }
}

TEST_CASE("stochastic dominance orders complexity scores") {
    Rng rng(13);
    for (int t = 0; t < 100; ++t) {
        const std::size_t imax = 5 + rng.below(20);
        std::vector<std::size_t> a(50 + rng.below(50));
        for (auto& x : a) x = 1 + rng.below(imax - 1);
        // Shift a random nonempty subset up by at least one ingredient.
        auto b = a;
        bool moved = false;
        for (auto& x : b) {
            if (rng.bernoulli(0.5) && x < imax) {
                x += 1 + rng.below(imax - x);
                moved = true;
            }
        }
        if (!moved) {
            b[0] = imax;
            if (a[0] == imax) continue;
        }
        CHECK(complexity_score(complexity_from_counts(a, imax)) < complexity_score(complexity_from_counts(b, imax)));
    }
}

TEST_CASE("polynomial fit") {
    std::vector<std::pair<double, double>> line;
    for (int i = -3; i <= 5; ++i) line.emplace_back(i, 2.0 * i + 1.0);
    const auto f1 = fit_polynomial(line, 1);
    CHECK(f1.coefficients[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(f1.coefficients[1] - 2.0) <= 1e-9);

    std::vector<std::pair<double, double>> square;
    for (int i = -4; i <= 4; ++i) square.emplace_back(i, static_cast<double>(i * i));
    const auto f2 = fit_polynomial(square, 2);
    CHECK(std::abs(f2.coefficients[0]) <= 1e-9);
    CHECK(std::abs(f2.coefficients[1]) <= 1e-9);
    CHECK(std::abs(f2.coefficients[2] - 1.0) <= 1e-9);

    std::vector<std::pair<double, double>> flat = {{2, 1}, {2, 3}, {2, 5}};
    CHECK_THROWS_AS(fit_polynomial(flat, 1), NumericError);
    CHECK_THROWS_AS(fit_polynomial(line, 0), Error);
}

TEST_CASE("noisy cubic fit beats perturbed coefficient vectors") {
    Rng rng(17);
    std::vector<std::pair<double, double>> points;
    for (int i = 0; i < 60; ++i) {
        const double x = -50000.0 + 2000.0 * i;
        const double u = x / 50000.0;
        points.emplace_back(x, 3.0 + 2.0 * u - 1.5 * u * u + 0.7 * u * u * u + 0.2 * rng.normal());
    }
    const auto fit = fit_polynomial(points, 3);
    auto residual = [&](const std::vector<double>& c) {
        double ss = 0.0;
        for (const auto& [x, y] : points) {
            double v = 0.0;
            for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
            ss += (y - v) * (y - v);
        }
        return std::sqrt(ss);
    };
    CHECK(fit.residual_norm == doctest::Approx(residual(fit.coefficients)).epsilon(1e-9));
    for (int t = 0; t < 1000; ++t) {
        auto c = fit.coefficients;
        for (auto& v : c) v += v * 1e-3 * rng.normal() + 1e-12 * rng.normal();
        CHECK(fit.residual_norm <= residual(c) + 1e-12);
    }
}
