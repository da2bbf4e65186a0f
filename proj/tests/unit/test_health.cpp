#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "culinary/error.hpp"
#include "culinary/health.hpp"
#include "culinary/rng.hpp"
#include "culinary/synthetic.hpp"
#include "helpers.hpp"

using namespace culinary;
using testing::recipe;

namespace {

constexpr auto kSugar = static_cast<std::size_t>(Nutrient::sugar);

Recipe rated(std::string id, std::string cuisine, std::optional<double> rating, std::optional<double> sugar) {
    auto r = recipe(std::move(id), std::move(cuisine), {"x"});
    r.rating = rating;
    r.nutrition[kSugar] = sugar;
    return r;
}

double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

double kendall_oracle(const std::vector<double>& x, const std::vector<double>& y) {
    double concordant = 0, discordant = 0, tx = 0, ty = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            if (dx == 0 && dy == 0) continue;
            if (dx == 0) ++tx;
            else if (dy == 0) ++ty;
            else if ((dx > 0) == (dy > 0)) ++concordant;
            else ++discordant;
        }
    }
    return (concordant - discordant) / std::sqrt((concordant + discordant + tx) * (concordant + discordant + ty));
}

}  // namespace

TEST_CASE("rating-weighted country nutrition") {
    CountryTables tables;
    tables.cuisine_to_country = {{"A", {"AAA"}}, {"B", {"BBB"}}, {"C", {"CCC"}}, {"D", {"DDD"}}};
    std::vector<Recipe> rs = {
        rated("a1", "A", 2.0, 10.0), rated("a2", "A", 2.0, 20.0),   // equal ratings: plain mean
        rated("b1", "B", 1.0, 10.0), rated("b2", "B", 3.0, 20.0),   // 17.5
        rated("c1", "C", 4.0, 10.0), rated("c2", "C", std::nullopt, 40.0),
        rated("c3", "C", 2.0, std::nullopt),
        rated("d1", "D", 5.0, std::nullopt),
    };
    const auto corpus = make_standardized_corpus(std::move(rs));
    const auto summary = country_nutrition(corpus, tables, MissingRating::corpus_mean);
    CHECK(summary.countries.at("AAA").get(Nutrient::sugar) == 15.0);
    CHECK(summary.countries.at("BBB").get(Nutrient::sugar) == 17.5);
    // Unrated recipe weighs the corpus mean rating (2+2+1+3+4+2+5)/7 = 19/7.
    const double w = 19.0 / 7.0;
    CHECK(summary.missing_rating_weight == doctest::Approx(w));
    CHECK(*summary.countries.at("CCC").get(Nutrient::sugar) == doctest::Approx((4.0 * 10.0 + w * 40.0) / (4.0 + w)));
    CHECK(summary.excluded == std::vector<std::string>{"DDD"});
    const auto ones = country_nutrition(corpus, tables, MissingRating::one);
    CHECK(*ones.countries.at("CCC").get(Nutrient::sugar) == doctest::Approx((4.0 * 10.0 + 40.0) / 5.0));
}

TEST_CASE("correlation examples") {
    const std::vector<double> x = {1, 2, 3, 4, 5};
    const std::vector<double> up = {2, 4, 6, 8, 10};
    const std::vector<double> down = {5, 4, 3, 2, 1};
    CHECK(pearson(x, up) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(pearson(x, down) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(kendall_tau(x, up) == 1.0);
    CHECK(kendall_tau(x, down) == -1.0);
    const std::vector<double> flat = {3, 3, 3, 3, 3};
    CHECK_THROWS_AS(pearson(x, flat), DataError);
    CHECK_THROWS_AS(kendall_tau(flat, x), DataError);
    const std::vector<double> two = {1, 2};
    CHECK_THROWS_AS(pearson(two, two), DataError);
    // tau-b with ties: x = (1,1,2,3), y = (1,2,2,3).
    const std::vector<double> tx = {1, 1, 2, 3};
    const std::vector<double> ty = {1, 2, 2, 3};
    CHECK(kendall_tau(tx, ty) == doctest::Approx(4.0 / 5.0).epsilon(1e-15));
}

TEST_CASE("correlations agree with direct formulas") {
    Rng rng(41);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 3 + rng.below(60);
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            // Small integer grid forces plenty of ties.
            x[i] = static_cast<double>(rng.below(6));
            y[i] = 0.5 * x[i] + static_cast<double>(rng.below(4));
        }
        if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) continue;
        if (std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; })) continue;
        CHECK(std::abs(pearson(x, y) - pearson_oracle(x, y)) <= 1e-9);
        CHECK(std::abs(kendall_tau(x, y) - kendall_oracle(x, y)) <= 1e-12);
        CHECK(pearson(x, y) == doctest::Approx(pearson(y, x)).epsilon(1e-12));
        CHECK(kendall_tau(x, y) == doctest::Approx(kendall_tau(y, x)).epsilon(1e-12));

        // Positive affine maps leave Pearson alone; monotone maps leave Kendall alone.
        std::vector<double> affine(n), cubed(n);
        for (std::size_t i = 0; i < n; ++i) {
            affine[i] = 3.0 * x[i] - 7.0;
            cubed[i] = x[i] * x[i] * x[i] + 1.0;
        }
        CHECK(pearson(affine, y) == doctest::Approx(pearson(x, y)).epsilon(1e-9));
        CHECK(kendall_tau(cubed, y) == kendall_tau(x, y));
        std::vector<double> flipped(n);
        for (std::size_t i = 0; i < n; ++i) flipped[i] = -y[i];
        CHECK(kendall_tau(x, flipped) == doctest::Approx(-kendall_tau(x, y)).epsilon(1e-12));
    }
}

TEST_CASE("correlation table and bottom-k curve on the world") {
    const auto world = synthetic::load_world(synthetic::make_world({}));
    const auto summary = country_nutrition(world.corpus, world.tables);
    const auto table = correlation_table(summary, world.tables);
    REQUIRE(table.size() == 15);
    CHECK(table[0].measure == HealthMeasure::obesity);
    CHECK(table[0].nutrient == Nutrient::calories);
    CHECK(table[14].measure == HealthMeasure::expenditure);
    CHECK(table[14].nutrient == Nutrient::sugar);
    for (const auto& row : table) {
        std::size_t with_nutrient = 0;
        for (const auto& [country, cn] : summary.countries) with_nutrient += cn.get(row.nutrient).has_value();
        CHECK(row.n + row.dropped == with_nutrient);
        CHECK(row.n == paired_countries(summary, world.tables, row.nutrient, row.measure).size());
        CHECK(std::abs(row.pearson) <= 1.0);
        CHECK(std::abs(row.kendall_tau) <= 1.0);
    }

    const auto pairs = paired_countries(summary, world.tables, Nutrient::sugar, HealthMeasure::obesity);
    const auto curve = bottomk_curve(summary, world.tables, Nutrient::sugar, HealthMeasure::obesity);
    REQUIRE(curve.size() == pairs.size());
    CHECK(curve.front().second == std::get<2>(pairs.front()));
    double all = 0.0;
    for (const auto& p : pairs) all += std::get<2>(p);
    CHECK(curve.back().second == doctest::Approx(all / static_cast<double>(pairs.size())).epsilon(1e-12));
}

TEST_CASE("planted sugar relation yields a monotone curve") {
    synthetic::WorldSpec spec;
    spec.cuisines = 40;
    spec.sugar_noise = 0.0;
    spec.multi_country = false;
    const auto world = synthetic::load_world(synthetic::make_world(spec));
    const auto summary = country_nutrition(world.corpus, world.tables);
    const auto table = correlation_table(summary, world.tables, std::vector<HealthMeasure>{HealthMeasure::obesity},
                                         std::vector<Nutrient>{Nutrient::sugar});
    CHECK(table[0].pearson > 0.99);
    const auto curve = bottomk_curve(summary, world.tables, Nutrient::sugar, HealthMeasure::obesity);
    for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].second >= curve[i - 1].second - 1e-12);
}
