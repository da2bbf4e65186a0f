#include "culinary/health.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "culinary/error.hpp"

namespace culinary {

namespace {

constexpr const char* kModule = "health";

void check_series(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DataError(kModule, "series lengths differ");
    if (x.size() < 3) throw DataError(kModule, "correlation needs at least 3 paired values");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw DataError(kModule, "non-finite series value");
    }
}

// Pairs sharing a value within each run of equal keys: sum t(t-1)/2.
template <typename Equal>
std::uint64_t tied_pairs(std::size_t n, Equal&& equal) {
    std::uint64_t ties = 0;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= n; ++i) {
        if (i < n && equal(i - 1, i)) {
            ++run;
        } else {
            ties += static_cast<std::uint64_t>(run) * (run - 1) / 2;
            run = 1;
        }
    }
    return ties;
}

// Stable merge sort of `values`, counting pairs i < j with values[i] > values[j].
std::uint64_t sort_counting_inversions(std::vector<double>& values, std::vector<double>& scratch,
                                       std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t inversions = sort_counting_inversions(values, scratch, lo, mid) +
                               sort_counting_inversions(values, scratch, mid, hi);
    std::size_t i = lo;
    std::size_t j = mid;
    std::size_t k = lo;
    while (i < mid && j < hi) {
        if (values[j] < values[i]) {
            inversions += mid - i;
            scratch[k++] = values[j++];
        } else {
            scratch[k++] = values[i++];
        }
    }
    while (i < mid) scratch[k++] = values[i++];
    while (j < hi) scratch[k++] = values[j++];
    std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo), scratch.begin() + static_cast<std::ptrdiff_t>(hi),
              values.begin() + static_cast<std::ptrdiff_t>(lo));
    return inversions;
}

}  // namespace

NutritionSummary country_nutrition(const RecipeCorpus& corpus, const CountryTables& tables, MissingRating policy) {
    NutritionSummary summary;
    if (policy == MissingRating::corpus_mean) {
        double sum = 0.0;
        std::size_t rated = 0;
        for (const auto& r : corpus.recipes) {
            if (r.rating) {
                sum += *r.rating;
                ++rated;
            }
        }
        summary.missing_rating_weight = rated ? sum / static_cast<double>(rated) : 1.0;
    }

    std::map<std::string, std::set<std::string>> cuisines_of_country;
    for (const auto& [cuisine, countries] : tables.cuisine_to_country) {
        if (!corpus.cuisines.count(cuisine)) continue;
        for (const auto& country : countries) cuisines_of_country[country].insert(cuisine);
    }

    for (const auto& [country, cuisines] : cuisines_of_country) {
        std::array<double, kNutrientCount> weighted{};
        std::array<double, kNutrientCount> weight_sum{};
        CountryNutrition cn;
        cn.country = country;
        for (const auto& cuisine : cuisines) {
            for (const auto r : corpus.members(cuisine)) {
                const Recipe& recipe = corpus.recipes[r];
                if (!recipe.has_any_nutrition()) continue;
                const double w = recipe.rating ? *recipe.rating : summary.missing_rating_weight;
                ++cn.n_recipes;
                cn.weights_used += w;
                for (std::size_t n = 0; n < kNutrientCount; ++n) {
                    if (recipe.nutrition[n]) {
                        weighted[n] += w * *recipe.nutrition[n];
                        weight_sum[n] += w;
                    }
                }
            }
        }
        if (cn.n_recipes == 0) {
            summary.excluded.push_back(country);
            continue;
        }
        for (std::size_t n = 0; n < kNutrientCount; ++n) {
            if (weight_sum[n] > 0.0) cn.averages[n] = weighted[n] / weight_sum[n];
        }
        summary.countries.emplace(country, std::move(cn));
    }
    return summary;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    check_series(x, y);
    const auto n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) throw DataError(kModule, "zero variance in correlation input");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double kendall_tau(std::span<const double> x, std::span<const double> y) {
    check_series(x, y);
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(x[a], y[a]) < std::tie(x[b], y[b]);
    });

    const std::uint64_t x_ties = tied_pairs(n, [&](std::size_t a, std::size_t b) { return x[order[a]] == x[order[b]]; });
    const std::uint64_t joint_ties = tied_pairs(
        n, [&](std::size_t a, std::size_t b) { return x[order[a]] == x[order[b]] && y[order[a]] == y[order[b]]; });

    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) ys[i] = y[order[i]];
    std::vector<double> scratch(n);
    const std::uint64_t swaps = sort_counting_inversions(ys, scratch, 0, n);
    const std::uint64_t y_ties = tied_pairs(n, [&](std::size_t a, std::size_t b) { return ys[a] == ys[b]; });

    const auto total = static_cast<std::int64_t>(n * (n - 1) / 2);
    const auto tx = static_cast<std::int64_t>(x_ties);
    const auto ty = static_cast<std::int64_t>(y_ties);
    if (tx == total || ty == total) throw DataError(kModule, "all values tied in a Kendall input series");
    const std::int64_t s = total - tx - ty + static_cast<std::int64_t>(joint_ties) - 2 * static_cast<std::int64_t>(swaps);
    const double denom = std::sqrt(static_cast<double>(total - tx) * static_cast<double>(total - ty));
    return std::clamp(static_cast<double>(s) / denom, -1.0, 1.0);
}

std::vector<std::tuple<std::string, double, double>> paired_countries(const NutritionSummary& nutrition,
                                                                      const CountryTables& tables,
                                                                      Nutrient nutrient, HealthMeasure measure) {
    std::vector<std::tuple<std::string, double, double>> pairs;
    for (const auto& [country, cn] : nutrition.countries) {
        const auto value = cn.get(nutrient);
        if (!value) continue;
        const auto health = tables.health.find(country);
        if (health == tables.health.end()) continue;
        const auto m = health->second.get(measure);
        if (!m) continue;
        pairs.emplace_back(country, *value, *m);
    }
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
        return std::get<0>(a) < std::get<0>(b);
    });
    return pairs;
}

std::vector<CorrelationResult> correlation_table(const NutritionSummary& nutrition, const CountryTables& tables,
                                                 std::span<const HealthMeasure> measures,
                                                 std::span<const Nutrient> nutrients) {
    std::vector<CorrelationResult> rows;
    for (const auto measure : measures) {
        for (const auto nutrient : nutrients) {
            const auto pairs = paired_countries(nutrition, tables, nutrient, measure);
            std::size_t with_nutrient = 0;
            for (const auto& [country, cn] : nutrition.countries) {
                if (cn.get(nutrient)) ++with_nutrient;
            }
            CorrelationResult row;
            row.measure = measure;
            row.nutrient = nutrient;
            row.n = pairs.size();
            row.dropped = with_nutrient - pairs.size();
            if (row.n < 3) {
                throw DataError(kModule, "fewer than 3 countries pair " + std::string(measure_name(measure)) +
                                             " with " + std::string(kNutrientKeys[static_cast<std::size_t>(nutrient)]));
            }
            std::vector<double> xs;
            std::vector<double> ys;
            for (const auto& [country, value, m] : pairs) {
                xs.push_back(value);
                ys.push_back(m);
            }
            row.pearson = pearson(xs, ys);
            row.kendall_tau = kendall_tau(xs, ys);
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<std::pair<std::size_t, double>> bottomk_curve(const NutritionSummary& nutrition,
                                                          const CountryTables& tables, Nutrient nutrient,
                                                          HealthMeasure measure) {
    const auto pairs = paired_countries(nutrition, tables, nutrient, measure);
    if (pairs.size() < 2) throw DataError(kModule, "bottom-k curve needs at least 2 paired countries");
    std::vector<std::pair<std::size_t, double>> curve;
    double running = 0.0;
    for (std::size_t k = 1; k <= pairs.size(); ++k) {
        running += std::get<2>(pairs[k - 1]);
        curve.emplace_back(k, running / static_cast<double>(k));
    }
    return curve;
}

}  // namespace culinary
