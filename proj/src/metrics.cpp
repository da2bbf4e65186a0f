#include "culinary/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <Eigen/Dense>

#include "culinary/error.hpp"
#include "culinary/rng.hpp"

namespace culinary {

namespace {
constexpr const char* kModule = "metrics";
}

const std::vector<std::size_t>& BalancedSample::members(const std::string& cuisine) const {
    const auto it = per_cuisine.find(cuisine);
    if (it == per_cuisine.end()) throw DataError(kModule, "cuisine not in balanced sample: " + cuisine);
    return it->second;
}

std::vector<std::string> BalancedSample::cuisines() const {
    std::vector<std::string> names;
    names.reserve(per_cuisine.size());
    for (const auto& [name, members] : per_cuisine) names.push_back(name);
    return names;
}

BalancedSample sample_balanced(const RecipeCorpus& corpus, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ConfigError(kModule, "sample size must be at least 1");
    BalancedSample sample;
    sample.n = n;
    sample.seed = seed;
    for (const auto& [cuisine, members] : corpus.cuisines) {
        if (members.size() < n) {
            sample.excluded.push_back(cuisine);
            continue;
        }
        std::vector<std::size_t> chosen = members;
        if (chosen.size() > n) {
            // Partial Fisher-Yates: the first n slots become a uniform sample.
            Rng rng(derive_seed(seed, "sample/" + cuisine));
            for (std::size_t i = 0; i < n; ++i) {
                const auto j = i + static_cast<std::size_t>(rng.below(chosen.size() - i));
                std::swap(chosen[i], chosen[j]);
            }
            chosen.resize(n);
            std::sort(chosen.begin(), chosen.end());
        }
        sample.per_cuisine.emplace(cuisine, std::move(chosen));
    }
    return sample;
}

std::size_t global_diversity(const BalancedSample& sample, const std::string& cuisine,
                             const RecipeCorpus& corpus) {
    std::vector<bool> seen(corpus.vocabulary_size(), false);
    std::size_t count = 0;
    for (const auto r : sample.members(cuisine)) {
        for (const auto& id : corpus.recipes[r].std_ingredients) {
            const auto j = corpus.ingredient_index.at(id);
            if (!seen[j]) {
                seen[j] = true;
                ++count;
            }
        }
    }
    return count;
}

CuisineDistribution ingredient_distribution(const BalancedSample& sample, const std::string& cuisine,
                                            const RecipeCorpus& corpus) {
    std::vector<std::size_t> counts(corpus.vocabulary_size(), 0);
    std::size_t total = 0;
    for (const auto r : sample.members(cuisine)) {
        for (const auto& id : corpus.recipes[r].std_ingredients) {
            ++counts[corpus.ingredient_index.at(id)];
            ++total;
        }
    }
    if (total == 0) throw DataError(kModule, "cuisine has no ingredient occurrences: " + cuisine);

    CuisineDistribution dist;
    dist.cuisine = cuisine;
    dist.probs.resize(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j) {
        dist.probs[j] = static_cast<double>(counts[j]) / static_cast<double>(total);
        if (counts[j] > 0) ++dist.support_size;
    }
    return dist;
}

double entropy(std::span<const double> probs) {
    double h = 0.0;
    for (const double p : probs) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

CountrySeries map_to_countries(const std::map<std::string, double>& per_cuisine,
                               const CountryTables& tables, std::string metric) {
    CountrySeries series;
    series.metric = std::move(metric);
    std::map<std::string, std::vector<double>> contributions;
    for (const auto& [cuisine, value] : per_cuisine) {
        const auto it = tables.cuisine_to_country.find(cuisine);
        if (it == tables.cuisine_to_country.end() || it->second.empty()) {
            series.skipped.push_back(cuisine);
            continue;
        }
        for (const auto& country : it->second) {
            contributions[country].push_back(value);
            series.provenance[country].push_back(cuisine);
        }
    }
    if (contributions.empty()) {
        throw DataError(kModule, "no cuisine of '" + series.metric + "' maps to a country");
    }
    for (const auto& [country, values] : contributions) {
        const double sum = std::accumulate(values.begin(), values.end(), 0.0);
        series.values[country] = sum / static_cast<double>(values.size());
    }
    return series;
}

ComplexityDistribution complexity_from_counts(std::span<const std::size_t> dish_sizes,
                                              std::size_t max_count, std::string cuisine) {
    if (dish_sizes.empty()) throw DataError(kModule, "complexity distribution of an empty cuisine");
    std::vector<std::size_t> histogram(max_count + 1, 0);
    for (const auto size : dish_sizes) {
        if (size == 0 || size > max_count) {
            throw DataError(kModule, "dish size outside 1.." + std::to_string(max_count));
        }
        ++histogram[size];
    }

    // pmf is defined as successive CCD differences so that the two views
    // agree bit for bit; each entry equals count/n up to one rounding.
    ComplexityDistribution cd;
    cd.cuisine = std::move(cuisine);
    cd.pmf.assign(max_count + 1, 0.0);
    cd.ccd.assign(max_count + 1, 0.0);
    const auto n = static_cast<double>(dish_sizes.size());
    std::size_t running = 0;
    for (std::size_t i = 1; i <= max_count; ++i) {
        running += histogram[i];
        cd.ccd[i] = static_cast<double>(running) / n;
        cd.pmf[i] = cd.ccd[i] - cd.ccd[i - 1];
    }
    return cd;
}

ComplexityDistribution complexity_distribution(const BalancedSample& sample, const std::string& cuisine,
                                               const RecipeCorpus& corpus) {
    std::vector<std::size_t> sizes;
    for (const auto r : sample.members(cuisine)) sizes.push_back(corpus.recipes[r].std_ingredients.size());
    return complexity_from_counts(sizes, corpus.max_ingredients(), cuisine);
}

double complexity_score(const ComplexityDistribution& cd) {
    double area = 0.0;
    for (std::size_t i = 1; i < cd.ccd.size(); ++i) area += cd.ccd[i];
    if (!(area > 0.0)) throw NumericError(kModule, "CCD has zero area");
    return 1.0 / area;
}

double PolynomialFit::operator()(double x) const {
    double y = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) y = y * x + *it;
    return y;
}

PolynomialFit fit_polynomial(std::span<const std::pair<double, double>> points, std::size_t degree) {
    if (degree < 1) throw ConfigError(kModule, "polynomial degree must be at least 1");
    const std::size_t terms = degree + 1;
    if (points.size() < terms) {
        throw DataError(kModule, "need at least " + std::to_string(terms) + " points for degree " +
                                     std::to_string(degree));
    }
    std::set<double> distinct;
    for (const auto& [x, y] : points) {
        if (!std::isfinite(x) || !std::isfinite(y)) throw DataError(kModule, "non-finite fit point");
        distinct.insert(x);
    }
    if (distinct.size() < terms) throw NumericError(kModule, "rank-deficient polynomial design");

    // Fit in a centred, scaled variable t = (x - centre) / scale for
    // conditioning, then expand back to powers of x.
    double centre = 0.0;
    for (const auto& p : points) centre += p.first;
    centre /= static_cast<double>(points.size());
    double scale = 0.0;
    for (const auto& p : points) scale = std::max(scale, std::abs(p.first - centre));

    const auto rows = static_cast<Eigen::Index>(points.size());
    const auto cols = static_cast<Eigen::Index>(terms);
    Eigen::MatrixXd design(rows, cols);
    Eigen::VectorXd target(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double t = (points[static_cast<std::size_t>(i)].first - centre) / scale;
        double power = 1.0;
        for (Eigen::Index k = 0; k < cols; ++k) {
            design(i, k) = power;
            power *= t;
        }
        target(i) = points[static_cast<std::size_t>(i)].second;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-12);
    if (qr.rank() < cols) throw NumericError(kModule, "rank-deficient polynomial design");
    const Eigen::VectorXd scaled = qr.solve(target);

    // sum_k a_k ((x - c)/s)^k = sum_m x^m sum_{k>=m} a_k s^-k C(k,m) (-c)^(k-m)
    PolynomialFit fit;
    fit.coefficients.assign(terms, 0.0);
    for (std::size_t k = 0; k < terms; ++k) {
        const double ak = scaled(static_cast<Eigen::Index>(k)) / std::pow(scale, static_cast<double>(k));
        double binom = 1.0;
        for (std::size_t m = 0; m <= k; ++m) {
            fit.coefficients[m] += ak * binom * std::pow(-centre, static_cast<double>(k - m));
            binom = binom * static_cast<double>(k - m) / static_cast<double>(m + 1);
        }
    }
    double ss = 0.0;
    for (const auto& [x, y] : points) {
        const double r = y - fit(x);
        ss += r * r;
    }
    fit.residual_norm = std::sqrt(ss);
    return fit;
}

}  // namespace culinary
