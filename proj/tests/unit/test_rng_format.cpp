#include <doctest.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include "culinary/config.hpp"
#include "culinary/error.hpp"
#include "culinary/format.hpp"
#include "culinary/rng.hpp"

using namespace culinary;

TEST_CASE("derived seeds are stable and label-sensitive") {
    CHECK(derive_seed(42, "sample/Italian") == derive_seed(42, "sample/Italian"));
    CHECK(derive_seed(42, "sample/Italian") != derive_seed(42, "sample/French"));
    CHECK(derive_seed(42, "svm") != derive_seed(43, "svm"));
    CHECK(derive_seed(7, std::uint64_t{0}) != derive_seed(7, std::uint64_t{1}));
    // FNV-1a reference value for the empty string.
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("rng draws stay in range and repeat under the same seed") {
    Rng a(123);
    Rng b(123);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

    Rng rng(9);
    std::vector<std::size_t> hits(7, 0);
    for (int i = 0; i < 70000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        ++hits[rng.below(7)];
    }
    for (const auto h : hits) CHECK(std::abs(static_cast<double>(h) - 10000.0) < 500.0);
}

TEST_CASE("normal draws have unit variance") {
    Rng rng(5);
    double sum = 0.0;
    double sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::abs(sq / n - 1.0) < 0.02);
}

TEST_CASE("shuffle permutes") {
    Rng rng(11);
    std::vector<int> v(50);
    std::iota(v.begin(), v.end(), 0);
    auto w = v;
    rng.shuffle(std::span<int>(w));
    CHECK(w != v);
    std::sort(w.begin(), w.end());
    CHECK(w == v);
}

TEST_CASE("format_double round-trips") {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double x = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<double>(rng.below(20)) - 10.0);
        const std::string text = format_double(x);
        double back = 0.0;
        std::from_chars(text.data(), text.data() + text.size(), back);
        CHECK(back == x);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(3.0) == "3");
}

TEST_CASE("csv helpers") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("a,b") == "\"a,b\"");
    CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
    const auto fields = split_csv_line("a,\"b,c\",\"d \"\"e\"\"\",");
    REQUIRE(fields.size() == 4);
    CHECK(fields[0] == "a");
    CHECK(fields[1] == "b,c");
    CHECK(fields[2] == "d \"e\"");
    CHECK(fields[3].empty());
    CHECK(trim("  x y \t") == "x y");
    CHECK(to_lower_ascii("AbC") == "abc");
}

TEST_CASE("sha256 of known strings") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("config keys: defaults, overrides, rejection") {
    RunConfig config;
    CHECK(config.u64("sample_size") == 100);
    CHECK(config.real("min_mapped") == 0.5);
    CHECK(config.list("mlp.hidden") == std::vector<std::string>{"1000", "1000", "500", "500"});
    config.set("seed", "17");
    CHECK(config.u64("seed") == 17);
    CHECK_THROWS_AS(config.set("no_such_key", "1"), ConfigError);
    config.set("seed", "-3");
    CHECK_THROWS_AS(config.u64("seed"), ConfigError);
    config.set("svm.balance_classes", "maybe");
    CHECK_THROWS_AS(config.flag("svm.balance_classes"), ConfigError);
    RunConfig a;
    RunConfig b;
    CHECK(a.canonical() == b.canonical());
    b.set("seed", "1");
    CHECK(a.canonical() != b.canonical());
}
