#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mecsim/metrics.hpp"

using namespace mecsim;

// Independent oracle: literal sort-and-index, kept free of the library path.
static double percentile_oracle(std::vector<double> v, double p) {
    std::sort(v.begin(), v.end());
    std::size_t rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(v.size())));
    rank = std::max<std::size_t>(1, std::min(rank, v.size()));
    return v[rank - 1];
}

TEST_CASE("nearest-rank percentile on a uniform grid") {
    std::vector<double> v;
    for (int i = 1; i <= 100; ++i) v.push_back(i);
    REQUIRE(percentile(v, 95.0) == 95.0);
    REQUIRE(percentile(v, 100.0) == 100.0);
    REQUIRE(percentile(v, 1.0) == 1.0);
}

TEST_CASE("percentile of a singleton is the element") {
    for (double p : {0.5, 50.0, 95.0, 100.0}) REQUIRE(percentile({7.0}, p) == 7.0);
}

TEST_CASE("percentile matches the sort-and-index oracle on random sets") {
    std::mt19937 gen(404);
    std::uniform_real_distribution<double> val(-50.0, 50.0);
    std::uniform_int_distribution<int> len(1, 200);
    std::uniform_real_distribution<double> pd(0.001, 100.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> v(len(gen));
        for (auto& x : v) x = val(gen);
        double p = pd(gen);
        REQUIRE(percentile(v, p) == percentile_oracle(v, p));
    }
}

TEST_CASE("percentile is monotone in p and tops out at the max") {
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> val(0.0, 10.0);
    std::vector<double> v(57);
    for (auto& x : v) x = val(gen);
    double prev = percentile(v, 1.0);
    for (double p = 2.0; p <= 100.0; p += 1.0) {
        double cur = percentile(v, p);
        REQUIRE(cur >= prev);
        prev = cur;
    }
    REQUIRE(percentile(v, 100.0) == *std::max_element(v.begin(), v.end()));
}

TEST_CASE("percentile rejects empty sets and out-of-range p") {
    REQUIRE_THROWS_AS(percentile({}, 95.0), std::invalid_argument);
    REQUIRE_THROWS_AS(percentile({1.0}, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(percentile({1.0}, 100.5), std::invalid_argument);
}

TEST_CASE("non-finite samples are rejected everywhere") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    REQUIRE_THROWS_AS(percentile({1.0, nan}, 95.0), std::invalid_argument);
    REQUIRE_THROWS_AS(summarize({inf}), std::invalid_argument);
    REQUIRE_THROWS_AS(ecdf({1.0, -inf}), std::invalid_argument);
}

TEST_CASE("summarize computes exact arithmetic statistics") {
    Summary s = summarize({0.09, 0.55, 1.52});
    REQUIRE(s.n == 3);
    REQUIRE(s.min == 0.09);
    REQUIRE(s.max == 1.52);
    REQUIRE_THAT(s.mean, Catch::Matchers::WithinAbs(0.72, 1e-12));
    REQUIRE(s.p95 == 1.52);
}

TEST_CASE("summarize of a constant set degenerates cleanly") {
    std::vector<double> v(10, 4.45);
    Summary s = summarize(v);
    REQUIRE(s.min == 4.45);
    REQUIRE(s.max == 4.45);
    REQUIRE_THAT(s.mean, Catch::Matchers::WithinAbs(4.45, 1e-12));
    REQUIRE(s.p95 == 4.45);
    REQUIRE_THROWS_AS(summarize({}), std::invalid_argument);
}

TEST_CASE("summarize invariants hold on fuzzed inputs") {
    std::mt19937 gen(2024);
    std::uniform_real_distribution<double> val(-1e6, 1e6);
    std::uniform_int_distribution<int> len(1, 300);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> v(len(gen));
        for (auto& x : v) x = val(gen);
        Summary s = summarize(v);
        REQUIRE(s.min <= s.mean);
        REQUIRE(s.mean <= s.max);
        REQUIRE(s.p95 >= s.min);
        REQUIRE(s.p95 <= s.max);
    }
}

TEST_CASE("ecdf emits sorted unique steps ending exactly at 1") {
    auto steps = ecdf({1.0, 2.0, 2.0, 4.0});
    REQUIRE(steps == std::vector<std::pair<double, double>>{{1.0, 0.25}, {2.0, 0.75}, {4.0, 1.0}});
    REQUIRE(ecdf({5.0}) == std::vector<std::pair<double, double>>{{5.0, 1.0}});
    REQUIRE_THROWS_AS(ecdf({}), std::invalid_argument);
}

TEST_CASE("ecdf fractions strictly increase and increments sum to 1") {
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> val(0.0, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(1 + trial);
        for (auto& x : v) x = std::round(val(gen) * 4) / 4;  // force duplicates
        auto steps = ecdf(v);
        double prev = 0.0, total = 0.0;
        for (auto [value, frac] : steps) {
            REQUIRE(frac > prev);
            total += frac - prev;
            prev = frac;
        }
        REQUIRE(steps.back().second == 1.0);
        REQUIRE_THAT(total, Catch::Matchers::WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("ecdf evaluated at the p95 point reaches at least 0.95") {
    std::mt19937 gen(8);
    std::uniform_real_distribution<double> val(0.0, 9.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> v(20 + trial);
        for (auto& x : v) x = val(gen);
        double p95 = percentile(v, 95.0);
        double frac_at_p95 = 0.0;
        for (auto [value, frac] : ecdf(v))
            if (value <= p95) frac_at_p95 = frac;
        REQUIRE(frac_at_p95 >= 0.95);
    }
}

TEST_CASE("histogram covers the span and counts every sample") {
    std::vector<double> v{0.0, 0.1, 0.5, 0.9, 1.0, 1.0};
    auto bins = histogram(v, 4);
    REQUIRE(bins.size() == 4);
    REQUIRE(bins.front().lo == 0.0);
    REQUIRE(bins.back().hi == 1.0);
    std::size_t total = 0;
    for (const auto& b : bins) total += b.count;
    REQUIRE(total == v.size());

    auto flat = histogram(std::vector<double>(7, 3.0));
    REQUIRE(flat.size() == 1);
    REQUIRE(flat[0].count == 7);
}
