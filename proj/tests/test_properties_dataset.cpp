#include "macrofield/dataset.hpp"

#include <doctest.h>

#include <random>

using namespace macrofield;

namespace {

EconSeries random_series(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> pos(1.0, 1000.0);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    std::uniform_real_distribution<double> rate(0.01, 0.3);
    EconSeries s{"R", "u", {}};
    for (int i = 0; i < n; ++i) {
        const double K = pos(rng);
        s.records.push_back({2000 + i, K, K * frac(rng), pos(rng), pos(rng), rate(rng), pos(rng), rate(rng) - 0.1});
    }
    return s;
}

} // namespace

TEST_SUITE("dataset properties") {

TEST_CASE("k_t * y_t = 1 and p_rel, M_m bounds") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = random_series(rng, 12);
        const auto d = derive_indicators(s);
        for (const auto& r : d.rows) {
            CHECK(*r.k_t * *r.y_t == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(*r.p_rel >= 0.0);
            CHECK(*r.p_rel <= 1.0);
            CHECK(*r.M_m >= 0.0);
        }
    }
}

TEST_CASE("derive_indicators is pure") {
    std::mt19937_64 rng(11);
    const auto s = random_series(rng, 20);
    CHECK(derived_to_csv(derive_indicators(s)) == derived_to_csv(derive_indicators(s)));
}

TEST_CASE("serialize round-trip on random series") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto s = random_series(rng, 8);
        const auto again = parse_series(serialize_series(s));
        REQUIRE(again.records.size() == s.records.size());
        for (std::size_t i = 0; i < s.records.size(); ++i) CHECK(again.records[i] == s.records[i]);
    }
}

TEST_CASE("monotone series has a unique crossing") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> step(0.01, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> years;
        std::vector<std::optional<double>> v;
        double x = 0.0;
        for (int i = 0; i < 30; ++i) {
            x += step(rng);
            years.push_back(i);
            v.push_back(x);
        }
        const double thr = *v[10];
        CHECK(find_crossing(years, v, thr, Direction::up) == 10);
    }
}

}
