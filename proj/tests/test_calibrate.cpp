#include "macrofield/calibrate.hpp"
#include "macrofield/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

using namespace macrofield;

namespace {

Trajectory frg_points_model() {
    ModelParams p;
    p.Y0 = 1.0;
    p.K0 = 0.38;
    IntegrateOptions o;
    o.horizon = 60;
    return integrate(p, o);
}

std::vector<double> synthetic_prel(const std::vector<double>& t, double p0, double T_h) {
    std::vector<double> v;
    for (double x : t) v.push_back(p0 / std::numbers::e * std::exp(-(x - T_h) / T_h));
    return v;
}

std::vector<double> years_0_to(int n) {
    std::vector<double> t(static_cast<std::size_t>(n));
    std::iota(t.begin(), t.end(), 0.0);
    return t;
}

} // namespace

TEST_SUITE("calibrate") {

TEST_CASE("chain correction from normalized points") {
    const auto model = frg_points_model();
    const auto frg = frg_dataset();
    const auto c = chain_correction(model, frg);
    CHECK(c.t_i == 1950);
    CHECK(c.t_e == 2010);
    CHECK(c.V_i == doctest::Approx((52.582 + 19.966) / 1.38).epsilon(1e-14));
    const auto chained = apply_chain(c, model);
    CHECK(chained.front().Y + chained.front().K == doctest::Approx(52.582 + 19.966).epsilon(1e-14));
    const auto& last = chained.back();
    const auto* d2010 = frg.find(2010);
    CHECK(last.Y + last.K == doctest::Approx(d2010->gdp + d2010->assets).epsilon(1e-12));
    CHECK(c.factor(0.5 * (c.t_i + c.t_e)) == doctest::Approx(0.5 * (c.V_i + c.V_e)));
}

TEST_CASE("identity chaining") {
    const auto frg = frg_dataset();
    Trajectory t;
    t.t0 = 1950;
    for (const auto& r : frg.records) {
        TrajectoryStep s;
        s.year = r.year;
        s.t = r.year - 1950;
        s.Y = r.gdp;
        s.K = r.assets;
        t.steps.push_back(s);
    }
    const auto c = chain_correction(t, frg);
    CHECK(c.V_i == 1.0);
    CHECK(c.V_e == 1.0);
}

TEST_CASE("chain correction errors") {
    const auto frg = frg_dataset();
    const auto model = frg_points_model();
    CHECK_THROWS_AS(chain_correction(model, frg, 1990, 1980), ParameterError);
    Trajectory zero;
    zero.t0 = 1950;
    zero.steps.push_back({0.0, 1950, 0.0, 0.0});
    zero.steps.push_back({1.0, 1951, 0.0, 0.0});
    CHECK_THROWS_AS(chain_correction(zero, frg), DegenerateError);
}

TEST_CASE("extrapolated years are flagged") {
    const auto model = frg_points_model();
    const auto c = chain_correction(model, frg_dataset(), 1960, 2000);
    const auto chained = apply_chain(c, model);
    CHECK(chained.front().extrapolated);
    CHECK_FALSE(chained[10].extrapolated);
    CHECK(chained.back().extrapolated);
}

TEST_CASE("p_rel fit on FRG data") {
    PrelFitOptions o;
    o.constrained = true;
    const auto fit = fit_prel_exponential(frg_dataset(), o);
    CHECK(fit.p_rel0 == 1.0);
    CHECK(fit.T_h == doctest::Approx(61.05347257375645).epsilon(1e-7));
    CHECK(fit.from == 1950);
    const auto free = fit_prel_exponential(frg_dataset());
    CHECK(free.p_rel0 == doctest::Approx(0.7363861292924823).epsilon(1e-7));
    CHECK(free.T_h == doctest::Approx(129.2412712495403).epsilon(1e-7));
}

TEST_CASE("noiseless synthetic data is a fixed point") {
    const auto t = years_0_to(60);
    const auto v = synthetic_prel(t, 0.9, 60.0);
    const auto fit = fit_prel_exponential(t, v);
    CHECK(fit.p_rel0 == doctest::Approx(0.9).epsilon(1e-6));
    CHECK(fit.T_h == doctest::Approx(60.0).epsilon(1e-6));
    CHECK(fit.rms < 1e-12);
}

TEST_CASE("one percent noise recovers within five percent") {
    const auto t = years_0_to(60);
    const auto clean = synthetic_prel(t, 0.9, 60.0);
    std::mt19937_64 rng(41);
    std::normal_distribution<double> noise(0.0, 0.01);
    for (int trial = 0; trial < 50; ++trial) {
        auto v = clean;
        for (auto& x : v) x *= 1.0 + noise(rng);
        const auto fit = fit_prel_exponential(t, v);
        CHECK(std::abs(fit.p_rel0 - 0.9) / 0.9 < 0.05);
        CHECK(std::abs(fit.T_h - 60.0) / 60.0 < 0.05);
    }
}

TEST_CASE("p_rel fit errors") {
    CHECK_THROWS_AS(fit_prel_exponential(years_0_to(5), std::vector<double>(5, 0.5)), ParameterError);
    auto t = years_0_to(20);
    std::vector<double> rising;
    for (double x : t) rising.push_back(0.1 + 0.01 * x);
    CHECK_THROWS_AS(fit_prel_exponential(t, rising), FitError);
}

TEST_CASE("three exact points") {
    const std::vector<double> K{-1.0, 0.5, 4.0};
    std::vector<double> Y;
    for (double k : K) Y.push_back(-k * k + 2 * k + 3);
    const auto f = fit_quadratic_YK(K, Y);
    CHECK(f.a_K == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(f.b_K == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(f.c_K == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("quadratic fit on FRG data") {
    const auto frg = frg_dataset();
    const auto f = fit_quadratic_YK(frg, 1950, 2010);
    CHECK(f.n == 61);
    CHECK(f.a_K == doctest::Approx(3.65447326895e-5).epsilon(1e-9));
    CHECK(f.b_K == doctest::Approx(0.568884103964).epsilon(1e-9));
    CHECK(f.c_K == doctest::Approx(107.372371744).epsilon(1e-9));
    const auto all = fit_quadratic_YK(frg);
    CHECK(all.a_K == doctest::Approx(3.25538478353e-5).epsilon(1e-9));
    CHECK(all.b_K == doctest::Approx(0.546163426267).epsilon(1e-9));
    CHECK(all.c_K == doctest::Approx(118.59465466).epsilon(1e-9));
}

TEST_CASE("constant capital is degenerate") {
    CHECK_THROWS_AS(fit_quadratic_YK(std::vector<double>(5, 2.0), std::vector<double>{1, 2, 3, 4, 5}),
                    DegenerateError);
    CHECK_THROWS_AS(fit_quadratic_YK(std::vector<double>{1, 2}, std::vector<double>{1, 2}), ParameterError);
}

TEST_CASE("capital extremes") {
    const QuadraticFit reference{2.852e-5, 0.5174, 197.9};
    const auto e = capital_extremes(reference);
    CHECK(e.K_max == doctest::Approx(9070.827489481066).epsilon(1e-12));
    CHECK(e.K_E_high == doctest::Approx(18516.40325415807).epsilon(1e-12));
    CHECK(e.K_E_low == doctest::Approx(-374.748275195938).epsilon(1e-10));
    const auto sym = capital_extremes(QuadraticFit{1.0, 0.0, 1.0});
    CHECK(sym.K_E_high == doctest::Approx(1.0));
    CHECK(sym.K_E_low == doctest::Approx(-1.0));
    CHECK(sym.K_max == 0.0);
    CHECK_THROWS_AS(capital_extremes(QuadraticFit{0.0, 1.0, 1.0}), DomainError);
    CHECK_THROWS_AS(capital_extremes(QuadraticFit{-1.0, 1.0, 1.0}), DomainError);
}

TEST_CASE("basket price and inflation") {
    CHECK(basket_price({1, 2}, {0.5, 1.0}, {2.0, 3.0}) == doctest::Approx(7.0));
    const auto inf = basket_inflation({100.0, 102.0, 102.0});
    REQUIRE(inf.size() == 2);
    CHECK(inf[0] == doctest::Approx(0.02));
    CHECK(inf[1] == 0.0);
    CHECK_THROWS_AS(basket_price({1}, {1, 2}, {1}), ParameterError);
}

}

TEST_SUITE("calibrate properties") {

TEST_CASE("apply_chain preserves k_t") {
    const auto model = frg_points_model();
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> v(0.1, 100.0);
    for (int trial = 0; trial < 50; ++trial) {
        ChainCorrection c{v(rng), v(rng), 1950, 2010};
        const auto chained = apply_chain(c, model);
        for (std::size_t i = 0; i < chained.size(); ++i) {
            CHECK(chained[i].K / chained[i].Y ==
                  doctest::Approx(model.steps[i].K / model.steps[i].Y).epsilon(1e-12));
        }
    }
}

TEST_CASE("residuals are orthogonal to the design columns") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> k(0.0, 5000.0);
    std::normal_distribution<double> noise(0.0, 50.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> K;
        std::vector<double> Y;
        for (int i = 0; i < 40; ++i) {
            const double x = k(rng);
            K.push_back(x);
            Y.push_back(-3e-5 * x * x + 0.5 * x + 100 + noise(rng));
        }
        const auto f = fit_quadratic_YK(K, Y);
        double r2 = 0, r1 = 0, r0 = 0, n2 = 0, n1 = 0, n0 = 0;
        for (std::size_t i = 0; i < K.size(); ++i) {
            const double r = Y[i] - f(K[i]);
            r2 += r * K[i] * K[i];
            r1 += r * K[i];
            r0 += r;
            n2 += std::abs(Y[i] * K[i] * K[i]);
            n1 += std::abs(Y[i] * K[i]);
            n0 += std::abs(Y[i]);
        }
        CHECK(std::abs(r2) <= 1e-8 * n2);
        CHECK(std::abs(r1) <= 1e-8 * n1);
        CHECK(std::abs(r0) <= 1e-8 * n0);
    }
}

TEST_CASE("fit is invariant under row permutation") {
    const auto frg = frg_dataset();
    std::vector<double> K;
    std::vector<double> Y;
    for (const auto& r : frg.records) {
        K.push_back(r.assets);
        Y.push_back(r.gdp);
    }
    const auto base = fit_quadratic_YK(K, Y);
    std::mt19937_64 rng(44);
    std::vector<std::size_t> idx(K.size());
    std::iota(idx.begin(), idx.end(), 0);
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(idx.begin(), idx.end(), rng);
        std::vector<double> k2, y2;
        for (auto i : idx) {
            k2.push_back(K[i]);
            y2.push_back(Y[i]);
        }
        const auto f = fit_quadratic_YK(k2, y2);
        CHECK(f.a_K == doctest::Approx(base.a_K).epsilon(1e-9));
        CHECK(f.b_K == doctest::Approx(base.b_K).epsilon(1e-9));
        CHECK(f.c_K == doctest::Approx(base.c_K).epsilon(1e-9));
    }
}

TEST_CASE("extremes re-substitute into the quadratic") {
    std::mt19937_64 rng(45);
    std::uniform_real_distribution<double> a(1e-6, 1e-3);
    std::uniform_real_distribution<double> b(0.1, 2.0);
    std::uniform_real_distribution<double> c(1.0, 500.0);
    for (int trial = 0; trial < 100; ++trial) {
        const QuadraticFit f{a(rng), b(rng), c(rng)};
        const auto e = capital_extremes(f);
        const double scale = f.a_K * e.K_E_high * e.K_E_high;
        CHECK(std::abs(f(e.K_E_high)) <= 1e-8 * scale);
        CHECK(std::abs(f(e.K_E_low)) <= 1e-8 * scale);
        CHECK(std::abs(-2.0 * f.a_K * e.K_max + f.b_K) <= 1e-8 * f.b_K);
        CHECK(e.Y_at_K_max == doctest::Approx(f(e.K_max)));
    }
}

}
