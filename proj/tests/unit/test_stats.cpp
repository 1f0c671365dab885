#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "smellcheck/stats.hpp"
#include "test_rng.hpp"

using namespace smellcheck;
using testsupport::Rng;

TEST_CASE("shapiro-wilk input validation") {
    CHECK_THROWS_AS(stats::shapiro_wilk({1.0, 2.0}), SampleTooSmall);
    CHECK_THROWS_AS(stats::shapiro_wilk({1.0, 1.0, 1.0, 1.0}), ConstantSample);
}

TEST_CASE("shapiro-wilk reproduces reference statistics") {
    // Reference values from R's shapiro.test / scipy.stats.shapiro (both run
    // Royston's AS R94).
    const auto r1 = stats::shapiro_wilk({148, 154, 158, 160, 161, 162, 166, 170, 182, 195, 236});
    CHECK(r1.w == doctest::Approx(0.78881469).epsilon(1e-6));
    CHECK(r1.p_value == doctest::Approx(0.0067038141).epsilon(1e-4));

    const auto r2 = stats::shapiro_wilk({2.1, 3.4, 1.9, 2.8, 3.3, 3.1, 2.9, 2.2, 2.5, 2.7,
                                         3.0, 2.6, 2.4, 3.2, 2.35, 2.95, 3.05, 2.75, 2.55, 2.85});
    CHECK(r2.w == doctest::Approx(0.98325634).epsilon(1e-6));
    CHECK(r2.p_value == doctest::Approx(0.96892352).epsilon(1e-4));

    const auto r3 = stats::shapiro_wilk({1, 2, 3, 4, 50});
    CHECK(r3.w == doctest::Approx(0.60348364).epsilon(1e-6));
    CHECK(r3.p_value == doctest::Approx(0.00069727).epsilon(1e-3));

    const auto r4 = stats::shapiro_wilk({3.1, 4.2, 2.8});
    CHECK(r4.w == doctest::Approx(0.90184049).epsilon(1e-6));
    CHECK(r4.p_value == doctest::Approx(0.39138437).epsilon(1e-4));
}

TEST_CASE("shapiro-wilk separates seeded normal from exponential") {
    Rng rng(101);
    const auto normal = stats::shapiro_wilk(rng.normal_sample(50, 10.0, 2.0));
    CHECK(normal.p_value > 0.01);

    Rng rng2(102);
    const auto expo = stats::shapiro_wilk(rng2.exponential_sample(50));
    CHECK(expo.p_value < 0.01);
    CHECK(expo.w < normal.w);
}

TEST_CASE("correlation basics") {
    const std::vector<double> x = {1, 2, 3, 4, 5};
    SUBCASE("identity") {
        CHECK(stats::correlation(x, x, stats::CorrelationMethod::pearson) == doctest::Approx(1.0));
        CHECK(stats::correlation(x, x, stats::CorrelationMethod::spearman) == doctest::Approx(1.0));
    }
    SUBCASE("perfect negative linear") {
        std::vector<double> y;
        for (double v : x) y.push_back(-2.0 * v + 7.0);
        CHECK(stats::correlation(x, y, stats::CorrelationMethod::pearson) ==
              doctest::Approx(-1.0).epsilon(1e-12));
    }
    SUBCASE("monotone nonlinear: spearman 1, pearson 0.9897") {
        const std::vector<double> a = {1, 2, 3}, b = {1, 4, 9};
        CHECK(stats::correlation(a, b, stats::CorrelationMethod::spearman) ==
              doctest::Approx(1.0).epsilon(1e-12));
        CHECK(stats::correlation(a, b, stats::CorrelationMethod::pearson) ==
              doctest::Approx(0.9897).epsilon(1e-3));
    }
    SUBCASE("constant input") {
        const std::vector<double> a = {1, 2, 3};
        const std::vector<double> c = {2, 2, 2};
        CHECK_THROWS_AS(stats::correlation(a, c, stats::CorrelationMethod::pearson),
                        ConstantInput);
    }
    SUBCASE("ties average in spearman ranks") {
        const std::vector<double> a = {1, 2, 2, 3}, b = {10, 20, 20, 30};
        CHECK(stats::correlation(a, b, stats::CorrelationMethod::spearman) ==
              doctest::Approx(1.0));
    }
}

TEST_CASE("correlation method auto-selection") {
    Rng rng(7);
    const auto normal1 = rng.normal_sample(80, 0.0, 1.0);
    const auto normal2 = rng.normal_sample(80, 5.0, 2.0);
    const auto expo = rng.exponential_sample(80);
    CHECK(stats::choose_correlation_method(normal1, normal2) ==
          stats::CorrelationMethod::pearson);
    CHECK(stats::choose_correlation_method(normal1, expo) == stats::CorrelationMethod::spearman);
}

TEST_CASE("variance inflation factors") {
    Rng rng(55);

    SUBCASE("independent columns sit near 1") {
        blr::SampleTable t;
        t.metric_names = {"c1", "c2"};
        for (int i = 0; i < 300; ++i) t.add({rng.normal(), rng.normal()}, i % 2);
        const auto v = stats::vif(t);
        REQUIRE(v.size() == 2);
        CHECK(v[0].second == doctest::Approx(1.0).epsilon(0.2));
        CHECK(v[1].second == doctest::Approx(1.0).epsilon(0.2));
    }

    SUBCASE("duplicated column is exactly collinear") {
        blr::SampleTable t;
        t.metric_names = {"c1", "c2"};
        for (int i = 0; i < 50; ++i) {
            const double x = rng.normal();
            t.add({x, x}, i % 2);
        }
        CHECK_THROWS_AS(stats::vif(t), ExactCollinearity);
    }

    SUBCASE("near-collinear column exceeds 10") {
        blr::SampleTable t;
        t.metric_names = {"c1", "c2", "c3"};
        for (int i = 0; i < 200; ++i) {
            const double a = rng.normal(), b = rng.normal();
            t.add({a, b, a + b + rng.normal(0.0, 0.01)}, i % 2);
        }
        const auto v = stats::vif(t);
        CHECK(v[2].second > 10.0);
    }
}

TEST_CASE("hosmer-lemeshow goodness of fit") {
    SUBCASE("too few rows") {
        const auto table = testsupport::grouped_2x2_table();  // n = 60
        const auto fit = blr::fit_blr(table);
        CHECK_THROWS_AS(stats::hosmer_lemeshow(fit, table, 40), TooFewRows);
    }

    SUBCASE("well-specified data passes, corrupted top decile fails") {
        Rng rng(77);
        blr::SampleTable t;
        t.metric_names = {"x"};
        for (int i = 0; i < 500; ++i) {
            const double x = rng.normal(0.0, 1.5);
            t.add({x}, rng.bernoulli(blr::logistic(-0.3 + 0.9 * x)) ? 1 : 0);
        }
        const auto fit = blr::fit_blr(t);
        const auto good = stats::hosmer_lemeshow(fit, t, 10);
        CHECK(good.p_value > 0.01);

        // Invert the labels of the highest-probability decile.
        blr::SampleTable corrupted = t;
        std::vector<std::size_t> order(corrupted.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return corrupted.rows[a].x[0] < corrupted.rows[b].x[0];
        });
        for (std::size_t i = order.size() - order.size() / 10; i < order.size(); ++i)
            corrupted.rows[order[i]].y = 1 - corrupted.rows[order[i]].y;
        const auto refit = blr::fit_blr(corrupted);
        const auto bad = stats::hosmer_lemeshow(refit, corrupted, 10);
        CHECK(bad.p_value < 0.01);
    }

    SUBCASE("ties on fitted probability stay in one group") {
        const auto table = testsupport::grouped_2x2_table();
        const auto fit = blr::fit_blr(table);
        // Only two distinct fitted values exist; the statistic must still be
        // finite and the test well-defined.
        const auto r = stats::hosmer_lemeshow(fit, table, 10);
        CHECK(std::isfinite(r.statistic));
        CHECK(r.statistic == doctest::Approx(0.0).epsilon(1e-9));
    }
}
