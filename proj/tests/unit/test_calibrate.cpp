#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "smellcheck/calibrate.hpp"
#include "test_rng.hpp"

using namespace smellcheck;
using testsupport::Rng;

namespace {

// A table generated from a known coefficient vector over independent-ish
// columns, used to check end-to-end recovery through the whole pipeline.
blr::SampleTable generated_table(std::uint64_t seed, std::size_t n,
                                 const std::vector<double>& beta) {
    Rng rng(seed);
    blr::SampleTable t;
    t.metric_names = {"MLOC", "NBD", "VG", "PAR", "LVAR"};
    for (std::size_t i = 0; i < n; ++i) {
        const double mloc = 5 + rng.uniform() * 75;
        const double nbd = 1 + rng.uniform_int(0, 4);
        const double vg = nbd + rng.uniform_int(0, 10);
        const double par = rng.uniform_int(0, 5);
        const double lvar = rng.uniform_int(0, 15);
        const std::vector<double> x = {mloc, nbd, vg, par, lvar};
        double z = beta[0];
        for (std::size_t k = 0; k < 5; ++k) z += beta[k + 1] * x[k];
        t.add(x, rng.bernoulli(blr::logistic(z)) ? 1 : 0);
    }
    return t;
}

SmellKind long_method() {
    return {"LongMethod", Granularity::method, {"MLOC", "NBD", "VG", "PAR", "LVAR"}, 0.5};
}

}  // namespace

TEST_CASE("calibrate recovers generating coefficients within 3 standard errors") {
    const std::vector<double> truth = {-9.0, 0.09, 0.55, 0.2, 0.45, 0.16};
    const auto table = generated_table(2024, 400, truth);

    blr::CalibrateOptions opts;
    opts.alpha = 0.05;
    const SmellModel model = blr::calibrate(table, long_method(), opts);

    // All five columns carry real signal at this sample size and seed.
    REQUIRE(model.metric_names == table.metric_names);
    REQUIRE(model.beta.size() == 6);

    // Standard errors come from an equivalent direct fit.
    const auto fit = blr::fit_blr(table);
    for (std::size_t k = 0; k < 6; ++k) {
        INFO("coefficient " << k);
        CHECK(std::fabs(model.beta[k] - truth[k]) < 3.0 * fit.se[k]);
    }

    CHECK(model.version == 1);
    CHECK(model.threshold_default == 0.5);
    CHECK(model.sample_size == 400);
    CHECK(model.diagnostics.hosmer_lemeshow_run);
    CHECK(model.diagnostics.hosmer_lemeshow_p > 0.01);
    CHECK(model.diagnostics.normality.size() == 5);
    CHECK(model.diagnostics.correlations.size() == 10);
}

TEST_CASE("calibrate drops a duplicated column via the VIF screen") {
    Rng rng(99);
    blr::SampleTable t;
    t.metric_names = {"MLOC", "NBD", "VG"};
    for (int i = 0; i < 120; ++i) {
        const double a = 10 + rng.uniform() * 50;
        const double b = 1 + rng.uniform_int(0, 4);
        t.add({a, b, a}, rng.bernoulli(blr::logistic(-4.0 + 0.12 * a)) ? 1 : 0);
    }
    // "VG" duplicates "MLOC" exactly; the screen must drop one and still
    // produce a model.
    const SmellModel model = blr::calibrate(t, long_method());
    REQUIRE(!model.diagnostics.vif_dropped.empty());
    CHECK(model.diagnostics.vif_dropped[0].exact);
    CHECK(model.diagnostics.vif_dropped[0].metric == "VG");  // the later column
    for (const std::string& name : model.metric_names) CHECK(name != "VG");
}

TEST_CASE("calibrate propagates one-class errors") {
    blr::SampleTable t;
    t.metric_names = {"MLOC"};
    for (int i = 0; i < 30; ++i) t.add({10.0 + i}, 1);
    CHECK_THROWS_AS(blr::calibrate(t, long_method()), OneClassOnly);
}

TEST_CASE("strict calibration rejects a misspecified fit") {
    // Labels follow a sharp step in MLOC, deliberately not a logistic curve,
    // with heavy corruption in the top decile.
    Rng rng(7);
    blr::SampleTable t;
    t.metric_names = {"MLOC"};
    for (int i = 0; i < 400; ++i) {
        const double x = rng.uniform() * 100.0;
        int y = x > 50 ? 1 : 0;
        if (x > 90) y = 0;  // corrupted top
        if (x > 45 && x < 55) y = rng.bernoulli(0.5) ? 1 : 0;
        t.add({x}, y);
    }
    blr::CalibrateOptions strict;
    strict.strict = true;
    strict.ridge = 0.5;  // keep the near-separated fit finite
    CHECK_THROWS_AS(blr::calibrate(t, long_method(), strict), CalibrationRejected);

    blr::CalibrateOptions lax = strict;
    lax.strict = false;
    const SmellModel model = blr::calibrate(t, long_method(), lax);
    CHECK(model.diagnostics.hosmer_lemeshow_p < 0.01);
}

TEST_CASE("calibrate skips the goodness-of-fit grouping on tiny samples") {
    blr::SampleTable t;
    t.metric_names = {"MLOC"};
    t.add({10}, 0);
    t.add({60}, 1);
    t.add({20}, 0);
    t.add({70}, 1);
    t.add({30}, 0);
    t.add({40}, 1);
    blr::CalibrateOptions opts;
    opts.ridge = 0.2;
    opts.alpha = 0.9;  // keep the column
    const SmellModel model = blr::calibrate(t, long_method(), opts);
    CHECK(!model.diagnostics.hosmer_lemeshow_run);
    CHECK(model.sample_size == 6);
}

TEST_CASE("calibrate increments the stored version") {
    const auto table = generated_table(11, 200, {-6.0, 0.08, 0.4, 0.2, 0.3, 0.1});
    blr::CalibrateOptions opts;
    opts.prior_version = 4;
    const SmellModel model = blr::calibrate(table, long_method(), opts);
    CHECK(model.version == 5);
}
