// Acceptance suite: every criterion below runs at its stated tolerance and
// prints one PASS/FAIL line. The process exits nonzero when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "grid_oracle.hpp"
#include "java_builder.hpp"
#include "smellcheck/calibrate.hpp"
#include "smellcheck/config.hpp"
#include "smellcheck/detector.hpp"
#include "smellcheck/metrics.hpp"
#include "smellcheck/source_model.hpp"
#include "smellcheck/stats.hpp"
#include "smellcheck/store.hpp"
#include "smellcheck/sync.hpp"
#include "smellcheck/tagging.hpp"
#include "test_rng.hpp"

using namespace smellcheck;
using testsupport::MethodSpec;
using testsupport::Rng;

namespace {

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& what) {
    if (!cond) throw Failure(what);
}

void require_close(double actual, double expected, double tol, const std::string& what) {
    if (!(std::fabs(actual - expected) <= tol))
        throw Failure(what + ": got " + std::to_string(actual) + ", want " +
                      std::to_string(expected) + " +- " + std::to_string(tol));
}

class Runner {
public:
    void run(int number, const std::string& name, const std::function<void()>& body) {
        const auto start = std::chrono::steady_clock::now();
        try {
            body();
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            std::printf("PASS  criterion %d: %s (%.2fs)\n", number, name.c_str(), secs);
        } catch (const std::exception& e) {
            ++failures_;
            std::printf("FAIL  criterion %d: %s: %s\n", number, name.c_str(), e.what());
        }
        std::fflush(stdout);
    }

    int exit_code() const { return failures_ == 0 ? 0 : 1; }
    int failures() const { return failures_; }

private:
    int failures_ = 0;
};

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("smellcheck_accept_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

blr::SampleTable grouped_2x2() {
    blr::SampleTable t;
    t.metric_names = {"flag"};
    for (int i = 0; i < 10; ++i) t.add({0.0}, 1);
    for (int i = 0; i < 20; ++i) t.add({0.0}, 0);
    for (int i = 0; i < 20; ++i) t.add({1.0}, 1);
    for (int i = 0; i < 10; ++i) t.add({1.0}, 0);
    return t;
}

blr::SampleTable four_method_vg() {
    blr::SampleTable t;
    t.metric_names = {"VG"};
    t.add({11.0}, 0);
    t.add({14.0}, 1);
    t.add({10.0}, 1);
    t.add({6.0}, 0);
    return t;
}

blr::SampleTable grouped_two_regressor() {
    blr::SampleTable t;
    t.metric_names = {"a", "b"};
    auto block = [&](double x1, double x2, int pos, int neg) {
        for (int i = 0; i < pos; ++i) t.add({x1, x2}, 1);
        for (int i = 0; i < neg; ++i) t.add({x1, x2}, 0);
    };
    block(0, 0, 3, 7);
    block(1, 0, 6, 4);
    block(0, 1, 5, 5);
    block(1, 1, 8, 2);
    return t;
}

double gradient_component(const blr::SampleTable& t, const std::vector<double>& beta,
                          std::size_t j) {
    double g = 0.0;
    for (const auto& row : t.rows) {
        double z = beta[0];
        for (std::size_t k = 0; k < row.x.size(); ++k) z += beta[k + 1] * row.x[k];
        g += (row.y - blr::logistic(z)) * (j == 0 ? 1.0 : row.x[j - 1]);
    }
    return g;
}

// --- criteria ---

void criterion1_fit_oracle() {
    const auto start = std::chrono::steady_clock::now();
    const auto fit = blr::fit_blr(grouped_2x2());
    require_close(fit.beta[0], std::log(0.5), 1e-6, "beta0 vs ln(10/20)");
    require_close(fit.beta[1], std::log(4.0), 1e-6, "beta1 vs ln odds ratio");
    const auto wald = blr::wald_test(fit, 1);
    require_close(wald.statistic, 6.406, 1e-2, "Wald statistic vs closed form");
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    require(secs < 1.0, "runtime must stay under 1s, took " + std::to_string(secs));
}

void criterion2_grid_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<std::pair<std::string, blr::SampleTable>> fixtures = {
        {"grouped 2x2", grouped_2x2()},
        {"four-method VG column", four_method_vg()},
        {"two-regressor grouped", grouped_two_regressor()},
    };
    for (const auto& [name, table] : fixtures) {
        const auto fit = blr::fit_blr(table);
        const auto grid = testsupport::grid_search_mle(table, 20.0, 1e-3);
        require(grid.size() == fit.beta.size(), name + ": dimension mismatch");
        for (std::size_t k = 0; k < grid.size(); ++k)
            require_close(fit.beta[k], grid[k], 2e-3, name + " beta" + std::to_string(k));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    require(secs < 30.0, "runtime must stay under 30s, took " + std::to_string(secs));
}

void criterion3_gradient_check() {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Rng rng(seed * 1000 + 7);
        blr::SampleTable t;
        t.metric_names = {"x1", "x2"};
        for (int i = 0; i < 150; ++i) {
            const double x1 = rng.normal(0, 2), x2 = rng.normal(0, 1.5);
            t.add({x1, x2}, rng.bernoulli(blr::logistic(-0.3 + 0.7 * x1 - 0.5 * x2)) ? 1 : 0);
        }
        const auto fit = blr::fit_blr(t);

        auto check_point = [&](const std::vector<double>& beta, const std::string& where) {
            const double h = 1e-5;
            for (std::size_t j = 0; j < beta.size(); ++j) {
                std::vector<double> hi = beta, lo = beta;
                hi[j] += h;
                lo[j] -= h;
                const double numeric =
                    (blr::log_likelihood(t, hi) - blr::log_likelihood(t, lo)) / (2.0 * h);
                const double analytic = gradient_component(t, beta, j);
                const double scale = std::max({1.0, std::fabs(numeric), std::fabs(analytic)});
                require(std::fabs(analytic - numeric) <= 1e-4 * scale,
                        where + " component " + std::to_string(j) + " mismatch");
            }
        };

        check_point(fit.beta, "seed " + std::to_string(seed) + " optimum");
        for (int r = 0; r < 10; ++r) {
            std::vector<double> beta(t.arity() + 1);
            for (double& b : beta) b = rng.normal(0.0, 1.0);
            check_point(beta, "seed " + std::to_string(seed) + " random point");
        }
    }
}

void criterion4_generative_round_trip() {
    TempDir dir;
    Rng rng(20260810);

    // 200 methods with independently drawn metric targets, real source files.
    const std::vector<double> truth = {-10.0, 0.1, 0.7, 0.25, 0.55, 0.2};
    std::vector<MethodSpec> specs;
    for (int i = 0; i < 200; ++i) {
        MethodSpec spec;
        spec.name = "gen" + std::to_string(i);
        spec.nbd = 1 + rng.uniform_int(0, 4);
        spec.vg = spec.nbd + rng.uniform_int(0, 10);
        spec.par = rng.uniform_int(0, 5);
        spec.lvar = rng.uniform_int(0, 15);
        spec.mloc = testsupport::min_mloc(spec) + rng.uniform_int(0, 60);
        specs.push_back(spec);
    }
    for (int f = 0; f < 20; ++f) {
        std::vector<MethodSpec> chunk(specs.begin() + f * 10, specs.begin() + (f + 1) * 10);
        write_file(dir.path() / "src" / ("Gen" + std::to_string(f) + ".java"),
                   testsupport::build_class("gen", "Gen" + std::to_string(f), chunk));
    }

    const Corpus corpus = load_corpus({dir.path() / "src"});
    require(corpus.failures.empty(), "generated corpus must parse");
    const auto vectors = metrics::corpus_metrics(corpus, Granularity::method);
    require(vectors.size() == 200, "expected 200 method vectors");

    // Labels follow the known coefficients over the *computed* metrics.
    const std::vector<std::string> names = {"MLOC", "NBD", "VG", "PAR", "LVAR"};
    blr::SampleTable table;
    table.metric_names = names;
    std::vector<double> true_probability;
    Rng label_rng(424242);
    for (const auto& v : vectors) {
        std::vector<double> x;
        double z = truth[0];
        for (std::size_t k = 0; k < names.size(); ++k) {
            x.push_back(v.get(names[k]));
            z += truth[k + 1] * x.back();
        }
        const double p = blr::logistic(z);
        true_probability.push_back(p);
        table.add(x, label_rng.bernoulli(p) ? 1 : 0);
    }

    SmellKind kind{"LongMethod", Granularity::method, names, 0.5};
    const SmellModel model = blr::calibrate(table, kind);
    require(model.metric_names == names,
            "selection must retain all five generating metrics, kept " +
                std::to_string(model.metric_names.size()));

    const auto fit = blr::fit_blr(table);
    for (std::size_t k = 0; k < truth.size(); ++k)
        require(std::fabs(model.beta[k] - truth[k]) <= 3.0 * fit.se[k],
                "coefficient " + std::to_string(k) + " outside 3 standard errors (got " +
                    std::to_string(model.beta[k]) + ", true " + std::to_string(truth[k]) +
                    ", se " + std::to_string(fit.se[k]) + ")");

    // Detection at 0.9 vs the generator's own high-probability subset.
    const auto result = detector::detect(corpus, {model}, {{"LongMethod", 0.9}},
                                         std::vector<SmellKind>{kind});
    std::set<std::string> detected;
    for (const auto& f : result.findings) detected.insert(f.element_id);

    std::size_t agree = 0;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        const bool truly_high = true_probability[i] >= 0.9;
        const bool flagged = detected.count(vectors[i].element_id) > 0;
        if (truly_high == flagged) ++agree;
    }
    const double agreement = static_cast<double>(agree) / static_cast<double>(vectors.size());
    require(agreement >= 0.9, "detection agreement " + std::to_string(agreement) + " below 0.9");
}

std::map<std::string, std::vector<double>> load_expected(const std::filesystem::path& file,
                                                         std::size_t value_count) {
    std::map<std::string, std::vector<double>> expected;
    std::istringstream in(read_file(file));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> tail;
        std::string rest = line;
        for (std::size_t k = 0; k < value_count; ++k) {
            const auto at = rest.rfind(',');
            require(at != std::string::npos, "malformed expected row: " + line);
            tail.insert(tail.begin(), rest.substr(at + 1));
            rest = rest.substr(0, at);
        }
        std::vector<double> vals;
        for (const auto& t : tail) vals.push_back(std::stod(t));
        expected[rest] = vals;
    }
    return expected;
}

void criterion5_metric_oracles() {
    const std::filesystem::path fixtures = SMELLCHECK_FIXTURE_DIR;
    const Corpus corpus = load_corpus({fixtures / "java"});
    require(corpus.failures.empty(), "fixture corpus must parse");

    const auto expected_methods =
        load_expected(fixtures / "expected_method_metrics.csv", 5);
    require(expected_methods.size() >= 15, "need at least 15 hand-counted methods");

    const std::vector<std::string> mnames = {"MLOC", "NBD", "VG", "PAR", "LVAR"};
    std::size_t matched = 0;
    for (const auto& v : metrics::corpus_metrics(corpus, Granularity::method)) {
        const auto it = expected_methods.find(v.element_id);
        require(it != expected_methods.end(), "no hand count for " + v.element_id);
        for (std::size_t k = 0; k < mnames.size(); ++k)
            require(v.get(mnames[k]) == it->second[k],
                    v.element_id + " " + mnames[k] + ": got " +
                        std::to_string(v.get(mnames[k])) + ", hand count " +
                        std::to_string(it->second[k]));
        ++matched;
    }
    require(matched == expected_methods.size(), "method count mismatch");

    const auto expected_classes = load_expected(fixtures / "expected_class_metrics.csv", 11);
    const auto& cnames = metrics::class_metric_names();
    std::size_t cmatched = 0;
    for (const auto& v : metrics::corpus_metrics(corpus, Granularity::type)) {
        const auto it = expected_classes.find(v.element_id);
        require(it != expected_classes.end(), "no hand count for " + v.element_id);
        for (std::size_t k = 0; k < cnames.size(); ++k)
            require(std::fabs(v.get(cnames[k]) - it->second[k]) <= 1e-9,
                    v.element_id + " " + cnames[k] + ": got " +
                        std::to_string(v.get(cnames[k])) + ", hand count " +
                        std::to_string(it->second[k]));
        ++cmatched;
    }
    require(cmatched == expected_classes.size(), "class count mismatch");
}

void criterion6_tag_round_trip() {
    TempDir dir;
    Rng rng(606);
    const Config config = default_config();
    const SmellKind& long_method = config.require_smell("LongMethod");
    const SmellKind& large_class = config.require_smell("LargeClass");

    struct Case {
        std::string element;
        bool type_level;
        std::string file;
    };
    std::vector<Case> cases;
    for (int i = 0; i < 20; ++i) {
        MethodSpec spec;
        spec.name = "work";
        spec.nbd = 1 + rng.uniform_int(0, 3);
        spec.vg = spec.nbd + rng.uniform_int(0, 5);
        spec.par = rng.uniform_int(0, 4);
        spec.lvar = rng.uniform_int(0, 6);
        spec.mloc = testsupport::min_mloc(spec) + rng.uniform_int(0, 20);
        const std::string cls = "Fixture" + std::to_string(i);
        const std::string file = (dir.path() / "src" / (cls + ".java")).string();
        write_file(file, testsupport::build_class("rt", cls, {spec}));
        const bool type_level = i % 2 == 0;
        cases.push_back({type_level ? ("rt." + cls) : ("rt." + cls + ".work"), type_level, file});
    }

    std::map<std::string, std::string> originals;
    for (const auto& c : cases) originals[c.file] = read_file(c.file);

    // Tag all twenty, verifying the diff is insertion-only each time.
    for (const auto& c : cases) {
        const Corpus corpus = load_corpus({dir.path() / "src"});
        const SmellKind& kind = c.type_level ? large_class : long_method;
        tagging::write_tag(corpus, c.element, kind, "round trip " + c.element);

        const std::string before = originals[c.file];
        const std::string after = read_file(c.file);
        std::vector<std::string> old_lines, new_lines;
        {
            std::istringstream a(before), b(after);
            std::string l;
            while (std::getline(a, l)) old_lines.push_back(l);
            while (std::getline(b, l)) new_lines.push_back(l);
        }
        require(new_lines.size() == old_lines.size() + 1,
                c.element + ": exactly one line must be inserted");
        std::size_t inserted = new_lines.size();
        for (std::size_t i = 0, j = 0; i < new_lines.size(); ++i) {
            if (j < old_lines.size() && new_lines[i] == old_lines[j]) {
                ++j;
            } else {
                require(inserted == new_lines.size(), c.element + ": more than one changed line");
                inserted = i;
            }
        }
        require(inserted != new_lines.size(), c.element + ": no inserted line found");
        require(new_lines[inserted].find("@CodeSmell(type=CodeSmellType.") != std::string::npos,
                c.element + ": inserted line is not the annotation");
    }

    // Every tag reads back.
    const Corpus tagged = load_corpus({dir.path() / "src"});
    const auto tags = tagging::read_tags(tagged, config.smells);
    require(tags.size() == cases.size(), "expected 20 tags, got " + std::to_string(tags.size()));
    for (const auto& c : cases) {
        const bool found = std::any_of(tags.begin(), tags.end(), [&](const tagging::SmellTag& t) {
            return t.element_id == c.element ||
                   t.element_id.rfind(c.element + "(", 0) == 0 ||
                   (t.element_id.find(c.element) == 0);
        });
        require(found, "tag for " + c.element + " not recovered");
    }

    // Removing restores the original bytes.
    for (const auto& c : cases) {
        const Corpus corpus = load_corpus({dir.path() / "src"});
        tagging::remove_tag(corpus, c.element, c.type_level ? large_class : long_method);
        require(read_file(c.file) == originals[c.file],
                c.element + ": remove must restore the original file");
    }
}

void criterion7_aggregation_equivalence() {
    TempDir server_dir;
    sync::Server server(server_dir.path() / "server");
    const int port = server.start_background();
    const std::string url = "http://127.0.0.1:" + std::to_string(port);

    SmellKind kind{"LongMethod", Granularity::method, {"MLOC", "NBD", "VG", "PAR", "LVAR"}, 0.5};

    Rng rng(707);
    std::vector<tagging::SampleRow> all;
    for (int i = 0; i < 90; ++i) {
        tagging::SampleRow row;
        row.application = "App";
        row.package_name = "p";
        row.class_name = "C" + std::to_string(i / 15);
        row.method = "m" + std::to_string(i);
        const double mloc = 5 + rng.uniform() * 75;
        const double nbd = 1 + rng.uniform_int(0, 4);
        const double vg = nbd + rng.uniform_int(0, 9);
        const double par = rng.uniform_int(0, 5);
        const double lvar = rng.uniform_int(0, 12);
        row.values = {mloc, nbd, vg, par, lvar};
        const double z = -6.5 + 0.08 * mloc + 0.4 * nbd + 0.15 * vg + 0.25 * par + 0.1 * lvar;
        row.label = rng.bernoulli(blr::logistic(z)) ? 1 : 0;
        row.origin = tagging::Origin::expert;
        char stamp[64];
        std::snprintf(stamp, sizeof(stamp), "2026-07-01T00:00:00.%09dZ", i + 1);
        row.timestamp = stamp;
        all.push_back(row);
    }
    // Both classes within each third.
    for (int base : {0, 30, 60}) {
        all[base].label = 0;
        all[base + 1].label = 1;
    }

    // Client ids sort in upload order, so the server's aggregate equals the
    // plain concatenation.
    std::vector<TempDir> dirs(3);
    std::size_t accepted = 0;
    for (int c = 0; c < 3; ++c) {
        store::Store st = store::Store::init(dirs[c].path() / "s", "App");
        st.append_rows(kind, {all.begin() + c * 30, all.begin() + (c + 1) * 30});
        const auto r =
            sync::push_samples(url, st, kind, "client-" + std::string(1, 'a' + c));
        accepted += r.accepted;
    }
    require(accepted == all.size(), "server must accept every uploaded row");

    const int version = sync::trigger_calibration(url, "LongMethod");
    require(version == 1, "first server calibration is v1");

    const SmellModel local = blr::calibrate(store::rows_to_table(all, kind), kind);

    TempDir puller;
    store::Store pull_store = store::Store::init(puller.path() / "s", "App");
    const SmellModel remote = sync::pull_model(url, pull_store, "LongMethod");
    require(remote.metric_names == local.metric_names, "metric sets differ");
    for (std::size_t k = 0; k < local.beta.size(); ++k)
        require(std::fabs(remote.beta[k] - local.beta[k]) <= 1e-9,
                "coefficient " + std::to_string(k) + " differs beyond 1e-9");

    // Duplicate replay: nothing changes.
    store::Store again = store::Store::init(dirs[0].path() / "s", "App");
    again.set_watermark("samples.LongMethod", 0);
    const auto replay = sync::push_samples(url, again, kind, "client-a");
    require(replay.accepted == 0 && replay.duplicates == 30,
            "replayed upload must be rejected as duplicates");
    const int version2 = sync::trigger_calibration(url, "LongMethod");
    require(version2 == 2, "recalibration bumps the version");
    const SmellModel remote2 = sync::pull_model(url, pull_store, "LongMethod");
    for (std::size_t k = 0; k < local.beta.size(); ++k)
        require(std::fabs(remote2.beta[k] - local.beta[k]) <= 1e-9,
                "post-replay coefficient " + std::to_string(k) + " changed");

    server.stop();
}

void criterion8_statistical_battery() {
    // Shapiro-Wilk separation at alpha = 0.01.
    Rng rng(801);
    const auto normal = stats::shapiro_wilk(rng.normal_sample(60, 5.0, 1.7));
    require(normal.p_value > 0.01, "seeded normal sample must pass normality");
    Rng rng2(802);
    const auto expo = stats::shapiro_wilk(rng2.exponential_sample(60));
    require(expo.p_value < 0.01, "seeded exponential sample must fail normality");

    // VIF: independent columns near 1.
    Rng rng3(803);
    blr::SampleTable indep;
    indep.metric_names = {"c1", "c2"};
    for (int i = 0; i < 250; ++i) indep.add({rng3.normal(), rng3.normal()}, i % 2);
    for (const auto& [name, v] : stats::vif(indep))
        require(std::fabs(v - 1.0) <= 0.2, name + " VIF " + std::to_string(v) + " not near 1");

    // VIF: constructed near-collinear column beyond 10.
    blr::SampleTable collinear;
    collinear.metric_names = {"c1", "c2", "c3"};
    for (int i = 0; i < 250; ++i) {
        const double a = rng3.normal(), b = rng3.normal();
        collinear.add({a, b, a + b + rng3.normal(0.0, 0.01)}, i % 2);
    }
    const auto vifs = stats::vif(collinear);
    require(vifs[2].second > 10.0,
            "near-collinear VIF " + std::to_string(vifs[2].second) + " must exceed 10");

    // VIF: duplicated column is exact collinearity.
    blr::SampleTable dup;
    dup.metric_names = {"c1", "c2"};
    for (int i = 0; i < 40; ++i) {
        const double a = rng3.normal();
        dup.add({a, a}, i % 2);
    }
    try {
        stats::vif(dup);
        throw Failure("duplicated column must raise ExactCollinearity");
    } catch (const ExactCollinearity&) {
    }

    // Hosmer-Lemeshow: accept well-specified, reject decile-corrupted.
    Rng rng4(804);
    blr::SampleTable well;
    well.metric_names = {"x"};
    for (int i = 0; i < 500; ++i) {
        const double x = rng4.normal(0.0, 1.5);
        well.add({x}, rng4.bernoulli(blr::logistic(-0.2 + 0.8 * x)) ? 1 : 0);
    }
    const auto good_fit = blr::fit_blr(well);
    const auto good = stats::hosmer_lemeshow(good_fit, well, 10);
    require(good.p_value > 0.01, "well-specified data must pass goodness-of-fit");

    blr::SampleTable corrupted = well;
    std::vector<std::size_t> order(corrupted.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return corrupted.rows[a].x[0] < corrupted.rows[b].x[0];
    });
    for (std::size_t i = order.size() - order.size() / 10; i < order.size(); ++i)
        corrupted.rows[order[i]].y = 1 - corrupted.rows[order[i]].y;
    const auto bad_fit = blr::fit_blr(corrupted);
    const auto bad = stats::hosmer_lemeshow(bad_fit, corrupted, 10);
    require(bad.p_value < 0.01, "decile-corrupted data must fail goodness-of-fit");
}

void criterion9_threshold_monotonicity_and_determinism() {
    TempDir dir;
    Rng rng(909);
    std::vector<MethodSpec> specs;
    for (int i = 0; i < 40; ++i) {
        MethodSpec spec;
        spec.name = "sweep" + std::to_string(i);
        spec.nbd = 1 + rng.uniform_int(0, 4);
        spec.vg = spec.nbd + rng.uniform_int(0, 8);
        spec.par = rng.uniform_int(0, 5);
        spec.lvar = rng.uniform_int(0, 10);
        spec.mloc = testsupport::min_mloc(spec) + rng.uniform_int(0, 50);
        specs.push_back(spec);
    }
    for (int f = 0; f < 4; ++f) {
        std::vector<MethodSpec> chunk(specs.begin() + f * 10, specs.begin() + (f + 1) * 10);
        write_file(dir.path() / "src" / ("Sweep" + std::to_string(f) + ".java"),
                   testsupport::build_class("sw", "Sweep" + std::to_string(f), chunk));
    }

    SmellModel model;
    model.smell = "LongMethod";
    model.granularity = Granularity::method;
    model.metric_names = {"MLOC", "VG"};
    model.beta = {-4.0, 0.07, 0.12};
    model.threshold_default = 0.5;
    model.version = 1;

    std::vector<double> thresholds;
    for (double t = 0.1; t <= 0.901; t += 0.1) thresholds.push_back(t);

    const Corpus corpus = load_corpus({dir.path() / "src"});
    const auto sweep = detector::threshold_sweep(corpus, model, thresholds);
    for (std::size_t i = 1; i < sweep.size(); ++i)
        require(sweep[i].second <= sweep[i - 1].second,
                "sweep counts must be non-increasing at index " + std::to_string(i));

    // Brute-force per-element cross-check of the counts.
    std::vector<double> probabilities;
    for (const auto& v : metrics::corpus_metrics(corpus, Granularity::method)) {
        const double z = model.beta[0] + model.beta[1] * v.get("MLOC") +
                         model.beta[2] * v.get("VG");
        probabilities.push_back(blr::logistic(z));
    }
    for (const auto& [t, count] : sweep) {
        std::size_t brute = 0;
        for (double p : probabilities)
            if (p >= t) ++brute;
        require(brute == count, "sweep count at " + std::to_string(t) + " differs from brute force");
    }

    // Byte-identical reports across fresh runs.
    std::vector<SmellKind> registry = {{"LongMethod", Granularity::method, {"MLOC", "VG"}, 0.5}};
    std::string first;
    for (int run = 0; run < 3; ++run) {
        const Corpus fresh = load_corpus({dir.path() / "src"});
        const auto result = detector::detect(fresh, {model}, {}, registry);
        const std::string text =
            detector::render_report(result.findings, detector::ReportFormat::text);
        if (run == 0) {
            first = text;
            require(!text.empty(), "determinism check needs at least one finding");
        } else {
            require(text == first, "text reports must be byte-identical across runs");
        }
    }
}

}  // namespace

int main() {
    Runner runner;
    runner.run(1, "closed-form 2x2 fit and Wald statistic", criterion1_fit_oracle);
    runner.run(2, "IRLS equals exhaustive grid search on small fixtures",
               criterion2_grid_equivalence);
    runner.run(3, "analytic score matches central finite differences", criterion3_gradient_check);
    runner.run(4, "generative corpus round-trip through calibrate and detect",
               criterion4_generative_round_trip);
    runner.run(5, "hand-counted metric oracles", criterion5_metric_oracles);
    runner.run(6, "tag write/read round-trip with insertion-only diffs", criterion6_tag_round_trip);
    runner.run(7, "server aggregation equals single-machine calibration",
               criterion7_aggregation_equivalence);
    runner.run(8, "statistical battery sanity", criterion8_statistical_battery);
    runner.run(9, "threshold sweep monotonicity and report determinism",
               criterion9_threshold_monotonicity_and_determinism);

    if (runner.failures() == 0)
        std::printf("all acceptance criteria passed\n");
    else
        std::printf("%d criterion(s) failed\n", runner.failures());
    return runner.exit_code();
}
