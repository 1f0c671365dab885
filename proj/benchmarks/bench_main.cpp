#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "smellcheck/blr.hpp"
#include "smellcheck/metrics.hpp"
#include "smellcheck/source_model.hpp"

namespace {

using namespace smellcheck;

// A synthetic compilation unit with `methods` mid-sized methods.
std::string synth_source(int methods) {
    std::ostringstream os;
    os << "package bench;\n\npublic class Load {\n";
    for (int m = 0; m < methods; ++m) {
        os << "    int work" << m << "(int a, int b) {\n";
        os << "        int total = 0;\n";
        os << "        for (int i = 0; i < a; i++) {\n";
        os << "            if (i % 2 == 0 && b > i) {\n";
        os << "                total += i;\n";
        os << "            } else {\n";
        os << "                total -= i > 3 ? 1 : 2;\n";
        os << "            }\n";
        os << "        }\n";
        os << "        while (total > b) { total /= 2; }\n";
        os << "        return total;\n";
        os << "    }\n";
    }
    os << "}\n";
    return os.str();
}

void BM_ParseAndMethodMetrics(benchmark::State& state) {
    const std::string source = synth_source(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        Corpus corpus;
        corpus.units.push_back(parse_compilation_unit(source, "Load.java"));
        benchmark::DoNotOptimize(metrics::corpus_metrics(corpus, Granularity::method));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ParseAndMethodMetrics)->Arg(10)->Arg(100);

void BM_FitBlr(benchmark::State& state) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    blr::SampleTable table;
    table.metric_names = {"m1", "m2", "m3", "m4", "m5"};
    for (long i = 0; i < state.range(0); ++i) {
        std::vector<double> x(5);
        for (double& v : x) v = unif(rng) * 10.0;
        double z = -2.0 + 0.3 * x[0] + 0.1 * x[1] - 0.2 * x[2] + 0.05 * x[3] + 0.15 * x[4];
        table.add(x, unif(rng) < blr::logistic(z) ? 1 : 0);
    }
    for (auto _ : state) benchmark::DoNotOptimize(blr::fit_blr(table));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FitBlr)->Arg(200)->Arg(2000);

void BM_Logistic(benchmark::State& state) {
    double z = -20.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(blr::logistic(z));
        z += 0.001;
        if (z > 20.0) z = -20.0;
    }
}
BENCHMARK(BM_Logistic);

}  // namespace

BENCHMARK_MAIN();
