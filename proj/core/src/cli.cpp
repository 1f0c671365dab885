#include "smellcheck/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "smellcheck/calibrate.hpp"
#include "smellcheck/config.hpp"
#include "smellcheck/detector.hpp"
#include "smellcheck/metrics.hpp"
#include "smellcheck/source_model.hpp"
#include "smellcheck/store.hpp"
#include "smellcheck/sync.hpp"
#include "smellcheck/tagging.hpp"
#include "util.hpp"

namespace smellcheck::cli {

namespace {

constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitError = 2;

std::string env_or(const char* name, const std::string& fallback) {
    const char* v = std::getenv(name);
    return v && *v ? v : fallback;
}

struct CommonState {
    std::string store_dir;
    std::string server_url;
    std::ostream* out;
    std::ostream* err;

    Config config_or_default() const {
        if (store::Store::exists(store_dir)) return store::Store::open(store_dir).load_config();
        return default_config();
    }
    store::Store open_store() const { return store::Store::open(store_dir); }

    std::string effective_server(const Config& config) const {
        if (!server_url.empty()) return server_url;
        if (!config.server_url.empty()) return config.server_url;
        throw UsageError("no server URL (use --server, SMELLCHECK_SERVER or config)");
    }
};

std::vector<std::filesystem::path> to_paths(const std::vector<std::string>& roots) {
    std::vector<std::filesystem::path> out;
    if (roots.empty()) out.emplace_back(".");
    for (const std::string& r : roots) out.emplace_back(r);
    return out;
}

void print_diagnostics(const Corpus& corpus, std::ostream& err) {
    for (const Corpus::Failure& f : corpus.failures)
        err << f.file_path << ": " << f.message << "\n";
}

std::map<std::string, double> parse_thresholds(const std::vector<std::string>& specs) {
    std::map<std::string, double> out;
    for (const std::string& spec : specs) {
        const std::size_t eq = spec.find('=');
        if (eq == std::string::npos)
            throw UsageError("--threshold expects <smell>=<p>, got '" + spec + "'");
        bool ok = false;
        const double p = util::parse_number(spec.substr(eq + 1), &ok);
        if (!ok) throw UsageError("bad threshold value in '" + spec + "'");
        out[spec.substr(0, eq)] = p;
    }
    return out;
}

// --- subcommand bodies ---

int cmd_init(const CommonState& state, const std::string& application) {
    store::Store st = store::Store::init(state.store_dir, application);
    *state.out << "initialized store at " << st.root().string() << "\n";
    return kExitClean;
}

int cmd_metrics(const CommonState& state, const std::string& granularity_name,
                const std::string& format, const std::vector<std::string>& roots) {
    const Granularity granularity = granularity_from_string(granularity_name);
    const Corpus corpus = load_corpus(to_paths(roots));
    print_diagnostics(corpus, *state.err);
    const std::vector<metrics::MetricVector> vectors = metrics::corpus_metrics(corpus, granularity);
    const Config config = state.config_or_default();

    std::ostream& out = *state.out;
    if (format == "text") {
        for (const auto& v : vectors) {
            out << v.element_id << ":";
            for (const auto& [name, value] : v.values)
                out << " " << name << "=" << util::format_number(value);
            out << "\n";
        }
    } else if (format == "csv") {
        std::vector<std::string> header = {"application", "package", "class", "method"};
        const auto& names = granularity == Granularity::method ? metrics::method_metric_names()
                                                               : metrics::class_metric_names();
        header.insert(header.end(), names.begin(), names.end());
        out << util::join(header, ',') << "\n";
        for (const CompilationUnit& unit : corpus.units) {
            for (const TypeUnit& type : unit.types) {
                if (granularity == Granularity::type) {
                    const metrics::MetricVector v = metrics::class_metrics(type, corpus);
                    std::vector<std::string> cols = {config.application, unit.package_name,
                                                     type.name, ""};
                    for (const auto& [name, value] : v.values)
                        cols.push_back(util::format_number(value));
                    out << util::join(cols, ',') << "\n";
                } else {
                    for (const MethodUnit& m : type.methods) {
                        if (!m.body) continue;
                        const metrics::MetricVector v = metrics::method_metrics(m, unit);
                        std::vector<std::string> cols = {config.application, unit.package_name,
                                                         type.name, m.signature};
                        for (const auto& [name, value] : v.values)
                            cols.push_back(util::format_number(value));
                        out << util::join(cols, ',') << "\n";
                    }
                }
            }
        }
    } else {  // json
        out << "[";
        bool first = true;
        for (const auto& v : vectors) {
            out << (first ? "\n" : ",\n") << "  {\"element\": \"" << v.element_id
                << "\", \"granularity\": \"" << to_string(v.granularity) << "\"";
            for (const auto& [name, value] : v.values)
                out << ", \"" << name << "\": " << util::format_number(value);
            out << "}";
            first = false;
        }
        out << "\n]\n";
    }
    return kExitClean;
}

int cmd_tag(const CommonState& state, const std::string& smell_name, const std::string& element,
            const std::string& description, bool dry_run, bool removing,
            const std::vector<std::string>& roots) {
    const Config config = state.config_or_default();
    const SmellKind& kind = config.require_smell(smell_name);
    const Corpus corpus = load_corpus(to_paths(roots));
    print_diagnostics(corpus, *state.err);

    const tagging::TagFileResult result =
        removing ? tagging::remove_tag(corpus, element, kind, dry_run)
                 : tagging::write_tag(corpus, element, kind, description, dry_run);
    *state.out << (dry_run ? "[dry-run] " : "") << (removing ? "untagged " : "tagged ") << element
               << " (" << smell_name << ") in " << result.file.string() << "\n";
    return kExitClean;
}

int cmd_sample(const CommonState& state, const std::string& smell_name,
               const std::string& application, const std::vector<std::string>& roots) {
    const Config config = state.config_or_default();
    const SmellKind& kind = config.require_smell(smell_name);
    const Corpus corpus = load_corpus(to_paths(roots));
    print_diagnostics(corpus, *state.err);

    const std::string app = application.empty() ? config.application : application;
    const std::vector<tagging::SampleRow> rows =
        tagging::build_sample(corpus, kind, app, config.smells);

    store::Store st = state.open_store();
    const std::size_t written = st.append_rows(kind, rows);
    long positives = 0;
    for (const auto& row : rows) positives += row.label;
    *state.out << "sampled " << rows.size() << " " << to_string(kind.granularity)
               << " elements (" << positives << " tagged), appended " << written << " rows to "
               << st.samples_path(kind.name).string() << "\n";
    return kExitClean;
}

int cmd_calibrate(const CommonState& state, const std::string& smell_name, double alpha,
                  double ridge, bool strict, const std::string& criterion) {
    store::Store st = state.open_store();
    const Config config = st.load_config();
    const SmellKind& kind = config.require_smell(smell_name);

    blr::CalibrateOptions opts;
    opts.alpha = alpha;
    opts.ridge = ridge;
    opts.strict = strict;
    opts.criterion =
        criterion == "lr" ? blr::SelectionCriterion::lr : blr::SelectionCriterion::wald;
    if (st.has_model(smell_name)) opts.prior_version = st.load_model(smell_name).version;

    const blr::SampleTable table = st.load_table(smell_name);
    const SmellModel model = blr::calibrate(table, kind, opts);
    st.save_model(model);

    *state.out << "calibrated " << smell_name << " v" << model.version << " on " << table.size()
               << " rows; kept metrics:";
    for (const std::string& m : model.metric_names) *state.out << " " << m;
    *state.out << "\n  beta:";
    for (double b : model.beta) *state.out << " " << util::format_number(b);
    *state.out << "\n";
    if (model.diagnostics.hosmer_lemeshow_run)
        *state.out << "  hosmer-lemeshow p = "
                   << util::format_number(model.diagnostics.hosmer_lemeshow_p) << "\n";
    return kExitClean;
}

int cmd_detect(const CommonState& state, std::vector<std::string> smell_names,
               const std::vector<std::string>& threshold_specs, const std::string& format,
               int sweep_steps, const std::vector<std::string>& roots) {
    store::Store st = state.open_store();
    const Config config = st.load_config();

    if (smell_names.empty())
        for (const SmellKind& kind : config.smells)
            if (st.has_model(kind.name)) smell_names.push_back(kind.name);
    if (smell_names.empty()) throw MissingModel("no calibrated models in store (run calibrate)");

    std::vector<SmellModel> models;
    for (const std::string& name : smell_names) {
        config.require_smell(name);
        models.push_back(st.load_model(name));
    }

    const Corpus corpus = load_corpus(to_paths(roots));
    const std::map<std::string, double> thresholds = parse_thresholds(threshold_specs);

    if (sweep_steps > 0) {
        std::vector<double> points;
        for (int i = 0; i < sweep_steps; ++i)
            points.push_back(sweep_steps == 1
                                 ? 0.5
                                 : 0.1 + 0.8 * static_cast<double>(i) / (sweep_steps - 1));
        for (const SmellModel& model : models) {
            *state.out << model.smell << " threshold sweep:\n";
            for (const auto& [t, count] : detector::threshold_sweep(corpus, model, points)) {
                char buf[16];
                std::snprintf(buf, sizeof(buf), "%.3f", t);
                *state.out << "  " << buf << " -> " << count << "\n";
            }
        }
        return kExitClean;
    }

    const detector::DetectResult result = detector::detect(corpus, models, thresholds, config.smells);
    for (const std::string& d : result.diagnostics) *state.err << d << "\n";
    *state.out << detector::render_report(result.findings, format == "json"
                                                               ? detector::ReportFormat::json
                                                               : detector::ReportFormat::text);
    return result.findings.empty() ? kExitClean : kExitFindings;
}

int cmd_feedback(const CommonState& state, const std::string& smell_name,
                 const std::string& element, const std::string& verdict,
                 const std::vector<std::string>& roots) {
    store::Store st = state.open_store();
    const Config config = st.load_config();
    const SmellKind& kind = config.require_smell(smell_name);

    if (verdict != "fp" && verdict != "fn")
        throw UsageError("--verdict must be fp or fn, got '" + verdict + "'");
    const tagging::Verdict v =
        verdict == "fp" ? tagging::Verdict::false_positive : tagging::Verdict::false_negative;

    const Corpus corpus = load_corpus(to_paths(roots));
    print_diagnostics(corpus, *state.err);

    const tagging::SampleRow row =
        tagging::record_feedback(corpus, element, kind, v, config.application);
    st.append_rows(kind, {row});
    st.log_feedback({row.timestamp, kind.name, row.application, row.package_name, row.class_name,
                     row.method, verdict});
    *state.out << "recorded " << verdict << " for " << element << " (" << smell_name
               << "), label " << row.label << "\n";
    return kExitClean;
}

int cmd_serve(const CommonState& state, const std::string& bind) {
    const std::size_t colon = bind.rfind(':');
    if (colon == std::string::npos)
        throw UsageError("--bind expects host:port, got '" + bind + "'");
    const std::string host = bind.substr(0, colon);
    bool ok = false;
    const double port = util::parse_number(bind.substr(colon + 1), &ok);
    if (!ok || port <= 0 || port > 65535 || port != static_cast<int>(port))
        throw UsageError("bad port in '" + bind + "'");

    sync::Server server(state.store_dir);
    *state.out << "serving " << state.store_dir << " on " << host << ":" << static_cast<int>(port)
               << "\n";
    state.out->flush();
    if (!server.listen(host, static_cast<int>(port)))
        throw NetworkError("cannot listen on " + bind);
    return kExitClean;
}

int cmd_push(const CommonState& state, const std::string& smell_name, bool feedback) {
    store::Store st = state.open_store();
    const Config config = st.load_config();
    const std::string server = state.effective_server(config);

    if (!feedback && smell_name.empty())
        throw UsageError("push needs --smell <name> and/or --feedback");

    if (!smell_name.empty()) {
        const SmellKind& kind = config.require_smell(smell_name);
        const sync::PushResult r = sync::push_samples(server, st, kind, config.client_id);
        *state.out << "pushed " << r.sent << " sample rows (" << r.accepted << " accepted, "
                   << r.duplicates << " duplicates)\n";
    }
    if (feedback) {
        const sync::PushResult r = sync::push_feedback(server, st, config.client_id);
        *state.out << "pushed " << r.sent << " feedback events (" << r.accepted << " accepted, "
                   << r.duplicates << " duplicates)\n";
    }
    return kExitClean;
}

int cmd_pull(const CommonState& state, const std::string& smell_name) {
    store::Store st = state.open_store();
    const Config config = st.load_config();
    const std::string server = state.effective_server(config);

    const int local_before = st.has_model(smell_name) ? st.load_model(smell_name).version : 0;
    const SmellModel model = sync::pull_model(server, st, smell_name);
    if (model.version > local_before)
        *state.out << "pulled " << smell_name << " v" << model.version << "\n";
    else
        *state.out << "server has v" << model.version << ", local v" << local_before
                   << " is current\n";
    return kExitClean;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"smellcheck - code smell detection calibrated by logistic regression"};
    app.require_subcommand(1);

    CommonState state;
    state.out = &out;
    state.err = &err;
    state.store_dir = env_or("SMELLCHECK_STORE", ".smellchecker");
    state.server_url = env_or("SMELLCHECK_SERVER", "");

    app.add_option("--store", state.store_dir, "store directory")->envname("SMELLCHECK_STORE");
    app.add_option("--server", state.server_url, "calibration server URL")
        ->envname("SMELLCHECK_SERVER");

    // init
    std::string application;
    CLI::App* init = app.add_subcommand("init", "create the local store layout");
    init->add_option("--application", application, "application name for sample rows");

    // metrics
    std::string granularity = "method", format = "text";
    std::vector<std::string> roots;
    CLI::App* metrics_cmd = app.add_subcommand("metrics", "compute metric vectors");
    metrics_cmd->add_option("--granularity", granularity, "method|type")
        ->check(CLI::IsMember({"method", "type"}));
    metrics_cmd->add_option("--format", format, "text|csv|json")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    metrics_cmd->add_option("roots", roots, "source roots");

    // tag / untag
    std::string smell, element, description;
    bool dry_run = false;
    CLI::App* tag = app.add_subcommand("tag", "add a @CodeSmell annotation");
    tag->add_option("--smell", smell)->required();
    tag->add_option("--element", element)->required();
    tag->add_option("--description", description);
    tag->add_flag("--dry-run", dry_run, "do not write the file");
    tag->add_option("roots", roots, "source roots");

    CLI::App* untag = app.add_subcommand("untag", "remove a @CodeSmell annotation");
    untag->add_option("--smell", smell)->required();
    untag->add_option("--element", element)->required();
    untag->add_flag("--dry-run", dry_run, "do not write the file");
    untag->add_option("roots", roots, "source roots");

    // sample
    CLI::App* sample = app.add_subcommand("sample", "build labeled rows from a tagged corpus");
    sample->add_option("--smell", smell)->required();
    sample->add_option("--application", application);
    sample->add_option("roots", roots, "source roots");

    // calibrate
    double alpha = 0.05, ridge = 0.0;
    bool strict = false;
    std::string criterion = "wald";
    CLI::App* calibrate = app.add_subcommand("calibrate", "fit the smell's regression model");
    calibrate->add_option("--smell", smell)->required();
    calibrate->add_option("--alpha", alpha, "selection significance level");
    calibrate->add_option("--ridge", ridge, "ridge penalty (escape hatch for separation)");
    calibrate->add_flag("--strict", strict, "reject on failed goodness-of-fit");
    calibrate->add_option("--criterion", criterion, "wald|lr")
        ->check(CLI::IsMember({"wald", "lr"}));

    // detect
    std::vector<std::string> smells, threshold_specs;
    int sweep_steps = 0;
    CLI::App* detect = app.add_subcommand("detect", "apply calibrated models");
    detect->add_option("--smell", smells, "smell(s) to detect; default: all calibrated")
        ->allow_extra_args(false);
    detect->add_option("--threshold", threshold_specs, "<smell>=<p> overrides")
        ->allow_extra_args(false);
    detect->add_option("--format", format, "text|json")->check(CLI::IsMember({"text", "json"}));
    detect->add_option("--sweep", sweep_steps, "print finding counts over N thresholds");
    detect->add_option("roots", roots, "source roots");

    // feedback
    std::string verdict;
    CLI::App* feedback = app.add_subcommand("feedback", "record a fp/fn verdict");
    feedback->add_option("--smell", smell)->required();
    feedback->add_option("--element", element)->required();
    feedback->add_option("--verdict", verdict, "fp|fn")->required();
    feedback->add_option("roots", roots, "source roots");

    // serve / push / pull
    std::string bind = "127.0.0.1:8077";
    CLI::App* serve = app.add_subcommand("serve", "run the calibration server");
    serve->add_option("--bind", bind, "host:port");

    bool push_feedback_flag = false;
    CLI::App* push = app.add_subcommand("push", "upload new rows to the server");
    push->add_option("--smell", smell);
    push->add_flag("--feedback", push_feedback_flag, "push the feedback log");

    CLI::App* pull = app.add_subcommand("pull", "fetch the latest server model");
    pull->add_option("--smell", smell)->required();

    // Let "smellcheck <sub> --store X" reach the global options.
    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    // CLI11 wants argv-style (const char*); it parses right-to-left.
    std::vector<const char*> argv;
    argv.push_back("smellcheck");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitClean;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        err << app.help();
        return kExitError;
    }

    try {
        if (init->parsed()) return cmd_init(state, application.empty() ? "app" : application);
        if (metrics_cmd->parsed()) return cmd_metrics(state, granularity, format, roots);
        if (tag->parsed()) return cmd_tag(state, smell, element, description, dry_run, false, roots);
        if (untag->parsed()) return cmd_tag(state, smell, element, "", dry_run, true, roots);
        if (sample->parsed()) return cmd_sample(state, smell, application, roots);
        if (calibrate->parsed())
            return cmd_calibrate(state, smell, alpha, ridge, strict, criterion);
        if (detect->parsed())
            return cmd_detect(state, smells, threshold_specs, format, sweep_steps, roots);
        if (feedback->parsed()) return cmd_feedback(state, smell, element, verdict, roots);
        if (serve->parsed()) return cmd_serve(state, bind);
        if (push->parsed()) return cmd_push(state, smell, push_feedback_flag);
        if (pull->parsed()) return cmd_pull(state, smell);
        err << "no subcommand\n" << app.help();
        return kExitError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitError;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace smellcheck::cli
