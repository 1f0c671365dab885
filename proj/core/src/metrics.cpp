#include "smellcheck/metrics.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "lexer.hpp"

namespace smellcheck::metrics {

namespace {

int count_mloc(const MethodUnit& m, const CompilationUnit& unit) {
    if (!m.body) return 0;
    int lines = 0;
    int last_line = -1;
    // token_positions is sorted by offset; count distinct lines of the tokens
    // strictly between the body braces.
    for (const TokenPos& t : unit.token_positions) {
        if (t.offset <= m.body_open_offset) continue;
        if (t.offset >= m.body_close_offset) break;
        if (t.line != last_line) {
            ++lines;
            last_line = t.line;
        }
    }
    return lines;
}

int max_block_depth(const StatementNode& s, int enclosing_blocks) {
    const int here = enclosing_blocks + (s.kind == StatementKind::block ? 1 : 0);
    int best = s.kind == StatementKind::block ? here : 0;
    for (const StatementNode& c : s.children) best = std::max(best, max_block_depth(c, here));
    return best;
}

int decision_points(const StatementNode& s) {
    int n = s.boolean_operator_count;
    switch (s.kind) {
        case StatementKind::if_stmt:
        case StatementKind::for_stmt:
        case StatementKind::enhanced_for:
        case StatementKind::while_stmt:
        case StatementKind::do_stmt:
        case StatementKind::catch_clause:
            ++n;
            break;
        case StatementKind::case_label:
            if (!s.is_default_label) ++n;
            break;
        default:
            break;
    }
    for (const StatementNode& c : s.children) n += decision_points(c);
    return n;
}

int local_declarators(const StatementNode& s) {
    int n = s.local_declarator_count;
    for (const StatementNode& c : s.children) n += local_declarators(c);
    return n;
}

// Identifier tokens of a method body, for the attribute-reference scan of
// LCOM*. References are matched by name at token level; shadowing by locals
// or parameters is deliberately not resolved.
std::unordered_set<std::string> body_identifiers(const MethodUnit& m,
                                                 const CompilationUnit& unit) {
    std::unordered_set<std::string> names;
    if (!m.body || m.body_close_offset <= m.body_open_offset + 1) return names;
    const std::string_view body{
        std::string_view(unit.source_text)
            .substr(m.body_open_offset + 1, m.body_close_offset - m.body_open_offset - 1)};
    for (const java::Token& t : java::lex(body).tokens)
        if (t.kind == java::TokenKind::identifier) names.insert(t.text);
    return names;
}

std::string simple_name(const std::string& dotted) {
    const std::size_t dot = dotted.rfind('.');
    return dot == std::string::npos ? dotted : dotted.substr(dot + 1);
}

// Superclass resolution within the corpus: exact qualified id, then dotted
// suffix, then simple name; same-package candidates win, then corpus order.
// Unresolvable supertypes (external classes) terminate the chain.
class Hierarchy {
public:
    explicit Hierarchy(const Corpus& corpus) {
        for (const CompilationUnit& unit : corpus.units)
            for (const TypeUnit& t : unit.types) types_.push_back({&t, &unit, nullptr});
        for (Entry& e : types_) e.super = resolve_super(*e.type, *e.unit);
    }

    int depth_of_inheritance(const TypeUnit& t) const {
        int depth = 1;
        std::set<const TypeUnit*> seen{&t};
        const Entry* cur = entry_of(&t);
        while (cur && cur->super) {
            if (seen.count(cur->super)) break;  // defensive: cyclic extends
            seen.insert(cur->super);
            ++depth;
            cur = entry_of(cur->super);
        }
        return depth;
    }

    int children_of(const TypeUnit& t) const {
        int n = 0;
        for (const Entry& e : types_)
            if (e.super == &t) ++n;
        return n;
    }

private:
    struct Entry {
        const TypeUnit* type;
        const CompilationUnit* unit;
        const TypeUnit* super;
    };

    const Entry* entry_of(const TypeUnit* t) const {
        for (const Entry& e : types_)
            if (e.type == t) return &e;
        return nullptr;
    }

    const TypeUnit* resolve_super(const TypeUnit& t, const CompilationUnit& unit) const {
        if (!t.superclass_name) return nullptr;
        const std::string& name = *t.superclass_name;
        const std::string suffix = "." + name;
        const TypeUnit* same_package = nullptr;
        const TypeUnit* any = nullptr;
        for (const Entry& e : types_) {
            const TypeUnit* cand = e.type;
            if (cand == &t) continue;
            bool match = cand->qualified_id == name;
            if (!match && name.find('.') != std::string::npos &&
                cand->qualified_id.size() > suffix.size() &&
                cand->qualified_id.compare(cand->qualified_id.size() - suffix.size(),
                                           suffix.size(), suffix) == 0)
                match = true;
            if (!match && simple_name(cand->name) == name) match = true;
            if (!match) continue;
            if (!any) any = cand;
            if (!same_package && e.unit->package_name == unit.package_name) {
                same_package = cand;
                break;
            }
        }
        return same_package ? same_package : any;
    }

    std::vector<Entry> types_;
};

const CompilationUnit& unit_containing(const TypeUnit& type, const Corpus& corpus) {
    for (const CompilationUnit& unit : corpus.units)
        for (const TypeUnit& t : unit.types)
            if (&t == &type) return unit;
    throw Error("type '" + type.qualified_id + "' is not part of the corpus");
}

}  // namespace

const std::vector<std::string>& method_metric_names() {
    static const std::vector<std::string> names = {"MLOC", "NBD", "VG", "PAR", "LVAR"};
    return names;
}

const std::vector<std::string>& class_metric_names() {
    static const std::vector<std::string> names = {"NORM", "NOA",  "NSA", "NOC", "MLOC_total",
                                                   "NOM",  "NSM",  "DIT", "LCOM", "SIX", "WMC"};
    return names;
}

bool is_valid_metric(std::string_view name, Granularity granularity) {
    const auto& pool =
        granularity == Granularity::method ? method_metric_names() : class_metric_names();
    return std::find(pool.begin(), pool.end(), name) != pool.end();
}

int cyclomatic_complexity(const StatementNode& body) { return 1 + decision_points(body); }

MetricVector method_metrics(const MethodUnit& m, const CompilationUnit& unit) {
    if (!m.body) throw Error("method_metrics requires a method body: " + m.qualified_id);

    MetricVector v;
    v.element_id = m.qualified_id;
    v.granularity = Granularity::method;
    v.values = {
        {"MLOC", static_cast<double>(count_mloc(m, unit))},
        {"NBD", static_cast<double>(max_block_depth(*m.body, 0))},
        {"VG", static_cast<double>(cyclomatic_complexity(*m.body))},
        {"PAR", static_cast<double>(m.parameter_count())},
        {"LVAR", static_cast<double>(local_declarators(*m.body))},
    };
    return v;
}

namespace {

MetricVector class_metrics_with(const TypeUnit& type, const CompilationUnit& unit,
                                const Hierarchy& hierarchy) {
    int norm = 0, nom = 0, nsm = 0, mloc_total = 0, wmc = 0;
    for (const MethodUnit& m : type.methods) {
        (m.is_static ? nsm : nom)++;
        if (m.is_override) ++norm;
        if (m.body) {
            mloc_total += count_mloc(m, unit);
            wmc += cyclomatic_complexity(*m.body);
        }
    }

    int noa = 0, nsa = 0;
    for (const FieldDecl& f : type.attributes) (f.is_static ? nsa : noa)++;

    const int dit = hierarchy.depth_of_inheritance(type);
    const int noc = hierarchy.children_of(type);
    const int methods_total = nom + nsm;
    const int attr_total = noa + nsa;

    // Henderson-Sellers LCOM*: ((1/a) * sum_j mu(A_j) - m) / (1 - m).
    double lcom = 0.0;
    if (attr_total > 0 && methods_total > 1) {
        std::vector<std::unordered_set<std::string>> refs;
        refs.reserve(type.methods.size());
        for (const MethodUnit& m : type.methods) refs.push_back(body_identifiers(m, unit));
        double mu_sum = 0.0;
        for (const FieldDecl& f : type.attributes)
            for (const auto& names : refs)
                if (names.count(f.name)) mu_sum += 1.0;
        lcom = (mu_sum / attr_total - methods_total) / (1.0 - methods_total);
    }

    const double six =
        methods_total > 0 ? static_cast<double>(norm) * dit / methods_total : 0.0;

    MetricVector v;
    v.element_id = type.qualified_id;
    v.granularity = Granularity::type;
    v.values = {
        {"NORM", static_cast<double>(norm)},
        {"NOA", static_cast<double>(noa)},
        {"NSA", static_cast<double>(nsa)},
        {"NOC", static_cast<double>(noc)},
        {"MLOC_total", static_cast<double>(mloc_total)},
        {"NOM", static_cast<double>(nom)},
        {"NSM", static_cast<double>(nsm)},
        {"DIT", static_cast<double>(dit)},
        {"LCOM", lcom},
        {"SIX", six},
        {"WMC", static_cast<double>(wmc)},
    };
    return v;
}

}  // namespace

MetricVector class_metrics(const TypeUnit& type, const Corpus& corpus) {
    const CompilationUnit& unit = unit_containing(type, corpus);
    return class_metrics_with(type, unit, Hierarchy(corpus));
}

std::vector<MetricVector> corpus_metrics(const Corpus& corpus, Granularity granularity) {
    std::vector<MetricVector> out;
    std::optional<Hierarchy> hierarchy;
    if (granularity == Granularity::type) hierarchy.emplace(corpus);
    for (const CompilationUnit& unit : corpus.units) {
        for (const TypeUnit& type : unit.types) {
            if (granularity == Granularity::type) {
                out.push_back(class_metrics_with(type, unit, *hierarchy));
            } else {
                for (const MethodUnit& m : type.methods)
                    if (m.body) out.push_back(method_metrics(m, unit));
            }
        }
    }
    return out;
}

std::vector<MetricVector> corpus_metrics(const std::vector<std::filesystem::path>& roots,
                                         Granularity granularity) {
    const Corpus corpus = load_corpus(roots);
    return corpus_metrics(corpus, granularity);
}

}  // namespace smellcheck::metrics
