#include "smellcheck/source_model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace smellcheck {

std::string to_string(StatementKind kind) {
    switch (kind) {
        case StatementKind::block: return "block";
        case StatementKind::if_stmt: return "if";
        case StatementKind::else_branch: return "else_branch";
        case StatementKind::for_stmt: return "for";
        case StatementKind::enhanced_for: return "enhanced_for";
        case StatementKind::while_stmt: return "while";
        case StatementKind::do_stmt: return "do";
        case StatementKind::switch_stmt: return "switch";
        case StatementKind::case_label: return "case_label";
        case StatementKind::try_stmt: return "try";
        case StatementKind::catch_clause: return "catch";
        case StatementKind::finally_clause: return "finally";
        case StatementKind::return_stmt: return "return";
        case StatementKind::throw_stmt: return "throw";
        case StatementKind::expression: return "expression";
        case StatementKind::local_var_decl: return "local_var_decl";
        case StatementKind::synchronized_stmt: return "synchronized";
        case StatementKind::labeled: return "labeled";
    }
    return "?";
}

std::vector<ElementRef> enumerate_elements(const CompilationUnit& unit, Granularity granularity) {
    std::vector<ElementRef> out;
    for (const TypeUnit& type : unit.types) {
        if (granularity == Granularity::type) {
            out.push_back({type.qualified_id, &unit, &type, nullptr});
        } else {
            for (const MethodUnit& m : type.methods)
                out.push_back({m.qualified_id, &unit, &type, &m});
        }
    }
    return out;
}

std::vector<ElementRef> Corpus::elements(Granularity granularity) const {
    std::vector<ElementRef> out;
    for (const CompilationUnit& unit : units) {
        std::vector<ElementRef> part = enumerate_elements(unit, granularity);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

const ElementRef* Corpus::find(std::string_view qualified_id, Granularity granularity,
                               std::vector<ElementRef>* scratch) const {
    *scratch = elements(granularity);

    auto matches = [&](const ElementRef& e) {
        if (e.qualified_id == qualified_id) return true;
        const std::string suffix = "." + std::string(qualified_id);
        if (e.qualified_id.size() > suffix.size() &&
            e.qualified_id.compare(e.qualified_id.size() - suffix.size(), suffix.size(), suffix) ==
                0)
            return true;
        // Methods may be addressed without the parameter list when unique.
        const std::size_t paren = e.qualified_id.find('(');
        if (paren != std::string::npos && qualified_id.find('(') == std::string_view::npos) {
            const std::string base = e.qualified_id.substr(0, paren);
            if (base == qualified_id) return true;
            if (base.size() > suffix.size() &&
                base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0)
                return true;
        }
        return false;
    };

    const ElementRef* found = nullptr;
    for (const ElementRef& e : *scratch) {
        if (!matches(e)) continue;
        if (found)
            throw AmbiguousElement("element id '" + std::string(qualified_id) +
                                   "' matches both " + found->qualified_id + " and " +
                                   e.qualified_id);
        found = &e;
    }
    return found;
}

Corpus load_corpus(const std::vector<std::filesystem::path>& roots) {
    namespace fs = std::filesystem;

    std::vector<fs::path> files;
    for (const fs::path& root : roots) {
        std::error_code ec;
        if (fs::is_regular_file(root, ec)) {
            if (root.extension() == ".java") files.push_back(root);
            continue;
        }
        if (!fs::is_directory(root, ec))
            throw IoError("cannot read root '" + root.string() + "'");
        for (auto it = fs::recursive_directory_iterator(root, ec);
             it != fs::recursive_directory_iterator(); it.increment(ec)) {
            if (ec) throw IoError("error walking '" + root.string() + "': " + ec.message());
            if (it->is_regular_file() && it->path().extension() == ".java")
                files.push_back(it->path());
        }
    }
    std::sort(files.begin(), files.end());
    files.erase(std::unique(files.begin(), files.end()), files.end());

    Corpus corpus;
    for (const fs::path& file : files) {
        std::ifstream in(file, std::ios::binary);
        if (!in) throw IoError("cannot open '" + file.string() + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        try {
            corpus.units.push_back(parse_compilation_unit(buf.str(), file.string()));
        } catch (const SyntaxError& e) {
            corpus.failures.push_back({file.string(), e.what()});
        }
    }
    return corpus;
}

namespace {

void dump_statement(std::ostringstream& os, const StatementNode& s, int depth, bool with_lines) {
    os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << to_string(s.kind);
    if (s.is_default_label) os << "(default)";
    if (s.boolean_operator_count) os << " bools=" << s.boolean_operator_count;
    if (s.local_declarator_count) os << " locals=" << s.local_declarator_count;
    if (with_lines) os << " [" << s.line_span.start << "-" << s.line_span.end << "]";
    os << "\n";
    for (const StatementNode& c : s.children) dump_statement(os, c, depth + 1, with_lines);
}

void dump_method(std::ostringstream& os, const MethodUnit& m, bool with_lines) {
    os << "  method " << m.signature;
    if (m.is_static) os << " static";
    if (m.is_constructor) os << " ctor";
    if (m.is_override) os << " override";
    if (with_lines) os << " [" << m.line_span.start << "-" << m.line_span.end << "]";
    os << "\n";
    for (const AnnotationNode& a : m.annotations) {
        os << "    @" << a.name;
        for (const auto& [k, v] : a.arguments) os << " " << k << "=" << v;
        os << "\n";
    }
    if (m.body) dump_statement(os, *m.body, 2, with_lines);
}

}  // namespace

std::string to_debug_string(const MethodUnit& method, bool with_lines) {
    std::ostringstream os;
    dump_method(os, method, with_lines);
    return os.str();
}

std::string to_debug_string(const CompilationUnit& unit) {
    std::ostringstream os;
    os << "package " << unit.package_name << "\n";
    for (const TypeUnit& t : unit.types) {
        os << (t.kind == TypeUnit::Kind::class_kind ? "class " : "interface ") << t.qualified_id;
        if (t.superclass_name) os << " extends " << *t.superclass_name;
        os << " [" << t.line_span.start << "-" << t.line_span.end << "]\n";
        for (const AnnotationNode& a : t.annotations) {
            os << "  @" << a.name;
            for (const auto& [k, v] : a.arguments) os << " " << k << "=" << v;
            os << "\n";
        }
        for (const FieldDecl& f : t.attributes)
            os << "  field " << f.name << (f.is_static ? " static" : "") << "\n";
        for (const MethodUnit& m : t.methods) dump_method(os, m, true);
    }
    return os.str();
}

}  // namespace smellcheck
