#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smellcheck/errors.hpp"
#include "smellcheck/granularity.hpp"

namespace smellcheck {

// 1-based, inclusive line range.
struct LineSpan {
    int start = 0;
    int end = 0;
};

// Classification of a physical source line. A line holding both code and a
// comment counts as code; MLOC is defined over code lines only.
enum class LineKind { blank, comment, code };

enum class StatementKind {
    block,
    if_stmt,
    else_branch,
    for_stmt,
    enhanced_for,
    while_stmt,
    do_stmt,
    switch_stmt,
    case_label,
    try_stmt,
    catch_clause,
    finally_clause,
    return_stmt,
    throw_stmt,
    expression,
    local_var_decl,
    synchronized_stmt,
    labeled,
};

std::string to_string(StatementKind kind);

struct StatementNode {
    StatementKind kind = StatementKind::expression;
    std::vector<StatementNode> children;
    // Short-circuit && / || plus ternary ?: within this statement's own
    // expressions (children keep their own counts).
    int boolean_operator_count = 0;
    // Local variable declarators introduced directly by this statement
    // (declaration statements, for-init, enhanced-for, try resources).
    int local_declarator_count = 0;
    bool is_default_label = false;  // case_label nodes only
    LineSpan line_span;
};

struct AnnotationNode {
    std::string name;
    // Ordered member -> raw literal text pairs; the single-element shorthand
    // uses the key "value". Keys are unique.
    std::vector<std::pair<std::string, std::string>> arguments;
    int line = 0;
    LineSpan span;
    // Byte extent of the whole annotation, '@' to closing token inclusive.
    std::size_t begin_offset = 0;
    std::size_t end_offset = 0;

    const std::string* argument(std::string_view key) const {
        for (const auto& [k, v] : arguments)
            if (k == key) return &v;
        return nullptr;
    }
};

struct MethodUnit {
    std::string name;
    std::vector<std::string> parameter_names;
    std::string signature;  // name(ErasedType,...) - unique within the type
    bool is_static = false;
    bool is_constructor = false;
    bool is_override = false;  // carries @Override
    std::optional<StatementNode> body;  // absent for abstract/interface methods
    std::vector<std::string> local_declarations;  // declared names, in order
    std::vector<AnnotationNode> annotations;
    LineSpan line_span;      // includes annotations and modifiers
    int declaration_line = 0;  // line of the method name
    std::string qualified_id;
    // Byte offsets of the body braces; metric code derives MLOC from the
    // retained token positions between them.
    std::size_t body_open_offset = 0;
    std::size_t body_close_offset = 0;

    int parameter_count() const { return static_cast<int>(parameter_names.size()); }
};

struct FieldDecl {
    std::string name;
    bool is_static = false;
};

struct TypeUnit {
    enum class Kind { class_kind, interface_kind };

    std::string name;  // local dotted name; "A.B" for B nested in A
    Kind kind = Kind::class_kind;
    std::optional<std::string> superclass_name;  // as written, possibly qualified
    std::vector<FieldDecl> attributes;
    std::vector<MethodUnit> methods;
    std::vector<AnnotationNode> annotations;
    LineSpan line_span;
    int declaration_line = 0;
    std::string qualified_id;  // package-qualified dotted name
};

// Position of one non-comment token; retained so metrics can count code
// lines inside arbitrary brace ranges.
struct TokenPos {
    std::size_t offset = 0;
    int line = 0;
};

struct CompilationUnit {
    std::string file_path;
    std::string package_name;
    std::vector<TypeUnit> types;  // all types, nested included, preorder
    std::string source_text;
    std::vector<LineKind> line_kinds;     // index 0 = line 1
    std::vector<TokenPos> token_positions;  // sorted by offset

    int line_count() const { return static_cast<int>(line_kinds.size()); }
};

// Parses Java source into the structural model. Deterministic; throws
// SyntaxError on input outside the supported grammar subset.
CompilationUnit parse_compilation_unit(std::string_view source_text, std::string file_path);

// Stable, declaration-ordered listing of the elements of one granularity.
struct ElementRef {
    std::string qualified_id;
    const CompilationUnit* unit = nullptr;
    const TypeUnit* type = nullptr;
    const MethodUnit* method = nullptr;  // null at type granularity
};

std::vector<ElementRef> enumerate_elements(const CompilationUnit& unit, Granularity granularity);

// A set of parsed files plus the per-file failures that were skipped.
struct Corpus {
    struct Failure {
        std::string file_path;
        std::string message;
    };

    std::vector<CompilationUnit> units;
    std::vector<Failure> failures;

    std::vector<ElementRef> elements(Granularity granularity) const;
    const ElementRef* find(std::string_view qualified_id, Granularity granularity,
                           std::vector<ElementRef>* scratch) const;
};

// Recursively loads .java files under the given roots (a root may also be a
// single file). File order is the sorted path order; parse failures are
// recorded, not fatal. Throws IoError for an unreadable root.
Corpus load_corpus(const std::vector<std::filesystem::path>& roots);

// Structural dump used by determinism and round-trip tests.
std::string to_debug_string(const CompilationUnit& unit);
std::string to_debug_string(const MethodUnit& method, bool with_lines = true);

}  // namespace smellcheck
