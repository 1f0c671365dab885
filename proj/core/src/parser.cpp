#include <algorithm>
#include <cassert>
#include <optional>
#include <utility>

#include "lexer.hpp"
#include "smellcheck/source_model.hpp"

// Recursive-descent parser for the supported Java subset: declarations,
// statements and expressions to the depth the metric set needs. Lambdas,
// generics and anonymous classes parse; lambda and anonymous-class bodies are
// attached to the enclosing statement so their code counts toward the
// enclosing method.

namespace smellcheck {

namespace {

using java::Token;
using java::TokenKind;

struct TypeDesc {
    std::string erased;  // simple name plus array suffix, e.g. "List", "int[]"
    std::string written; // dotted name as written, without type arguments
    bool primitive = false;
};

struct Modifiers {
    bool is_static = false;
    bool is_abstract = false;
    std::vector<AnnotationNode> annotations;
    int first_line = 0;  // 0 when nothing was consumed
};

class Parser {
public:
    Parser(std::string_view source, std::vector<Token> tokens, CompilationUnit* out)
        : src_(source), toks_(std::move(tokens)), out_(out) {}

    void parse_unit() {
        // Leading annotations may belong to a package declaration
        // (package-info) or to the first type.
        Modifiers head = parse_modifiers();
        if (cur().is_keyword("package")) {
            next();
            out_->package_name = parse_qualified_name();
            expect(";");
            head = Modifiers{};
        }
        while (cur().is_keyword("import")) {
            next();
            if (cur().is_keyword("static")) next();
            parse_qualified_name();
            if (cur().is(".")) {
                next();
                expect("*");
            }
            expect(";");
        }
        while (!at_end()) {
            if (cur().is(";")) {
                next();
                continue;
            }
            Modifiers mods = head.first_line ? std::exchange(head, Modifiers{}) : parse_modifiers();
            parse_type_decl(mods, "", true);
        }
    }

private:
    // --- token plumbing ---

    const Token& cur() const { return toks_[pos_]; }
    const Token& peek(std::size_t k = 1) const {
        return toks_[std::min(pos_ + k, toks_.size() - 1)];
    }
    const Token& prev() const { return toks_[pos_ == 0 ? 0 : pos_ - 1]; }
    void next() {
        if (pos_ + 1 < toks_.size()) ++pos_;
    }
    bool at_end() const { return cur().kind == TokenKind::end_of_file; }

    bool accept(std::string_view text) {
        if (cur().is(text)) {
            next();
            return true;
        }
        return false;
    }
    void expect(std::string_view text) {
        if (!accept(text)) fail("expected '" + std::string(text) + "'");
    }
    [[noreturn]] void fail(const std::string& what) const {
        throw SyntaxError(cur().line, cur().column,
                          what + " before " +
                              (at_end() ? "end of input" : "'" + cur().text + "'"));
    }
    std::string expect_identifier(const char* what) {
        if (cur().kind != TokenKind::identifier) fail(std::string("expected ") + what);
        std::string name = cur().text;
        next();
        return name;
    }

    // Two consecutive tokens with no gap, e.g. the two '>' of a shift.
    bool adjacent(const Token& a, const Token& b) const {
        return b.offset == a.offset + a.text.size();
    }

    std::string slice(const Token& from, const Token& to) const {
        const std::size_t begin = from.offset;
        const std::size_t end = to.offset + to.text.size();
        return std::string(src_.substr(begin, end - begin));
    }

    // --- names, modifiers, annotations ---

    std::string parse_qualified_name() {
        std::string name = expect_identifier("name");
        while (cur().is(".") && peek().kind == TokenKind::identifier) {
            next();
            name += "." + expect_identifier("name");
        }
        return name;
    }

    AnnotationNode parse_annotation() {
        const Token& at = cur();
        expect("@");
        AnnotationNode node;
        node.line = at.line;
        node.span.start = at.line;
        node.begin_offset = at.offset;
        node.name = parse_qualified_name();
        if (accept("(")) {
            if (!cur().is(")")) {
                // Either name=value pairs or a single shorthand value.
                const bool pairs =
                    cur().kind == TokenKind::identifier && peek().is("=") && !peek(2).is("=");
                if (pairs) {
                    do {
                        std::string key = expect_identifier("annotation member name");
                        expect("=");
                        node.arguments.emplace_back(std::move(key), capture_element_value());
                    } while (accept(","));
                } else {
                    node.arguments.emplace_back("value", capture_element_value());
                }
            }
            expect(")");
        }
        for (std::size_t i = 0; i < node.arguments.size(); ++i)
            for (std::size_t j = i + 1; j < node.arguments.size(); ++j)
                if (node.arguments[i].first == node.arguments[j].first)
                    fail("duplicate annotation member '" + node.arguments[i].first + "'");
        node.span.end = prev().line;
        node.end_offset = prev().offset + prev().text.size();
        return node;
    }

    // Raw text of one annotation member value: tokens up to a ',' or ')' at
    // bracket depth zero.
    std::string capture_element_value() {
        const Token& first = cur();
        int depth = 0;
        const Token* last = &cur();
        while (!at_end()) {
            const Token& t = cur();
            if (depth == 0 && (t.is(",") || t.is(")"))) break;
            if (t.is("(") || t.is("[") || t.is("{")) ++depth;
            if (t.is(")") || t.is("]") || t.is("}")) --depth;
            last = &t;
            next();
        }
        if (&first == &cur()) fail("expected annotation value");
        return slice(first, *last);
    }

    Modifiers parse_modifiers() {
        static const char* kMods[] = {"public",   "private",   "protected", "static",
                                      "final",    "abstract",  "native",    "synchronized",
                                      "transient", "volatile", "strictfp",  "default"};
        Modifiers mods;
        while (true) {
            if (cur().is("@") && !peek().is_keyword("interface")) {
                if (!mods.first_line) mods.first_line = cur().line;
                mods.annotations.push_back(parse_annotation());
                continue;
            }
            bool matched = false;
            for (const char* m : kMods)
                if (cur().is_keyword(m) ||
                    (cur().kind == TokenKind::keyword && cur().text == m)) {
                    if (!mods.first_line) mods.first_line = cur().line;
                    if (cur().text == "static") mods.is_static = true;
                    if (cur().text == "abstract") mods.is_abstract = true;
                    next();
                    matched = true;
                    break;
                }
            if (!matched) break;
        }
        return mods;
    }

    // --- types ---

    bool is_primitive(const Token& t) const {
        return t.kind == TokenKind::keyword &&
               (t.is("boolean") || t.is("byte") || t.is("short") || t.is("int") ||
                t.is("long") || t.is("char") || t.is("float") || t.is("double") ||
                t.is("void"));
    }

    std::optional<TypeDesc> try_parse_type() {
        const std::size_t save = pos_;
        TypeDesc td;
        // Type-use annotations.
        while (cur().is("@") && peek().kind == TokenKind::identifier) {
            next();
            parse_qualified_name();
            if (cur().is("(")) {
                if (!skip_balanced_parens()) {
                    pos_ = save;
                    return std::nullopt;
                }
            }
        }
        if (is_primitive(cur())) {
            td.primitive = true;
            td.erased = cur().text;
            td.written = cur().text;
            next();
        } else if (cur().kind == TokenKind::identifier) {
            std::string simple = cur().text;
            td.written = cur().text;
            next();
            if (cur().is("<") && !try_parse_type_args()) {
                pos_ = save;
                return std::nullopt;
            }
            while (cur().is(".") && peek().kind == TokenKind::identifier) {
                next();
                simple = cur().text;
                td.written += "." + cur().text;
                next();
                if (cur().is("<") && !try_parse_type_args()) {
                    pos_ = save;
                    return std::nullopt;
                }
            }
            td.erased = simple;
        } else {
            return std::nullopt;
        }
        while (cur().is("[") && peek().is("]")) {
            next();
            next();
            td.erased += "[]";
            td.primitive = false;
        }
        return td;
    }

    bool try_parse_type_args() {
        const std::size_t save = pos_;
        if (!accept("<")) return false;
        if (accept(">")) return true;  // diamond
        while (true) {
            if (cur().is("?")) {
                next();
                if (cur().is_keyword("extends") || cur().is_keyword("super")) {
                    next();
                    if (!try_parse_type()) {
                        pos_ = save;
                        return false;
                    }
                }
            } else if (!try_parse_type()) {
                pos_ = save;
                return false;
            }
            if (accept(">")) return true;
            if (!accept(",")) {
                pos_ = save;
                return false;
            }
        }
    }

    // Skips a balanced token group starting at the current '('/'['/'{'.
    bool skip_balanced_parens() {
        int depth = 0;
        while (!at_end()) {
            const Token& t = cur();
            if (t.is("(") || t.is("[") || t.is("{")) ++depth;
            if (t.is(")") || t.is("]") || t.is("}")) {
                --depth;
                if (depth == 0) {
                    next();
                    return true;
                }
                if (depth < 0) return false;
            }
            next();
        }
        return false;
    }

    // Generic parameter section of a declaration: <T extends Foo & Bar, ...>.
    void parse_type_parameters() {
        expect("<");
        while (true) {
            expect_identifier("type parameter");
            if (cur().is_keyword("extends")) {
                next();
                do {
                    if (!try_parse_type()) fail("expected bound type");
                } while (accept("&"));
            }
            if (accept(">")) return;
            expect(",");
        }
    }

    // --- type declarations ---

    void parse_type_decl(const Modifiers& mods, const std::string& enclosing, bool register_type) {
        bool is_interface = false;
        if (cur().is_keyword("class") || cur().is_keyword("enum")) {
            is_interface = false;
        } else if (cur().is_keyword("interface")) {
            is_interface = true;
        } else if (cur().is("@") && peek().is_keyword("interface")) {
            next();
            is_interface = true;
        } else {
            fail("expected type declaration");
        }
        const bool is_enum = cur().is_keyword("enum");
        const bool is_annotation_decl = is_interface && prev().is("@");
        next();

        TypeUnit type;
        type.kind = is_interface ? TypeUnit::Kind::interface_kind : TypeUnit::Kind::class_kind;
        type.annotations = mods.annotations;
        const std::string simple = expect_identifier("type name");
        type.name = enclosing.empty() ? simple : enclosing + "." + simple;
        type.declaration_line = prev().line;
        type.line_span.start = mods.first_line ? mods.first_line : type.declaration_line;
        type.qualified_id =
            out_->package_name.empty() ? type.name : out_->package_name + "." + type.name;

        if (cur().is("<")) parse_type_parameters();

        if (cur().is_keyword("extends")) {
            next();
            auto td = try_parse_type();
            if (!td) fail("expected supertype");
            // For interfaces (which may extend several) the first one is kept
            // as the inheritance chain parent.
            type.superclass_name = td->written;
            while (is_interface && accept(",")) {
                if (!try_parse_type()) fail("expected supertype");
            }
        }
        if (cur().is_keyword("implements")) {
            next();
            do {
                if (!try_parse_type()) fail("expected interface type");
            } while (accept(","));
        }

        std::size_t index = 0;
        if (register_type) {
            index = out_->types.size();
            out_->types.push_back(TypeUnit{});
        }

        expect("{");
        if (is_enum) parse_enum_constants();
        parse_type_body(type, simple, is_annotation_decl);
        expect("}");
        type.line_span.end = prev().line;

        if (register_type)
            out_->types[index] = std::move(type);
    }

    // Enum constants up to the ';' (or the closing brace): NAME, NAME(args),
    // optionally with a constant class body, which is parsed and dropped.
    void parse_enum_constants() {
        while (!cur().is(";") && !cur().is("}")) {
            while (cur().is("@")) parse_annotation();
            expect_identifier("enum constant");
            if (cur().is("(")) {
                expect("(");
                if (!cur().is(")")) {
                    int unused = 0;
                    CounterGuard guard(this, &unused);
                    do parse_expression();
                    while (accept(","));
                }
                expect(")");
            }
            if (cur().is("{")) {
                TypeUnit scratch;
                expect("{");
                parse_type_body(scratch, "", false);
                expect("}");
            }
            if (!accept(",")) break;
        }
        accept(";");
    }

    void parse_type_body(TypeUnit& type, const std::string& simple_name, bool annotation_decl) {
        while (!cur().is("}") && !at_end()) {
            if (accept(";")) continue;
            Modifiers mods = parse_modifiers();

            // Initializer block (static or instance): parsed for syntax only.
            if (cur().is("{")) {
                std::vector<std::string> dropped;
                LocalsGuard locals(this, &dropped);
                parse_block();
                continue;
            }

            if (cur().is_keyword("class") || cur().is_keyword("interface") ||
                cur().is_keyword("enum") || (cur().is("@") && peek().is_keyword("interface"))) {
                parse_type_decl(mods, type.name, !type.name.empty());
                continue;
            }

            if (cur().is("<")) parse_type_parameters();

            // Constructor: the type's simple name immediately followed by '('.
            if (!simple_name.empty() && cur().kind == TokenKind::identifier &&
                cur().text == simple_name && peek().is("(")) {
                next();  // constructor name
                type.methods.push_back(parse_method_rest(mods, TypeDesc{}, simple_name,
                                                         /*constructor=*/true,
                                                         /*interface_member=*/false));
                continue;
            }

            auto td = try_parse_type();
            if (!td) fail("expected member declaration");

            if (cur().kind == TokenKind::identifier && peek().is("(")) {
                const std::string name = expect_identifier("method name");
                type.methods.push_back(parse_method_rest(mods, *td, name, false,
                                                         type.kind == TypeUnit::Kind::interface_kind,
                                                         annotation_decl));
                continue;
            }

            // Field declaration; interfaces' fields are implicitly static.
            const bool implicit_static = type.kind == TypeUnit::Kind::interface_kind;
            do {
                std::string name = expect_identifier("field name");
                while (cur().is("[") && peek().is("]")) {
                    next();
                    next();
                }
                type.attributes.push_back({name, mods.is_static || implicit_static});
                if (accept("=")) {
                    int unused = 0;
                    CounterGuard guard(this, &unused);
                    std::vector<std::string> dropped;
                    LocalsGuard locals(this, &dropped);
                    std::vector<StatementNode> orphan;
                    BlocksGuard blocks(this, &orphan);
                    if (cur().is("{"))
                        parse_array_initializer();
                    else
                        parse_expression();
                }
            } while (accept(","));
            expect(";");
        }
    }

    MethodUnit parse_method_rest(const Modifiers& mods, const TypeDesc& /*return_type*/,
                                 const std::string& name, bool constructor, bool interface_member,
                                 bool annotation_member = false) {
        MethodUnit m;
        m.name = name;
        m.is_constructor = constructor;
        m.is_static = mods.is_static;
        m.annotations = mods.annotations;
        m.declaration_line = prev().line;
        m.line_span.start = mods.first_line ? mods.first_line : m.declaration_line;
        for (const AnnotationNode& a : m.annotations)
            if (a.name == "Override" || a.name == "java.lang.Override") m.is_override = true;

        std::vector<std::string> param_types;
        expect("(");
        if (!cur().is(")")) {
            do {
                Modifiers pm = parse_modifiers();  // final + annotations
                (void)pm;
                auto td = try_parse_type();
                if (!td) fail("expected parameter type");
                std::string erased = td->erased;
                if (accept("...")) erased += "[]";
                if (cur().is_keyword("this")) {
                    next();  // receiver parameter; not a value parameter
                    continue;
                }
                std::string pname = expect_identifier("parameter name");
                while (cur().is("[") && peek().is("]")) {
                    next();
                    next();
                    erased += "[]";
                }
                param_types.push_back(erased);
                m.parameter_names.push_back(std::move(pname));
            } while (accept(","));
        }
        expect(")");

        while (cur().is("[") && peek().is("]")) {
            next();
            next();
        }
        if (cur().is_keyword("throws")) {
            next();
            do {
                if (!try_parse_type()) fail("expected exception type");
            } while (accept(","));
        }
        if (annotation_member && cur().is_keyword("default")) {
            next();
            int unused = 0;
            CounterGuard guard(this, &unused);
            std::vector<StatementNode> orphan;
            BlocksGuard blocks(this, &orphan);
            std::vector<std::string> dropped;
            LocalsGuard locals(this, &dropped);
            if (cur().is("{"))
                parse_array_initializer();
            else
                parse_expression();
        }

        m.signature = m.name + "(";
        for (std::size_t i = 0; i < param_types.size(); ++i)
            m.signature += (i ? "," : "") + param_types[i];
        m.signature += ")";

        if (cur().is("{")) {
            m.body_open_offset = cur().offset;
            LocalsGuard locals(this, &m.local_declarations);
            m.body = parse_block();
            m.body_close_offset = prev().offset;
        } else {
            expect(";");
            (void)interface_member;
        }
        m.line_span.end = prev().line;
        return m;
    }

    // --- statements ---

    // RAII binders for the per-statement boolean-operator counter, the
    // pending attached blocks, and the enclosing method's local name list.
    struct CounterGuard {
        Parser* p;
        int* saved;
        CounterGuard(Parser* p, int* counter) : p(p), saved(p->bool_ops_) { p->bool_ops_ = counter; }
        ~CounterGuard() { p->bool_ops_ = saved; }
    };
    struct BlocksGuard {
        Parser* p;
        std::vector<StatementNode>* saved;
        BlocksGuard(Parser* p, std::vector<StatementNode>* sink) : p(p), saved(p->pending_blocks_) {
            p->pending_blocks_ = sink;
        }
        ~BlocksGuard() { p->pending_blocks_ = saved; }
    };
    struct LocalsGuard {
        Parser* p;
        std::vector<std::string>* saved;
        LocalsGuard(Parser* p, std::vector<std::string>* sink) : p(p), saved(p->locals_sink_) {
            p->locals_sink_ = sink;
        }
        ~LocalsGuard() { p->locals_sink_ = saved; }
    };

    void note_local(const std::string& name, StatementNode& node) {
        ++node.local_declarator_count;
        if (locals_sink_) locals_sink_->push_back(name);
    }

    StatementNode parse_block() {
        StatementNode node;
        node.kind = StatementKind::block;
        node.line_span.start = cur().line;
        expect("{");
        while (!cur().is("}") && !at_end()) node.children.push_back(parse_statement());
        expect("}");
        node.line_span.end = prev().line;
        return node;
    }

    StatementNode parse_statement() {
        StatementNode node;
        node.line_span.start = cur().line;
        std::vector<StatementNode> attached;
        {
            CounterGuard counter(this, &node.boolean_operator_count);
            BlocksGuard blocks(this, &attached);
            parse_statement_dispatch(node);
        }
        node.line_span.end = prev().line;
        for (StatementNode& b : attached) node.children.push_back(std::move(b));
        return node;
    }

    void parse_statement_dispatch(StatementNode& node) {
        const Token& t = cur();

        if (t.is("{")) {
            node = parse_block();
            return;
        }
        if (t.is(";")) {
            node.kind = StatementKind::expression;
            next();
            return;
        }
        if (t.is_keyword("if")) return parse_if(node);
        if (t.is_keyword("for")) return parse_for(node);
        if (t.is_keyword("while")) return parse_while(node);
        if (t.is_keyword("do")) return parse_do(node);
        if (t.is_keyword("switch")) return parse_switch(node);
        if (t.is_keyword("try")) return parse_try(node);
        if (t.is_keyword("synchronized")) return parse_synchronized(node);
        if (t.is_keyword("return")) {
            node.kind = StatementKind::return_stmt;
            next();
            if (!cur().is(";")) parse_expression();
            expect(";");
            return;
        }
        if (t.is_keyword("throw")) {
            node.kind = StatementKind::throw_stmt;
            next();
            parse_expression();
            expect(";");
            return;
        }
        if (t.is_keyword("break") || t.is_keyword("continue")) {
            node.kind = StatementKind::expression;
            next();
            if (cur().kind == TokenKind::identifier) next();
            expect(";");
            return;
        }
        if (t.is_keyword("assert")) {
            node.kind = StatementKind::expression;
            next();
            parse_expression();
            if (accept(":")) parse_expression();
            expect(";");
            return;
        }

        // Local type declaration: attributed to the enclosing method (same
        // rule as anonymous classes).
        {
            const std::size_t save = pos_;
            Modifiers mods = parse_modifiers();
            if (cur().is_keyword("class") || cur().is_keyword("interface") ||
                cur().is_keyword("enum")) {
                node.kind = StatementKind::expression;
                TypeUnit scratch;
                // Parse without registering; adopt the method bodies.
                parse_local_type(mods, scratch);
                for (MethodUnit& mm : scratch.methods)
                    if (mm.body) node.children.push_back(std::move(*mm.body));
                return;
            }
            pos_ = save;
        }

        // Labeled statement.
        if (t.kind == TokenKind::identifier && peek().is(":") && !peek().is("::")) {
            node.kind = StatementKind::labeled;
            next();
            next();
            node.children.push_back(parse_statement());
            return;
        }

        // Local variable declaration, speculatively.
        if (try_parse_local_var_decl(node)) return;

        node.kind = StatementKind::expression;
        parse_expression();
        expect(";");
    }

    void parse_local_type(const Modifiers& mods, TypeUnit& scratch) {
        // Same grammar as a member type, but the result is not registered.
        bool is_interface = cur().is_keyword("interface");
        bool is_enum = cur().is_keyword("enum");
        next();
        expect_identifier("type name");
        if (cur().is("<")) parse_type_parameters();
        if (cur().is_keyword("extends")) {
            next();
            do {
                if (!try_parse_type()) fail("expected supertype");
            } while (is_interface && accept(","));
        }
        if (cur().is_keyword("implements")) {
            next();
            do {
                if (!try_parse_type()) fail("expected interface type");
            } while (accept(","));
        }
        (void)mods;
        expect("{");
        if (is_enum) parse_enum_constants();
        parse_type_body(scratch, "", false);
        expect("}");
    }

    bool try_parse_local_var_decl(StatementNode& node) {
        const std::size_t save = pos_;
        parse_modifiers();  // final, annotations
        auto td = try_parse_type();
        if (!td || cur().kind != TokenKind::identifier ||
            !(peek().is("=") || peek().is(";") || peek().is(",") ||
              (peek().is("[") && peek(2).is("]")))) {
            pos_ = save;
            return false;
        }
        node.kind = StatementKind::local_var_decl;
        do {
            std::string name = expect_identifier("variable name");
            while (cur().is("[") && peek().is("]")) {
                next();
                next();
            }
            note_local(name, node);
            if (accept("=")) {
                if (cur().is("{"))
                    parse_array_initializer();
                else
                    parse_expression();
            }
        } while (accept(","));
        expect(";");
        return true;
    }

    void parse_if(StatementNode& node) {
        node.kind = StatementKind::if_stmt;
        next();
        expect("(");
        parse_expression();
        expect(")");
        node.children.push_back(parse_statement());
        if (cur().is_keyword("else")) {
            StatementNode branch;
            branch.kind = StatementKind::else_branch;
            branch.line_span.start = cur().line;
            next();
            branch.children.push_back(parse_statement());
            branch.line_span.end = prev().line;
            node.children.push_back(std::move(branch));
        }
    }

    void parse_while(StatementNode& node) {
        node.kind = StatementKind::while_stmt;
        next();
        expect("(");
        parse_expression();
        expect(")");
        node.children.push_back(parse_statement());
    }

    void parse_do(StatementNode& node) {
        node.kind = StatementKind::do_stmt;
        next();
        node.children.push_back(parse_statement());
        if (!cur().is_keyword("while")) fail("expected 'while' after do body");
        next();
        expect("(");
        parse_expression();
        expect(")");
        expect(";");
    }

    void parse_for(StatementNode& node) {
        next();
        expect("(");

        // Enhanced for: [final] Type name : expr
        {
            const std::size_t save = pos_;
            parse_modifiers();
            auto td = try_parse_type();
            if (td && cur().kind == TokenKind::identifier && peek().is(":") &&
                !peek().is("::")) {
                node.kind = StatementKind::enhanced_for;
                std::string name = expect_identifier("variable name");
                note_local(name, node);
                expect(":");
                parse_expression();
                expect(")");
                node.children.push_back(parse_statement());
                return;
            }
            pos_ = save;
        }

        node.kind = StatementKind::for_stmt;
        if (!cur().is(";")) {
            // Either a declaration or an expression list.
            const std::size_t save = pos_;
            parse_modifiers();
            auto td = try_parse_type();
            if (td && cur().kind == TokenKind::identifier &&
                (peek().is("=") || peek().is(",") || peek().is(";"))) {
                do {
                    std::string name = expect_identifier("variable name");
                    while (cur().is("[") && peek().is("]")) {
                        next();
                        next();
                    }
                    note_local(name, node);
                    if (accept("=")) {
                        if (cur().is("{"))
                            parse_array_initializer();
                        else
                            parse_expression();
                    }
                } while (accept(","));
            } else {
                pos_ = save;
                do parse_expression();
                while (accept(","));
            }
        }
        expect(";");
        if (!cur().is(";")) parse_expression();
        expect(";");
        if (!cur().is(")")) {
            do parse_expression();
            while (accept(","));
        }
        expect(")");
        node.children.push_back(parse_statement());
    }

    void parse_switch(StatementNode& node) {
        node.kind = StatementKind::switch_stmt;
        next();
        expect("(");
        parse_expression();
        expect(")");

        StatementNode body;
        body.kind = StatementKind::block;
        body.line_span.start = cur().line;
        expect("{");
        while (!cur().is("}") && !at_end()) {
            if (cur().is_keyword("case") || cur().is_keyword("default")) {
                StatementNode label;
                label.kind = StatementKind::case_label;
                label.line_span.start = cur().line;
                label.is_default_label = cur().is_keyword("default");
                next();
                {
                    CounterGuard counter(this, &label.boolean_operator_count);
                    if (!label.is_default_label) {
                        do parse_expression();
                        while (accept(","));
                    }
                }
                if (cur().is("->"))
                    fail("switch arrow labels are not supported");
                expect(":");
                label.line_span.end = prev().line;
                body.children.push_back(std::move(label));
                continue;
            }
            if (body.children.empty()) fail("statement before first switch label");
            StatementNode stmt = parse_statement();
            StatementNode& label = body.children.back();
            label.line_span.end = stmt.line_span.end;
            label.children.push_back(std::move(stmt));
        }
        expect("}");
        body.line_span.end = prev().line;
        node.children.push_back(std::move(body));
    }

    void parse_try(StatementNode& node) {
        node.kind = StatementKind::try_stmt;
        next();
        if (cur().is("(")) {
            next();
            while (!cur().is(")")) {
                const std::size_t save = pos_;
                parse_modifiers();
                auto td = try_parse_type();
                if (td && cur().kind == TokenKind::identifier && peek().is("=")) {
                    std::string name = expect_identifier("resource name");
                    note_local(name, node);
                    expect("=");
                    parse_expression();
                } else {
                    pos_ = save;
                    parse_expression();  // effectively-final resource reference
                }
                if (!accept(";")) break;
            }
            expect(")");
        }
        node.children.push_back(parse_block());
        while (cur().is_keyword("catch")) {
            StatementNode clause;
            clause.kind = StatementKind::catch_clause;
            clause.line_span.start = cur().line;
            next();
            expect("(");
            parse_modifiers();
            do {
                if (!try_parse_type()) fail("expected exception type");
            } while (accept("|"));
            expect_identifier("exception variable");  // a parameter, not a local
            expect(")");
            clause.children.push_back(parse_block());
            clause.line_span.end = prev().line;
            node.children.push_back(std::move(clause));
        }
        if (cur().is_keyword("finally")) {
            StatementNode clause;
            clause.kind = StatementKind::finally_clause;
            clause.line_span.start = cur().line;
            next();
            clause.children.push_back(parse_block());
            clause.line_span.end = prev().line;
            node.children.push_back(std::move(clause));
        }
    }

    void parse_synchronized(StatementNode& node) {
        node.kind = StatementKind::synchronized_stmt;
        next();
        expect("(");
        parse_expression();
        expect(")");
        node.children.push_back(parse_block());
    }

    void parse_array_initializer() {
        expect("{");
        while (!cur().is("}")) {
            if (cur().is("{"))
                parse_array_initializer();
            else
                parse_expression();
            if (!accept(",")) break;
        }
        expect("}");
    }

    // --- expressions ---

    void count_bool_op() {
        if (bool_ops_) ++*bool_ops_;
    }

    bool looks_like_paren_lambda() {
        if (!cur().is("(")) return false;
        std::size_t i = pos_;
        int depth = 0;
        while (i < toks_.size() && toks_[i].kind != TokenKind::end_of_file) {
            const Token& t = toks_[i];
            if (t.is("(")) ++depth;
            if (t.is(")")) {
                --depth;
                if (depth == 0) return i + 1 < toks_.size() && toks_[i + 1].is("->");
            }
            ++i;
        }
        return false;
    }

    void parse_lambda_after_params() {
        expect("->");
        if (cur().is("{")) {
            StatementNode body = parse_block();
            if (pending_blocks_) pending_blocks_->push_back(std::move(body));
        } else {
            parse_expression();
        }
    }

    void parse_paren_lambda() {
        expect("(");
        if (!cur().is(")")) {
            do {
                parse_modifiers();
                // Either "Type name" or just "name"; either way the last
                // identifier before ',' or ')' is the parameter.
                const std::size_t save = pos_;
                auto td = try_parse_type();
                if (td && cur().kind == TokenKind::identifier) {
                    next();
                    while (cur().is("[") && peek().is("]")) {
                        next();
                        next();
                    }
                } else {
                    pos_ = save;
                    expect_identifier("lambda parameter");
                }
            } while (accept(","));
        }
        expect(")");
        parse_lambda_after_params();
    }

    void parse_expression() {  // assignment level
        if (cur().kind == TokenKind::identifier && peek().is("->")) {
            next();
            parse_lambda_after_params();
            return;
        }
        if (looks_like_paren_lambda()) {
            parse_paren_lambda();
            return;
        }
        parse_ternary();
        static const char* kAssign[] = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<="};
        for (const char* op : kAssign)
            if (cur().is(op)) {
                next();
                parse_expression();
                return;
            }
        // Right-shift assignment arrives as '>' '>' '=' (or '>' '>' '>' '=').
        if (cur().is(">") && adjacent(cur(), peek()) && peek().is(">")) {
            std::size_t k = 2;
            if (peek(2).is(">") && adjacent(peek(), peek(2))) k = 3;
            if (peek(k).is("=") && adjacent(peek(k - 1), peek(k))) {
                for (std::size_t s = 0; s <= k; ++s) next();
                parse_expression();
            }
        }
    }

    void parse_ternary() {
        parse_or();
        if (cur().is("?")) {
            count_bool_op();
            next();
            parse_expression();
            expect(":");
            // The tail may itself be a lambda or a further conditional.
            if (cur().kind == TokenKind::identifier && peek().is("->")) {
                next();
                parse_lambda_after_params();
            } else if (looks_like_paren_lambda()) {
                parse_paren_lambda();
            } else {
                parse_ternary();
            }
        }
    }

    void parse_or() {
        parse_and();
        while (cur().is("||")) {
            count_bool_op();
            next();
            parse_and();
        }
    }

    void parse_and() {
        parse_bit_or();
        while (cur().is("&&")) {
            count_bool_op();
            next();
            parse_bit_or();
        }
    }

    void parse_bit_or() {
        parse_bit_xor();
        while (cur().is("|")) {
            next();
            parse_bit_xor();
        }
    }

    void parse_bit_xor() {
        parse_bit_and();
        while (cur().is("^")) {
            next();
            parse_bit_and();
        }
    }

    void parse_bit_and() {
        parse_equality();
        while (cur().is("&")) {
            next();
            parse_equality();
        }
    }

    void parse_equality() {
        parse_relational();
        while (cur().is("==") || cur().is("!=")) {
            next();
            parse_relational();
        }
    }

    void parse_relational() {
        parse_shift();
        while (true) {
            if (cur().is_keyword("instanceof")) {
                next();
                if (!try_parse_type()) fail("expected type after instanceof");
                if (cur().kind == TokenKind::identifier) next();  // pattern binding
                continue;
            }
            if (cur().is("<=")) {
                next();
                parse_shift();
                continue;
            }
            if (cur().is("<") ) {
                next();
                parse_shift();
                continue;
            }
            if (cur().is(">")) {
                // '>' '>' pairs belong to the shift level; a lone '>' or
                // '>' '=' is relational.
                if (adjacent(cur(), peek()) && peek().is(">")) break;
                if (adjacent(cur(), peek()) && peek().is("=")) {
                    next();
                    next();
                    parse_shift();
                    continue;
                }
                next();
                parse_shift();
                continue;
            }
            break;
        }
    }

    void parse_shift() {
        parse_additive();
        while (true) {
            if (cur().is("<<")) {
                next();
                parse_additive();
                continue;
            }
            if (cur().is(">") && adjacent(cur(), peek()) && peek().is(">")) {
                // >>' or '>>>'; assignment forms were handled above.
                if (peek(2).is("=") && adjacent(peek(), peek(2))) break;
                if (peek(2).is(">") && adjacent(peek(), peek(2))) {
                    if (peek(3).is("=") && adjacent(peek(2), peek(3))) break;
                    next();
                    next();
                    next();
                } else {
                    next();
                    next();
                }
                parse_additive();
                continue;
            }
            break;
        }
    }

    void parse_additive() {
        parse_multiplicative();
        while (cur().is("+") || cur().is("-")) {
            next();
            parse_multiplicative();
        }
    }

    void parse_multiplicative() {
        parse_unary();
        while (cur().is("*") || cur().is("/") || cur().is("%")) {
            next();
            parse_unary();
        }
    }

    bool starts_operand(const Token& t, bool allow_plus_minus) const {
        if (t.kind == TokenKind::identifier || t.kind == TokenKind::int_literal ||
            t.kind == TokenKind::float_literal || t.kind == TokenKind::char_literal ||
            t.kind == TokenKind::string_literal)
            return true;
        if (t.is("(") || t.is("!") || t.is("~")) return true;
        if (t.is_keyword("new") || t.is_keyword("this") || t.is_keyword("super") ||
            t.is_keyword("true") || t.is_keyword("false") || t.is_keyword("null"))
            return true;
        if (is_primitive(t)) return true;  // e.g. (Object) int.class
        if (allow_plus_minus && (t.is("+") || t.is("-") || t.is("++") || t.is("--"))) return true;
        return false;
    }

    void parse_unary() {
        if (cur().is("+") || cur().is("-") || cur().is("!") || cur().is("~") || cur().is("++") ||
            cur().is("--")) {
            next();
            parse_unary();
            return;
        }
        if (looks_like_paren_lambda()) {
            parse_paren_lambda();
            return;
        }
        // Cast, speculatively: '(' Type ')' followed by an operand.
        if (cur().is("(")) {
            const std::size_t save = pos_;
            next();
            auto td = try_parse_type();
            if (td && cur().is(")") && starts_operand(peek(), td->primitive)) {
                next();
                parse_unary();
                return;
            }
            pos_ = save;
        }
        parse_postfix();
    }

    void parse_postfix() {
        parse_primary();
        while (true) {
            if (cur().is(".")) {
                next();
                if (cur().is("<")) {
                    if (!try_parse_type_args()) fail("expected type arguments");
                    expect_identifier("method name");
                    continue;
                }
                if (cur().is_keyword("new")) {
                    parse_creation();
                    continue;
                }
                if (cur().is_keyword("this") || cur().is_keyword("super") ||
                    cur().is_keyword("class")) {
                    next();
                    continue;
                }
                expect_identifier("member name");
                continue;
            }
            if (cur().is("(")) {
                next();
                if (!cur().is(")")) {
                    do parse_expression();
                    while (accept(","));
                }
                expect(")");
                continue;
            }
            if (cur().is("[")) {
                next();
                parse_expression();
                expect("]");
                continue;
            }
            if (cur().is("::")) {
                next();
                if (cur().is("<")) {
                    if (!try_parse_type_args()) fail("expected type arguments");
                }
                if (cur().is_keyword("new"))
                    next();
                else
                    expect_identifier("method reference name");
                continue;
            }
            if (cur().is("++") || cur().is("--")) {
                next();
                continue;
            }
            break;
        }
    }

    void parse_primary() {
        const Token& t = cur();
        if (t.kind == TokenKind::int_literal || t.kind == TokenKind::float_literal ||
            t.kind == TokenKind::char_literal || t.kind == TokenKind::string_literal) {
            next();
            return;
        }
        if (t.is_keyword("true") || t.is_keyword("false") || t.is_keyword("null") ||
            t.is_keyword("this")) {
            next();
            return;
        }
        if (t.is_keyword("super")) {
            next();
            return;
        }
        if (t.is_keyword("new")) {
            parse_creation();
            return;
        }
        if (t.is("(")) {
            next();
            parse_expression();
            expect(")");
            return;
        }
        if (is_primitive(t)) {  // int.class, void.class, int[].class
            next();
            while (cur().is("[") && peek().is("]")) {
                next();
                next();
            }
            return;
        }
        if (t.kind == TokenKind::identifier) {
            next();
            return;
        }
        if (t.is_keyword("switch"))
            fail("switch expressions are not supported");
        fail("expected expression");
    }

    void parse_creation() {
        expect("new");
        if (cur().is("<")) {
            if (!try_parse_type_args()) fail("expected constructor type arguments");
        }
        auto td = try_parse_type();
        if (!td) fail("expected type after new");

        if (cur().is("[")) {
            while (cur().is("[")) {
                next();
                if (!cur().is("]")) parse_expression();
                expect("]");
            }
            if (cur().is("{")) parse_array_initializer();
            return;
        }
        if (cur().is("{")) {
            // new int[]{...}: the dims were consumed by the type parser.
            parse_array_initializer();
            return;
        }
        expect("(");
        if (!cur().is(")")) {
            do parse_expression();
            while (accept(","));
        }
        expect(")");
        if (cur().is("{")) {
            // Anonymous class: member code is attributed to the enclosing
            // statement through the pending block sink.
            TypeUnit scratch;
            next();
            parse_type_body(scratch, "", false);
            expect("}");
            if (pending_blocks_)
                for (MethodUnit& mm : scratch.methods)
                    if (mm.body) pending_blocks_->push_back(std::move(*mm.body));
        }
    }

    std::string_view src_;
    std::vector<Token> toks_;
    CompilationUnit* out_;
    std::size_t pos_ = 0;

    int* bool_ops_ = nullptr;
    std::vector<StatementNode>* pending_blocks_ = nullptr;
    std::vector<std::string>* locals_sink_ = nullptr;
};

}  // namespace

CompilationUnit parse_compilation_unit(std::string_view source_text, std::string file_path) {
    java::LexResult lexed = java::lex(source_text);

    CompilationUnit unit;
    unit.file_path = std::move(file_path);
    unit.source_text = std::string(source_text);
    unit.line_kinds = std::move(lexed.line_kinds);
    unit.token_positions.reserve(lexed.tokens.size());
    for (const Token& t : lexed.tokens)
        if (t.kind != TokenKind::end_of_file) unit.token_positions.push_back({t.offset, t.line});

    Parser parser(source_text, std::move(lexed.tokens), &unit);
    parser.parse_unit();

    // Qualify method ids now that the package and type names are final.
    for (TypeUnit& type : unit.types)
        for (MethodUnit& m : type.methods) m.qualified_id = type.qualified_id + "." + m.signature;
    return unit;
}

}  // namespace smellcheck
