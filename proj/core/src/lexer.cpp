#include "lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace smellcheck::java {

namespace {

const std::unordered_set<std::string_view> kKeywords = {
    "abstract", "assert",     "boolean",  "break",      "byte",      "case",   "catch",
    "char",     "class",      "const",    "continue",   "default",   "do",     "double",
    "else",     "enum",       "extends",  "final",      "finally",   "float",  "for",
    "goto",     "if",         "implements", "import",   "instanceof", "int",   "interface",
    "long",     "native",     "new",      "package",    "private",   "protected",
    "public",   "return",     "short",    "static",     "strictfp",  "super",  "switch",
    "synchronized", "this",   "throw",    "throws",     "transient", "try",    "void",
    "volatile", "while",      "true",     "false",      "null",
};

// Multi-character operators, longest first. Combinations beginning with '>'
// are deliberately absent: '>' is always lexed alone so the parser can close
// nested type arguments one bracket at a time, and it reassembles >>, >=, >>>
// from adjacent tokens when parsing expressions.
const std::array<std::string_view, 26> kOperators = {
    "<<=", "...", "->", "::", "==", "!=", "<=", "<<", "&&", "||", "++", "--",
    "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^=", "=",  "!",  "<",  "+",
    "-",   "*",
};

bool is_ident_start(unsigned char c) {
    return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_part(unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80;
}

bool is_digit(unsigned char c) { return std::isdigit(c); }

}  // namespace

bool is_java_keyword(std::string_view word) { return kKeywords.count(word) > 0; }

LexResult lex(std::string_view src) {
    LexResult out;
    std::size_t i = 0;
    int line = 1;
    int col = 1;

    std::vector<bool> has_code(1, false), has_comment(1, false);
    auto ensure_line = [&](int l) {
        while (static_cast<int>(has_code.size()) < l) {
            has_code.push_back(false);
            has_comment.push_back(false);
        }
    };
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
                ensure_line(line);
            } else {
                ++col;
            }
        }
    };
    ensure_line(1);

    auto push = [&](TokenKind kind, std::size_t start, std::size_t len, int tl, int tc) {
        out.tokens.push_back({kind, std::string(src.substr(start, len)), tl, tc, start});
        has_code[tl - 1] = true;
    };

    while (i < src.size()) {
        const unsigned char c = src[i];
        const int tl = line, tc = col;

        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f') {
            advance(1);
            continue;
        }

        // Comments
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
            has_comment[line - 1] = true;
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
            has_comment[line - 1] = true;
            advance(2);
            bool closed = false;
            while (i < src.size()) {
                if (src[i] == '*' && i + 1 < src.size() && src[i + 1] == '/') {
                    has_comment[line - 1] = true;
                    advance(2);
                    closed = true;
                    break;
                }
                has_comment[line - 1] = true;
                advance(1);
            }
            if (!closed) throw SyntaxError(tl, tc, "unterminated block comment");
            continue;
        }

        // Identifiers and keywords
        if (is_ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && is_ident_part(static_cast<unsigned char>(src[j]))) ++j;
            const std::string_view word = src.substr(i, j - i);
            push(kKeywords.count(word) ? TokenKind::keyword : TokenKind::identifier, i, j - i, tl,
                 tc);
            advance(j - i);
            continue;
        }

        // Numeric literals (integer/floating with underscores, radix prefixes,
        // exponents and suffixes; precise classification is not needed).
        if (is_digit(c) || (c == '.' && i + 1 < src.size() && is_digit(src[i + 1]))) {
            std::size_t j = i;
            bool is_float = (c == '.');
            if (src[j] == '0' && j + 1 < src.size() && (src[j + 1] == 'x' || src[j + 1] == 'X')) {
                j += 2;
                while (j < src.size() && (std::isxdigit(static_cast<unsigned char>(src[j])) ||
                                          src[j] == '_'))
                    ++j;
            } else if (src[j] == '0' && j + 1 < src.size() &&
                       (src[j + 1] == 'b' || src[j + 1] == 'B')) {
                j += 2;
                while (j < src.size() && (src[j] == '0' || src[j] == '1' || src[j] == '_')) ++j;
            } else {
                while (j < src.size() && (is_digit(src[j]) || src[j] == '_')) ++j;
                if (j < src.size() && src[j] == '.') {
                    is_float = true;
                    ++j;
                    while (j < src.size() && (is_digit(src[j]) || src[j] == '_')) ++j;
                }
                if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                    is_float = true;
                    ++j;
                    if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
                    while (j < src.size() && is_digit(src[j])) ++j;
                }
            }
            if (j < src.size() && (src[j] == 'f' || src[j] == 'F' || src[j] == 'd' || src[j] == 'D')) {
                is_float = true;
                ++j;
            } else if (j < src.size() && (src[j] == 'l' || src[j] == 'L')) {
                ++j;
            }
            push(is_float ? TokenKind::float_literal : TokenKind::int_literal, i, j - i, tl, tc);
            advance(j - i);
            continue;
        }

        // String literals
        if (c == '"') {
            if (src.substr(i, 3) == "\"\"\"")
                throw SyntaxError(tl, tc, "text blocks are not supported");
            std::size_t j = i + 1;
            while (j < src.size() && src[j] != '"') {
                if (src[j] == '\n') throw SyntaxError(tl, tc, "unterminated string literal");
                if (src[j] == '\\') ++j;
                ++j;
            }
            if (j >= src.size()) throw SyntaxError(tl, tc, "unterminated string literal");
            push(TokenKind::string_literal, i, j + 1 - i, tl, tc);
            advance(j + 1 - i);
            continue;
        }

        // Char literals
        if (c == '\'') {
            std::size_t j = i + 1;
            while (j < src.size() && src[j] != '\'') {
                if (src[j] == '\n') throw SyntaxError(tl, tc, "unterminated char literal");
                if (src[j] == '\\') ++j;
                ++j;
            }
            if (j >= src.size()) throw SyntaxError(tl, tc, "unterminated char literal");
            push(TokenKind::char_literal, i, j + 1 - i, tl, tc);
            advance(j + 1 - i);
            continue;
        }

        // Multi-character operators (longest match), then single punctuation.
        bool matched = false;
        for (const std::string_view op : kOperators) {
            if (src.substr(i, op.size()) == op) {
                push(TokenKind::punct, i, op.size(), tl, tc);
                advance(op.size());
                matched = true;
                break;
            }
        }
        if (matched) continue;

        if (std::string_view("(){}[];,.@?:>/%^&|~=").find(static_cast<char>(c)) !=
            std::string_view::npos) {
            push(TokenKind::punct, i, 1, tl, tc);
            advance(1);
            continue;
        }

        throw SyntaxError(tl, tc, std::string("unexpected character '") + static_cast<char>(c) + "'");
    }

    out.tokens.push_back({TokenKind::end_of_file, "", line, col, src.size()});

    out.line_kinds.resize(has_code.size());
    for (std::size_t l = 0; l < has_code.size(); ++l)
        out.line_kinds[l] =
            has_code[l] ? LineKind::code : (has_comment[l] ? LineKind::comment : LineKind::blank);
    return out;
}

}  // namespace smellcheck::java
