#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "smellcheck/source_model.hpp"

namespace smellcheck::java {

enum class TokenKind {
    identifier,
    keyword,
    int_literal,
    float_literal,
    char_literal,
    string_literal,
    punct,
    end_of_file,
};

struct Token {
    TokenKind kind = TokenKind::end_of_file;
    std::string text;
    int line = 1;
    int column = 1;
    std::size_t offset = 0;

    bool is(std::string_view t) const { return text == t; }
    bool is_keyword(std::string_view t) const { return kind == TokenKind::keyword && text == t; }
};

struct LexResult {
    std::vector<Token> tokens;  // comments stripped; terminated by end_of_file
    std::vector<LineKind> line_kinds;
};

// Tokenizes Java source. Comments never become tokens but do feed the
// per-line classification. Throws SyntaxError on malformed input.
LexResult lex(std::string_view source);

bool is_java_keyword(std::string_view word);

}  // namespace smellcheck::java
