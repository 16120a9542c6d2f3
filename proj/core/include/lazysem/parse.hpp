#pragma once

#include <string>
#include <string_view>

#include "lazysem/syntax.hpp"

namespace lazysem {

struct ParseError : Error {
    int line;
    int column;
    ParseError(std::string msg, int line_, int col_)
        : Error(std::move(msg)), line(line_), column(col_) {}
};

struct ParseOptions {
    // With desugaring enabled a general application f (g x) becomes
    // let a = g x in f a; otherwise it is a parse error.
    bool desugar_general_apps = false;
    bool* desugared_flag = nullptr;  // set when a let was introduced
};

// Grammar:
//   expr  ::= '\' var '.' expr | 'let' binds 'in' expr | chain
//   chain ::= atom { var | atom }      (application, left associative)
//   atom  ::= var | '(' expr ')'
//   binds ::= var '=' expr { ',' var '=' expr }
// '#' starts a comment running to end of line.
ExprPtr parse(std::string_view text, const ParseOptions& opts = {});

Heap parse_heap_text(std::string_view text, const ParseOptions& opts = {});

}  // namespace lazysem
