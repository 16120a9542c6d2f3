#include "lazysem/parse.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace lazysem {

namespace {

enum class Tok { Lambda, Dot, LParen, RParen, Comma, Equals, KwLet, KwIn, Ident, End };

struct Token {
    Tok kind;
    Name name;  // Ident only
    int line;
    int column;
};

struct Lexer {
    std::string_view src;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }

    void bump(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos < src.size(); ++i) {
            if (src[pos] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
        }
    }

    // Subscript digits U+2080..U+2089 encode the fresh-name suffix.
    std::optional<int> subscript_digit() const {
        if (pos + 2 >= src.size()) return std::nullopt;
        auto b0 = static_cast<unsigned char>(src[pos]);
        auto b1 = static_cast<unsigned char>(src[pos + 1]);
        auto b2 = static_cast<unsigned char>(src[pos + 2]);
        if (b0 == 0xE2 && b1 == 0x82 && b2 >= 0x80 && b2 <= 0x89) return b2 - 0x80;
        return std::nullopt;
    }

    Token next() {
        for (;;) {
            while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) bump();
            if (pos < src.size() && src[pos] == '#') {
                while (pos < src.size() && src[pos] != '\n') bump();
                continue;
            }
            break;
        }
        Token t;
        t.line = line;
        t.column = col;
        if (pos >= src.size()) {
            t.kind = Tok::End;
            return t;
        }
        char c = src[pos];
        switch (c) {
            case '\\': bump(); t.kind = Tok::Lambda; return t;
            case '.': bump(); t.kind = Tok::Dot; return t;
            case '(': bump(); t.kind = Tok::LParen; return t;
            case ')': bump(); t.kind = Tok::RParen; return t;
            case ',': bump(); t.kind = Tok::Comma; return t;
            case '=': bump(); t.kind = Tok::Equals; return t;
            default: break;
        }
        if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected character");
        std::string text;
        while (pos < src.size()) {
            char d = src[pos];
            if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
                text += d;
                bump();
            } else {
                break;
            }
        }
        std::optional<std::uint32_t> suffix;
        if (subscript_digit()) {
            std::uint64_t v = 0;
            while (auto d = subscript_digit()) {
                v = v * 10 + static_cast<std::uint64_t>(*d);
                bump(3);
            }
            suffix = static_cast<std::uint32_t>(v);
        }
        if (text == "let") {
            t.kind = Tok::KwLet;
        } else if (text == "in") {
            t.kind = Tok::KwIn;
        } else {
            t.kind = Tok::Ident;
            t.name = Name{std::move(text)};
            t.name.suffix = suffix;
        }
        return t;
    }
};

struct Parser {
    std::vector<Token> toks;
    std::size_t i = 0;
    ParseOptions opts;

    const Token& peek() const { return toks[i]; }
    Token take() { return toks[i++]; }

    [[noreturn]] void fail(const std::string& msg, const Token& at) {
        throw ParseError(msg, at.line, at.column);
    }

    Name expect_ident(const char* what) {
        Token t = take();
        if (t.kind != Tok::Ident) fail(std::string("expected ") + what, t);
        return t.name;
    }

    void expect(Tok k, const char* what) {
        Token t = take();
        if (t.kind != k) fail(std::string("expected ") + what, t);
    }

    bool starts_atom(Tok k) const {
        return k == Tok::Ident || k == Tok::LParen || k == Tok::Lambda || k == Tok::KwLet;
    }

    ExprPtr apply(ExprPtr fun, const Token& arg_tok, ExprPtr arg) {
        if (auto* v = as_var(arg)) return make_app(std::move(fun), v->name);
        if (!opts.desugar_general_apps)
            fail("general application: the argument must be a variable "
                 "(pre-process to `let x = arg in fun x`)",
                 arg_tok);
        if (opts.desugared_flag) *opts.desugared_flag = true;
        NameSet avoid;  // desugar_app avoids the free names of both sides
        return desugar_app(fun, arg, avoid);
    }

    ExprPtr expr() {
        const Token& t = peek();
        if (t.kind == Tok::Lambda) {
            take();
            Name binder = expect_ident("binder after '\\'");
            expect(Tok::Dot, "'.' after lambda binder");
            return make_lam(std::move(binder), expr());
        }
        if (t.kind == Tok::KwLet) {
            take();
            std::vector<std::pair<Name, ExprPtr>> bs;
            for (;;) {
                Name n = expect_ident("binding name");
                expect(Tok::Equals, "'=' in let binding");
                bs.emplace_back(std::move(n), expr());
                if (peek().kind == Tok::Comma) {
                    take();
                    continue;
                }
                break;
            }
            Token tin = take();
            if (tin.kind != Tok::KwIn) fail("expected 'in' after let bindings", tin);
            NameSet seen;
            for (const auto& [n, e] : bs)
                if (!seen.insert(n).second)
                    fail("duplicate let binding '" + n.str() + "'", tin);
            return make_let(std::move(bs), expr());
        }
        return chain();
    }

    ExprPtr chain() {
        ExprPtr e = atom();
        while (starts_atom(peek().kind)) {
            Token at = peek();
            ExprPtr arg = (at.kind == Tok::Lambda || at.kind == Tok::KwLet) ? expr() : atom();
            e = apply(std::move(e), at, std::move(arg));
        }
        return e;
    }

    ExprPtr atom() {
        Token t = take();
        if (t.kind == Tok::Ident) return make_var(t.name);
        if (t.kind == Tok::LParen) {
            ExprPtr e = expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        fail("expected an expression", t);
    }
};

std::vector<Token> lex(std::string_view text) {
    Lexer lx{text};
    std::vector<Token> out;
    for (;;) {
        out.push_back(lx.next());
        if (out.back().kind == Tok::End) break;
    }
    return out;
}

}  // namespace

ExprPtr parse(std::string_view text, const ParseOptions& opts) {
    Parser p{lex(text), 0, opts};
    ExprPtr e = p.expr();
    const Token& t = p.peek();
    if (t.kind != Tok::End) throw ParseError("trailing input after expression", t.line, t.column);
    return e;
}

Heap parse_heap_text(std::string_view text, const ParseOptions& opts) {
    Heap h;
    std::size_t start = 0;
    int lineno = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        std::string_view raw =
            text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        ++lineno;
        std::string_view ln = raw;
        if (auto hash = ln.find('#'); hash != std::string_view::npos) ln = ln.substr(0, hash);
        while (!ln.empty() && std::isspace(static_cast<unsigned char>(ln.back()))) ln.remove_suffix(1);
        while (!ln.empty() && std::isspace(static_cast<unsigned char>(ln.front()))) ln.remove_prefix(1);
        if (!ln.empty()) {
            auto eq = ln.find('=');
            if (eq == std::string_view::npos)
                throw ParseError("heap line must look like `name = expr`", lineno, 1);
            std::string_view lhs = ln.substr(0, eq);
            while (!lhs.empty() && std::isspace(static_cast<unsigned char>(lhs.back())))
                lhs.remove_suffix(1);
            ExprPtr nm = parse(lhs);
            auto* v = as_var(nm);
            if (!v) throw ParseError("heap binding name must be a variable", lineno, 1);
            ExprPtr e = parse(ln.substr(eq + 1), opts);
            if (h.contains(v->name))
                throw ParseError("duplicate heap binding '" + v->name.str() + "'", lineno, 1);
            h.insert(v->name, std::move(e));
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return h;
}

}  // namespace lazysem
