#include <doctest.h>

#include "lazysem/generate.hpp"
#include "lazysem/parse.hpp"
#include "lazysem/print.hpp"
#include "lazysem/syntax.hpp"

using namespace lazysem;

namespace {

const Name x{"x"}, y{"y"}, z{"z"}, b{"b"}, f{"f"}, w{"w"}, a{"a"}, i{"i"}, j{"j"};

// Test-only oracle: a nameless rendering where bound occurrences become
// binder distances and free occurrences stay names. Substituting a free
// name is then literal token replacement, with capture impossible by
// construction.
std::string db_sig(const ExprPtr& e, std::vector<Name>& binders,
                   const Name* from = nullptr, const Name* to = nullptr) {
    auto var_sig = [&](const Name& n) -> std::string {
        for (std::size_t k = binders.size(); k-- > 0;)
            if (binders[k] == n) return "#" + std::to_string(binders.size() - 1 - k);
        if (from && n == *from) return "f:" + to->str();
        return "f:" + n.str();
    };
    if (auto* v = as_var(e)) return var_sig(v->name);
    if (auto* l = as_lam(e)) {
        binders.push_back(l->binder);
        std::string s = "(\\." + db_sig(l->body, binders, from, to) + ")";
        binders.pop_back();
        return s;
    }
    if (auto* ap = as_app(e))
        return "(" + db_sig(ap->fun, binders, from, to) + " " + var_sig(ap->arg) + ")";
    auto* lt = as_let(e);
    for (const auto& [n, rhs] : lt->bindings) binders.push_back(n);
    std::string s = "(let" + std::to_string(lt->bindings.size());
    for (const auto& [n, rhs] : lt->bindings) s += " " + db_sig(rhs, binders, from, to);
    s += " in " + db_sig(lt->body, binders, from, to) + ")";
    for (std::size_t k = 0; k < lt->bindings.size(); ++k) binders.pop_back();
    return s;
}

std::string db_sig(const ExprPtr& e) {
    std::vector<Name> binders;
    return db_sig(e, binders);
}

std::string db_sig_renamed(const ExprPtr& e, const Name& from, const Name& to) {
    std::vector<Name> binders;
    return db_sig(e, binders, &from, &to);
}

GeneratedCase gen(std::uint64_t idx, GenMode mode = GenMode::WithEnv) {
    GenConfig cfg;
    cfg.seed = 7;
    return gen_config(cfg, idx, mode);
}

}  // namespace

TEST_SUITE("syntax") {

TEST_CASE("parse examples") {
    CHECK(alpha_eq(parse("\\x. x"), make_lam(x, make_var(x))));
    ExprPtr letb = parse("let b = b in b");
    auto* lt = as_let(letb);
    REQUIRE(lt != nullptr);
    CHECK(lt->bindings.size() == 1);
    CHECK(lt->bindings[0].first == b);
    CHECK(as_var(lt->bindings[0].second)->name == b);
    CHECK(as_var(lt->body)->name == b);

    ExprPtr ap = parse("(\\x. x) y");
    auto* app = as_app(ap);
    REQUIRE(app != nullptr);
    CHECK(app->arg == y);
    CHECK(as_lam(app->fun) != nullptr);
}

TEST_CASE("parse reports positions and general applications") {
    CHECK_THROWS_AS(parse("let b = in b"), ParseError);
    try {
        parse("f (\\z. z)");
        FAIL("expected a general-application error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("general application") != std::string::npos);
        CHECK(std::string(e.what()).find("let") != std::string::npos);
        CHECK(e.line == 1);
        CHECK(e.column == 3);
    }
    ParseOptions desugar;
    desugar.desugar_general_apps = true;
    bool flagged = false;
    desugar.desugared_flag = &flagged;
    ExprPtr e = parse("f (\\z. z)", desugar);
    CHECK(flagged);
    CHECK(as_let(e) != nullptr);
    // Comments and application associativity.
    CHECK(print_expr(parse("f x y # trailing comment")) == "f x y");
    CHECK(alpha_eq(parse("f x y"), make_app(make_app(make_var(f), x), y)));
}

TEST_CASE("desugar_app") {
    ExprPtr id = make_lam(x, make_var(x));
    CHECK(alpha_eq(desugar_app(id, make_var(y), {}), make_app(id, y)));
    ExprPtr d = desugar_app(make_var(f), make_lam(z, make_var(z)), {});
    auto* lt = as_let(d);
    REQUIRE(lt != nullptr);
    CHECK(lt->bindings.size() == 1);
    Name fresh_arg = lt->bindings[0].first;
    CHECK(alpha_eq(lt->bindings[0].second, make_lam(z, make_var(z))));
    CHECK(alpha_eq(lt->body, make_app(make_var(f), fresh_arg)));
    CHECK(alpha_eq(desugar_app(make_var(f), make_var(f), {}), make_app(make_var(f), f)));
}

TEST_CASE("subst examples") {
    CHECK(alpha_eq(subst(make_var(y), x, y), make_var(x)));
    ExprPtr idy = make_lam(y, make_var(y));
    CHECK(subst(idy, x, y) == idy);  // bound occurrences untouched, sharing kept
    // Capture: the binder must be renamed.
    ExprPtr e = subst(make_lam(x, make_var(y)), x, y);
    auto* l = as_lam(e);
    REQUIRE(l != nullptr);
    CHECK(l->binder != x);
    CHECK(as_var(l->body)->name == x);
}

TEST_CASE("subst agrees with the nameless oracle") {
    for (std::uint64_t idx = 0; idx < 400; ++idx) {
        GeneratedCase c = gen(idx);
        NameSet fv = free_vars(c.expr);
        std::vector<Name> frees(fv.begin(), fv.end());
        Name from = frees.empty() ? y : frees[idx % frees.size()];
        Name to = idx % 3 == 0 ? from : (idx % 3 == 1 || frees.empty() ? x : frees.front());
        ExprPtr got = subst(c.expr, to, from);
        CHECK(db_sig(got) == db_sig_renamed(c.expr, from, to));
    }
}

TEST_CASE("subst leaves untouched expressions alone") {
    for (std::uint64_t idx = 0; idx < 200; ++idx) {
        GeneratedCase c = gen(idx);
        Name outside{"outside"};
        CHECK(subst(c.expr, x, outside) == c.expr);
        NameSet fv = free_vars(c.expr);
        for (const Name& n : fv) {
            NameSet got = free_vars(subst(c.expr, outside, n));
            NameSet want = fv;
            want.erase(n);
            want.insert(outside);
            CHECK(got == want);
        }
    }
}

TEST_CASE("free_vars examples") {
    CHECK(free_vars(make_lam(x, make_var(x))).empty());
    CHECK(free_vars(make_let({{b, make_var(b)}}, make_var(b))).empty());
    NameSet fx = free_vars(make_app(make_var(f), x));
    CHECK(fx == NameSet{f, x});
}

TEST_CASE("fresh picks the smallest unused suffix") {
    CHECK(fresh(NameSet{x}, x) == Name("x", 1));
    CHECK(fresh(NameSet{}, w) == w);
    CHECK(fresh(NameSet{w, Name("w", 1)}, w) == Name("w", 2));
    for (std::uint64_t idx = 0; idx < 100; ++idx) {
        GeneratedCase c = gen(idx);
        NameSet avoid = all_names(c.expr);
        CHECK(avoid.count(fresh(avoid, x)) == 0);
    }
}

TEST_CASE("alpha_eq examples and laws") {
    CHECK(alpha_eq(make_lam(x, make_var(x)), make_lam(y, make_var(y))));
    CHECK_FALSE(alpha_eq(make_lam(x, make_var(x)), make_lam(y, make_var(x))));
    CHECK(alpha_eq(make_let({{a, make_var(a)}}, make_var(a)),
                   make_let({{b, make_var(b)}}, make_var(b))));
    // Equivalence relation on generated terms, using hygienic renaming as
    // the second representative.
    for (std::uint64_t idx = 0; idx < 150; ++idx) {
        GeneratedCase c = gen(idx);
        ExprPtr e1 = c.expr;
        NameSet forbid = all_names(e1);
        ExprPtr e2 = hygienize(e1, forbid);  // renames clashing binders
        CHECK(alpha_eq(e1, e1));
        CHECK(alpha_eq(e1, e2));
        CHECK(alpha_eq(e2, e1));
        ExprPtr e3 = hygienize(e2, all_names(e2));
        if (alpha_eq(e1, e2) && alpha_eq(e2, e3)) CHECK(alpha_eq(e1, e3));
    }
}

TEST_CASE("heap_alpha_eq") {
    ExprPtr id = make_lam(x, make_var(x));
    Heap h1, h2;
    h1.insert(i, id);
    h2.insert(j, id);
    CHECK(heap_alpha_eq(h1, id, h2, id, {}));
    CHECK(heap_alpha_eq(Heap{}, id, Heap{}, make_lam(y, make_var(y)), {}));
    Heap h3, h4;
    ExprPtr ida = make_lam(a, make_var(a));
    h3.insert(x, ida);
    h4.insert(x, ida);
    h4.insert(w, ida);
    CHECK_FALSE(heap_alpha_eq(h3, ida, h4, ida, NameSet{x}));
    // Protected names must not be renamed.
    Heap h5, h6;
    h5.insert(x, id);
    h6.insert(y, id);
    CHECK(heap_alpha_eq(h5, id, h6, id, {}));
    CHECK_FALSE(heap_alpha_eq(h5, id, h6, id, NameSet{x}));
    // Cross-references must map consistently.
    Heap g1, g2;
    g1.insert(i, make_app(id, i));
    g1.insert(j, id);
    g2.insert(j, make_app(id, j));
    g2.insert(i, id);
    CHECK(heap_alpha_eq(g1, id, g2, id, {}));
}

TEST_CASE("print examples") {
    CHECK(print_expr(make_lam(x, make_var(x))) == "\\x. x");
    CHECK(print_expr(make_let({{b, make_var(b)}}, make_var(b))) == "let b = b in b");
    CHECK(print_expr(make_app(make_var(f), x)) == "f x");
    Heap h;
    h.insert(i, make_lam(x, make_var(x)));
    CHECK(heap_print(h) == "{i = \\x. x}");
    CHECK(heap_print(Heap{}) == "{}");
}

TEST_CASE("parse after print is the identity") {
    for (std::uint64_t idx = 0; idx < 500; ++idx) {
        GeneratedCase c = gen(idx);
        std::string text = print_expr(c.expr);
        ExprPtr back = parse(text);
        CHECK(print_expr(back) == text);
        CHECK(db_sig(back) == db_sig(c.expr));
        CHECK(alpha_eq(back, c.expr));
    }
    // Suffixed names survive the round trip.
    ExprPtr e = make_lam(Name("x", 12), make_var(Name("x", 12)));
    CHECK(print_expr(parse(print_expr(e))) == print_expr(e));
}

TEST_CASE("heap text files") {
    Heap h = parse_heap_text("# a comment\n x = \\a. a\n\n y = x\n");
    CHECK(h.size() == 2);
    CHECK(alpha_eq(*h.lookup(x), make_lam(a, make_var(a))));
    CHECK(as_var(*h.lookup(y))->name == x);
    CHECK_THROWS_AS(parse_heap_text("x = a\nx = b\n"), ParseError);
}

TEST_CASE("heap insert rejects duplicates") {
    Heap h;
    h.insert(x, make_var(y));
    CHECK_THROWS_AS(h.insert(x, make_var(z)), Error);
    CHECK_THROWS_AS(make_let({{b, make_var(b)}, {b, make_var(b)}}, make_var(b)), Error);
}

}  // TEST_SUITE
