#include <doctest.h>

#include "lazysem/denotational.hpp"
#include "lazysem/generate.hpp"
#include "lazysem/natural.hpp"
#include "lazysem/parse.hpp"

using namespace lazysem;

namespace {

const Name x{"x"}, z{"z"}, a{"a"};

DomElem identity_at(int rank) {
    return fn_make(rank, [](const DomElem& v) { return v; });
}

DomElem const_at(int rank, const DomElem& c) {
    return fn_make(rank, [&](const DomElem&) { return c; });
}

GeneratedCase gen(std::uint64_t idx, GenMode mode, int rank = 3) {
    GenConfig cfg;
    cfg.seed = 5;
    cfg.rank = rank;
    return gen_config(cfg, idx, mode);
}

Env heap_functional_once(const Heap& h, const Env& rho, const Env& at, int rank, HeapVariant v) {
    Env bound(rank);
    for (const auto& [n, e] : h.bindings()) bound.set(n, den_expr(e, at, rank, v));
    return v == HeapVariant::Join ? env_lub(rho, bound) : env_update(rho, bound, h.domain());
}

}  // namespace

TEST_SUITE("denotational") {

TEST_CASE("den_expr basics") {
    Env bot2(2);
    CHECK(den_expr(make_var(x), bot2, 2, HeapVariant::Join).is_bot());
    CHECK(den_expr(parse("\\x. x"), bot2, 2, HeapVariant::Join) == identity_at(2));
    CHECK(den_expr(parse("\\x. x"), bot2, 2, HeapVariant::Update) == identity_at(2));
    // The counterexample value denotes Fn(\_ . Bot) in every environment.
    ExprPtr v = parse("\\a. let b = b in b");
    DomElem expect = const_at(3, DomElem::bot(2));
    for (std::uint64_t idx = 0; idx < 40; ++idx) {
        GeneratedCase c = gen(idx, GenMode::WithEnv);
        CHECK(den_expr(v, c.env, 3, HeapVariant::Join) == expect);
    }
}

TEST_CASE("den_heap on the published configuration") {
    ExprPtr v = parse("\\a. let b = b in b");
    Heap heap;
    heap.insert(x, v);
    Env rho(3);
    rho.set(x, const_at(3, identity_at(2)));
    Env join = den_heap(heap, rho, 3, HeapVariant::Join);
    CHECK(join.get(x) == const_at(3, identity_at(2)));
    Env upd = den_heap(heap, rho, 3, HeapVariant::Update);
    CHECK(upd.get(x) == const_at(3, DomElem::bot(2)));
    // Empty heap: the environment unchanged.
    CHECK(den_heap({}, rho, 3, HeapVariant::Join) == rho);
    CHECK(den_heap({}, rho, 3, HeapVariant::Update) == rho);
}

TEST_CASE("preceq") {
    Heap packed, unfolded;
    packed.insert(z, parse("let a = \\q. q in a"));
    unfolded.insert(a, parse("\\q. q"));
    unfolded.insert(z, make_var(a));
    Env bot2(2);
    CHECK(preceq(packed, bot2, packed, bot2, 2, HeapVariant::Join));  // reflexive
    CHECK(preceq(packed, bot2, unfolded, bot2, 2, HeapVariant::Join));
    CHECK_FALSE(preceq(unfolded, bot2, packed, bot2, 2, HeapVariant::Join));  // dom shrinks

    // Transitivity along let-unfolding and fresh-extension chains.
    Heap extended = unfolded;
    extended.insert(x, parse("\\q. q"));
    CHECK(preceq(unfolded, bot2, extended, bot2, 2, HeapVariant::Join));
    CHECK(preceq(packed, bot2, extended, bot2, 2, HeapVariant::Join));
}

TEST_CASE("observe") {
    DomElem u = const_at(3, identity_at(2));
    CHECK(observe(u, 3) == u);
    CHECK(observe(u, 1) == enumerate(1)[1]);
    CHECK(observe(DomElem::bot(3), 0) == DomElem::bot(0));
}

TEST_CASE("den_eq_stable verdicts") {
    auto stable_id = [](int rk) { return identity_at(rk); };
    StableResult eq = den_eq_stable(stable_id, stable_id, 2, {3, 4});
    CHECK(eq.verdict == Stable::Equal);

    // The counterexample sides (computed in check_counterexample too).
    ExprPtr v = parse("\\a. let b = b in b");
    Heap heap;
    heap.insert(x, v);
    auto lhs = [&](int rk) {
        Env rho(rk);
        rho.set(x, const_at(rk, identity_at(rk - 1)));
        return den_expr(make_var(x), den_heap(heap, rho, rk, HeapVariant::Join), rk,
                        HeapVariant::Join);
    };
    auto rhs = [&](int rk) {
        Env rho(rk);
        rho.set(x, const_at(rk, identity_at(rk - 1)));
        return den_expr(v, den_heap(heap, rho, rk, HeapVariant::Join), rk, HeapVariant::Join);
    };
    StableResult ne = den_eq_stable(lhs, rhs, 2, {3, 4});
    CHECK(ne.verdict == Stable::NotEqual);
    CHECK(ne.detail == "apply to Bot: Fn vs Bot");

    // A pair still growing between ranks is inconclusive by construction.
    auto growing = [](int rk) {
        return rk == 3 ? DomElem::bot(3) : embed(const_at(3, DomElem::bot(2)));
    };
    StableResult inc = den_eq_stable(growing, growing, 2, {3, 4});
    CHECK(inc.verdict == Stable::Inconclusive);
}

TEST_CASE("fixed-point equations hold exactly at each rank") {
    for (std::uint64_t idx = 0; idx < 120; ++idx) {
        GeneratedCase c = gen(idx, GenMode::WithEnv);
        for (HeapVariant v : {HeapVariant::Join, HeapVariant::Update}) {
            Env sigma = den_heap(c.heap, c.env, 3, v);
            CHECK(heap_functional_once(c.heap, c.env, sigma, 3, v) == sigma);
        }
    }
}

TEST_CASE("variant agreement on expressions") {
    for (std::uint64_t idx = 0; idx < 150; ++idx) {
        GeneratedCase c = gen(idx, GenMode::WithEnv);
        CHECK(den_expr(c.expr, c.env, 3, HeapVariant::Join) ==
              den_expr(c.expr, c.env, 3, HeapVariant::Update));
    }
}

TEST_CASE("beta reduction only loses to rounding") {
    int hits = 0;
    for (std::uint64_t idx = 0; idx < 300; ++idx) {
        GeneratedCase c = gen(idx, GenMode::WithEnv);
        if (!as_app(c.expr)) continue;
        auto* ap = as_app(c.expr);
        if (!as_lam(ap->fun)) continue;
        auto* l = as_lam(ap->fun);
        ++hits;
        for (int rank = 2; rank <= 3; ++rank) {
            Env rho = rank == 3 ? c.env : Env(2);
            DomElem app_den = den_expr(c.expr, rho, rank, HeapVariant::Join);
            DomElem sub_den =
                den_expr(subst(l->body, ap->arg, l->binder), rho, rank, HeapVariant::Join);
            CHECK(leq(app_den, sub_den));
        }
    }
    CHECK(hits > 3);
}

TEST_CASE("rank monotonicity of denotations") {
    for (std::uint64_t idx = 0; idx < 150; ++idx) {
        GeneratedCase c = gen(idx, GenMode::WithEnv);
        for (int rank = 2; rank <= 3; ++rank) {
            Env lo = rank == 3 ? c.env : Env(2);
            DomElem at_rank = den_expr(c.expr, lo, rank, HeapVariant::Join);
            DomElem above = den_expr(c.expr, env_embed(lo), rank + 1, HeapVariant::Join);
            CHECK(leq(at_rank, project(above)));
        }
    }
}

TEST_CASE("monotonicity in the environment") {
    for (std::uint64_t idx = 0; idx < 120; ++idx) {
        GeneratedCase c = gen(idx, GenMode::WithEnv);
        Env bigger = c.env;
        Rng rng(idx * 77 + 1);
        for (const Name& n : c.env.dom())
            bigger.set(n, lub(bigger.get(n), gen_elem(rng, 3)));
        REQUIRE(env_leq(c.env, bigger));
        CHECK(leq(den_expr(c.expr, c.env, 3, HeapVariant::Join),
                  den_expr(c.expr, bigger, 3, HeapVariant::Join)));
    }
}

TEST_CASE("join variant refines the environment") {
    for (std::uint64_t idx = 0; idx < 120; ++idx) {
        GeneratedCase c = gen(idx, GenMode::WithEnv);
        CHECK(env_leq(c.env, den_heap(c.heap, c.env, 3, HeapVariant::Join)));
    }
}

TEST_CASE("binder collisions are renamed away") {
    // \x. x with an environment that already binds x: the binder must not
    // pick up the outer value.
    Env rho(2);
    rho.set(x, const_at(2, DomElem::bot(1)));
    CHECK(den_expr(parse("\\x. x"), rho, 2, HeapVariant::Join) == identity_at(2));
    // let x = \q. q in x under the same environment: the inner binding wins
    // in the update variant and joins in the join variant.
    ExprPtr e = parse("let x = \\q. q in x");
    CHECK(den_expr(e, rho, 2, HeapVariant::Update) == identity_at(2));
    CHECK(den_expr(e, rho, 2, HeapVariant::Join) ==
          lub(identity_at(2), const_at(2, DomElem::bot(1))));
    CHECK_THROWS_AS(den_expr(parse("\\x. x"), rho, 5, HeapVariant::Join), Error);
}

TEST_CASE("evaluation preserves empty-environment denotations on samples") {
    int checked = 0;
    for (std::uint64_t idx = 0; idx < 200 && checked < 60; ++idx) {
        GeneratedCase c = gen(idx, GenMode::Closed);
        NatResult r = eval_nat(c.heap, c.expr, {}, 64);
        if (!r.ok()) continue;
        ++checked;
        Env bot3(3);
        DomElem before = den_expr(c.expr, den_heap(c.heap, bot3, 3, HeapVariant::Join), 3,
                                  HeapVariant::Join);
        DomElem after = den_expr(r.value, den_heap(r.heap, bot3, 3, HeapVariant::Join), 3,
                                 HeapVariant::Join);
        CHECK(leq(before, after));
    }
    CHECK(checked == 60);
}

}  // TEST_SUITE
