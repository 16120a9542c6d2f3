#include "lazysem/natural.hpp"

namespace lazysem {

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Success: return "success";
        case Outcome::Diverged: return "diverged";
        case Outcome::Blackhole: return "blackhole";
        case Outcome::UnboundVar: return "unbound";
    }
    return "?";
}

const char* rule_name(Rule r) {
    switch (r) {
        case Rule::Lam: return "Lam";
        case Rule::App: return "App";
        case Rule::Var: return "Var";
        case Rule::Let: return "Let";
    }
    return "?";
}

namespace {

struct EvalCtx {
    NameSet avoid;      // grows over the whole derivation
    NameSet under_eval; // names removed by an enclosing Var rule
    unsigned fuel;
    unsigned used = 0;
};

struct Partial {
    Outcome outcome;
    Heap heap;
    SynValue value;
    Name culprit;
    DerivTrace trace;
};

Partial failure(Outcome o, Name culprit = {}) {
    Partial p;
    p.outcome = o;
    p.culprit = std::move(culprit);
    return p;
}

// Renames the let binders against the threaded avoid set. Returns the
// final names together with the renamed right-hand sides and body.
void freshen_let(const Let& let, EvalCtx& ctx, std::vector<std::pair<Name, ExprPtr>>& out,
                 ExprPtr& body) {
    NameSet local = ctx.avoid;
    for (const auto& [n, rhs] : let.bindings) local.insert(n);
    std::vector<std::pair<Name, Name>> renames;  // old -> new
    std::vector<Name> final_names;
    for (const auto& [n, rhs] : let.bindings) {
        if (ctx.avoid.count(n)) {
            Name fresh_name = fresh(local, n);
            local.insert(fresh_name);
            ctx.avoid.insert(fresh_name);
            renames.emplace_back(n, fresh_name);
            final_names.push_back(fresh_name);
        } else {
            ctx.avoid.insert(n);
            final_names.push_back(n);
        }
    }
    std::vector<ExprPtr> rhss;
    for (const auto& [n, rhs] : let.bindings) rhss.push_back(rhs);
    body = let.body;
    for (const auto& [from, to] : renames) {
        for (auto& rhs : rhss) rhs = subst_avoiding(rhs, to, from, ctx.avoid);
        body = subst_avoiding(body, to, from, ctx.avoid);
    }
    out.clear();
    for (std::size_t i = 0; i < rhss.size(); ++i)
        out.emplace_back(final_names[i], std::move(rhss[i]));
}

Partial eval(const Heap& heap, const ExprPtr& expr, EvalCtx& ctx) {
    if (ctx.fuel == 0) return failure(Outcome::Diverged);
    --ctx.fuel;
    ++ctx.used;

    if (is_value(expr)) {
        Partial p;
        p.outcome = Outcome::Success;
        p.heap = heap;
        p.value = expr;
        p.trace = DerivTrace{Rule::Lam, heap, expr, heap, expr, {}};
        return p;
    }
    if (auto* a = as_app(expr)) {
        Partial fun = eval(heap, a->fun, ctx);
        if (fun.outcome != Outcome::Success) return fun;
        auto* lam = as_lam(fun.value);
        ExprPtr next = subst_avoiding(lam->body, a->arg, lam->binder, ctx.avoid);
        Partial res = eval(fun.heap, next, ctx);
        if (res.outcome != Outcome::Success) return res;
        Partial p;
        p.outcome = Outcome::Success;
        p.heap = res.heap;
        p.value = res.value;
        p.trace = DerivTrace{Rule::App, heap, expr, res.heap, res.value,
                             {std::move(fun.trace), std::move(res.trace)}};
        return p;
    }
    if (auto* v = as_var(expr)) {
        const ExprPtr* bound = heap.lookup(v->name);
        if (!bound) {
            return ctx.under_eval.count(v->name) ? failure(Outcome::Blackhole, v->name)
                                                 : failure(Outcome::UnboundVar, v->name);
        }
        ExprPtr e = *bound;
        Heap inner = heap;
        inner.erase(v->name);
        ctx.under_eval.insert(v->name);
        Partial res = eval(inner, e, ctx);
        ctx.under_eval.erase(v->name);
        if (res.outcome != Outcome::Success) return res;
        Heap updated = res.heap;
        updated.insert(v->name, res.value);
        Partial p;
        p.outcome = Outcome::Success;
        p.heap = updated;
        p.value = res.value;
        p.trace =
            DerivTrace{Rule::Var, heap, expr, updated, res.value, {std::move(res.trace)}};
        return p;
    }
    auto* lt = as_let(expr);
    std::vector<std::pair<Name, ExprPtr>> bs;
    ExprPtr body;
    freshen_let(*lt, ctx, bs, body);
    Heap extended = heap;
    for (auto& [n, rhs] : bs) extended.insert(n, std::move(rhs));
    Partial res = eval(extended, body, ctx);
    if (res.outcome != Outcome::Success) return res;
    Partial p;
    p.outcome = Outcome::Success;
    p.heap = res.heap;
    p.value = res.value;
    p.trace = DerivTrace{Rule::Let, heap, expr, res.heap, res.value, {std::move(res.trace)}};
    return p;
}

}  // namespace

NatResult eval_nat(const Heap& heap, const ExprPtr& expr, const NameSet& avoid, unsigned fuel) {
    EvalCtx ctx;
    ctx.avoid = avoid;
    ctx.fuel = fuel;
    for (const auto& [n, e] : heap.bindings()) {
        ctx.avoid.insert(n);
        for (const Name& m : free_vars(e)) ctx.avoid.insert(m);
    }
    for (const Name& n : free_vars(expr)) ctx.avoid.insert(n);

    Partial p = eval(heap, expr, ctx);
    NatResult r;
    r.outcome = p.outcome;
    r.fuel_used = ctx.used;
    if (p.outcome == Outcome::Success) {
        r.heap = std::move(p.heap);
        r.value = std::move(p.value);
        r.trace = std::move(p.trace);
    } else {
        r.culprit = std::move(p.culprit);
    }
    return r;
}

}  // namespace lazysem
