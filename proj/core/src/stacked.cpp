#include "lazysem/stacked.hpp"

namespace lazysem {

bool Stack::contains(const Name& n) const {
    for (const auto& [k, e] : frames_)
        if (k == n) return true;
    return false;
}

NameSet Stack::names() const {
    NameSet s;
    for (const auto& [k, e] : frames_) s.insert(k);
    return s;
}

Stack Stack::with_top_expr(ExprPtr e) const {
    Stack s = *this;
    s.frames_.front().second = std::move(e);
    return s;
}

Stack Stack::pushed(Name n, ExprPtr e) const {
    Stack s;
    s.frames_.reserve(frames_.size() + 1);
    s.frames_.emplace_back(std::move(n), std::move(e));
    s.frames_.insert(s.frames_.end(), frames_.begin(), frames_.end());
    return s;
}

Stack Stack::popped() const {
    Stack s;
    s.frames_.assign(frames_.begin() + 1, frames_.end());
    return s;
}

namespace {

struct EvalCtx {
    NameSet avoid;
    unsigned fuel;
    unsigned used = 0;
};

struct Partial {
    Outcome outcome;
    Heap heap;
    Stack stack;
    Name culprit;
    StackedTrace trace;
};

Partial failure(Outcome o, Name culprit = {}) {
    Partial p;
    p.outcome = o;
    p.culprit = std::move(culprit);
    return p;
}

// Shared with the natural evaluator in spirit; duplicated here because
// the threading context differs.
void freshen_let(const Let& let, EvalCtx& ctx, std::vector<std::pair<Name, ExprPtr>>& out,
                 ExprPtr& body) {
    NameSet local = ctx.avoid;
    for (const auto& [n, rhs] : let.bindings) local.insert(n);
    std::vector<std::pair<Name, Name>> renames;
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

Partial eval(const Heap& heap, const Stack& stack, EvalCtx& ctx) {
    if (ctx.fuel == 0) return failure(Outcome::Diverged);
    --ctx.fuel;
    ++ctx.used;

    const auto& [z, e] = stack.top();
    if (is_value(e)) {
        Partial p;
        p.outcome = Outcome::Success;
        p.heap = heap;
        p.stack = stack;
        p.trace = StackedTrace{Rule::Lam, heap, stack, heap, stack, {}};
        return p;
    }
    if (auto* a = as_app(e)) {
        Name w = fresh(ctx.avoid, Name{"w"});
        ctx.avoid.insert(w);
        Stack premise = stack.with_top_expr(make_app(make_var(w), a->arg)).pushed(w, a->fun);
        Partial fun = eval(heap, premise, ctx);
        if (fun.outcome != Outcome::Success) return fun;
        auto* lam = as_lam(fun.stack.top().second);
        ExprPtr next = subst_avoiding(lam->body, a->arg, lam->binder, ctx.avoid);
        Stack cont = fun.stack.popped().with_top_expr(std::move(next));
        Partial res = eval(fun.heap, cont, ctx);
        if (res.outcome != Outcome::Success) return res;
        Partial p;
        p.outcome = Outcome::Success;
        p.heap = res.heap;
        p.stack = res.stack;
        p.trace = StackedTrace{Rule::App, heap, stack, res.heap, res.stack,
                               {std::move(fun.trace), std::move(res.trace)}};
        return p;
    }
    if (auto* v = as_var(e)) {
        const ExprPtr* bound = heap.lookup(v->name);
        if (!bound) {
            // A frame named x means x is currently under evaluation.
            return stack.contains(v->name) ? failure(Outcome::Blackhole, v->name)
                                           : failure(Outcome::UnboundVar, v->name);
        }
        ExprPtr rhs = *bound;
        Heap inner = heap;
        inner.erase(v->name);
        Stack premise = stack.pushed(v->name, std::move(rhs));
        Partial res = eval(inner, premise, ctx);
        if (res.outcome != Outcome::Success) return res;
        SynValue value = res.stack.top().second;
        Heap updated = res.heap;
        updated.insert(v->name, value);
        Stack out = res.stack.popped().with_top_expr(value);
        Partial p;
        p.outcome = Outcome::Success;
        p.heap = updated;
        p.stack = out;
        p.trace =
            StackedTrace{Rule::Var, heap, stack, updated, out, {std::move(res.trace)}};
        return p;
    }
    auto* lt = as_let(e);
    std::vector<std::pair<Name, ExprPtr>> bs;
    ExprPtr body;
    freshen_let(*lt, ctx, bs, body);
    Heap extended = heap;
    for (auto& [n, rhs] : bs) extended.insert(n, std::move(rhs));
    Partial res = eval(extended, stack.with_top_expr(std::move(body)), ctx);
    if (res.outcome != Outcome::Success) return res;
    Partial p;
    p.outcome = Outcome::Success;
    p.heap = res.heap;
    p.stack = res.stack;
    p.trace = StackedTrace{Rule::Let, heap, stack, res.heap, res.stack, {std::move(res.trace)}};
    return p;
}

}  // namespace

StackResult eval_stacked(const Heap& heap, const Stack& stack, const NameSet& avoid,
                         unsigned fuel) {
    if (stack.empty()) throw Error("eval_stacked: empty stack");
    EvalCtx ctx;
    ctx.avoid = avoid;
    ctx.fuel = fuel;
    for (const auto& [n, e] : heap.bindings()) {
        ctx.avoid.insert(n);
        for (const Name& m : free_vars(e)) ctx.avoid.insert(m);
    }
    for (const auto& [n, e] : stack.frames()) {
        ctx.avoid.insert(n);
        for (const Name& m : free_vars(e)) ctx.avoid.insert(m);
    }
    Partial p = eval(heap, stack, ctx);
    StackResult r;
    r.outcome = p.outcome;
    r.fuel_used = ctx.used;
    if (p.outcome == Outcome::Success) {
        r.heap = std::move(p.heap);
        r.stack = std::move(p.stack);
        r.trace = std::move(p.trace);
    } else {
        r.culprit = std::move(p.culprit);
    }
    return r;
}

namespace {

// Rules correspond one to one between the two figures, so a stacked
// derivation projects to a big-step derivation by reading the topmost
// frame of each judgment.
DerivTrace project_trace(const StackedTrace& t) {
    DerivTrace d;
    d.rule = t.rule;
    d.in_heap = t.in_heap;
    d.in_expr = t.in_stack.top().second;
    d.out_heap = t.out_heap;
    d.out_value = t.out_stack.top().second;
    for (const auto& c : t.children) d.children.push_back(project_trace(c));
    return d;
}

}  // namespace

NatResult run_via_stack(const Heap& heap, const ExprPtr& expr, const NameSet& avoid,
                        unsigned fuel) {
    NameSet used = avoid;
    for (const auto& [n, e] : heap.bindings()) {
        used.insert(n);
        for (const Name& m : free_vars(e)) used.insert(m);
    }
    for (const Name& n : free_vars(expr)) used.insert(n);
    Name z = fresh(used, Name{"z"});
    used.insert(z);

    StackResult s = eval_stacked(heap, Stack{{{z, expr}}}, used, fuel);
    NatResult r;
    r.outcome = s.outcome;
    r.fuel_used = s.fuel_used;
    if (s.outcome == Outcome::Success) {
        r.heap = std::move(s.heap);
        r.value = s.stack.top().second;
        if (s.trace) r.trace = project_trace(*s.trace);
    } else {
        r.culprit = std::move(s.culprit);
    }
    return r;
}

}  // namespace lazysem
