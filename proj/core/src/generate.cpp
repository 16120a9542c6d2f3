#include "lazysem/generate.hpp"

#include <algorithm>

namespace lazysem {

void GenConfig::validate() const {
    if (rank < 1 || rank > 4) throw Error("GenConfig: rank must be in [1, 4]");
    if (max_expr_size < 1 || max_heap_bindings < 0 || fuel < 1 || cases < 1)
        throw Error("GenConfig: bounds must be at least 1");
}

std::uint64_t Rng::next() {
    s_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

std::uint64_t case_seed(const GenConfig& cfg, std::uint64_t case_index, std::uint64_t salt) {
    Rng r(cfg.seed ^ (salt * 0xd6e8feb86659fd93ull));
    r.next();
    std::uint64_t a = r.next() ^ (case_index * 0xa0761d6478bd642full);
    Rng r2(a);
    return r2.next();
}

namespace {

const char* kHeapNames[] = {"f", "g", "h", "k", "p", "q", "r", "s"};
const char* kEnvNames[] = {"u", "v"};
const char* kBinderNames[] = {"a", "b", "c", "d", "m", "n"};

Name pick(Rng& rng, const std::vector<Name>& pool) {
    return pool[static_cast<std::size_t>(rng.below(pool.size()))];
}

struct BinderSupply {
    NameSet* used;
    int cursor = 0;

    Name take(Rng& rng) {
        Name base{kBinderNames[static_cast<std::size_t>(rng.below(6))]};
        Name n = fresh(*used, base);
        used->insert(n);
        return n;
    }
};

ExprPtr gen_expr_impl(Rng& rng, std::vector<Name>& scope, int budget, int lam_depth,
                      BinderSupply& supply) {
    if (budget <= 1) {
        if (!scope.empty()) return make_var(pick(rng, scope));
        Name b = supply.take(rng);
        return make_lam(b, make_var(b));
    }
    // Feasibility-weighted choice between the four constructors.
    int w_var = scope.empty() ? 0 : 30;
    int w_app = scope.empty() ? 0 : 28;
    int w_lam = lam_depth >= 3 ? 2 : (budget >= 2 ? 22 : 0);
    int w_let = budget >= 3 ? 18 : 0;
    int total = w_var + w_app + w_lam + w_let;
    if (total == 0) {
        Name b = supply.take(rng);
        return make_lam(b, make_var(b));
    }
    int roll = static_cast<int>(rng.below(static_cast<std::uint64_t>(total)));
    if (roll < w_var) return make_var(pick(rng, scope));
    roll -= w_var;
    if (roll < w_app) {
        Name arg = pick(rng, scope);
        ExprPtr fun = gen_expr_impl(rng, scope, budget - 1, lam_depth, supply);
        return make_app(std::move(fun), std::move(arg));
    }
    roll -= w_app;
    if (roll < w_lam) {
        Name b = supply.take(rng);
        scope.push_back(b);
        ExprPtr body = gen_expr_impl(rng, scope, budget - 1, lam_depth + 1, supply);
        scope.pop_back();
        return make_lam(std::move(b), std::move(body));
    }
    int k = budget >= 5 && rng.chance(30) ? 2 : 1;
    std::vector<Name> binders;
    for (int i = 0; i < k; ++i) binders.push_back(supply.take(rng));
    for (const Name& b : binders) scope.push_back(b);
    int remaining = budget - 1;
    std::vector<std::pair<Name, ExprPtr>> bs;
    for (int i = 0; i < k; ++i) {
        int share = std::max(1, static_cast<int>(rng.below(
                                    static_cast<std::uint64_t>(remaining - (k - i)))) );
        remaining -= share;
        bs.emplace_back(binders[static_cast<std::size_t>(i)],
                        gen_expr_impl(rng, scope, share, lam_depth, supply));
    }
    ExprPtr body = gen_expr_impl(rng, scope, std::max(1, remaining), lam_depth, supply);
    for (int i = 0; i < k; ++i) scope.pop_back();
    return make_let(std::move(bs), std::move(body));
}

}  // namespace

ExprPtr gen_expr(Rng& rng, std::vector<Name> scope, int budget, NameSet& used) {
    BinderSupply supply{&used};
    return gen_expr_impl(rng, scope, budget, 0, supply);
}

DomElem gen_elem(Rng& rng, int rank) {
    int roll = static_cast<int>(rng.below(100));
    if (roll < 30) return DomElem::bot(rank);
    if (roll < 55) return fn_make(rank, [](const DomElem& v) { return v; });
    if (roll < 80 || rank > kMaxEnumRank) {
        const auto& below = enumerate(rank - 1);
        DomElem c = below[static_cast<std::size_t>(rng.below(below.size()))];
        return fn_make(rank, [&](const DomElem&) { return c; });
    }
    const auto& all = enumerate(rank);
    return all[static_cast<std::size_t>(rng.below(all.size()))];
}

GeneratedCase gen_config(const GenConfig& cfg, std::uint64_t case_index, GenMode mode) {
    cfg.validate();
    Rng rng(case_seed(cfg, case_index, static_cast<std::uint64_t>(mode) + 1));

    GeneratedCase out;
    out.env = Env(cfg.rank);
    NameSet used;

    int nheap = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.max_heap_bindings) + 1));
    std::vector<Name> heap_names;
    for (int i = 0; i < nheap; ++i) {
        Name n{kHeapNames[static_cast<std::size_t>(i)]};
        heap_names.push_back(n);
        used.insert(n);
    }

    // Environment values first: a name mapped to bottom is not in dom(rho),
    // so only the kept entries may appear free in generated expressions.
    if (mode == GenMode::WithEnv) {
        for (const Name& n : heap_names)
            if (rng.chance(45)) out.env.set(n, gen_elem(rng, cfg.rank));
        if (rng.chance(35) || out.env.dom().empty()) {
            Name extra{kEnvNames[static_cast<std::size_t>(rng.below(2))]};
            used.insert(extra);
            out.env.set(extra, gen_elem(rng, cfg.rank));
        }
        if (out.env.dom().empty()) {
            // The update-correctness suite wants a nontrivial environment.
            Name extra{kEnvNames[0]};
            used.insert(extra);
            out.env.set(extra, fn_make(cfg.rank, [](const DomElem& u) { return u; }));
        }
    } else if (mode == GenMode::Equivalence && rng.chance(25)) {
        Name extra{kEnvNames[0]};
        used.insert(extra);
        out.env.set(extra, fn_make(cfg.rank, [](const DomElem& u) { return u; }));
    }

    std::vector<Name> scope = heap_names;
    for (const Name& n : out.env.dom())
        if (std::find(scope.begin(), scope.end(), n) == scope.end()) scope.push_back(n);

    BinderSupply supply{&used};
    for (const Name& n : heap_names) {
        int budget = 1 + static_cast<int>(rng.below(
                             static_cast<std::uint64_t>(std::max(1, cfg.max_expr_size / 2))));
        std::vector<Name> s = scope;
        out.heap.insert(n, gen_expr_impl(rng, s, budget, 0, supply));
    }
    int budget = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.max_expr_size)));
    {
        std::vector<Name> s = scope;
        out.expr = gen_expr_impl(rng, s, budget, 0, supply);
    }
    return out;
}

bool validate_case(const GeneratedCase& c, GenMode mode, std::string* why) {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    NameSet heap_dom = c.heap.domain();
    if (heap_dom.size() != c.heap.size()) return fail("duplicate heap names");
    NameSet scope = heap_dom;
    for (const Name& n : c.env.dom()) scope.insert(n);
    for (const Name& n : free_vars(c.expr))
        if (!scope.count(n)) return fail("free variable " + n.str() + " out of scope");
    for (const auto& [n, e] : c.heap.bindings())
        for (const Name& m : free_vars(e))
            if (!scope.count(m)) return fail("heap rhs free variable out of scope");
    NameSet binders;
    auto collect = [&](const ExprPtr& e) {
        for (const Name& b : binder_list(e)) {
            if (!binders.insert(b).second) return fail("duplicate binder " + b.str());
            if (scope.count(b)) return fail("binder collides with heap/env name");
        }
        return true;
    };
    if (!collect(c.expr)) return false;
    for (const auto& [n, e] : c.heap.bindings())
        if (!collect(e)) return false;
    if (mode == GenMode::Closed && !c.env.dom().empty()) return fail("closed mode has env");
    return true;
}

std::size_t expr_size(const ExprPtr& e) {
    if (as_var(e)) return 1;
    if (auto* l = as_lam(e)) return 1 + expr_size(l->body);
    if (auto* a = as_app(e)) return 1 + expr_size(a->fun);
    auto* lt = as_let(e);
    std::size_t n = 1 + expr_size(lt->body);
    for (const auto& [nm, rhs] : lt->bindings) n += expr_size(rhs);
    return n;
}

std::size_t case_size(const GeneratedCase& c) {
    std::size_t n = expr_size(c.expr) + c.env.bindings().size();
    for (const auto& [nm, e] : c.heap.bindings()) n += 1 + expr_size(e);
    return n;
}

namespace {

void collect_subexprs(const ExprPtr& e, std::vector<ExprPtr>& out) {
    if (as_var(e)) return;
    if (auto* l = as_lam(e)) {
        out.push_back(l->body);
        collect_subexprs(l->body, out);
    } else if (auto* a = as_app(e)) {
        out.push_back(a->fun);
        collect_subexprs(a->fun, out);
    } else {
        auto* lt = as_let(e);
        out.push_back(lt->body);
        collect_subexprs(lt->body, out);
        for (const auto& [n, rhs] : lt->bindings) {
            out.push_back(rhs);
            collect_subexprs(rhs, out);
        }
    }
}

}  // namespace

GeneratedCase shrink_case(GeneratedCase failing,
                          const std::function<bool(const GeneratedCase&)>& still_fails) {
    auto scope_of = [](const GeneratedCase& c) {
        NameSet s = c.heap.domain();
        for (const Name& n : c.env.dom()) s.insert(n);
        return s;
    };
    bool progress = true;
    int rounds = 0;
    while (progress && rounds++ < 64) {
        progress = false;
        NameSet scope = scope_of(failing);

        // Drop heap bindings whose name nothing else needs.
        for (std::size_t i = 0; i < failing.heap.size() && !progress; ++i) {
            const Name& n = failing.heap.bindings()[i].first;
            GeneratedCase cand = failing;
            cand.heap.erase(n);
            NameSet cscope = scope_of(cand);
            bool wf = true;
            for (const Name& m : free_vars(cand.expr)) wf = wf && cscope.count(m);
            for (const auto& [k, e] : cand.heap.bindings())
                for (const Name& m : free_vars(e)) wf = wf && cscope.count(m);
            if (wf && still_fails(cand)) {
                failing = std::move(cand);
                progress = true;
            }
        }
        // Drop env entries that are not load-bearing for scoping.
        for (const Name& n : failing.env.dom()) {
            if (progress) break;
            if (!failing.heap.contains(n)) {
                bool referenced = free_vars(failing.expr).count(n) > 0;
                for (const auto& [k, e] : failing.heap.bindings())
                    referenced = referenced || free_vars(e).count(n) > 0;
                if (referenced) continue;
            }
            GeneratedCase cand = failing;
            cand.env.set(n, DomElem::bot(cand.env.rank()));
            if (still_fails(cand)) {
                failing = std::move(cand);
                progress = true;
            }
        }
        // Replace the main expression by a well-scoped subexpression.
        if (!progress) {
            std::vector<ExprPtr> subs;
            collect_subexprs(failing.expr, subs);
            for (const ExprPtr& s : subs) {
                bool wf = true;
                for (const Name& m : free_vars(s)) wf = wf && scope.count(m);
                if (!wf) continue;
                GeneratedCase cand = failing;
                cand.expr = s;
                if (still_fails(cand)) {
                    failing = std::move(cand);
                    progress = true;
                    break;
                }
            }
        }
        // Same inside heap right-hand sides.
        if (!progress) {
            for (std::size_t i = 0; i < failing.heap.size() && !progress; ++i) {
                const auto& [n, rhs] = failing.heap.bindings()[i];
                std::vector<ExprPtr> subs;
                collect_subexprs(rhs, subs);
                for (const ExprPtr& s : subs) {
                    bool wf = true;
                    for (const Name& m : free_vars(s)) wf = wf && scope.count(m);
                    if (!wf) continue;
                    GeneratedCase cand = failing;
                    std::vector<std::pair<Name, ExprPtr>> bs;
                    for (const auto& [k, e] : cand.heap.bindings())
                        bs.emplace_back(k, k == n ? s : e);
                    cand.heap = Heap::from_bindings(std::move(bs));
                    if (still_fails(cand)) {
                        failing = std::move(cand);
                        progress = true;
                        break;
                    }
                }
            }
        }
    }
    return failing;
}

}  // namespace lazysem
