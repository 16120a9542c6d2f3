#include "lazysem/syntax.hpp"

#include <algorithm>
#include <map>

namespace lazysem {

std::string Name::str() const {
    static const char* kSub[10] = {"₀", "₁", "₂", "₃", "₄",
                                   "₅", "₆", "₇", "₈", "₉"};
    if (!suffix) return text;
    std::string out = text;
    std::string digits = std::to_string(*suffix);
    for (char c : digits) out += kSub[c - '0'];
    return out;
}

ExprPtr make_var(Name n) { return std::make_shared<Expr>(Expr{Var{std::move(n)}}); }
ExprPtr make_lam(Name binder, ExprPtr body) {
    return std::make_shared<Expr>(Expr{Lam{std::move(binder), std::move(body)}});
}
ExprPtr make_app(ExprPtr fun, Name arg) {
    return std::make_shared<Expr>(Expr{App{std::move(fun), std::move(arg)}});
}
ExprPtr make_let(std::vector<std::pair<Name, ExprPtr>> bindings, ExprPtr body) {
    NameSet seen;
    for (const auto& [n, e] : bindings)
        if (!seen.insert(n).second) throw Error("duplicate let binding: " + n.str());
    return std::make_shared<Expr>(Expr{Let{std::move(bindings), std::move(body)}});
}

bool is_value(const ExprPtr& e) { return as_lam(e) != nullptr; }

Heap Heap::from_bindings(std::vector<std::pair<Name, ExprPtr>> bs) {
    Heap h;
    for (auto& [n, e] : bs) h.insert(std::move(n), std::move(e));
    return h;
}

bool Heap::contains(const Name& n) const { return lookup(n) != nullptr; }

const ExprPtr* Heap::lookup(const Name& n) const {
    for (const auto& [k, e] : bindings_)
        if (k == n) return &e;
    return nullptr;
}

void Heap::insert(Name n, ExprPtr e) {
    if (contains(n)) throw Error("duplicate heap binding: " + n.str());
    bindings_.emplace_back(std::move(n), std::move(e));
}

bool Heap::erase(const Name& n) {
    for (auto it = bindings_.begin(); it != bindings_.end(); ++it) {
        if (it->first == n) {
            bindings_.erase(it);
            return true;
        }
    }
    return false;
}

NameSet Heap::domain() const {
    NameSet s;
    for (const auto& [n, e] : bindings_) s.insert(n);
    return s;
}

namespace {

void free_vars_into(const ExprPtr& e, NameSet& bound, NameSet& out) {
    if (auto* v = as_var(e)) {
        if (!bound.count(v->name)) out.insert(v->name);
    } else if (auto* l = as_lam(e)) {
        bool fresh_here = bound.insert(l->binder).second;
        free_vars_into(l->body, bound, out);
        if (fresh_here) bound.erase(l->binder);
    } else if (auto* a = as_app(e)) {
        free_vars_into(a->fun, bound, out);
        if (!bound.count(a->arg)) out.insert(a->arg);
    } else {
        auto* lt = as_let(e);
        std::vector<Name> added;
        for (const auto& [n, rhs] : lt->bindings)
            if (bound.insert(n).second) added.push_back(n);
        for (const auto& [n, rhs] : lt->bindings) free_vars_into(rhs, bound, out);
        free_vars_into(lt->body, bound, out);
        for (const Name& n : added) bound.erase(n);
    }
}

void binders_into(const ExprPtr& e, std::vector<Name>& out) {
    if (as_var(e)) return;
    if (auto* l = as_lam(e)) {
        out.push_back(l->binder);
        binders_into(l->body, out);
    } else if (auto* a = as_app(e)) {
        binders_into(a->fun, out);
    } else {
        auto* lt = as_let(e);
        for (const auto& [n, rhs] : lt->bindings) out.push_back(n);
        for (const auto& [n, rhs] : lt->bindings) binders_into(rhs, out);
        binders_into(lt->body, out);
    }
}

}  // namespace

NameSet free_vars(const ExprPtr& e) {
    NameSet bound, out;
    free_vars_into(e, bound, out);
    return out;
}

std::vector<Name> binder_list(const ExprPtr& e) {
    std::vector<Name> out;
    binders_into(e, out);
    return out;
}

NameSet bound_names(const ExprPtr& e) {
    auto bl = binder_list(e);
    return NameSet(bl.begin(), bl.end());
}

NameSet all_names(const ExprPtr& e) {
    NameSet s = free_vars(e);
    for (const Name& n : binder_list(e)) s.insert(n);
    return s;
}

Name fresh(const NameSet& avoid, const Name& base) {
    Name candidate{base.text};
    if (!avoid.count(candidate)) return candidate;
    for (std::uint32_t i = 1;; ++i) {
        candidate.suffix = i;
        if (!avoid.count(candidate)) return candidate;
    }
}

namespace {

// Substitution worker. `avoid` accumulates every name chosen for a
// capture-avoiding rename so that nested renames stay distinct.
ExprPtr subst_impl(const ExprPtr& e, const Name& x, const Name& y, NameSet& avoid) {
    if (x == y) return e;
    if (!free_vars(e).count(y)) return e;  // nothing to replace below here
    if (auto* v = as_var(e)) {
        return v->name == y ? make_var(x) : e;
    }
    if (auto* l = as_lam(e)) {
        // y is free in e, so the binder is not y.
        if (l->binder == x) {
            NameSet used = avoid;
            for (const Name& n : all_names(l->body)) used.insert(n);
            used.insert(x);
            used.insert(y);
            Name b = fresh(used, l->binder);
            avoid.insert(b);
            ExprPtr body = subst_impl(l->body, b, l->binder, avoid);
            return make_lam(b, subst_impl(body, x, y, avoid));
        }
        return make_lam(l->binder, subst_impl(l->body, x, y, avoid));
    }
    if (auto* a = as_app(e)) {
        ExprPtr fun = subst_impl(a->fun, x, y, avoid);
        return make_app(std::move(fun), a->arg == y ? x : a->arg);
    }
    auto* lt = as_let(e);
    // y free in e implies no let binder equals y. Rename any binder equal
    // to x before substituting into the recursive scope.
    std::vector<std::pair<Name, ExprPtr>> bs = lt->bindings;
    ExprPtr body = lt->body;
    for (auto& [n, rhs] : bs) {
        if (n != x) continue;
        NameSet used = avoid;
        for (const auto& [m, r] : bs) {
            used.insert(m);
            for (const Name& nm : all_names(r)) used.insert(nm);
        }
        for (const Name& nm : all_names(body)) used.insert(nm);
        used.insert(x);
        used.insert(y);
        Name b = fresh(used, n);
        avoid.insert(b);
        for (auto& [m, r] : bs) r = subst_impl(r, b, n, avoid);
        body = subst_impl(body, b, n, avoid);
        n = b;
        break;  // binders are pairwise distinct
    }
    for (auto& [n, rhs] : bs) rhs = subst_impl(rhs, x, y, avoid);
    return make_let(std::move(bs), subst_impl(body, x, y, avoid));
}

}  // namespace

ExprPtr subst(const ExprPtr& e, const Name& x, const Name& y) {
    NameSet avoid;
    return subst_impl(e, x, y, avoid);
}

ExprPtr subst_avoiding(const ExprPtr& e, const Name& x, const Name& y, NameSet& avoid) {
    return subst_impl(e, x, y, avoid);
}

ExprPtr desugar_app(const ExprPtr& fun, const ExprPtr& arg, const NameSet& avoid) {
    if (auto* v = as_var(arg)) return make_app(fun, v->name);
    NameSet used = avoid;
    for (const Name& n : free_vars(fun)) used.insert(n);
    for (const Name& n : free_vars(arg)) used.insert(n);
    Name x = fresh(used, Name{"a"});
    return make_let({{x, arg}}, make_app(fun, x));
}

namespace {

// Alpha comparison with an optional correspondence on free names: a free
// name n1 matches n2 iff corr maps n1 to n2, or n1 == n2 and n2 is not
// the image of some other name.
struct AlphaCtx {
    const std::map<Name, Name>* corr = nullptr;
    const std::set<Name>* corr_range = nullptr;
    std::map<Name, int> left, right;  // bound name -> binding level
    int level = 0;

    bool match_name(const Name& a, const Name& b) {
        auto la = left.find(a);
        auto lb = right.find(b);
        if (la != left.end() || lb != right.end())
            return la != left.end() && lb != right.end() && la->second == lb->second;
        if (corr) {
            auto it = corr->find(a);
            if (it != corr->end()) return it->second == b;
            if (corr_range && corr_range->count(b)) return false;
        }
        return a == b;
    }
};

bool alpha_impl(const ExprPtr& a, const ExprPtr& b, AlphaCtx& ctx) {
    if (a->node.index() != b->node.index()) return false;
    if (auto* va = as_var(a)) return ctx.match_name(va->name, as_var(b)->name);
    if (auto* la = as_lam(a)) {
        auto* lb = as_lam(b);
        int lvl = ctx.level++;
        auto oldl = ctx.left.find(la->binder) != ctx.left.end()
                        ? std::optional<int>(ctx.left[la->binder])
                        : std::nullopt;
        auto oldr = ctx.right.find(lb->binder) != ctx.right.end()
                        ? std::optional<int>(ctx.right[lb->binder])
                        : std::nullopt;
        ctx.left[la->binder] = lvl;
        ctx.right[lb->binder] = lvl;
        bool ok = alpha_impl(la->body, lb->body, ctx);
        if (oldl) ctx.left[la->binder] = *oldl; else ctx.left.erase(la->binder);
        if (oldr) ctx.right[lb->binder] = *oldr; else ctx.right.erase(lb->binder);
        ctx.level = lvl;
        return ok;
    }
    if (auto* aa = as_app(a)) {
        auto* ab = as_app(b);
        return alpha_impl(aa->fun, ab->fun, ctx) && ctx.match_name(aa->arg, ab->arg);
    }
    auto* ta = as_let(a);
    auto* tb = as_let(b);
    if (ta->bindings.size() != tb->bindings.size()) return false;
    int base = ctx.level;
    std::vector<std::pair<Name, std::optional<int>>> savedl, savedr;
    for (std::size_t i = 0; i < ta->bindings.size(); ++i) {
        const Name& nl = ta->bindings[i].first;
        const Name& nr = tb->bindings[i].first;
        savedl.emplace_back(nl, ctx.left.count(nl) ? std::optional<int>(ctx.left[nl]) : std::nullopt);
        savedr.emplace_back(nr, ctx.right.count(nr) ? std::optional<int>(ctx.right[nr]) : std::nullopt);
        int lvl = ctx.level++;
        ctx.left[nl] = lvl;
        ctx.right[nr] = lvl;
    }
    bool ok = true;
    for (std::size_t i = 0; ok && i < ta->bindings.size(); ++i)
        ok = alpha_impl(ta->bindings[i].second, tb->bindings[i].second, ctx);
    if (ok) ok = alpha_impl(ta->body, tb->body, ctx);
    for (auto it = savedl.rbegin(); it != savedl.rend(); ++it) {
        if (it->second) ctx.left[it->first] = *it->second; else ctx.left.erase(it->first);
    }
    for (auto it = savedr.rbegin(); it != savedr.rend(); ++it) {
        if (it->second) ctx.right[it->first] = *it->second; else ctx.right.erase(it->first);
    }
    ctx.level = base;
    return ok;
}

bool alpha_eq_under(const ExprPtr& a, const ExprPtr& b, const std::map<Name, Name>& corr,
                    const std::set<Name>& range) {
    AlphaCtx ctx;
    ctx.corr = &corr;
    ctx.corr_range = &range;
    return alpha_impl(a, b, ctx);
}

// Expression skeleton with free occurrences of the given names wildcarded
// and bound occurrences rendered as binder distances; a cheap filter for
// the bijection search in heap_alpha_eq.
std::string shape_sig_impl(const ExprPtr& e, const NameSet& wild, std::vector<Name>& binders) {
    auto var_sig = [&](const Name& n) -> std::string {
        for (std::size_t k = binders.size(); k-- > 0;)
            if (binders[k] == n) return "#" + std::to_string(binders.size() - 1 - k);
        return wild.count(n) ? "?" : "v:" + n.str();
    };
    if (auto* v = as_var(e)) return var_sig(v->name);
    if (auto* l = as_lam(e)) {
        binders.push_back(l->binder);
        std::string s = "\\." + shape_sig_impl(l->body, wild, binders);
        binders.pop_back();
        return s;
    }
    if (auto* a = as_app(e))
        return "(" + shape_sig_impl(a->fun, wild, binders) + " " + var_sig(a->arg) + ")";
    auto* lt = as_let(e);
    for (const auto& [n, rhs] : lt->bindings) binders.push_back(n);
    std::string s = "let" + std::to_string(lt->bindings.size()) + "{";
    for (const auto& [n, rhs] : lt->bindings) s += shape_sig_impl(rhs, wild, binders) + ";";
    s += "}" + shape_sig_impl(lt->body, wild, binders);
    for (std::size_t k = 0; k < lt->bindings.size(); ++k) binders.pop_back();
    return s;
}

std::string shape_sig(const ExprPtr& e, const NameSet& wild) {
    std::vector<Name> binders;
    return shape_sig_impl(e, wild, binders);
}

struct HeapMatcher {
    const Heap& h1;
    const Heap& h2;
    const SynValue& v1;
    const SynValue& v2;
    std::vector<Name> todo;                  // unprotected names of h1
    std::map<Name, Name> corr;               // h1 name -> h2 name
    std::set<Name> used2;                    // h2 names already taken
    std::map<Name, std::string> sig2;        // candidate filter
    NameSet wild1, wild2;

    bool verify() const {
        std::set<Name> range;
        for (const auto& [a, b] : corr) range.insert(b);
        for (const auto& [n, e] : h1.bindings()) {
            const ExprPtr* other = h2.lookup(corr.at(n));
            if (!other || !alpha_eq_under(e, *other, corr, range)) return false;
        }
        return alpha_eq_under(v1, v2, corr, range);
    }

    bool search(std::size_t i) {
        if (i == todo.size()) return verify();
        const Name& n = todo[i];
        std::string sig = shape_sig(*h1.lookup(n), wild1);
        // Try the identical name first: evaluator name supplies rarely drift.
        std::vector<Name> candidates;
        if (!used2.count(n) && h2.lookup(n) && !corr.count(n)) candidates.push_back(n);
        for (const auto& [m, e] : h2.bindings())
            if (!used2.count(m) && m != n && sig2.count(m)) candidates.push_back(m);
        for (const Name& m : candidates) {
            if (sig2.at(m) != sig) continue;
            corr[n] = m;
            used2.insert(m);
            if (search(i + 1)) return true;
            corr.erase(n);
            used2.erase(m);
        }
        return false;
    }
};

}  // namespace

bool alpha_eq(const ExprPtr& a, const ExprPtr& b) {
    AlphaCtx ctx;
    return alpha_impl(a, b, ctx);
}

bool heap_alpha_eq(const Heap& heap1, const SynValue& val1, const Heap& heap2,
                   const SynValue& val2, const NameSet& protect) {
    if (heap1.size() != heap2.size()) return false;
    NameSet d1 = heap1.domain(), d2 = heap2.domain();
    HeapMatcher m{heap1, heap2, val1, val2, {}, {}, {}, {}, d1, d2};
    for (const Name& n : d1) {
        if (protect.count(n)) {
            if (!d2.count(n)) return false;
            m.corr[n] = n;
            m.used2.insert(n);
        } else {
            m.todo.push_back(n);
        }
    }
    for (const Name& n : d2)
        if (protect.count(n) && !d1.count(n)) return false;
    for (const auto& [n, e] : heap2.bindings())
        if (!m.used2.count(n)) m.sig2[n] = shape_sig(e, d2);
    return m.search(0);
}

namespace {

ExprPtr hygienize_impl(const ExprPtr& e, std::map<Name, Name>& ren, NameSet& used) {
    if (auto* v = as_var(e)) {
        auto it = ren.find(v->name);
        return it == ren.end() ? e : make_var(it->second);
    }
    if (auto* l = as_lam(e)) {
        Name b = l->binder;
        bool clash = used.count(b) > 0;
        Name nb = clash ? fresh(used, b) : b;
        used.insert(nb);
        auto old = ren.find(b) != ren.end() ? std::optional<Name>(ren[b]) : std::nullopt;
        if (nb != b) ren[b] = nb; else ren.erase(b);
        ExprPtr body = hygienize_impl(l->body, ren, used);
        if (old) ren[b] = *old; else ren.erase(b);
        return make_lam(nb, std::move(body));
    }
    if (auto* a = as_app(e)) {
        ExprPtr fun = hygienize_impl(a->fun, ren, used);
        auto it = ren.find(a->arg);
        return make_app(std::move(fun), it == ren.end() ? a->arg : it->second);
    }
    auto* lt = as_let(e);
    std::vector<std::pair<Name, std::optional<Name>>> saved;
    std::vector<Name> new_names;
    for (const auto& [n, rhs] : lt->bindings) {
        Name nn = used.count(n) ? fresh(used, n) : n;
        used.insert(nn);
        new_names.push_back(nn);
        saved.emplace_back(n, ren.count(n) ? std::optional<Name>(ren[n]) : std::nullopt);
        if (nn != n) ren[n] = nn; else ren.erase(n);
    }
    std::vector<std::pair<Name, ExprPtr>> bs;
    for (std::size_t i = 0; i < lt->bindings.size(); ++i)
        bs.emplace_back(new_names[i], hygienize_impl(lt->bindings[i].second, ren, used));
    ExprPtr body = hygienize_impl(lt->body, ren, used);
    for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
        if (it->second) ren[it->first] = *it->second; else ren.erase(it->first);
    }
    return make_let(std::move(bs), std::move(body));
}

}  // namespace

ExprPtr hygienize(const ExprPtr& e, const NameSet& forbidden) {
    // Fast path: binders already distinct and outside the forbidden set.
    auto bl = binder_list(e);
    NameSet seen;
    bool ok = true;
    for (const Name& b : bl) {
        if (forbidden.count(b) || !seen.insert(b).second) {
            ok = false;
            break;
        }
    }
    if (ok) return e;
    NameSet used = forbidden;
    for (const Name& n : free_vars(e)) used.insert(n);
    std::map<Name, Name> ren;
    return hygienize_impl(e, ren, used);
}

}  // namespace lazysem
