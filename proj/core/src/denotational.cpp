#include "lazysem/denotational.hpp"

#include <algorithm>
#include <unordered_map>

namespace lazysem {

const char* variant_name(HeapVariant v) { return v == HeapVariant::Join ? "join" : "update"; }

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

std::uint64_t elem_fingerprint(const DomElem& e) {
    std::uint64_t h = mix(static_cast<std::uint64_t>(e.rank()), e.is_bot() ? 0 : 1);
    if (e.is_bot()) return h;
    if (e.rank() <= kMaxEnumRank) return mix(h, static_cast<std::uint64_t>(e.index()));
    for (std::uint8_t b : e.table4()) h = mix(h, b);
    return h;
}

std::uint64_t name_fingerprint(const Name& n) {
    std::uint64_t h = std::hash<std::string>{}(n.text);
    return mix(h, n.suffix ? 1ull + *n.suffix : 0ull);
}

struct MemoKey {
    const Expr* node;
    std::vector<std::pair<Name, DomElem>> slice;  // env restricted to fv(node)
    bool operator==(const MemoKey& o) const { return node == o.node && slice == o.slice; }
};

struct MemoKeyHash {
    std::size_t operator()(const MemoKey& k) const {
        std::uint64_t h = reinterpret_cast<std::uintptr_t>(k.node);
        for (const auto& [n, v] : k.slice) h = mix(mix(h, name_fingerprint(n)), elem_fingerprint(v));
        return static_cast<std::size_t>(h);
    }
};

// One engine per top-level denotation: fixed rank and variant, free-variable
// cache per node, memo over (node, env restricted to the node's free vars).
class DenEngine {
public:
    DenEngine(int rank, HeapVariant variant) : rank_(rank), variant_(variant) {}

    DomElem expr(const ExprPtr& e, const Env& rho) {
        MemoKey key{e.get(), slice(e, rho)};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        DomElem out = compute(e, rho);
        memo_.emplace(std::move(key), out);
        return out;
    }

    Env heap(const std::vector<std::pair<Name, ExprPtr>>& bindings, const Env& rho) {
        NameSet heap_dom;
        for (const auto& [n, e] : bindings) heap_dom.insert(n);
        NameSet hint = rho.dom();
        for (const Name& n : heap_dom) hint.insert(n);
        auto step = [&](const Env& cur) {
            Env bound(rank_);
            for (const auto& [n, e] : bindings) bound.set(n, expr(e, cur));
            return variant_ == HeapVariant::Join ? env_lub(rho, bound)
                                                 : env_update(rho, bound, heap_dom);
        };
        return lfp_env(step, rank_, hint);
    }

private:
    const NameSet& fv(const ExprPtr& e) {
        auto it = fv_.find(e.get());
        if (it != fv_.end()) return it->second;
        return fv_.emplace(e.get(), free_vars(e)).first->second;
    }

    std::vector<std::pair<Name, DomElem>> slice(const ExprPtr& e, const Env& rho) {
        std::vector<std::pair<Name, DomElem>> s;
        for (const Name& n : fv(e)) {
            DomElem v = rho.get(n);
            if (!v.is_bot()) s.emplace_back(n, std::move(v));
        }
        return s;
    }

    DomElem compute(const ExprPtr& e, const Env& rho) {
        if (auto* v = as_var(e)) return rho.get(v->name);
        if (auto* l = as_lam(e)) {
            return fn_make(rank_, [&](const DomElem& arg) {
                Env inner = rho;
                inner.set(l->binder, embed(arg));
                return project(expr(l->body, inner));
            });
        }
        if (auto* a = as_app(e)) {
            DomElem fun = expr(a->fun, rho);
            DomElem arg = project(rho.get(a->arg));
            return embed(fn_project_apply(fun, arg));
        }
        auto* lt = as_let(e);
        return expr(lt->body, heap(lt->bindings, rho));
    }

    int rank_;
    HeapVariant variant_;
    std::unordered_map<MemoKey, DomElem, MemoKeyHash> memo_;
    std::unordered_map<const Expr*, NameSet> fv_;
};

void check_rank(int rank) {
    if (rank < 1 || rank > kMaxRank)
        throw Error("denotation rank must be between 1 and " + std::to_string(kMaxRank));
}

}  // namespace

DomElem den_expr(const ExprPtr& e, const Env& rho, int rank, HeapVariant variant) {
    check_rank(rank);
    if (rho.rank() != rank) throw Error("den_expr: environment rank mismatch");
    ExprPtr clean = hygienize(e, rho.dom());
    DenEngine engine(rank, variant);
    return engine.expr(clean, rho);
}

Env den_heap(const Heap& heap, const Env& rho, int rank, HeapVariant variant) {
    check_rank(rank);
    if (rho.rank() != rank) throw Error("den_heap: environment rank mismatch");
    NameSet forbidden = rho.dom();
    for (const auto& [n, e] : heap.bindings()) forbidden.insert(n);
    std::vector<std::pair<Name, ExprPtr>> bindings;
    for (const auto& [n, e] : heap.bindings()) bindings.emplace_back(n, hygienize(e, forbidden));
    DenEngine engine(rank, variant);
    return engine.heap(bindings, rho);
}

bool preceq(const Heap& gamma, const Env& rho, const Heap& delta, const Env& rho2, int rank,
            HeapVariant variant) {
    NameSet dg = gamma.domain(), dd = delta.domain();
    if (!std::includes(dd.begin(), dd.end(), dg.begin(), dg.end())) return false;
    Env left = den_heap(gamma, rho, rank, variant);
    Env right = den_heap(delta, rho2, rank, variant);
    for (const Name& x : dg)
        if (!(left.get(x) == right.get(x))) return false;
    return true;
}

DomElem observe(const DomElem& u, int m) {
    if (m > u.rank()) throw Error("observe: target rank above element rank");
    DomElem cur = u;
    for (int r = u.rank(); r > m; --r) cur = project(cur);
    return cur;
}

std::string describe_difference(const DomElem& lhs, const DomElem& rhs) {
    if (lhs == rhs) return "equal";
    if (lhs.is_bot() != rhs.is_bot()) {
        return std::string(lhs.is_bot() ? "Bot" : "Fn") + " vs " + (rhs.is_bot() ? "Bot" : "Fn");
    }
    const auto& args = enumerate(lhs.rank() - 1);
    auto tl = fn_table_indices(lhs);
    auto tr = fn_table_indices(rhs);
    for (std::size_t k = 0; k < tl.size(); ++k) {
        if (tl[k] != tr[k]) {
            DomElem el = fn_project_apply(lhs, args[k]);
            DomElem er = fn_project_apply(rhs, args[k]);
            std::string arg = args[k].is_bot() ? "Bot" : "arg#" + std::to_string(k);
            return "apply to " + arg + ": " + describe_difference(el, er);
        }
    }
    return "distinct";
}

std::string dom_to_string(const DomElem& u) {
    std::string rank = "(rank " + std::to_string(u.rank()) + ")";
    if (u.is_bot()) return "bot" + rank;
    std::string out = "fn" + rank + "[";
    bool first = true;
    for (int i : fn_table_indices(u)) {
        if (!first) out += ", ";
        first = false;
        out += std::to_string(i);
    }
    return out + "]";
}

StableResult den_eq_stable(const std::function<DomElem(int)>& lhs_at,
                           const std::function<DomElem(int)>& rhs_at, int obs_rank,
                           const std::vector<int>& ranks) {
    if (ranks.size() < 2) throw Error("den_eq_stable: need at least two ranks");
    std::vector<int> sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    int lo = sorted[sorted.size() - 2];
    int hi = sorted.back();
    if (lo < obs_rank) throw Error("den_eq_stable: ranks must be at least the observation rank");

    DomElem l_lo = observe(lhs_at(lo), obs_rank);
    DomElem l_hi = observe(lhs_at(hi), obs_rank);
    DomElem r_lo = observe(rhs_at(lo), obs_rank);
    DomElem r_hi = observe(rhs_at(hi), obs_rank);

    StableResult res;
    res.lhs = l_hi;
    res.rhs = r_hi;
    bool l_stable = l_lo == l_hi;
    bool r_stable = r_lo == r_hi;
    if (!l_stable || !r_stable) {
        res.verdict = Stable::Inconclusive;
        res.detail = std::string("unstable across ranks: ") +
                     (!l_stable ? "lhs" : "rhs") + " still changing";
        return res;
    }
    if (l_hi == r_hi) {
        res.verdict = Stable::Equal;
    } else {
        res.verdict = Stable::NotEqual;
        res.detail = describe_difference(l_hi, r_hi);
    }
    return res;
}

}  // namespace lazysem
