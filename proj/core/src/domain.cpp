#include "lazysem/domain.hpp"

#include <algorithm>
#include <string>

namespace lazysem {

namespace {

std::string rank_str(int rank) { return "rank " + std::to_string(rank); }

// Per-rank tables for the enumerated ranks, built once.
struct RankData {
    int count = 0;
    std::vector<std::vector<std::uint8_t>> tables;    // tables[i] for i >= 1
    std::vector<std::vector<bool>> le;                // le[i][j] = i below j
    std::vector<std::vector<std::uint8_t>> join;      // canonical index of lub
    std::vector<std::vector<std::uint8_t>> app;       // app[i][a], i >= 1; bot row is zeros
    std::vector<std::pair<int, int>> comparable;      // all (i, j) with i strictly below j
    int height = 0;
};

struct Cache {
    RankData rank[kMaxEnumRank + 1];
    // Adjacent-rank embedding/projection on canonical indices.
    std::vector<std::uint8_t> embed_idx[kMaxEnumRank];      // embed_idx[r]: r -> r+1 (r <= 2)
    std::vector<std::uint8_t> project_idx[kMaxEnumRank + 1];  // project_idx[r]: r -> r-1 (r >= 1)
    std::vector<std::vector<std::uint8_t>> embed34;         // rank-3 index -> rank-4 table
    std::map<std::vector<std::uint8_t>, int> index3;        // rank-3 table -> canonical index

    Cache();
};

void enumerate_tables(const RankData& below, std::vector<std::vector<std::uint8_t>>& out) {
    const int n = below.count;
    std::vector<std::uint8_t> t(static_cast<std::size_t>(n), 0);
    // Lexicographic backtracking; positions are enumeration indices of the
    // argument rank, candidate values likewise.
    auto rec = [&](auto&& self, int pos) -> void {
        if (pos == n) {
            out.push_back(t);
            return;
        }
        for (int v = 0; v < n; ++v) {
            bool ok = true;
            for (int j = 0; j < pos && ok; ++j) {
                if (below.le[j][pos] && !below.le[t[j]][v]) ok = false;
                if (below.le[pos][j] && !below.le[v][t[j]]) ok = false;
            }
            if (ok) {
                t[pos] = static_cast<std::uint8_t>(v);
                self(self, pos + 1);
            }
        }
    };
    rec(rec, 0);
}

void finish_rank(RankData& r, const RankData* below) {
    r.count = 1 + static_cast<int>(r.tables.size());
    r.le.assign(r.count, std::vector<bool>(r.count, false));
    r.join.assign(r.count, std::vector<std::uint8_t>(r.count, 0));
    std::map<std::vector<std::uint8_t>, int> idx_of;
    for (int i = 1; i < r.count; ++i) idx_of[r.tables[i - 1]] = i;

    for (int i = 0; i < r.count; ++i) {
        for (int j = 0; j < r.count; ++j) {
            if (i == 0) {
                r.le[i][j] = true;
            } else if (j == 0) {
                r.le[i][j] = false;
            } else {
                bool ok = true;
                const auto& ti = r.tables[i - 1];
                const auto& tj = r.tables[j - 1];
                for (std::size_t k = 0; k < ti.size() && ok; ++k)
                    ok = below->le[ti[k]][tj[k]];
                r.le[i][j] = ok;
            }
        }
    }
    for (int i = 0; i < r.count; ++i) {
        for (int j = 0; j < r.count; ++j) {
            if (i == 0) {
                r.join[i][j] = static_cast<std::uint8_t>(j);
            } else if (j == 0) {
                r.join[i][j] = static_cast<std::uint8_t>(i);
            } else {
                std::vector<std::uint8_t> t(r.tables[i - 1].size());
                for (std::size_t k = 0; k < t.size(); ++k)
                    t[k] = below->join[r.tables[i - 1][k]][r.tables[j - 1][k]];
                r.join[i][j] = static_cast<std::uint8_t>(idx_of.at(t));
            }
        }
    }
    r.app.assign(r.count, std::vector<std::uint8_t>(
                              below ? static_cast<std::size_t>(below->count) : 0, 0));
    for (int i = 1; i < r.count; ++i) r.app[i] = r.tables[i - 1];
    for (int i = 0; i < r.count; ++i)
        for (int j = 0; j < r.count; ++j)
            if (i != j && r.le[i][j]) r.comparable.emplace_back(i, j);
    // Longest chain via longest path over the strict order.
    std::vector<int> depth(r.count, 1);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [i, j] : r.comparable) {
            if (depth[j] < depth[i] + 1) {
                depth[j] = depth[i] + 1;
                changed = true;
            }
        }
    }
    r.height = *std::max_element(depth.begin(), depth.end());
}

Cache::Cache() {
    rank[0].count = 1;
    rank[0].le = {{true}};
    rank[0].join = {{0}};
    rank[0].height = 1;
    for (int rk = 1; rk <= kMaxEnumRank; ++rk) {
        enumerate_tables(rank[rk - 1], rank[rk].tables);
        finish_rank(rank[rk], &rank[rk - 1]);
    }

    // Base of the embedding-projection chain: rank 0 <-> rank 1.
    embed_idx[0] = {0};
    project_idx[1].assign(static_cast<std::size_t>(rank[1].count), 0);
    for (int rk = 1; rk < kMaxEnumRank; ++rk) {
        // embed_idx[rk]: entry(a in enum(rk)) = embed(apply(u, project(a)))
        std::map<std::vector<std::uint8_t>, int> idx_of;
        for (int i = 1; i < rank[rk + 1].count; ++i) idx_of[rank[rk + 1].tables[i - 1]] = i;
        embed_idx[rk].assign(static_cast<std::size_t>(rank[rk].count), 0);
        for (int u = 1; u < rank[rk].count; ++u) {
            std::vector<std::uint8_t> t(static_cast<std::size_t>(rank[rk].count));
            for (int a = 0; a < rank[rk].count; ++a) {
                int arg = project_idx[rk][a];
                t[static_cast<std::size_t>(a)] = embed_idx[rk - 1][rank[rk].app[u][arg]];
            }
            embed_idx[rk][u] = static_cast<std::uint8_t>(idx_of.at(t));
        }
        // project_idx[rk+1]: entry(b in enum(rk-1)) = project(apply(w, embed(b)))
        std::map<std::vector<std::uint8_t>, int> idx_lo;
        for (int i = 1; i < rank[rk].count; ++i) idx_lo[rank[rk].tables[i - 1]] = i;
        project_idx[rk + 1].assign(static_cast<std::size_t>(rank[rk + 1].count), 0);
        for (int w = 1; w < rank[rk + 1].count; ++w) {
            std::vector<std::uint8_t> t(static_cast<std::size_t>(rank[rk - 1].count));
            for (int b = 0; b < rank[rk - 1].count; ++b) {
                int arg = embed_idx[rk - 1][b];
                t[static_cast<std::size_t>(b)] = project_idx[rk][rank[rk + 1].app[w][arg]];
            }
            project_idx[rk + 1][w] = static_cast<std::uint8_t>(idx_lo.at(t));
        }
    }
    for (int i = 1; i < rank[3].count; ++i) index3[rank[3].tables[i - 1]] = i;
    embed34.resize(static_cast<std::size_t>(rank[3].count));
    for (int u = 0; u < rank[3].count; ++u) {
        std::vector<std::uint8_t> t(static_cast<std::size_t>(rank[3].count));
        for (int a = 0; a < rank[3].count; ++a) {
            int arg = project_idx[3][a];
            t[static_cast<std::size_t>(a)] =
                u == 0 ? 0 : embed_idx[2][rank[3].app[u][arg]];
        }
        embed34[static_cast<std::size_t>(u)] = std::move(t);
    }
}

const Cache& cache() {
    static const Cache c;
    return c;
}

int canonical3(const std::vector<std::uint8_t>& table) {
    auto it = cache().index3.find(table);
    if (it == cache().index3.end()) throw Error("non-monotone rank-3 table");
    return it->second;
}

void require_rank(const DomElem& e, int rank, const char* op) {
    if (e.rank() != rank)
        throw Error(std::string(op) + ": expected " + rank_str(rank) + ", got " +
                    rank_str(e.rank()));
}

}  // namespace

DomElem DomElem::bot(int rank) {
    if (rank < 0 || rank > kMaxRank) throw Error("bot: rank out of range");
    DomElem e;
    e.rank_ = static_cast<std::int8_t>(rank);
    return e;
}

DomElem DomElem::from_index(int rank, int index) {
    if (rank < 0 || rank > kMaxEnumRank) throw Error("from_index: rank out of range");
    if (index < 0 || index >= cache().rank[rank].count)
        throw Error("from_index: index out of range at " + rank_str(rank));
    DomElem e;
    e.rank_ = static_cast<std::int8_t>(rank);
    e.idx_ = static_cast<std::int16_t>(index);
    return e;
}

DomElem DomElem::fn4(std::vector<std::uint8_t> table) {
    if (table.size() != static_cast<std::size_t>(enum_count(kMaxEnumRank)))
        throw Error("fn4: table size mismatch");
    DomElem e;
    e.rank_ = kMaxRank;
    e.idx_ = 1;
    e.tab_ = std::make_shared<const std::vector<std::uint8_t>>(std::move(table));
    return e;
}

int DomElem::index() const {
    if (rank_ > kMaxEnumRank) throw Error("index: element is not enumerated");
    return idx_;
}

const std::vector<std::uint8_t>& DomElem::table4() const {
    if (rank_ != kMaxRank || !tab_) throw Error("table4: not a rank-4 function");
    return *tab_;
}

bool DomElem::operator==(const DomElem& o) const {
    if (rank_ != o.rank_ || idx_ != o.idx_) return false;
    if (rank_ < kMaxRank || idx_ == 0) return true;
    return tab_ == o.tab_ || *tab_ == *o.tab_;
}

const std::vector<DomElem>& enumerate(int rank) {
    if (rank < 0 || rank > kMaxEnumRank)
        throw Error("enumerate: " + rank_str(rank) + " is out of range (max " +
                    std::to_string(kMaxEnumRank) + ")");
    static const auto all = [] {
        std::vector<std::vector<DomElem>> v(kMaxEnumRank + 1);
        for (int r = 0; r <= kMaxEnumRank; ++r)
            for (int i = 0; i < cache().rank[r].count; ++i)
                v[static_cast<std::size_t>(r)].push_back(DomElem::from_index(r, i));
        return v;
    }();
    return all[static_cast<std::size_t>(rank)];
}

int enum_count(int rank) {
    if (rank < 0 || rank > kMaxEnumRank) throw Error("enum_count: rank out of range");
    return cache().rank[rank].count;
}

int lattice_height(int rank) {
    if (rank < 0 || rank > kMaxRank) throw Error("lattice_height: rank out of range");
    if (rank <= kMaxEnumRank) return cache().rank[rank].height;
    // Coordinate-wise bound for the unenumerated top rank.
    return 2 + enum_count(kMaxEnumRank) * (lattice_height(kMaxEnumRank) - 1);
}

bool leq(const DomElem& a, const DomElem& b) {
    require_rank(b, a.rank(), "leq");
    if (a.is_bot()) return true;
    if (b.is_bot()) return false;
    if (a.rank() <= kMaxEnumRank) return cache().rank[a.rank()].le[a.index()][b.index()];
    const auto& ta = a.table4();
    const auto& tb = b.table4();
    for (std::size_t k = 0; k < ta.size(); ++k)
        if (!cache().rank[3].le[ta[k]][tb[k]]) return false;
    return true;
}

DomElem lub(const DomElem& a, const DomElem& b) {
    require_rank(b, a.rank(), "lub");
    if (a.is_bot()) return b;
    if (b.is_bot()) return a;
    if (a.rank() <= kMaxEnumRank)
        return DomElem::from_index(a.rank(), cache().rank[a.rank()].join[a.index()][b.index()]);
    const auto& ta = a.table4();
    const auto& tb = b.table4();
    std::vector<std::uint8_t> t(ta.size());
    for (std::size_t k = 0; k < ta.size(); ++k) t[k] = cache().rank[3].join[ta[k]][tb[k]];
    return DomElem::fn4(std::move(t));
}

DomElem fn_project_apply(const DomElem& fun, const DomElem& arg) {
    int r = fun.rank();
    if (r < 1) throw Error("fn_project_apply: function rank must be at least 1");
    require_rank(arg, r - 1, "fn_project_apply");
    if (fun.is_bot()) return DomElem::bot(r - 1);
    if (r <= kMaxEnumRank)
        return DomElem::from_index(r - 1, cache().rank[r].app[fun.index()][arg.index()]);
    return DomElem::from_index(r - 1, fun.table4()[static_cast<std::size_t>(arg.index())]);
}

DomElem fn_make(int rank, const std::function<DomElem(const DomElem&)>& f) {
    if (rank < 1 || rank > kMaxRank) throw Error("fn_make: rank out of range");
    const auto& args = enumerate(rank - 1);
    std::vector<std::uint8_t> t(args.size());
    for (std::size_t k = 0; k < args.size(); ++k) {
        DomElem v = f(args[k]);
        require_rank(v, rank - 1, "fn_make entry");
        t[k] = static_cast<std::uint8_t>(v.index());
    }
    const auto& below = cache().rank[rank - 1];
    for (const auto& [i, j] : below.comparable)
        if (!below.le[t[static_cast<std::size_t>(i)]][t[static_cast<std::size_t>(j)]])
            throw Error("fn_make: non-monotone table at " + rank_str(rank));
    if (rank == kMaxEnumRank) return DomElem::from_index(rank, canonical3(t));
    if (rank < kMaxEnumRank) {
        const auto& rd = cache().rank[rank];
        for (int i = 1; i < rd.count; ++i)
            if (rd.tables[static_cast<std::size_t>(i - 1)] == t)
                return DomElem::from_index(rank, i);
        throw Error("fn_make: table not found");
    }
    return DomElem::fn4(std::move(t));
}

DomElem embed(const DomElem& u) {
    int r = u.rank();
    if (r >= kMaxRank) throw Error("embed: rank bound exceeded");
    if (u.is_bot()) return DomElem::bot(r + 1);
    if (r + 1 <= kMaxEnumRank)
        return DomElem::from_index(r + 1, cache().embed_idx[r][u.index()]);
    return DomElem::fn4(std::vector<std::uint8_t>(cache().embed34[static_cast<std::size_t>(u.index())]));
}

DomElem project(const DomElem& w) {
    int r = w.rank();
    if (r < 1) throw Error("project: rank 0 has no lower rank");
    if (w.is_bot()) return DomElem::bot(r - 1);
    if (r <= kMaxEnumRank) return DomElem::from_index(r - 1, cache().project_idx[r][w.index()]);
    // project(Fn g) at the top rank: entry(b) = project(g(embed(b))).
    const auto& t = w.table4();
    std::vector<std::uint8_t> lo(static_cast<std::size_t>(enum_count(2)));
    for (int b = 0; b < enum_count(2); ++b) {
        int arg = cache().embed_idx[2][b];
        lo[static_cast<std::size_t>(b)] = cache().project_idx[3][t[static_cast<std::size_t>(arg)]];
    }
    return DomElem::from_index(kMaxEnumRank, canonical3(lo));
}

std::vector<int> fn_table_indices(const DomElem& u) {
    if (u.is_bot()) throw Error("fn_table_indices: bottom has no table");
    if (u.rank() == kMaxRank) {
        const auto& t = u.table4();
        return std::vector<int>(t.begin(), t.end());
    }
    const auto& t = cache().rank[u.rank()].tables[static_cast<std::size_t>(u.index() - 1)];
    return std::vector<int>(t.begin(), t.end());
}

DomElem Env::get(const Name& n) const {
    auto it = m_.find(n);
    return it == m_.end() ? DomElem::bot(rank_) : it->second;
}

void Env::set(const Name& n, DomElem v) {
    if (v.rank() != rank_) throw Error("Env::set: rank mismatch");
    if (v.is_bot())
        m_.erase(n);
    else
        m_.insert_or_assign(n, std::move(v));
}

NameSet Env::dom() const {
    NameSet s;
    for (const auto& [n, v] : m_) s.insert(n);
    return s;
}

namespace {
void require_env_ranks(const Env& a, const Env& b, const char* op) {
    if (a.rank() != b.rank()) throw Error(std::string(op) + ": environment rank mismatch");
}
}  // namespace

Env env_lub(const Env& a, const Env& b) {
    require_env_ranks(a, b, "env_lub");
    Env out = a;
    for (const auto& [n, v] : b.bindings()) out.set(n, lub(out.get(n), v));
    return out;
}

Env env_restrict(const Env& e, const NameSet& s) {
    Env out(e.rank());
    for (const auto& [n, v] : e.bindings())
        if (s.count(n)) out.set(n, v);
    return out;
}

Env env_subtract(const Env& e, const NameSet& s) {
    Env out(e.rank());
    for (const auto& [n, v] : e.bindings())
        if (!s.count(n)) out.set(n, v);
    return out;
}

Env env_update(const Env& a, const Env& b, const NameSet& s) {
    require_env_ranks(a, b, "env_update");
    Env out(a.rank());
    for (const auto& [n, v] : a.bindings())
        if (!s.count(n)) out.set(n, v);
    for (const Name& n : s) out.set(n, b.get(n));
    return out;
}

NameSet env_dom(const Env& e) { return e.dom(); }

bool env_leq(const Env& a, const Env& b) {
    require_env_ranks(a, b, "env_leq");
    for (const auto& [n, v] : a.bindings())
        if (!leq(v, b.get(n))) return false;
    return true;
}

bool env_le(const Env& a, const Env& b) {
    require_env_ranks(a, b, "env_le");
    for (const auto& [n, v] : a.bindings())
        if (!(v == b.get(n))) return false;
    return true;
}

Env env_embed(const Env& e) {
    Env out(e.rank() + 1);
    for (const auto& [n, v] : e.bindings()) out.set(n, embed(v));
    return out;
}

Env lfp_env(const std::function<Env(const Env&)>& step, int rank, const NameSet& dom_hint) {
    long cap = static_cast<long>(lattice_height(rank)) * static_cast<long>(dom_hint.size()) + 1;
    Env cur(rank);
    for (long i = 0; i < cap; ++i) {
        Env next = step(cur);
        if (next == cur) return cur;
        cur = std::move(next);
    }
    throw Error("lfp_env: iteration cap exceeded (non-monotone functional?)");
}

}  // namespace lazysem
