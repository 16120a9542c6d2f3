#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <vector>

#include "lazysem/syntax.hpp"

namespace lazysem {

// Finite approximations of the semantic domain: rank 0 holds only bottom,
// rank n+1 adds the monotone function tables over rank n. Ranks up to
// kMaxEnumRank are fully enumerated and interned (an element is just a
// canonical index); rank kMaxRank elements exist as explicit tables keyed
// by the rank-3 enumeration but are never enumerated themselves.
//
// Cardinalities: rank 0 -> 1, rank 1 -> 2, rank 2 -> 4, rank 3 -> 36.
inline constexpr int kMaxEnumRank = 3;  // R_enum
inline constexpr int kMaxRank = 4;      // R_table

class DomElem {
public:
    DomElem() = default;  // bottom at rank 0

    static DomElem bot(int rank);
    static DomElem from_index(int rank, int index);  // rank <= kMaxEnumRank
    static DomElem fn4(std::vector<std::uint8_t> table);  // 36 rank-3 indices

    int rank() const { return rank_; }
    bool is_bot() const { return idx_ == 0; }
    // Canonical enumeration index; only for rank <= kMaxEnumRank.
    int index() const;
    const std::vector<std::uint8_t>& table4() const;

    bool operator==(const DomElem& o) const;
    bool operator!=(const DomElem& o) const { return !(*this == o); }

private:
    std::int8_t rank_ = 0;
    std::int16_t idx_ = 0;  // rank <= 3: canonical index; rank 4: 0 = bot, 1 = fn
    std::shared_ptr<const std::vector<std::uint8_t>> tab_;
};

// Canonical, deterministic enumeration of a rank: bottom first, then all
// monotone tables in lexicographic order of their entry indices.
const std::vector<DomElem>& enumerate(int rank);
int enum_count(int rank);

// Longest-chain length of the rank lattice (an exact value for the
// enumerated ranks and a safe upper bound at kMaxRank).
int lattice_height(int rank);

bool leq(const DomElem& a, const DomElem& b);
DomElem lub(const DomElem& a, const DomElem& b);

// Projection: apply a rank-r function value to a rank-(r-1) argument.
DomElem fn_project_apply(const DomElem& fun, const DomElem& arg);

// Injection: tabulate a total map over enumerate(rank-1). Throws if the
// resulting table is not monotone (an interpreter bug, not an input error).
DomElem fn_make(int rank, const std::function<DomElem(const DomElem&)>& f);

// Embedding-projection pair between adjacent ranks: project(embed(u)) == u
// and embed(project(w)) is below w.
DomElem embed(const DomElem& u);
DomElem project(const DomElem& w);

// The table entries of a function value as canonical rank-(r-1) indices.
std::vector<int> fn_table_indices(const DomElem& u);

// Total map from names to rank-r elements; names that are absent denote
// bottom, so the stored support is exactly the paper's dom(rho).
class Env {
public:
    Env() = default;
    explicit Env(int rank) : rank_(rank) {}

    int rank() const { return rank_; }
    DomElem get(const Name& n) const;
    void set(const Name& n, DomElem v);  // erases the entry when v is bottom
    NameSet dom() const;
    const std::map<Name, DomElem>& bindings() const { return m_; }
    bool operator==(const Env&) const = default;

private:
    int rank_ = 0;
    std::map<Name, DomElem> m_;
};

Env env_lub(const Env& a, const Env& b);
Env env_restrict(const Env& e, const NameSet& s);
Env env_subtract(const Env& e, const NameSet& s);
// Takes b on s and a elsewhere (the right-sided update).
Env env_update(const Env& a, const Env& b, const NameSet& s);
NameSet env_dom(const Env& e);
bool env_leq(const Env& a, const Env& b);
// The paper's <=: wherever a is not bottom, a and b agree.
bool env_le(const Env& a, const Env& b);
// Lifts every binding one rank up.
Env env_embed(const Env& e);

// Kleene iteration from the all-bottom environment. The step function
// must be monotone and confine its writes to dom_hint plus its input's
// support; the iteration cap (lattice_height(rank) * |dom_hint| + 1)
// turns a non-monotone step into a diagnostic instead of a hang.
Env lfp_env(const std::function<Env(const Env&)>& step, int rank, const NameSet& dom_hint);

}  // namespace lazysem
