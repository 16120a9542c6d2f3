#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lazysem/domain.hpp"
#include "lazysem/syntax.hpp"

namespace lazysem {

// How the heap functional combines with the outer environment: Join takes
// the least upper bound, Update lets the heap bindings override.
enum class HeapVariant { Join, Update };

const char* variant_name(HeapVariant v);

// Compositional meaning of an expression at a rank. The rank shift at
// lambda and application is realized by the embedding-projection pair:
// arguments live one rank below the function value. Bound variables are
// renamed first when they collide with each other or with dom(rho).
DomElem den_expr(const ExprPtr& e, const Env& rho, int rank, HeapVariant variant);

// Least fixed point of rho' -> rho JOIN <Gamma>rho' (or the right-sided
// update at dom Gamma), where <Gamma>rho' maps each binding to the meaning
// of its right-hand side.
Env den_heap(const Heap& heap, const Env& rho, int rank, HeapVariant variant);

// dom Gamma is included in dom Delta and both heap denotations agree on
// dom Gamma.
bool preceq(const Heap& gamma, const Env& rho, const Heap& delta, const Env& rho2, int rank,
            HeapVariant variant);

// Iterated projection down to observation rank m.
DomElem observe(const DomElem& u, int m);

enum class Stable { Equal, NotEqual, Inconclusive };

struct StableResult {
    Stable verdict = Stable::Inconclusive;
    DomElem lhs, rhs;    // observed values at the highest rank
    std::string detail;  // distinguishing application path on NotEqual
};

// Decides a theorem-level equality under finite approximation: both sides
// are computed at the two largest ranks, observed at rank m, and compared
// only when each side is stable across the ranks.
StableResult den_eq_stable(const std::function<DomElem(int)>& lhs_at,
                           const std::function<DomElem(int)>& rhs_at, int obs_rank,
                           const std::vector<int>& ranks);

// Human-readable discriminator between two distinct elements.
std::string describe_difference(const DomElem& lhs, const DomElem& rhs);

// Compact rendering such as bot(rank 2) or fn(rank 2)[0, 1].
std::string dom_to_string(const DomElem& u);

}  // namespace lazysem
