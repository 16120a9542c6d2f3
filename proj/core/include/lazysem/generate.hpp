#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "lazysem/domain.hpp"
#include "lazysem/syntax.hpp"

namespace lazysem {

struct GenConfig {
    std::uint64_t seed = 0;
    int max_expr_size = 8;
    int max_heap_bindings = 4;
    int rank = 3;
    unsigned fuel = 64;
    int cases = 300;

    void validate() const;
};

// Closed: empty environment, expression free vars inside the heap domain.
// WithEnv: a non-bottom environment, possibly overlapping the heap domain.
// Equivalence: like Closed but occasionally one env-only free name, so
// the unbound-variable outcome is exercised too.
enum class GenMode { Closed, WithEnv, Equivalence };

struct GeneratedCase {
    Heap heap;
    ExprPtr expr;
    Env env;
};

// splitmix64; self-contained so that generated cases are reproducible
// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : s_(seed) {}
    std::uint64_t next();
    std::uint64_t below(std::uint64_t n);  // uniform-ish in [0, n)
    bool chance(int percent) { return below(100) < static_cast<std::uint64_t>(percent); }

private:
    std::uint64_t s_;
};

std::uint64_t case_seed(const GenConfig& cfg, std::uint64_t case_index, std::uint64_t salt);

// Helper shared by the lemma generators: a well-scoped expression over
// `scope` whose binders are drawn from (and recorded into) `used`.
ExprPtr gen_expr(Rng& rng, std::vector<Name> scope, int budget, NameSet& used);

// Biased domain element: bottom, identity, constant tables, and (at
// enumerable ranks) a uniform draw.
DomElem gen_elem(Rng& rng, int rank);

GeneratedCase gen_config(const GenConfig& cfg, std::uint64_t case_index, GenMode mode);

bool validate_case(const GeneratedCase& c, GenMode mode, std::string* why = nullptr);

std::size_t expr_size(const ExprPtr& e);
std::size_t case_size(const GeneratedCase& c);

// Greedy shrinking: drops heap bindings and env entries and replaces
// expressions by well-scoped subexpressions while the predicate keeps
// failing. The result is re-validated and never larger than the input.
GeneratedCase shrink_case(GeneratedCase failing,
                          const std::function<bool(const GeneratedCase&)>& still_fails);

}  // namespace lazysem
