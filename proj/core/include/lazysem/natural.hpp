#pragma once

#include <optional>
#include <vector>

#include "lazysem/syntax.hpp"

namespace lazysem {

enum class Rule { Lam, App, Var, Let };

enum class Outcome { Success, Diverged, Blackhole, UnboundVar };

// One derivation node: rule, the judgment it proves, and its premises.
// Premise counts: Lam 0, App 2, Var 1, Let 1.
struct DerivTrace {
    Rule rule;
    Heap in_heap;
    ExprPtr in_expr;
    Heap out_heap;
    SynValue out_value;
    std::vector<DerivTrace> children;

    std::size_t node_count() const {
        std::size_t n = 1;
        for (const auto& c : children) n += c.node_count();
        return n;
    }
};

struct NatResult {
    Outcome outcome = Outcome::Diverged;
    Heap heap;            // Success
    SynValue value;       // Success (always a Lam)
    Name culprit;         // Blackhole / UnboundVar
    std::optional<DerivTrace> trace;  // Success
    unsigned fuel_used = 0;

    bool ok() const { return outcome == Outcome::Success; }
};

const char* outcome_name(Outcome o);
const char* rule_name(Rule r);

// Deterministic fuel-bounded evaluator for the big-step semantics.
// `avoid` seeds the threaded name supply; the evaluator always adds the
// live names of the configuration (heap domain, free variables) itself.
// Fuel counts derivation nodes; running out yields Diverged.
NatResult eval_nat(const Heap& heap, const ExprPtr& expr, const NameSet& avoid, unsigned fuel);

}  // namespace lazysem
