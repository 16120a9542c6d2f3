#pragma once

#include <optional>
#include <vector>

#include "lazysem/natural.hpp"
#include "lazysem/syntax.hpp"

namespace lazysem {

// Ordered list of named frames; frames[0] is the topmost (the expression
// under evaluation). Frame names are pairwise distinct and disjoint from
// the companion heap's domain; every non-topmost frame holds a variable
// or an application.
class Stack {
public:
    Stack() = default;
    explicit Stack(std::vector<std::pair<Name, ExprPtr>> frames) : frames_(std::move(frames)) {}

    const std::vector<std::pair<Name, ExprPtr>>& frames() const { return frames_; }
    bool empty() const { return frames_.empty(); }
    std::size_t size() const { return frames_.size(); }
    const std::pair<Name, ExprPtr>& top() const { return frames_.front(); }
    bool contains(const Name& n) const;
    NameSet names() const;

    // Topmost-frame editing; the tail is shared untouched.
    Stack with_top_expr(ExprPtr e) const;
    Stack pushed(Name n, ExprPtr e) const;
    Stack popped() const;

    bool operator==(const Stack&) const = default;

private:
    std::vector<std::pair<Name, ExprPtr>> frames_;
};

struct StackedTrace {
    Rule rule;
    Heap in_heap;
    Stack in_stack;
    Heap out_heap;
    Stack out_stack;
    std::vector<StackedTrace> children;

    std::size_t node_count() const {
        std::size_t n = 1;
        for (const auto& c : children) n += c.node_count();
        return n;
    }
};

struct StackResult {
    Outcome outcome = Outcome::Diverged;
    Heap heap;     // Success
    Stack stack;   // Success; equals the input except the topmost expression
    Name culprit;  // Blackhole / UnboundVar
    std::optional<StackedTrace> trace;
    unsigned fuel_used = 0;

    bool ok() const { return outcome == Outcome::Success; }
};

// Evaluator for the stacked semantics. Same avoid/fuel discipline as
// eval_nat; the under-evaluation names are exactly the frame names.
StackResult eval_stacked(const Heap& heap, const Stack& stack, const NameSet& avoid,
                         unsigned fuel);

// Bridge realizing the equivalence with the big-step semantics: evaluate
// e on a singleton stack under a fresh frame name and project the result
// (including the trace, frame by frame) back.
NatResult run_via_stack(const Heap& heap, const ExprPtr& expr, const NameSet& avoid,
                        unsigned fuel);

}  // namespace lazysem
