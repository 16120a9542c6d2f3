#pragma once

#include <string>
#include <vector>

#include "lazysem/generate.hpp"

namespace lazysem {

struct Witness {
    std::uint64_t seed_index = 0;
    std::string heap, expr, env;
    std::string lhs, rhs;
    std::string detail;
};

struct CheckReport {
    std::string property_id;
    std::uint64_t cases_run = 0;
    std::uint64_t passed = 0;
    std::uint64_t failed = 0;
    std::uint64_t inconclusive = 0;
    std::vector<Witness> witnesses;
    double duration_ms = 0;

    bool ok() const { return failed == 0; }
};

enum class TheoremId { Nat1, Update2, Stacked5 };

// The published counterexample, rerun mechanically: lambda-bound black
// holes make the generalized statement fail in the join variant while the
// update variant and the empty-environment instance hold.
CheckReport check_counterexample();

// The same computation with its intermediate values exposed, for the
// counterexample subcommand.
struct CounterexampleSummary {
    std::string heap, expr, value, env;
    bool natural_eval_ok = false;
    std::string join_lhs, join_rhs, join_verdict, join_detail;
    std::string update_lhs, update_rhs, update_verdict;
    bool update_preceq = false;
    std::string empty_env_lhs, empty_env_rhs, empty_env_verdict;
};
CounterexampleSummary counterexample_summary();

// The two failed proof-repair attempts and the <= pitfall, with the
// published witnesses.
CheckReport check_failed_fixes();

CheckReport check_theorem_correctness(const GenConfig& cfg, TheoremId which);
CheckReport check_theorem_equivalence(const GenConfig& cfg);

// Exact rank-level lemma properties; see lemma_registry for the ids.
CheckReport check_lemma(const std::string& lemma_id, const GenConfig& cfg);
const std::vector<std::string>& lemma_registry();

// Selections: all | theorems | lemmas | counterexamples | equivalence.
std::vector<CheckReport> run_suite(const std::string& selection, const GenConfig& cfg,
                                   int jobs = 1);

}  // namespace lazysem
