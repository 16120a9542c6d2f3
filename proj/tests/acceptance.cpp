// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "lazysem/checks.hpp"
#include "lazysem/denotational.hpp"
#include "lazysem/json_io.hpp"

using namespace lazysem;

namespace {

int g_failures = 0;

struct Criterion {
    const char* label;
    double budget_s;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string note;

    explicit Criterion(const char* l, double budget) : label(l), budget_s(budget) {}

    void require(bool cond, const std::string& why) {
        if (!cond && ok) {
            ok = false;
            note = why;
        }
    }

    ~Criterion() {
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > budget_s && ok) {
            ok = false;
            note = "over time budget";
        }
        std::printf("[%s] %s  (%.2f s / %.0f s)%s%s\n", ok ? "PASS" : "FAIL", label, secs,
                    budget_s, note.empty() ? "" : "  -- ", note.c_str());
        std::fflush(stdout);
        if (!ok) ++g_failures;
    }
};

int default_jobs() {
    unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(hw == 0 ? 1 : (hw > 4 ? 4 : hw));
}

GenConfig desk_cfg(int cases) {
    GenConfig cfg;
    cfg.seed = 42;
    cfg.cases = cases;
    cfg.max_expr_size = 8;
    cfg.max_heap_bindings = 4;
    cfg.rank = 3;
    cfg.fuel = 64;
    return cfg;
}

std::string run_cli(const std::string& args, const std::string& out_file) {
    std::string cmd = std::string(ACCEPTANCE_CLI_PATH) + " " + args + " > " + out_file;
    int rc = std::system(cmd.c_str());
    if (rc != 0) return {};
    std::ifstream in(out_file, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

DomElem identity_at(int rank) {
    return fn_make(rank, [](const DomElem& v) { return v; });
}

}  // namespace

int main() {
    int jobs = default_jobs();

    {
        Criterion c("1. counterexample reproduction (join variant, ranks 3 and 4)", 5);
        CheckReport r = check_counterexample();
        c.require(r.failed == 0, "sub-assertion failed");
        CounterexampleSummary s = counterexample_summary();
        c.require(s.join_verdict == "not_equal", "join verdict is not NotEqual");
        c.require(s.join_lhs == dom_to_string(fn_make(3, [](const DomElem&) { return identity_at(2); })),
                  "lhs is not Fn(\\_. Fn(\\z. z))");
        c.require(s.join_rhs == dom_to_string(fn_make(3, [](const DomElem&) { return DomElem::bot(2); })),
                  "rhs is not Fn(\\_. Bot)");
    }
    {
        Criterion c("2. repaired theorem instance (update variant)", 5);
        CounterexampleSummary s = counterexample_summary();
        c.require(s.update_verdict == "equal", "update verdict is not Equal");
        c.require(s.update_preceq, "preceq fails in the update variant");
        c.require(s.update_lhs == s.update_rhs, "update sides differ");
    }
    {
        Criterion c("3. correctness theorem, empty environments (1000 cases)", 180);
        auto rs = run_suite("theorem1", desk_cfg(1000), jobs);
        const CheckReport& r = rs.front();
        c.require(r.cases_run == 1000, "wrong case count");
        c.require(r.failed == 0, "NotEqual verdict or order violation");
        c.require(r.inconclusive * 20 <= r.cases_run, "inconclusive rate above 5%");
    }
    {
        Criterion c("4. equivalence of the two operational semantics (1000 cases)", 60);
        auto rs = run_suite("equivalence", desk_cfg(1000), jobs);
        c.require(rs.front().failed == 0, "evaluators disagree");
        c.require(rs.front().cases_run == 1000, "wrong case count");
    }
    {
        Criterion c("5. stacked correctness (1000 cases)", 180);
        auto rs = run_suite("stacked", desk_cfg(1000), jobs);
        c.require(rs.front().failed == 0, "denotation not preserved");
        c.require(rs.front().cases_run == 1000, "wrong case count");
    }
    {
        Criterion c("6. generalized update correctness, nontrivial environments (500 cases)", 180);
        auto rs = run_suite("theorem2", desk_cfg(500), jobs);
        c.require(rs.front().failed == 0, "update-variant claim failed");
        c.require(rs.front().cases_run == 500, "wrong case count");
    }
    {
        Criterion c("7. lemma suite, ranks 2 and 3, quota 50 non-vacuous each", 300);
        c.require(lemma_registry().size() == 17, "registry must hold 17 lemma properties");
        for (int rank : {2, 3}) {
            GenConfig cfg = desk_cfg(300);
            cfg.rank = rank;
            auto rs = run_suite("lemmas", cfg, jobs);
            c.require(rs.size() == 17, "lemma suite must produce 17 reports");
            for (const auto& r : rs) {
                c.require(r.failed == 0, r.property_id + " failed at rank " + std::to_string(rank));
                c.require(r.passed >= 50,
                          r.property_id + " quota unmet at rank " + std::to_string(rank));
            }
        }
    }
    {
        Criterion c("8. failed proof-repair attempts and the order pitfall", 5);
        CheckReport r = check_failed_fixes();
        c.require(r.failed == 0, "published witness did not check out");
        c.require(r.cases_run == 6, "missing sub-assertions");
    }
    {
        Criterion c("9. domain kernel laws (exhaustive at ranks 0..3)", 30);
        c.require(enumerate(0).size() == 1 && enumerate(1).size() == 2 &&
                      enumerate(2).size() == 4 && enumerate(3).size() == 36,
                  "enumeration cardinalities");
        for (int r = 1; r <= 3 && c.ok; ++r) {
            const auto& all = enumerate(r);
            for (const DomElem& u : all) {
                c.require(leq(u, u), "reflexivity");
                c.require(lub(DomElem::bot(r), u) == u, "bottom is the unit of lub");
            }
            for (const DomElem& u : all)
                for (const DomElem& v : all) {
                    DomElem j = lub(u, v);
                    c.require(leq(u, j) && leq(v, j) && j == lub(v, u), "lub is an upper bound");
                    for (const DomElem& w : all) {
                        if (leq(u, w) && leq(v, w)) c.require(leq(j, w), "lub is least");
                        if (leq(u, v) && leq(v, w)) c.require(leq(u, w), "transitivity");
                    }
                    if (leq(u, v) && leq(v, u)) c.require(u == v, "antisymmetry");
                }
        }
        for (int r = 0; r <= 2 && c.ok; ++r)
            for (const DomElem& u : enumerate(r))
                c.require(project(embed(u)) == u, "project after embed");
        for (int r = 1; r <= 3 && c.ok; ++r)
            for (const DomElem& w : enumerate(r))
                c.require(leq(embed(project(w)), w), "embed after project");
        for (const DomElem& u : enumerate(3))
            c.require(project(embed(u)) == u, "rank-4 embedding section");
    }
    {
        Criterion c("10. byte-identical reports under a fixed seed", 120);
        std::string first = run_cli("check --seed 42 --json", "/tmp/lazysem_accept_1.json");
        std::string second = run_cli("check --seed 42 --json", "/tmp/lazysem_accept_2.json");
        c.require(!first.empty(), "check run produced no output or failed");
        c.require(first == second, "reports differ between runs");
    }

    if (g_failures == 0) {
        std::printf("acceptance: all 10 criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return 1;
}
