#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "lazysem/json_io.hpp"
#include "lazysem/parse.hpp"
#include "lazysem/print.hpp"

using namespace lazysem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExprPtr parse_cli_expr(const std::string& text, bool strict) {
    ParseOptions opts;
    bool desugared = false;
    opts.desugar_general_apps = !strict;
    opts.desugared_flag = &desugared;
    ExprPtr e = parse(text, opts);
    if (desugared)
        std::cerr << "warning: general application desugared to a let binding\n";
    return e;
}

struct EvalArgs {
    std::string semantics = "natural";
    unsigned fuel = 64;
    bool trace = false;
    std::string heap_file;
    bool strict = false;
    bool json = false;
    std::string expr_text;
};

int run_eval(const EvalArgs& a) {
    Heap heap;
    if (!a.heap_file.empty()) heap = load_heap_text_or_json(read_file(a.heap_file), !a.strict);
    ExprPtr e = parse_cli_expr(a.expr_text, a.strict);

    NatResult r;
    Json trace_json;
    if (a.semantics == "stacked") {
        // Evaluate on a fresh singleton stack so the trace shows the full
        // (heap, stack) judgments; the printed result is the top frame.
        NameSet used = heap.domain();
        for (const auto& [n, he] : heap.bindings())
            for (const Name& m : free_vars(he)) used.insert(m);
        for (const Name& m : free_vars(e)) used.insert(m);
        Name z = fresh(used, Name{"z"});
        StackResult s = eval_stacked(heap, Stack{{{z, e}}}, used, a.fuel);
        r.outcome = s.outcome;
        r.fuel_used = s.fuel_used;
        r.culprit = s.culprit;
        if (s.ok()) {
            r.heap = s.heap;
            r.value = s.stack.top().second;
        }
        if (a.trace && s.trace) trace_json = stacked_trace_to_json(*s.trace);
    } else {
        r = eval_nat(heap, e, {}, a.fuel);
        if (a.trace && r.trace) trace_json = trace_to_json(*r.trace);
    }

    if (a.json) {
        Json j;
        j["outcome"] = outcome_name(r.outcome);
        if (r.ok()) {
            j["heap"] = heap_to_json(r.heap);
            j["value"] = print_expr(r.value);
        } else if (r.outcome != Outcome::Diverged) {
            j["variable"] = r.culprit.str();
        }
        j["fuel_used"] = r.fuel_used;
        if (a.trace && !trace_json.is_null()) j["trace"] = trace_json;
        std::cout << j.dump(2) << "\n";
    } else {
        if (r.ok()) {
            std::cout << heap_print(r.heap) << " : " << print_expr(r.value) << "\n";
            if (a.trace && !trace_json.is_null()) std::cout << trace_json.dump(2) << "\n";
        } else if (r.outcome == Outcome::Diverged) {
            std::cerr << "error: no derivation within " << a.fuel << " steps (diverged?)\n";
        } else if (r.outcome == Outcome::Blackhole) {
            std::cerr << "error: black hole at " << r.culprit.str() << "\n";
        } else {
            std::cerr << "error: unbound variable " << r.culprit.str() << "\n";
        }
    }
    return r.ok() ? 0 : 1;
}

struct DenoteArgs {
    int rank = 3;
    std::string variant = "join";
    std::string env_file;
    std::string heap_file;
    bool show_table = false;
    bool strict = false;
    bool json = false;
    std::string expr_text;
};

int run_denote(const DenoteArgs& a) {
    HeapVariant variant = a.variant == "update" ? HeapVariant::Update : HeapVariant::Join;
    Env rho(a.rank);
    if (!a.env_file.empty()) {
        rho = env_from_json(Json::parse(read_file(a.env_file)));
        if (rho.rank() != a.rank)
            throw Error("environment file has rank " + std::to_string(rho.rank()) +
                        " but --rank is " + std::to_string(a.rank));
    }
    Heap heap;
    if (!a.heap_file.empty()) heap = load_heap_text_or_json(read_file(a.heap_file), !a.strict);
    ExprPtr e = parse_cli_expr(a.expr_text, a.strict);

    Env scope = den_heap(heap, rho, a.rank, variant);
    DomElem u = den_expr(e, scope, a.rank, variant);
    if (a.json) {
        std::cout << dom_to_json(u).dump(2) << "\n";
    } else if (a.show_table && !u.is_bot()) {
        std::cout << dom_to_string(u) << "\n{";
        auto t = fn_table_indices(u);
        for (std::size_t k = 0; k < t.size(); ++k)
            std::cout << (k ? ", " : "") << k << " ↦ " << t[k];
        std::cout << "}\n";
    } else {
        std::cout << dom_to_string(u) << "\n";
    }
    return 0;
}

struct CheckArgs {
    std::string suite = "all";
    int cases = 300;
    std::uint64_t seed = 0;
    int rank = 3;
    unsigned fuel = 64;
    int jobs = 1;
    bool json = false;
    bool timings = false;
};

int run_check(const CheckArgs& a) {
    GenConfig cfg;
    cfg.seed = a.seed;
    cfg.cases = a.cases;
    cfg.rank = a.rank;
    cfg.fuel = a.fuel;
    std::vector<CheckReport> reports = run_suite(a.suite, cfg, a.jobs);

    bool all_ok = true;
    for (const auto& r : reports) all_ok = all_ok && r.ok();

    if (a.json) {
        Json j;
        j["suite"] = a.suite;
        j["seed"] = a.seed;
        j["all_passed"] = all_ok;
        Json rs = Json::array();
        for (const auto& r : reports) rs.push_back(report_to_json(r, a.timings));
        j["reports"] = std::move(rs);
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& r : reports) {
            std::cout << (r.ok() ? "[PASS] " : "[FAIL] ") << r.property_id << "  cases=" << r.cases_run
                      << " passed=" << r.passed << " failed=" << r.failed
                      << " inconclusive=" << r.inconclusive << "  (" << r.duration_ms << " ms)\n";
            for (const Witness& w : r.witnesses) {
                std::cout << "       witness[" << w.seed_index << "]";
                if (!w.heap.empty()) std::cout << " heap=" << w.heap;
                if (!w.expr.empty()) std::cout << " expr=" << w.expr;
                if (!w.env.empty()) std::cout << " env=" << w.env;
                std::cout << "\n";
                if (!w.lhs.empty() || !w.rhs.empty())
                    std::cout << "         lhs=" << w.lhs << "\n         rhs=" << w.rhs << "\n";
                if (!w.detail.empty()) std::cout << "         " << w.detail << "\n";
            }
        }
        std::cout << (all_ok ? "all properties passed" : "some properties FAILED") << "\n";
    }
    return all_ok ? 0 : 1;
}

int run_counterexample(bool json) {
    CounterexampleSummary s = counterexample_summary();
    bool as_published = s.natural_eval_ok && s.join_verdict == "not_equal" &&
                        s.update_verdict == "equal" && s.update_preceq &&
                        s.empty_env_verdict == "equal";
    if (json) {
        Json j;
        j["heap"] = s.heap;
        j["expr"] = s.expr;
        j["value"] = s.value;
        j["env"] = s.env;
        j["natural_evaluation"] = s.natural_eval_ok ? "success" : "unexpected";
        j["join_variant"] = s.join_verdict;
        j["join_lhs"] = s.join_lhs;
        j["join_rhs"] = s.join_rhs;
        j["join_detail"] = s.join_detail;
        j["update_variant"] = s.update_verdict;
        j["update_lhs"] = s.update_lhs;
        j["update_rhs"] = s.update_rhs;
        j["update_preceq"] = s.update_preceq;
        j["empty_env_variant"] = s.empty_env_verdict;
        j["empty_env_lhs"] = s.empty_env_lhs;
        j["empty_env_rhs"] = s.empty_env_rhs;
        j["as_published"] = as_published;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "configuration: heap " << s.heap << ", e = " << s.expr << ", v = " << s.value
                  << "\nenvironment:   " << s.env << "\n"
                  << "natural semantics: " << (s.natural_eval_ok ? "e evaluates to v" : "UNEXPECTED")
                  << "\n"
                  << "join variant:    lhs = " << s.join_lhs << "\n                 rhs = "
                  << s.join_rhs << "\n                 verdict: " << s.join_verdict << " ("
                  << s.join_detail << ")\n"
                  << "update variant:  lhs = " << s.update_lhs << "\n                 rhs = "
                  << s.update_rhs << "\n                 verdict: " << s.update_verdict
                  << ", preceq " << (s.update_preceq ? "holds" : "FAILS") << "\n"
                  << "empty-env join:  lhs = " << s.empty_env_lhs << "\n                 rhs = "
                  << s.empty_env_rhs << "\n                 verdict: " << s.empty_env_verdict
                  << "\n";
    }
    return as_published ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semantics laboratory for a lazy lambda calculus"};
    app.require_subcommand(1);

    EvalArgs ev;
    auto* eval_cmd = app.add_subcommand("eval", "run an evaluator on an expression");
    eval_cmd->add_option("--semantics", ev.semantics, "natural|stacked")
        ->check(CLI::IsMember({"natural", "stacked"}));
    eval_cmd->add_option("--fuel", ev.fuel, "derivation-node budget")->check(CLI::Range(1u, 1000000u));
    eval_cmd->add_flag("--trace", ev.trace, "emit the derivation tree");
    eval_cmd->add_option("--heap", ev.heap_file, "initial heap file");
    eval_cmd->add_flag("--strict", ev.strict, "reject general applications");
    eval_cmd->add_flag("--json", ev.json, "JSON output");
    eval_cmd->add_option("expr", ev.expr_text, "expression")->required();

    DenoteArgs dn;
    auto* den_cmd = app.add_subcommand("denote", "denotation of an expression");
    den_cmd->add_option("--rank", dn.rank, "approximation rank")->check(CLI::Range(1, 4));
    den_cmd->add_option("--variant", dn.variant, "join|update")
        ->check(CLI::IsMember({"join", "update"}));
    den_cmd->add_option("--env", dn.env_file, "environment JSON file");
    den_cmd->add_option("--heap", dn.heap_file, "heap file");
    den_cmd->add_flag("--show-table", dn.show_table, "print the function table");
    den_cmd->add_flag("--strict", dn.strict, "reject general applications");
    den_cmd->add_flag("--json", dn.json, "JSON output");
    den_cmd->add_option("expr", dn.expr_text, "expression")->required();

    CheckArgs ck;
    auto* check_cmd = app.add_subcommand("check", "run the verification suite");
    check_cmd->add_option("--suite", ck.suite, "all|theorems|lemmas|counterexamples|equivalence")
        ->check(CLI::IsMember({"all", "theorems", "lemmas", "counterexamples", "equivalence"}));
    check_cmd->add_option("--cases", ck.cases, "cases per property")->check(CLI::PositiveNumber);
    check_cmd->add_option("--seed", ck.seed, "generator seed");
    check_cmd->add_option("--rank", ck.rank, "working rank")->check(CLI::Range(1, 4));
    check_cmd->add_option("--fuel", ck.fuel, "evaluator fuel")->check(CLI::Range(1u, 1000000u));
    check_cmd->add_option("--jobs", ck.jobs, "worker threads")->check(CLI::Range(1, 256));
    check_cmd->add_flag("--json", ck.json, "JSON report");
    check_cmd->add_flag("--timings", ck.timings, "include durations in the JSON report");

    bool ce_json = false;
    auto* ce_cmd = app.add_subcommand("counterexample", "reproduce the published counterexample");
    ce_cmd->add_flag("--json", ce_json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*eval_cmd) return run_eval(ev);
        if (*den_cmd) return run_denote(dn);
        if (*check_cmd) return run_check(ck);
        if (*ce_cmd) return run_counterexample(ce_json);
    } catch (const ParseError& e) {
        std::cerr << "parse error at " << e.line << ":" << e.column << ": " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Json::exception& e) {
        std::cerr << "json error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
