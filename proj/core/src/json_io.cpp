#include "lazysem/json_io.hpp"

#include "lazysem/parse.hpp"
#include "lazysem/print.hpp"

namespace lazysem {

Json heap_to_json(const Heap& h) {
    Json bindings = Json::array();
    for (const auto& [n, e] : h.bindings()) bindings.push_back({n.str(), print_expr(e)});
    return Json{{"bindings", std::move(bindings)}};
}

Heap heap_from_json(const Json& j, bool desugar_general_apps) {
    if (!j.is_object() || !j.contains("bindings"))
        throw Error("heap JSON must be an object with a \"bindings\" array");
    Heap h;
    ParseOptions opts;
    opts.desugar_general_apps = desugar_general_apps;
    for (const auto& entry : j.at("bindings")) {
        if (!entry.is_array() || entry.size() != 2)
            throw Error("heap binding must be a [name, expr] pair");
        ExprPtr name_expr = parse(entry.at(0).get<std::string>());
        auto* v = as_var(name_expr);
        if (!v) throw Error("heap binding name must be a variable");
        h.insert(v->name, parse(entry.at(1).get<std::string>(), opts));
    }
    return h;
}

Json stack_to_json(const Stack& s) {
    Json bindings = Json::array();
    for (const auto& [n, e] : s.frames()) bindings.push_back({n.str(), print_expr(e)});
    Json j;
    j["bindings"] = std::move(bindings);
    j["ordered"] = true;
    return j;
}

Json dom_to_json(const DomElem& u) {
    if (u.is_bot()) return Json("bot");
    Json fn = Json::array();
    for (int i : fn_table_indices(u)) fn.push_back(i);
    Json j;
    j["rank"] = u.rank();
    j["fn"] = std::move(fn);
    return j;
}

DomElem dom_from_json(const Json& j, int bot_rank) {
    if (j.is_string()) {
        if (j.get<std::string>() == "bot") return DomElem::bot(bot_rank);
        throw Error("domain element JSON must be \"bot\" or a {rank, fn} object");
    }
    int rank = j.at("rank").get<int>();
    if (rank < 1 || rank > kMaxRank) throw Error("domain element rank out of range");
    std::vector<int> entries = j.at("fn").get<std::vector<int>>();
    int expected = enum_count(rank - 1);
    if (static_cast<int>(entries.size()) != expected)
        throw Error("fn table must have " + std::to_string(expected) + " entries at rank " +
                    std::to_string(rank));
    const auto& below = enumerate(rank - 1);
    for (int i : entries)
        if (i < 0 || i >= expected) throw Error("fn table index out of range");
    // fn_make revalidates monotonicity, which covers hand-written input.
    return fn_make(rank, [&](const DomElem& arg) {
        return below[static_cast<std::size_t>(entries[static_cast<std::size_t>(arg.index())])];
    });
}

Json env_to_json(const Env& e) {
    Json bindings = Json::object();
    for (const auto& [n, v] : e.bindings()) bindings[n.str()] = dom_to_json(v);
    Json j;
    j["rank"] = e.rank();
    j["bindings"] = std::move(bindings);
    return j;
}

Env env_from_json(const Json& j) {
    int rank = j.at("rank").get<int>();
    if (rank < 1 || rank > kMaxRank) throw Error("environment rank out of range");
    Env e(rank);
    for (const auto& [key, val] : j.at("bindings").items()) {
        ExprPtr name_expr = parse(key);
        auto* v = as_var(name_expr);
        if (!v) throw Error("environment key must be a variable name");
        DomElem elem = dom_from_json(val, rank);
        if (elem.is_bot()) continue;  // bottom entries are the default
        if (elem.rank() != rank) throw Error("environment entry rank mismatch at " + key);
        e.set(v->name, std::move(elem));
    }
    return e;
}

Json trace_to_json(const DerivTrace& t) {
    Json j;
    j["rule"] = rule_name(t.rule);
    j["input"] = Json{{"heap", heap_to_json(t.in_heap)}, {"expr", print_expr(t.in_expr)}};
    j["output"] = Json{{"heap", heap_to_json(t.out_heap)}, {"value", print_expr(t.out_value)}};
    Json children = Json::array();
    for (const auto& c : t.children) children.push_back(trace_to_json(c));
    j["children"] = std::move(children);
    return j;
}

Json stacked_trace_to_json(const StackedTrace& t) {
    Json j;
    j["rule"] = rule_name(t.rule);
    j["input"] = Json{{"heap", heap_to_json(t.in_heap)}, {"stack", stack_to_json(t.in_stack)}};
    j["output"] = Json{{"heap", heap_to_json(t.out_heap)}, {"stack", stack_to_json(t.out_stack)}};
    Json children = Json::array();
    for (const auto& c : t.children) children.push_back(stacked_trace_to_json(c));
    j["children"] = std::move(children);
    return j;
}

Json report_to_json(const CheckReport& r, bool with_timings) {
    Json witnesses = Json::array();
    for (const Witness& w : r.witnesses) {
        Json jw;
        jw["seed_index"] = w.seed_index;
        jw["heap"] = w.heap;
        jw["expr"] = w.expr;
        jw["env"] = w.env;
        jw["lhs"] = w.lhs;
        jw["rhs"] = w.rhs;
        jw["detail"] = w.detail;
        witnesses.push_back(std::move(jw));
    }
    Json j;
    j["property_id"] = r.property_id;
    j["cases_run"] = r.cases_run;
    j["passed"] = r.passed;
    j["failed"] = r.failed;
    j["inconclusive"] = r.inconclusive;
    j["witnesses"] = std::move(witnesses);
    if (with_timings) j["duration_ms"] = r.duration_ms;
    return j;
}

Heap load_heap_text_or_json(const std::string& content, bool desugar_general_apps) {
    for (char c : content) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '{') return heap_from_json(Json::parse(content), desugar_general_apps);
        break;
    }
    ParseOptions opts;
    opts.desugar_general_apps = desugar_general_apps;
    return parse_heap_text(content, opts);
}

}  // namespace lazysem
