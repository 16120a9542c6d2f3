#include <doctest.h>

#include "lazysem/generate.hpp"
#include "lazysem/json_io.hpp"
#include "lazysem/parse.hpp"
#include "lazysem/print.hpp"
#include "lazysem/stacked.hpp"

using namespace lazysem;

namespace {

const Name x{"x"}, z{"z"}, i{"i"};

// Every judgment in the derivation keeps variables and applications in
// the non-topmost frames.
void check_frame_shapes(const StackedTrace& t) {
    auto check_stack = [](const Stack& s) {
        for (std::size_t k = 1; k < s.frames().size(); ++k) {
            const ExprPtr& e = s.frames()[k].second;
            CHECK((as_var(e) != nullptr || as_app(e) != nullptr));
        }
    };
    check_stack(t.in_stack);
    check_stack(t.out_stack);
    for (const auto& c : t.children) check_frame_shapes(c);
}

}  // namespace

TEST_SUITE("stacked") {

TEST_CASE("lambda axiom") {
    Stack s{{{z, parse("\\x. x")}}};
    StackResult r = eval_stacked({}, s, {}, 5);
    REQUIRE(r.ok());
    CHECK(r.heap.empty());
    CHECK(r.stack == s);
}

TEST_CASE("variable shuffles between heap and stack") {
    Heap heap;
    heap.insert(x, parse("\\y. y"));
    Stack s{{{z, make_var(x)}}};
    StackResult r = eval_stacked(heap, s, {}, 10);
    REQUIRE(r.ok());
    CHECK(r.heap.size() == 1);
    CHECK(alpha_eq(*r.heap.lookup(x), parse("\\y. y")));
    REQUIRE(r.stack.size() == 1);
    CHECK(r.stack.top().first == z);
    CHECK(alpha_eq(r.stack.top().second, parse("\\y. y")));
}

TEST_CASE("let and application") {
    Stack s{{{z, parse("let i = \\x. x in i i")}}};
    StackResult r = eval_stacked({}, s, {}, 20);
    REQUIRE(r.ok());
    CHECK(heap_print(r.heap) == "{i = \\x. x}");
    CHECK(r.stack.size() == 1);
    CHECK(print_expr(r.stack.top().second) == "\\x. x");
}

TEST_CASE("empty stacks are rejected") {
    CHECK_THROWS_AS(eval_stacked({}, Stack{}, {}, 5), Error);
}

TEST_CASE("run_via_stack bridges to big-step results") {
    NatResult r1 = run_via_stack({}, parse("\\x. x"), {}, 5);
    REQUIRE(r1.ok());
    CHECK(r1.heap.empty());
    CHECK(print_expr(r1.value) == "\\x. x");

    ExprPtr v = parse("\\a. let b = b in b");
    Heap heap;
    heap.insert(x, v);
    NatResult r2 = run_via_stack(heap, make_var(x), {}, 10);
    REQUIRE(r2.ok());
    CHECK(alpha_eq(r2.value, v));
    CHECK(r2.heap.size() == 1);
    CHECK(alpha_eq(*r2.heap.lookup(x), v));

    Heap self;
    self.insert(x, make_var(x));
    NatResult r3 = run_via_stack(self, make_var(x), {}, 10);
    CHECK(r3.outcome == Outcome::Blackhole);
    CHECK(r3.culprit == x);
}

TEST_CASE("stack discipline: only the topmost expression changes") {
    GenConfig cfg;
    cfg.seed = 23;
    int successes = 0;
    for (std::uint64_t idx = 0; idx < 300; ++idx) {
        GeneratedCase c = gen_config(cfg, idx, GenMode::Closed);
        NameSet used = c.heap.domain();
        for (const auto& [n, e] : c.heap.bindings())
            for (const Name& m : all_names(e)) used.insert(m);
        for (const Name& m : all_names(c.expr)) used.insert(m);
        Name top = fresh(used, z);
        Stack s{{{top, c.expr}}};
        StackResult r = eval_stacked(c.heap, s, {}, 64);
        if (!r.ok()) continue;
        ++successes;
        REQUIRE(r.stack.size() == s.size());
        CHECK(r.stack.top().first == top);
        CHECK(is_value(r.stack.top().second));
        for (std::size_t k = 1; k < s.size(); ++k) {
            CHECK(r.stack.frames()[k].first == s.frames()[k].first);
            CHECK(r.stack.frames()[k].second == s.frames()[k].second);
        }
        check_frame_shapes(*r.trace);
        // Heap and stack stay disjointly named.
        NameSet heap_dom = r.heap.domain();
        for (const auto& [n, e] : r.stack.frames()) CHECK(heap_dom.count(n) == 0);
    }
    CHECK(successes > 100);
}

TEST_CASE("deeper stacks keep their tails") {
    Heap heap;
    heap.insert(x, parse("\\y. y"));
    Name t1{"t1"}, t2{"t2"};
    Stack s{{{z, make_var(x)}, {t1, make_app(make_var(x), x)}, {t2, make_var(x)}}};
    StackResult r = eval_stacked(heap, s, {}, 20);
    REQUIRE(r.ok());
    REQUIRE(r.stack.size() == 3);
    CHECK(alpha_eq(r.stack.frames()[0].second, parse("\\y. y")));
    CHECK(r.stack.frames()[1].second == s.frames()[1].second);
    CHECK(r.stack.frames()[2].second == s.frames()[2].second);
}

TEST_CASE("stack serialization carries the ordered marker") {
    Stack s{{{z, parse("\\x. x")}, {x, make_var(z)}}};
    Json j = stack_to_json(s);
    CHECK(j.at("ordered") == true);
    CHECK(j.at("bindings").size() == 2);
    CHECK(j.at("bindings")[0][0] == "z");  // topmost first
}

}  // TEST_SUITE
