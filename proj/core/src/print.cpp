#include "lazysem/print.hpp"

namespace lazysem {

namespace {

void print_into(const ExprPtr& e, std::string& out) {
    if (auto* v = as_var(e)) {
        out += v->name.str();
    } else if (auto* l = as_lam(e)) {
        out += '\\';
        out += l->binder.str();
        out += ". ";
        print_into(l->body, out);
    } else if (auto* a = as_app(e)) {
        // Lambda and let bodies extend to the right, so a non-atomic
        // function position needs parentheses.
        bool paren = as_lam(a->fun) || as_let(a->fun);
        if (paren) out += '(';
        print_into(a->fun, out);
        if (paren) out += ')';
        out += ' ';
        out += a->arg.str();
    } else {
        auto* lt = as_let(e);
        out += "let ";
        bool first = true;
        for (const auto& [n, rhs] : lt->bindings) {
            if (!first) out += ", ";
            first = false;
            out += n.str();
            out += " = ";
            print_into(rhs, out);
        }
        out += " in ";
        print_into(lt->body, out);
    }
}

}  // namespace

std::string print_expr(const ExprPtr& e) {
    std::string out;
    print_into(e, out);
    return out;
}

std::string heap_print(const Heap& h) {
    std::string out = "{";
    bool first = true;
    for (const auto& [n, e] : h.bindings()) {
        if (!first) out += ", ";
        first = false;
        out += n.str();
        out += " = ";
        print_into(e, out);
    }
    out += "}";
    return out;
}

}  // namespace lazysem
