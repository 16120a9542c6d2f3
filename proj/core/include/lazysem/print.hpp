#pragma once

#include <string>

#include "lazysem/syntax.hpp"

namespace lazysem {

// parse(print_expr(e)) is structurally equal to e.
std::string print_expr(const ExprPtr& e);

// {x = e, y = f} with bindings in heap order; {} for the empty heap.
std::string heap_print(const Heap& h);

}  // namespace lazysem
