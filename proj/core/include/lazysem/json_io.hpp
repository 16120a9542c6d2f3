#pragma once

#include <json.hpp>

#include "lazysem/checks.hpp"
#include "lazysem/denotational.hpp"
#include "lazysem/natural.hpp"
#include "lazysem/stacked.hpp"

namespace lazysem {

// Insertion-ordered objects keep --json output byte-stable.
using Json = nlohmann::ordered_json;

Json heap_to_json(const Heap& h);
Heap heap_from_json(const Json& j, bool desugar_general_apps = false);

Json stack_to_json(const Stack& s);

Json dom_to_json(const DomElem& u);
// "bot" carries no rank in the wire format, so callers provide it.
DomElem dom_from_json(const Json& j, int bot_rank = 0);

Json env_to_json(const Env& e);
Env env_from_json(const Json& j);

Json trace_to_json(const DerivTrace& t);
Json stacked_trace_to_json(const StackedTrace& t);

Json report_to_json(const CheckReport& r, bool with_timings = false);

// Accepts either the JSON heap object or `name = expr` lines.
Heap load_heap_text_or_json(const std::string& content, bool desugar_general_apps);

}  // namespace lazysem
