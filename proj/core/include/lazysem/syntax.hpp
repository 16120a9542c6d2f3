#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace lazysem {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Identifier plus an optional numeric suffix used by the fresh-name supply.
// "x" and "x₁" are distinct names; suffixes render as Unicode subscripts.
struct Name {
    std::string text;
    std::optional<std::uint32_t> suffix;

    Name() = default;
    Name(std::string t) : text(std::move(t)) {}
    Name(std::string t, std::uint32_t s) : text(std::move(t)), suffix(s) {}

    auto operator<=>(const Name&) const = default;

    std::string str() const;
};

using NameSet = std::set<Name>;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Var {
    Name name;
};
struct Lam {
    Name binder;
    ExprPtr body;
};
// The argument of an application is always a name; general applications
// must be desugared to a let first (see desugar_app).
struct App {
    ExprPtr fun;
    Name arg;
};
struct Let {
    std::vector<std::pair<Name, ExprPtr>> bindings;  // pairwise distinct names
    ExprPtr body;
};

struct Expr {
    std::variant<Var, Lam, App, Let> node;
};

ExprPtr make_var(Name n);
ExprPtr make_lam(Name binder, ExprPtr body);
ExprPtr make_app(ExprPtr fun, Name arg);
ExprPtr make_let(std::vector<std::pair<Name, ExprPtr>> bindings, ExprPtr body);

inline const Var* as_var(const ExprPtr& e) { return std::get_if<Var>(&e->node); }
inline const Lam* as_lam(const ExprPtr& e) { return std::get_if<Lam>(&e->node); }
inline const App* as_app(const ExprPtr& e) { return std::get_if<App>(&e->node); }
inline const Let* as_let(const ExprPtr& e) { return std::get_if<Let>(&e->node); }

bool is_value(const ExprPtr& e);  // weak head normal form = lambda

// A syntactic value: an expression known to be a lambda abstraction.
using SynValue = ExprPtr;

// Ordered association list of name -> expression with pairwise distinct
// names. Order is kept only for deterministic iteration and printing.
class Heap {
public:
    Heap() = default;
    static Heap from_bindings(std::vector<std::pair<Name, ExprPtr>> bs);

    const std::vector<std::pair<Name, ExprPtr>>& bindings() const { return bindings_; }
    bool contains(const Name& n) const;
    const ExprPtr* lookup(const Name& n) const;
    void insert(Name n, ExprPtr e);  // appends; throws on duplicate name
    bool erase(const Name& n);
    NameSet domain() const;
    std::size_t size() const { return bindings_.size(); }
    bool empty() const { return bindings_.empty(); }

    bool operator==(const Heap&) const = default;

private:
    std::vector<std::pair<Name, ExprPtr>> bindings_;
};

NameSet free_vars(const ExprPtr& e);
NameSet bound_names(const ExprPtr& e);        // every binder occurrence
std::vector<Name> binder_list(const ExprPtr& e);  // binders in traversal order
NameSet all_names(const ExprPtr& e);

// Smallest-unused-suffix supply: tries base.text bare, then suffix 1, 2, ...
Name fresh(const NameSet& avoid, const Name& base);

// e[x/y]: replace free occurrences of y by x, renaming binders where x
// would be captured. The avoiding variant draws rename candidates from
// (and records them into) the given set, so an evaluator can keep its
// whole derivation consistently named.
ExprPtr subst(const ExprPtr& e, const Name& x, const Name& y);
ExprPtr subst_avoiding(const ExprPtr& e, const Name& x, const Name& y, NameSet& avoid);

// App(fun, arg) when arg is a variable, otherwise the prescribed
// pre-processing let x = arg in fun x with x fresh.
ExprPtr desugar_app(const ExprPtr& fun, const ExprPtr& arg, const NameSet& avoid);

bool alpha_eq(const ExprPtr& a, const ExprPtr& b);

// Compares (heap, value) configurations up to a bijective renaming of
// heap-bound names outside `protect`. Heaps are compared as unordered
// maps; expressions up to alpha equivalence under the renaming.
bool heap_alpha_eq(const Heap& heap1, const SynValue& val1,
                   const Heap& heap2, const SynValue& val2,
                   const NameSet& protect);

// Renames binders so that they are pairwise distinct and disjoint from
// `forbidden`. Identity on already-hygienic expressions.
ExprPtr hygienize(const ExprPtr& e, const NameSet& forbidden);

}  // namespace lazysem
