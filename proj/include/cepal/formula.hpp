#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "cepal/errors.hpp"

namespace cepal {

enum class Connective {
    atom,
    top,
    bot,
    neg,
    conj,
    disj,
    imp,
    know,
    announce,  // [lhs] rhs
    diamond,   // <lhs> rhs
};

enum class FormulaClass { propositional, epistemic, announcement };

const char* to_string(FormulaClass c);

// Immutable, structurally shared formula tree. Copies are cheap and the
// value is safe to share between threads.
class Formula {
public:
    // Default value is the constant top.
    Formula();

    static Formula atom(std::string name);
    static Formula top();
    static Formula bot();
    static Formula neg(Formula f);
    static Formula conj(Formula a, Formula b);
    static Formula disj(Formula a, Formula b);
    static Formula imp(Formula a, Formula b);
    static Formula know(std::string agent, Formula f);
    static Formula announce(Formula announced, Formula after);
    static Formula diamond(Formula announced, Formula after);
    // a <-> b is not a connective: it expands to (a -> b) & (b -> a).
    static Formula iff(Formula a, Formula b);

    Connective kind() const;
    // Atom name for atoms, agent for knowledge; empty otherwise.
    const std::string& name() const;
    // Only operand of neg/know; left operand of the binary connectives.
    const Formula& lhs() const;
    const Formula& rhs() const;

    bool is_unary() const;
    bool is_binary() const;
    bool is_metavariable() const;  // atom whose name starts uppercase

    std::size_t depth() const;
    std::size_t size() const;
    std::size_t hash() const;
    std::set<std::string> atoms() const;
    std::set<std::string> agents() const;

    // Identity of the shared node; equal ids imply equal formulas.
    const void* id() const { return node_.get(); }

    friend bool operator==(const Formula& a, const Formula& b);
    friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
    // Total order (by printed form); used for deterministic containers.
    friend bool operator<(const Formula& a, const Formula& b);

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Formula make(Connective kind, std::string name, const Formula* lhs, const Formula* rhs);

    std::shared_ptr<const Node> node_;
};

struct FormulaHash {
    std::size_t operator()(const Formula& f) const { return f.hash(); }
};

enum class Syntax {
    object,  // uppercase identifiers are rejected
    schema,  // uppercase identifiers are metavariables
};

Formula parse_formula(std::string_view text, Syntax syntax = Syntax::object);
std::string print_formula(const Formula& f);

FormulaClass classify(const Formula& f);

// Simultaneous replacement of metavariables by formulas and of agent names
// by agent names. Every metavariable atom of the schema must be bound;
// agents absent from the agent map are left as they are.
struct Binding {
    std::map<std::string, Formula> formulas;
    std::map<std::string, std::string> agents;

    friend bool operator==(const Binding&, const Binding&) = default;
};

Formula substitute(const Formula& schema, const Binding& binding);

std::string to_string(const Binding& b);

}  // namespace cepal
