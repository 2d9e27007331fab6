#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cepal/formula.hpp"

namespace cepal {

using NodeIndex = std::size_t;
using NodeSet = std::set<NodeIndex>;
using Path = std::vector<NodeIndex>;

// Truth value of one formula at every node of one Beth model.
using NodeTruth = std::vector<char>;

// Unvalidated model description, as read from a document or built by hand.
// The order may list covering edges only.
struct RawBethModel {
    std::vector<std::string> nodes;
    std::optional<std::string> root;
    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::string, std::set<std::string>> valuation;
    std::set<std::string> atoms;
};

// A finite rooted poset with a monotone valuation. Immutable once built by
// validate_beth; the order is stored transitively closed.
class BethModel {
public:
    std::size_t size() const { return names_.size(); }
    NodeIndex root() const { return root_; }
    const std::string& name(NodeIndex n) const { return names_.at(n); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<NodeIndex> find(const std::string& name) const;
    NodeIndex index_of(const std::string& name) const;  // throws UnknownNode

    bool leq(NodeIndex a, NodeIndex b) const { return leq_[a * size() + b] != 0; }
    // Immediate successors (covering relation), ascending by index.
    const std::vector<NodeIndex>& successors(NodeIndex n) const { return covers_.at(n); }
    bool is_leaf(NodeIndex n) const { return covers_.at(n).empty(); }

    const std::set<std::string>& valuation(NodeIndex n) const { return valuation_.at(n); }
    bool holds(NodeIndex n, const std::string& atom) const { return valuation_.at(n).count(atom) != 0; }
    const std::set<std::string>& atoms() const { return atoms_; }

    // Induced submodel on the kept nodes. The kept set must contain the
    // root and be closed downwards, so the result is again rooted.
    BethModel restrict_to(const std::vector<char>& keep) const;

    // Description with covering edges only, in node order.
    RawBethModel to_raw() const;

    friend bool operator==(const BethModel&, const BethModel&) = default;

private:
    friend BethModel validate_beth(const RawBethModel& raw);

    std::vector<std::string> names_;
    std::vector<char> leq_;
    std::vector<std::vector<NodeIndex>> covers_;
    std::vector<std::set<std::string>> valuation_;
    std::set<std::string> atoms_;
    NodeIndex root_ = 0;
};

struct PointedBeth {
    BethModel model;
    NodeIndex point = 0;
};

BethModel validate_beth(const RawBethModel& raw);

NodeSet up_set(const BethModel& m, NodeIndex a);
std::vector<Path> maximal_paths(const BethModel& m, NodeIndex a);

// True iff every maximal path from `a` meets `bar`. `bar` must lie in the
// up-set of `a` (NodeOutsideUpSet otherwise).
bool is_bar(const BethModel& m, NodeIndex a, const NodeSet& bar);

// Same test with membership given as a per-node mask; no up-set check.
bool meets_every_path(const BethModel& m, NodeIndex a, const NodeTruth& member);

// A maximal path from `a` avoiding every node of `member`, if one exists.
std::optional<Path> avoiding_path(const BethModel& m, NodeIndex a, const NodeTruth& member);

// Clause-level forcing on whole truth tables. These are the building blocks
// shared with the epistemic evaluator.
namespace clauses {
NodeTruth constant(const BethModel& m, bool value);
NodeTruth atom(const BethModel& m, const std::string& name);
NodeTruth neg(const BethModel& m, const NodeTruth& a);
NodeTruth conj(const BethModel& m, const NodeTruth& a, const NodeTruth& b);
NodeTruth disj(const BethModel& m, const NodeTruth& a, const NodeTruth& b);
NodeTruth imp(const BethModel& m, const NodeTruth& a, const NodeTruth& b);
}  // namespace clauses

// Forcing table of a propositional formula (NonPropositionalFormula else).
NodeTruth propositional_truth(const BethModel& m, const Formula& f);

bool forces_prop(const BethModel& m, NodeIndex a, const Formula& f);

// Same relation computed pointwise: atoms and disjunctions are decided by
// looking only at the leaves above the node.
bool leaf_shortcut_forces(const BethModel& m, NodeIndex a, const Formula& f);

// A propositional formula over `atoms` of depth at most `depth` that one of
// the pointed models forces and the other does not.
std::optional<Formula> equivalent_up_to_depth(const PointedBeth& x, const PointedBeth& y, std::size_t depth,
                                              const std::set<std::string>& atoms);

// One semantic class of propositional formulas over a fixed family of
// models: the first formula found (shallowest) and its truth tables.
struct PropositionalClass {
    Formula formula;
    std::vector<NodeTruth> tables;  // one per model, same order as input
};

// All classes of propositional formulas over `atoms` (plus top and bot) up
// to `depth`, deduplicated by their truth tables on `models`. Order is
// by depth, then by construction order.
std::vector<PropositionalClass> propositional_classes(std::span<const BethModel* const> models,
                                                      const std::set<std::string>& atoms, std::size_t depth);

}  // namespace cepal
