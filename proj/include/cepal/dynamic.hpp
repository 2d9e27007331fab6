#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cepal/beth.hpp"
#include "cepal/formula.hpp"
#include "cepal/trace.hpp"

namespace cepal {

using WorldIndex = std::size_t;
using AccessRelation = std::set<std::pair<WorldIndex, WorldIndex>>;

struct World {
    std::string name;
    BethModel model;  // pointed at its root

    friend bool operator==(const World&, const World&) = default;
};

// Epistemic model whose possible worlds are rooted Beth models, with one
// accessibility relation per agent. An empty world set is representable
// (it is what an unexecutable announcement produces).
class BethKripkeModel {
public:
    BethKripkeModel() = default;
    // Access pairs are given by world name; unknown names raise UnknownWorld,
    // agents missing from `agents` raise UnknownAgent.
    BethKripkeModel(std::vector<World> worlds, std::vector<std::string> agents,
                    const std::map<std::string, std::set<std::pair<std::string, std::string>>>& access);

    bool empty() const { return worlds_.empty(); }
    std::size_t world_count() const { return worlds_.size(); }
    const std::vector<World>& worlds() const { return worlds_; }
    const World& world(WorldIndex s) const { return worlds_.at(s); }
    std::optional<WorldIndex> find_world(const std::string& name) const;
    WorldIndex world_index(const std::string& name) const;  // throws UnknownWorld

    const std::vector<std::string>& agents() const { return agents_; }
    bool has_agent(const std::string& agent) const;
    const AccessRelation& access(const std::string& agent) const;  // throws UnknownAgent
    std::vector<WorldIndex> accessible(const std::string& agent, WorldIndex s) const;

    std::size_t node_count() const;

    friend bool operator==(const BethKripkeModel&, const BethKripkeModel&) = default;

private:
    friend class Evaluator;
    std::vector<World> worlds_;
    std::vector<std::string> agents_;
    std::map<std::string, AccessRelation> access_;
};

// Truth of one formula at every node of every world.
using Table = std::vector<NodeTruth>;

// One evaluation session over a fixed model. Results are memoised per
// formula and announced models are materialised once per announced
// formula. Not thread-safe: give each thread its own Evaluator. The model
// must outlive the evaluator.
class Evaluator {
public:
    explicit Evaluator(const BethKripkeModel& model);
    Evaluator(const Evaluator&) = delete;
    Evaluator& operator=(const Evaluator&) = delete;
    ~Evaluator();

    const BethKripkeModel& model() const { return model_; }

    const Table& table(const Formula& f);
    bool forces(WorldIndex s, NodeIndex a, const Formula& f);
    bool satisfies(WorldIndex s, const Formula& f);

    // Nodes of world s that do not force ~phi; std::nullopt if the root is
    // among the dropped nodes.
    std::optional<BethModel> restrict_world(WorldIndex s, const Formula& phi);

    // M|phi and a session over it.
    const BethKripkeModel& announced(const Formula& phi);
    Evaluator& announced_session(const Formula& phi);

    // Evaluates a schema whose metavariables denote the given tables
    // instead of formulas. The pattern must be announcement-free.
    Table evaluate_pattern(const Formula& pattern, const std::map<std::string, const Table*>& metavariables);

private:
    using SubTable = std::function<const Table&(const Formula&)>;
    Table compute(const Formula& f, const SubTable& sub);
    Table know_table(const std::string& agent, const Table& inner) const;
    BethKripkeModel build_announcement(const Formula& phi);

    struct Update;
    const BethKripkeModel& model_;
    std::unordered_map<Formula, Table, FormulaHash> memo_;
    std::unordered_map<Formula, std::unique_ptr<Update>, FormulaHash> updates_;
};

struct EvalResult {
    bool value = false;
    std::optional<Trace> trace;
};

EvalResult forces(const BethKripkeModel& m, const std::string& world, const std::string& node, const Formula& f,
                  bool explain = false, const TraceOptions& options = {});
EvalResult satisfies(const BethKripkeModel& m, const std::string& world, const Formula& f, bool explain = false,
                     const TraceOptions& options = {});

std::optional<BethModel> restrict_world(const BethKripkeModel& m, const std::string& world, const Formula& phi);
BethKripkeModel announce(const BethKripkeModel& m, const Formula& phi);

// Builds the explanation tree for `f` at (s, a) from a session's tables.
Trace explain(Evaluator& session, WorldIndex s, NodeIndex a, const Formula& f, const TraceOptions& options = {});

struct RelationProperty {
    bool holds = true;
    // A pair that should be in the relation but is not.
    std::optional<std::pair<std::string, std::string>> witness;
};

struct S5Report {
    RelationProperty reflexive;
    RelationProperty transitive;
    RelationProperty euclidean;
    bool equivalence() const { return reflexive.holds && transitive.holds && euclidean.holds; }
};

std::map<std::string, S5Report> check_s5(const BethKripkeModel& m);
bool is_s5(const BethKripkeModel& m);

}  // namespace cepal
