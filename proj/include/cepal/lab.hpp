#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "cepal/beth.hpp"
#include "cepal/dynamic.hpp"
#include "cepal/formula.hpp"

namespace cepal {

// Deterministic random stream. Only raw engine output is used, so streams
// are identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    std::uint64_t next() { return engine_(); }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(next() % n); }
    bool chance(double p) { return static_cast<double>(next() >> 11) * 0x1.0p-53 < p; }

private:
    std::mt19937_64 engine_;
};

// Seed of trial `trial` in a run seeded with `seed`; trials can therefore
// be evaluated in any order.
std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial);

struct GenParams {
    std::size_t max_nodes_per_world = 4;
    std::size_t max_worlds = 3;
    std::size_t num_agents = 1;
    std::size_t atom_count = 2;
    std::uint64_t seed = 1;
    // true: every agent gets a random equivalence relation.
    // false: a random irreflexive relation (each off-diagonal pair w.p. 1/2).
    bool s5 = true;
};

void validate(const GenParams& p);  // throws Error when a bound is zero

std::vector<std::string> atom_names(std::size_t count);   // p, q, r, ...
std::vector<std::string> agent_names(std::size_t count);  // a, b, c, ...

BethModel random_beth(Rng& rng, std::size_t max_nodes, const std::vector<std::string>& atoms);
BethKripkeModel random_model(const GenParams& p);

// One-world model whose agents all see only that world.
BethKripkeModel single_world(const BethModel& m, const std::vector<std::string>& agents = {"a"},
                             const std::string& world = "w");

struct FormulaWeights {
    unsigned atom = 4, top = 1, bot = 1;
    unsigned neg = 2, conj = 2, disj = 2, imp = 2, know = 2;
    unsigned announce = 1, diamond = 1;
};

class FormulaSampler {
public:
    FormulaSampler(std::vector<std::string> atoms, std::vector<std::string> agents, bool announcements,
                   FormulaWeights weights = {});
    Formula sample(Rng& rng, std::size_t max_depth) const;

private:
    std::vector<std::string> atoms_;
    std::vector<std::string> agents_;
    bool announcements_;
    FormulaWeights w_;
};

// Every rooted poset with at most `max_nodes` nodes (one per isomorphism
// class) combined with every monotone valuation over `atoms`. Order: by
// size, then poset code, then valuation. max_nodes > 4 is BoundTooLarge.
std::vector<BethModel> enumerate_small_beth(std::size_t max_nodes, const std::set<std::string>& atoms);

// Instances of a schema whose metavariables range over all formulas of
// depth <= depth over the atoms (plus top/bot) built with ~, &, |, -> and
// K for the given agents, and whose agent variables range over the agents.
struct SchemaInstanceSpace {
    Formula schema;
    std::size_t depth = 1;
    std::set<std::string> atoms;
    std::vector<std::string> agents;

    std::vector<Formula> universe() const;
    void for_each_instance(const std::function<void(const Formula&)>& visit) const;
};

struct NoCounterexample {
    std::size_t trials = 0;
};

struct Counterexample {
    BethKripkeModel model;
    std::string world;
    Formula instance;
    std::size_t trial = 0;
};

using Verdict = std::variant<NoCounterexample, Counterexample>;

std::string describe(const Verdict& v);

// Draws `trials` models and checks every instance of the space at the root
// of every world. An empty `space.atoms`/`space.agents` means the atoms and
// agents of the generated models.
Verdict test_validity(const SchemaInstanceSpace& space, const GenParams& gen, std::size_t trials);

struct HypothesisOptions {
    std::size_t depth = 2;
    std::size_t pairs_per_model = 4;
    bool include_announcements = false;
};

struct HypothesisRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::string model_digest;
    Formula phi;
    Formula psi;
    std::optional<std::string> failing_world;
};

struct HypothesisReport {
    GenParams params;
    std::size_t trials = 0;
    HypothesisOptions options;
    std::vector<HypothesisRecord> records;
    Verdict verdict;

    std::size_t failures() const;
    std::string text() const;
    std::string json() const;
};

// Tests [phi]psi <-> (phi -> psi) on random S5 models. An experiment: the
// outcome is reported, never asserted.
HypothesisReport test_announcement_hypothesis(const GenParams& gen, std::size_t trials,
                                              const HypothesisOptions& options = {});

// Reference evaluator: the forcing clauses applied literally, with explicit
// path enumeration and freshly built announced models, no caching.
bool naive_forces(const BethKripkeModel& m, WorldIndex s, NodeIndex a, const Formula& f);

struct WitnessReport {
    std::size_t depth = 0;
    bool root_forces_diamond = false;   // alpha forces <p>top
    bool leaf_forces_p = false;         // gamma forces p
    bool leaf_valuation_empty = false;  // F(gamma) is empty
    std::size_t models = 0;
    std::size_t classes = 0;
    std::optional<Formula> equivalent;  // a propositional match, if one exists

    std::string text() const;
    std::string json() const;
};

BethModel nontranslatability_model();
WitnessReport nontranslatability_witness(std::size_t depth = 4);

// Deduplicated formulas of the full language over small single-world
// models, checked against the reference evaluator.
struct OracleComparison {
    std::size_t models = 0;
    std::size_t formulas = 0;
    std::size_t judgements = 0;
    std::vector<std::string> disagreements;
};

OracleComparison compare_with_oracle(std::size_t max_nodes, const std::set<std::string>& atoms, std::size_t depth);

// FNV-1a of the serialized document, as 16 hex digits.
std::string model_digest(const BethKripkeModel& m);

}  // namespace cepal
