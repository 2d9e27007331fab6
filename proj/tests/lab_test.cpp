#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>

#include "cepal/document.hpp"
#include "cepal/proofkit.hpp"
#include "support.hpp"

using namespace cepal;
using namespace testing_support;

namespace {

Formula F(const char* text) { return parse_formula(text); }

TEST(Generator, SingleNodeSingleWorld) {
    GenParams g;
    g.max_nodes_per_world = 1;
    g.max_worlds = 1;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        g.seed = seed;
        const BethKripkeModel m = random_model(g);
        ASSERT_EQ(m.world_count(), 1u);
        EXPECT_EQ(m.world(0).model.size(), 1u);
        EXPECT_TRUE(is_s5(m));
    }
}

TEST(Generator, Reproducible) {
    GenParams g;
    g.seed = 99;
    g.num_agents = 2;
    EXPECT_EQ(serialize_model(random_model(g)), serialize_model(random_model(g)));
    g.s5 = false;
    EXPECT_EQ(serialize_model(random_model(g)), serialize_model(random_model(g)));
    Rng a(4), b(4);
    EXPECT_EQ(random_beth(a, 6, {"p", "q"}), random_beth(b, 6, {"p", "q"}));
}

TEST(Generator, OutputsAreValid) {
    for (bool s5 : {true, false}) {
        for (std::size_t t = 0; t < 500; ++t) {
            GenParams g;
            g.seed = trial_seed(17, t);
            g.s5 = s5;
            g.num_agents = 2;
            g.max_nodes_per_world = 5;
            const BethKripkeModel m = random_model(g);
            ASSERT_GE(m.world_count(), 1u);
            ASSERT_LE(m.world_count(), g.max_worlds);
            for (const World& w : m.worlds()) {
                ASSERT_LE(w.model.size(), g.max_nodes_per_world);
                ASSERT_EQ(validate_beth(w.model.to_raw()), w.model);
            }
            // The document round trip re-validates everything; unused atoms are
            // not part of the format, so compare documents.
            const BethKripkeModel back = parse_model_document(serialize_model(m));
            ASSERT_EQ(serialize_model(back), serialize_model(m));
            ASSERT_EQ(back.world_count(), m.world_count());
            for (const auto& agent : m.agents()) ASSERT_EQ(back.access(agent), m.access(agent));
            if (s5) {
                ASSERT_TRUE(is_s5(m)) << serialize_model(m);
            } else {
                for (const auto& agent : m.agents())
                    for (const auto& [s, t2] : m.access(agent)) ASSERT_NE(s, t2);
            }
        }
    }
}

TEST(Generator, RejectsZeroBounds) {
    GenParams g;
    g.max_worlds = 0;
    EXPECT_THROW(random_model(g), Error);
    g = GenParams{};
    g.atom_count = 0;
    EXPECT_THROW(validate(g), Error);
}

TEST(Generator, Names) {
    EXPECT_EQ(atom_names(3), (std::vector<std::string>{"p", "q", "r"}));
    EXPECT_EQ(agent_names(2), (std::vector<std::string>{"a", "b"}));
}

TEST(Generator, TrialSeedsDependOnlyOnTheIndex) {
    std::vector<std::uint64_t> seeds;
    for (std::size_t t = 0; t < 1000; ++t) seeds.push_back(trial_seed(1, t));
    EXPECT_EQ(std::set<std::uint64_t>(seeds.begin(), seeds.end()).size(), seeds.size());
    EXPECT_EQ(trial_seed(1, 500), seeds[500]);
    EXPECT_NE(trial_seed(2, 0), seeds[0]);
}

// Rooted posets up to isomorphism, each with all of its monotone
// valuations, counted by brute force over labelled relations.
std::size_t count_by_brute_force(std::size_t max_nodes, std::size_t atoms) {
    std::map<std::vector<int>, std::size_t> valuations_per_shape;
    for (std::size_t n = 1; n <= max_nodes; ++n) {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) pairs.emplace_back(i, j);
        std::vector<std::size_t> perm(n);
        for (unsigned rel = 0; rel < (1U << pairs.size()); ++rel) {
            std::vector<char> leq(n * n, 0);
            for (std::size_t i = 0; i < n; ++i) leq[i * n + i] = 1;
            for (std::size_t k = 0; k < pairs.size(); ++k)
                if ((rel >> k) & 1U) leq[pairs[k].first * n + pairs[k].second] = 1;
            bool order = true;
            for (std::size_t i = 0; i < n && order; ++i)
                for (std::size_t j = 0; j < n && order; ++j) {
                    if (i != j && leq[i * n + j] && leq[j * n + i]) order = false;
                    for (std::size_t k = 0; k < n && order; ++k)
                        if (leq[i * n + j] && leq[j * n + k] && !leq[i * n + k]) order = false;
                }
            if (!order) continue;
            bool rooted = false;
            for (std::size_t r = 0; r < n; ++r) {
                bool least = true;
                for (std::size_t j = 0; j < n; ++j) least = least && leq[r * n + j];
                rooted = rooted || least;
            }
            if (!rooted) continue;
            std::iota(perm.begin(), perm.end(), 0);
            std::vector<int> shape;
            do {
                std::vector<int> key{static_cast<int>(n)};
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) key.push_back(leq[perm[i] * n + perm[j]]);
                if (shape.empty() || key < shape) shape = key;
            } while (std::next_permutation(perm.begin(), perm.end()));
            if (valuations_per_shape.count(shape)) continue;
            std::size_t monotone_count = 0;
            for (std::size_t v = 0; v < (std::size_t{1} << (n * atoms)); ++v) {
                auto holds = [&](std::size_t node, std::size_t atom) { return (v >> (node * atoms + atom)) & 1U; };
                bool monotone = true;
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        for (std::size_t a = 0; a < atoms; ++a)
                            if (leq[i * n + j] && holds(i, a) && !holds(j, a)) monotone = false;
                monotone_count += monotone;
            }
            valuations_per_shape[shape] = monotone_count;
        }
    }
    std::size_t total = 0;
    for (const auto& [shape, count] : valuations_per_shape) total += count;
    return total;
}

TEST(Enumerate, SmallCounts) {
    EXPECT_EQ(enumerate_small_beth(1, {"p"}).size(), 2u);
    EXPECT_EQ(enumerate_small_beth(2, {"p"}).size(), 5u);  // 2 one-node models + 3 chains
}

TEST(Enumerate, CountsMatchBruteForce) {
    EXPECT_EQ(enumerate_small_beth(3, {"p"}).size(), count_by_brute_force(3, 1));
    EXPECT_EQ(enumerate_small_beth(3, {"p", "q"}).size(), count_by_brute_force(3, 2));
    EXPECT_EQ(enumerate_small_beth(4, {"p"}).size(), count_by_brute_force(4, 1));
    EXPECT_EQ(enumerate_small_beth(4, {"p", "q"}).size(), count_by_brute_force(4, 2));
}

TEST(Enumerate, ModelsAreValidAndDistinct) {
    const auto models = enumerate_small_beth(4, {"p", "q"});
    std::set<std::string> docs;
    for (const auto& m : models) {
        ASSERT_EQ(validate_beth(m.to_raw()), m);
        ASSERT_EQ(m.root(), 0u);
        docs.insert(serialize_model(single_world(m)));
    }
    EXPECT_EQ(docs.size(), models.size());
    EXPECT_EQ(enumerate_small_beth(4, {"p", "q"}), models);  // deterministic order
}

TEST(Enumerate, ContainsTheThreePossibilitiesShape) {
    const BethModel target = i3();
    bool found = false;
    for (const auto& m : enumerate_small_beth(3, {"p", "q"})) {
        if (m.size() != 3 || !m.valuation(0).empty()) continue;
        std::set<std::set<std::string>> leaves;
        for (NodeIndex n = 1; n < 3; ++n)
            if (m.is_leaf(n) && m.leq(0, n)) leaves.insert(m.valuation(n));
        found = found || leaves == std::set<std::set<std::string>>{{"p"}, {"q"}};
    }
    EXPECT_TRUE(found);
    EXPECT_EQ(target.size(), 3u);
}

TEST(Enumerate, BoundTooLarge) { EXPECT_THROW(enumerate_small_beth(5, {"p"}), BoundTooLarge); }

SchemaInstanceSpace space_for(const std::string& id, std::size_t depth = 1) {
    return SchemaInstanceSpace{axiom_schema(id).pattern, depth, {}, {}};
}

TEST(Validity, FactivityHoldsOnS5) {
    GenParams g;
    const Verdict v = test_validity(space_for("A3"), g, 500);
    ASSERT_TRUE(std::holds_alternative<NoCounterexample>(v)) << describe(v);
    EXPECT_EQ(std::get<NoCounterexample>(v).trials, 500u);
}

TEST(Validity, FactivityFailsWithoutReflexivity) {
    GenParams g;
    g.s5 = false;
    const Verdict v = test_validity(space_for("A3"), g, 100);
    const auto* c = std::get_if<Counterexample>(&v);
    ASSERT_TRUE(c);
    const WorldIndex s = c->model.world_index(c->world);
    EXPECT_FALSE(naive_forces(c->model, s, c->model.world(s).model.root(), c->instance)) << print_formula(c->instance);
    EXPECT_TRUE(match_schema(axiom_schema("A3"), c->instance));
    EXPECT_EQ(describe(test_validity(space_for("A3"), g, 100)), describe(v));
}

TEST(Validity, HandBuiltFactivityCounterexample) {
    // K{a} p holds at s because s only sees t, where p holds; p fails at s.
    const BethKripkeModel m = parse_model_document(R"(
agents: a
world s { root: x; nodes: x; }
world t { root: y; nodes: y; val y: {p}; }
access a: (s,t), (t,t)
)");
    EXPECT_TRUE(satisfies(m, "s", F("K{a} p")).value);
    EXPECT_FALSE(satisfies(m, "s", F("K{a} p -> p")).value);
}

TEST(Validity, DecidabilityHoldsOnS5) {
    GenParams g;
    g.num_agents = 2;
    const Verdict v = test_validity(space_for("A6"), g, 500);
    EXPECT_TRUE(std::holds_alternative<NoCounterexample>(v)) << describe(v);
}

TEST(Validity, EverySchemaHoldsOnS5) {
    GenParams g;
    for (const auto& schema : axiom_schemas()) {
        const Verdict v = test_validity(SchemaInstanceSpace{schema.pattern, 1, {}, {}}, g, 200);
        EXPECT_TRUE(std::holds_alternative<NoCounterexample>(v)) << schema.id << ": " << describe(v);
    }
}

TEST(Validity, InstanceSpaceIsDeterministic) {
    std::vector<std::string> a, b;
    SchemaInstanceSpace space{axiom_schema("A2").pattern, 1, {"p"}, {"a", "b"}};
    space.for_each_instance([&](const Formula& f) { a.push_back(print_formula(f)); });
    space.for_each_instance([&](const Formula& f) { b.push_back(print_formula(f)); });
    EXPECT_EQ(a, b);
    // depth <= 1 over {p} with one agent pair: top, bot, p and their one-step extensions.
    const auto u = space.universe();
    EXPECT_EQ(u.size(), std::set<Formula>(u.begin(), u.end()).size());
    EXPECT_EQ(a.size(), u.size() * u.size() * 2);
}

TEST(Hypothesis, OpenRootExample) {
    const BethKripkeModel m = open_pq_model();
    EXPECT_TRUE(satisfies(m, "s", F("[p]~q")).value);
    EXPECT_TRUE(satisfies(m, "s", F("p -> ~q")).value);
    EXPECT_TRUE(satisfies(m, "s", F("[p]~q <-> (p -> ~q)")).value);
}

TEST(Hypothesis, AnnouncingTopIsTheIdentity) {
    Rng rng(8);
    for (std::size_t t = 0; t < 200; ++t) {
        GenParams g;
        g.seed = trial_seed(23, t);
        const BethKripkeModel m = random_model(g);
        EXPECT_EQ(announce(m, Formula::top()), m);
        FormulaSampler sampler({"p", "q"}, m.agents(), true);
        const Formula psi = sampler.sample(rng, 3);
        Evaluator e(m);
        for (WorldIndex s = 0; s < m.world_count(); ++s)
            ASSERT_EQ(e.satisfies(s, Formula::announce(Formula::top(), psi)), e.satisfies(s, psi));
    }
}

TEST(Hypothesis, ReportIsReproducible) {
    GenParams g;
    g.seed = 1;
    const HypothesisReport a = test_announcement_hypothesis(g, 100);
    const HypothesisReport b = test_announcement_hypothesis(g, 100);
    EXPECT_EQ(a.text(), b.text());
    EXPECT_EQ(a.json(), b.json());
    EXPECT_EQ(a.records.size(), 400u);
    // The verdict is the first failing record, re-checked here.
    const auto first = std::find_if(a.records.begin(), a.records.end(), [](const auto& r) { return r.failing_world.has_value(); });
    if (first == a.records.end()) {
        EXPECT_TRUE(std::holds_alternative<NoCounterexample>(a.verdict));
    } else {
        const auto* c = std::get_if<Counterexample>(&a.verdict);
        ASSERT_TRUE(c);
        EXPECT_EQ(c->trial, first->trial);
        EXPECT_EQ(model_digest(c->model), first->model_digest);
        const WorldIndex s = c->model.world_index(c->world);
        EXPECT_FALSE(naive_forces(c->model, s, c->model.world(s).model.root(), c->instance));
    }
    EXPECT_NE(a.text().find("# summary"), std::string::npos);
}

TEST(Hypothesis, RecordsAgreeWithTheOracle) {
    GenParams g;
    g.seed = 3;
    const HypothesisReport r = test_announcement_hypothesis(g, 60);
    for (const auto& rec : r.records) {
        GenParams p = g;
        p.seed = rec.seed;
        const BethKripkeModel m = random_model(p);
        ASSERT_EQ(model_digest(m), rec.model_digest);
        const Formula claim = Formula::iff(Formula::announce(rec.phi, rec.psi), Formula::imp(rec.phi, rec.psi));
        std::optional<std::string> failing;
        for (WorldIndex s = 0; s < m.world_count() && !failing; ++s)
            if (!naive_forces(m, s, m.world(s).model.root(), claim)) failing = m.world(s).name;
        ASSERT_EQ(failing, rec.failing_world) << print_formula(claim);
    }
}

TEST(Oracle, TopIsForcedEverywhere) {
    const BethKripkeModel m = open_pq_model();
    for (NodeIndex a = 0; a < 3; ++a) EXPECT_TRUE(naive_forces(m, 0, a, Formula::top()));
}

// Exhaustive over deduplicated formulas of depth <= 3 on every world of at
// most three nodes over {p, q}; this family contains the open-root model.
TEST(Oracle, AgreesOnAllSmallModels) {
    const auto family = enumerate_small_beth(3, {"p", "q"});
    const bool has_open_root = std::any_of(family.begin(), family.end(), [](const BethModel& m) {
        return m.size() == 3 && m.valuation(0).empty() && !m.is_leaf(0) && m.successors(0).size() == 2 &&
               std::set<std::set<std::string>>{m.valuation(1), m.valuation(2)} ==
                   std::set<std::set<std::string>>{{"p"}, {"q"}};
    });
    EXPECT_TRUE(has_open_root);
    const OracleComparison c = compare_with_oracle(3, {"p", "q"}, 3);
    EXPECT_EQ(c.models, family.size());
    EXPECT_GT(c.formulas, 1000u);
    EXPECT_TRUE(c.disagreements.empty()) << c.disagreements.front();
}

TEST(Witness, ModelAndSearch) {
    const BethModel w = nontranslatability_model();
    const BethKripkeModel m = single_world(w, {"a"}, "s");
    EXPECT_TRUE(forces(m, "s", "alpha", F("<p>top")).value);
    EXPECT_FALSE(forces(m, "s", "gamma", F("p")).value);
    EXPECT_TRUE(w.valuation(w.index_of("gamma")).empty());

    const auto start = std::chrono::steady_clock::now();
    const WitnessReport r = nontranslatability_witness(4);
    EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(30));
    EXPECT_TRUE(r.root_forces_diamond);
    EXPECT_FALSE(r.leaf_forces_p);
    EXPECT_TRUE(r.leaf_valuation_empty);
    EXPECT_EQ(r.models, enumerate_small_beth(3, {"p"}).size());
    EXPECT_FALSE(r.equivalent) << print_formula(*r.equivalent);
    EXPECT_FALSE(nontranslatability_witness(2).equivalent);
}

// <p>top holds at a root iff some node has p, which no propositional
// formula can see once p is absent from every leaf above the root.
TEST(Witness, ClassesOverTheFamily) {
    const auto models = enumerate_small_beth(3, {"p"});
    std::vector<const BethModel*> ptrs;
    for (const auto& m : models) ptrs.push_back(&m);
    const auto classes = propositional_classes(ptrs, {"p"}, 4);
    EXPECT_EQ(classes.size(), nontranslatability_witness(4).classes);
    for (std::size_t i = 0; i < models.size(); ++i) {
        const BethKripkeModel m = single_world(models[i]);
        const bool diamond = satisfies(m, "w", F("<p>top")).value;
        bool some_p = false;
        for (NodeIndex n = 0; n < models[i].size(); ++n) some_p = some_p || models[i].holds(n, "p");
        ASSERT_EQ(diamond, some_p);
    }
}

TEST(Digest, SixteenHexDigits) {
    const std::string d = model_digest(open_pq_model());
    EXPECT_EQ(d.size(), 16u);
    EXPECT_EQ(d, model_digest(open_pq_model()));
    EXPECT_NE(d, model_digest(announce(open_pq_model(), F("p"))));
}

}  // namespace
