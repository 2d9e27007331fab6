#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cepal/document.hpp"
#include "cepal/proofkit.hpp"
#include "support.hpp"

using namespace cepal;
using namespace testing_support;

namespace {

Formula F(const char* text) { return parse_formula(text); }

ProofScript script(const char* text) { return parse_proof_script(text); }

const Rejected* rejected(const ProofVerdict& v) { return std::get_if<Rejected>(&v); }

TEST(Schemas, TableHasFifteenEntries) {
    const auto& all = axiom_schemas();
    ASSERT_EQ(all.size(), 15u);
    EXPECT_EQ(all.front().id, "A1.1");
    EXPECT_EQ(all.back().id, "A6");
    EXPECT_EQ(axiom_schema("A2").pattern, parse_formula("K{i} X & K{i} (X -> Y) -> K{i} Y", Syntax::schema));
    EXPECT_EQ(axiom_schema("A3").pattern, parse_formula("K{i} X -> X", Syntax::schema));
    EXPECT_EQ(axiom_schema("A4").pattern, parse_formula("K{i} X -> K{i} K{i} X", Syntax::schema));
    EXPECT_EQ(axiom_schema("A5").pattern, parse_formula("~K{i} X -> K{i} ~K{i} X", Syntax::schema));
    EXPECT_EQ(axiom_schema("A6").pattern, parse_formula("~K{i} X | K{i} X", Syntax::schema));
    EXPECT_THROW(axiom_schema("A7"), Error);
}

TEST(Match, DecidabilityBindsFormulaAndAgent) {
    auto b = match_schema(axiom_schema("A6"), F("~K{a}(p&q) | K{a}(p&q)"));
    ASSERT_TRUE(b);
    EXPECT_EQ(b->formulas.at("X"), F("p & q"));
    EXPECT_EQ(b->agents.at("i"), "a");
}

TEST(Match, IntrospectionNeedsOneAgent) {
    EXPECT_FALSE(match_schema(axiom_schema("A4"), F("K{a}p -> K{b}K{a}p")));
    EXPECT_TRUE(match_schema(axiom_schema("A4"), F("K{a}p -> K{a}K{a}p")));
}

TEST(Match, Distribution) {
    auto b = match_schema(axiom_schema("A2"), F("(K{a}p & K{a}(p->q)) -> K{a}q"));
    ASSERT_TRUE(b);
    EXPECT_EQ(b->formulas.at("X"), F("p"));
    EXPECT_EQ(b->formulas.at("Y"), F("q"));
    EXPECT_EQ(b->agents.at("i"), "a");
}

TEST(Match, RepeatedMetavariablesMustAgree) {
    EXPECT_FALSE(match_schema(axiom_schema("A1.1"), F("p -> q -> r")));
    EXPECT_TRUE(match_schema(axiom_schema("A1.1"), F("p -> q -> p")));
    EXPECT_FALSE(match_schema(axiom_schema("A3"), F("K{a} p -> q")));
    EXPECT_FALSE(match_schema(axiom_schema("A1.10"), F("p -> p -> q")));
}

TEST(Match, InstancesMatchBack) {
    Rng rng(5);
    FormulaSampler sampler({"p", "q"}, {"a", "b"}, true);
    for (const auto& schema : axiom_schemas()) {
        for (int k = 0; k < 50; ++k) {
            Binding b;
            for (const char* v : {"X", "Y", "Z"}) b.formulas[v] = sampler.sample(rng, 2);
            b.agents["i"] = rng.chance(0.5) ? "a" : "b";
            const Formula instance = substitute(schema.pattern, b);
            auto found = match_schema(schema, instance);
            ASSERT_TRUE(found) << schema.id << ": " << print_formula(instance);
            EXPECT_EQ(substitute(schema.pattern, *found), instance);
        }
    }
}

TEST(Check, SingleAxiom) {
    EXPECT_TRUE(std::holds_alternative<Accepted>(check_proof(script("1. p -> (q -> p) ; A1.1\n"))));
}

TEST(Check, Necessitation) {
    EXPECT_TRUE(std::holds_alternative<Accepted>(
        check_proof(script("1. K{a}p -> p ; A3\n2. K{a}(K{a}p -> p) ; NEC 1 a\n"))));
}

TEST(Check, MajorPremiseMustBeAnImplication) {
    const ProofVerdict v = check_proof(script("1. ~K{a}p | K{a}p ; A6\n2. p -> q -> p ; A1.1\n3. q ; MP 2 1\n"));
    const Rejected* r = rejected(v);
    ASSERT_TRUE(r);
    EXPECT_EQ(r->line, 3u);
    EXPECT_EQ(r->reason, "major premise not an implication");
}

TEST(Check, Rejections) {
    struct Case {
        const char* text;
        std::size_t line;
        const char* reason_prefix;
    };
    const Case cases[] = {
        {"1. p -> q ; A1.1\n", 1, "not an instance of A1.1"},
        {"1. p -> q -> p ; A1.1 [X=q]\n", 1, "binding X=q"},
        {"1. K{a} p -> K{a} K{a} p ; A4 [i=b]\n", 1, "binding i=b"},
        {"1. p -> q -> p ; A1.1\n2. q -> p ; MP 1 3\n", 2, "cited index not smaller"},
        {"1. p -> q -> p ; A1.1\n3. q -> p ; MP 2 1\n", 3, "cited line 2 does not exist"},
        {"1. p -> q -> p ; A1.1\n2. p ; MP 1 1\n", 2, "antecedent of the major premise"},
        {"1. p -> p -> p ; A1.1\n2. p -> p ; A1.1 [X=p, Y=p]\n", 2, "not an instance"},
        {"1. p -> q -> p ; A1.1\n2. K{b} (p -> q) ; NEC 1 b\n", 2, "necessitation must conclude"},
        {"goal: q -> p\n1. p -> q -> p ; A1.1\n", 1, "last line does not match the goal"},
        {"2. p -> q -> p ; A1.1\n1. q -> p -> q ; A1.1\n", 1, "line indices not increasing"},
    };
    for (const auto& c : cases) {
        const ProofVerdict v = check_proof(script(c.text));
        const Rejected* r = rejected(v);
        ASSERT_TRUE(r) << c.text;
        EXPECT_EQ(r->line, c.line) << c.text;
        EXPECT_EQ(r->reason.rfind(c.reason_prefix, 0), 0u) << c.text << " -> " << r->reason;
    }
}

TEST(Check, EmptyProofIsRejected) {
    ProofScript empty;
    ASSERT_TRUE(rejected(check_proof(empty)));
}

TEST(Script, ParsesBindingsAndGoal) {
    const ProofScript s = script("# comment\ngoal: ~K{a} (p & q) | K{a} (p & q)\n\n1. ~K{a}(p&q) | K{a}(p&q) ; A6 [X=p & q, i=a]\n");
    ASSERT_EQ(s.lines.size(), 1u);
    EXPECT_EQ(s.goal, F("~K{a}(p&q) | K{a}(p&q)"));
    const auto* ax = std::get_if<AxiomStep>(&s.lines[0].justification);
    ASSERT_TRUE(ax);
    EXPECT_EQ(ax->schema, "A6");
    ASSERT_TRUE(ax->binding);
    EXPECT_EQ(ax->binding->formulas.at("X"), F("p & q"));
    EXPECT_EQ(ax->binding->agents.at("i"), "a");
}

TEST(Script, GoalDefaultsToLastLine) {
    const ProofScript s = script("1. p -> q -> p ; A1.1\n2. K{a}(p -> q -> p) ; NEC 1 a\n");
    EXPECT_EQ(s.goal, F("K{a}(p -> q -> p)"));
    const auto* nec = std::get_if<Necessitation>(&s.lines[1].justification);
    ASSERT_TRUE(nec);
    EXPECT_EQ(nec->premise, 1u);
    EXPECT_EQ(nec->agent, "a");
}

TEST(Script, Errors) {
    struct Case {
        const char* text;
        std::size_t line;
    };
    for (const Case& c : {Case{"", 0}, Case{"1. p -> q -> p\n", 1}, Case{"# x\n1. p ; FOO\n", 2},
                          Case{"x. p ; A1.1\n", 1}, Case{"1. p ; A1.1 [X p]\n", 1}, Case{"1. p ; A1.1 [X=p\n", 1},
                          Case{"1. p & ; A1.1\n", 1}}) {
        try {
            parse_proof_script(c.text);
            ADD_FAILURE() << "accepted: " << c.text;
        } catch (const DocumentError& e) {
            if (c.line) { EXPECT_EQ(e.line(), c.line) << c.text; }
        } catch (const Error& e) {
            ADD_FAILURE() << "wrong error for " << c.text << ": " << e.what();
        }
    }
}

TEST(Check, IsDeterministic) {
    const ProofScript s = parse_proof_script(read_file(data_path("proofs/a2_chain.proof")));
    EXPECT_EQ(describe(check_proof(s)), describe(check_proof(s)));
}

struct ManifestEntry {
    std::string file;
    std::string verdict;
    std::size_t line = 0;
};

std::vector<ManifestEntry> manifest() {
    std::istringstream in(read_file(data_path("proofs/expected.txt")));
    std::vector<ManifestEntry> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        ManifestEntry e;
        fields >> e.file >> e.verdict >> e.line;
        out.push_back(e);
    }
    return out;
}

TEST(Corpus, VerdictsMatchTheManifest) {
    const auto entries = manifest();
    ASSERT_GE(entries.size(), 10u);
    std::size_t scripts = 0;
    for (const auto& d : std::filesystem::directory_iterator(data_path("proofs")))
        scripts += d.path().extension() == ".proof";
    EXPECT_EQ(scripts, entries.size());
    for (const auto& e : entries) {
        const ProofVerdict v = check_proof(parse_proof_script(read_file(data_path("proofs/" + e.file))));
        if (e.verdict == "accepted") {
            EXPECT_TRUE(std::holds_alternative<Accepted>(v)) << e.file << ": " << describe(v);
        } else {
            const Rejected* r = rejected(v);
            ASSERT_TRUE(r) << e.file;
            EXPECT_EQ(r->line, e.line) << e.file;
        }
    }
}

// Every atom renamed to p or q and every agent renamed to one of `agents`,
// in all combinations.
Formula rename(const Formula& f, const std::map<std::string, std::string>& atoms,
               const std::map<std::string, std::string>& agents) {
    switch (f.kind()) {
        case Connective::atom: return Formula::atom(atoms.at(f.name()));
        case Connective::top:
        case Connective::bot: return f;
        case Connective::neg: return Formula::neg(rename(f.lhs(), atoms, agents));
        case Connective::know: return Formula::know(agents.at(f.name()), rename(f.lhs(), atoms, agents));
        case Connective::conj: return Formula::conj(rename(f.lhs(), atoms, agents), rename(f.rhs(), atoms, agents));
        case Connective::disj: return Formula::disj(rename(f.lhs(), atoms, agents), rename(f.rhs(), atoms, agents));
        case Connective::imp: return Formula::imp(rename(f.lhs(), atoms, agents), rename(f.rhs(), atoms, agents));
        case Connective::announce:
            return Formula::announce(rename(f.lhs(), atoms, agents), rename(f.rhs(), atoms, agents));
        case Connective::diamond:
            return Formula::diamond(rename(f.lhs(), atoms, agents), rename(f.rhs(), atoms, agents));
    }
    return f;
}

std::vector<Formula> instantiations(const Formula& f, const std::vector<std::string>& atom_pool,
                                    const std::vector<std::string>& agent_pool) {
    const auto atoms = f.atoms();
    const auto agents = f.agents();
    std::vector<std::string> names(atoms.begin(), atoms.end());
    std::vector<std::string> agent_list(agents.begin(), agents.end());
    std::vector<Formula> out;
    std::vector<std::size_t> pick(names.size() + agent_list.size(), 0);
    for (;;) {
        std::map<std::string, std::string> am, gm;
        for (std::size_t i = 0; i < names.size(); ++i) am[names[i]] = atom_pool[pick[i]];
        for (std::size_t i = 0; i < agent_list.size(); ++i) gm[agent_list[i]] = agent_pool[pick[names.size() + i]];
        out.push_back(rename(f, am, gm));
        std::size_t k = 0;
        for (; k < pick.size(); ++k) {
            const std::size_t base = k < names.size() ? atom_pool.size() : agent_pool.size();
            if (++pick[k] < base) break;
            pick[k] = 0;
        }
        if (k == pick.size()) break;
    }
    return out;
}

TEST(Soundness, AcceptedLinesHoldOnRandomS5Models) {
    std::vector<Formula> theorems;
    for (const auto& e : manifest()) {
        if (e.verdict != "accepted") continue;
        const ProofScript s = parse_proof_script(read_file(data_path("proofs/" + e.file)));
        ASSERT_TRUE(std::holds_alternative<Accepted>(check_proof(s))) << e.file;
        for (const auto& line : s.lines)
            for (const auto& f : instantiations(line.formula, {"p", "q"}, {"a", "b"})) theorems.push_back(f);
    }
    ASSERT_GT(theorems.size(), 50u);
    for (std::size_t t = 0; t < 500; ++t) {
        GenParams g;
        g.seed = trial_seed(211, t);
        g.num_agents = 2;
        const BethKripkeModel m = random_model(g);
        Evaluator e(m);
        for (const auto& f : theorems)
            for (WorldIndex s = 0; s < m.world_count(); ++s)
                ASSERT_TRUE(e.satisfies(s, f)) << print_formula(f) << "\n" << serialize_model(m);
    }
}

}  // namespace
