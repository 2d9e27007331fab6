// Shared fixtures and brute-force oracles for the test suites.
#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cepal/beth.hpp"
#include "cepal/dynamic.hpp"
#include "cepal/lab.hpp"

namespace testing_support {

using namespace cepal;

inline BethModel beth(std::vector<std::string> nodes, std::vector<std::pair<std::string, std::string>> order,
                      std::map<std::string, std::set<std::string>> val, std::set<std::string> atoms = {}) {
    RawBethModel raw;
    raw.nodes = std::move(nodes);
    raw.order = std::move(order);
    raw.valuation = std::move(val);
    raw.atoms = std::move(atoms);
    return validate_beth(raw);
}

// Three Beth models for {p | q, ~(p & q)}.
inline BethModel i1() { return beth({"alpha"}, {}, {{"alpha", {"p"}}}, {"p", "q"}); }
inline BethModel i2() { return beth({"alpha1"}, {}, {{"alpha1", {"q"}}}, {"p", "q"}); }
inline BethModel i3() {
    return beth({"alpha2", "beta2", "gamma2"}, {{"alpha2", "beta2"}, {"alpha2", "gamma2"}},
                {{"beta2", {"p"}}, {"gamma2", {"q"}}});
}

// One world s whose root leaves p and q open; agent a sees only s.
inline BethModel open_pq() {
    return beth({"alpha", "beta", "gamma"}, {{"alpha", "beta"}, {"alpha", "gamma"}},
                {{"beta", {"p"}}, {"gamma", {"q"}}});
}
inline BethKripkeModel open_pq_model() { return single_world(open_pq(), {"a"}, "s"); }

inline std::string data_path(const std::string& rel) { return std::string(CEPAL_DATA_DIR) + "/" + rel; }

// Maximal chains containing `a`, found by trying every subset of nodes.
// upset_only: chains inside the up-set of `a`; otherwise chains of the
// whole poset (which may include nodes below `a`).
inline std::vector<std::vector<NodeIndex>> chains_through(const BethModel& m, NodeIndex a, bool upset_only) {
    const std::size_t n = m.size();
    auto allowed = [&](NodeIndex x) { return !upset_only || m.leq(a, x); };
    auto is_chain = [&](unsigned mask) {
        if (!((mask >> a) & 1U)) return false;
        for (NodeIndex x = 0; x < n; ++x) {
            if (!((mask >> x) & 1U)) continue;
            if (!allowed(x)) return false;
            for (NodeIndex y = 0; y < n; ++y)
                if (((mask >> y) & 1U) && !m.leq(x, y) && !m.leq(y, x)) return false;
        }
        return true;
    };
    std::vector<unsigned> chains;
    for (unsigned mask = 0; mask < (1U << n); ++mask)
        if (is_chain(mask)) chains.push_back(mask);
    std::vector<std::vector<NodeIndex>> out;
    for (unsigned c : chains) {
        bool maximal = true;
        for (unsigned d : chains)
            if (d != c && (d & c) == c) maximal = false;
        if (!maximal) continue;
        std::vector<NodeIndex> nodes;
        for (NodeIndex x = 0; x < n; ++x)
            if ((c >> x) & 1U) nodes.push_back(x);
        out.push_back(nodes);
    }
    return out;
}

// Propositional forcing by the textbook clauses: a bar exists iff the set
// of all nodes with the property meets every path.
inline bool brute_forces(const BethModel& m, NodeIndex a, const Formula& f, bool upset_only = true) {
    auto barred = [&](auto pred) {
        for (const auto& chain : chains_through(m, a, upset_only)) {
            bool met = false;
            for (NodeIndex b : chain) met = met || pred(b);
            if (!met) return false;
        }
        return true;
    };
    switch (f.kind()) {
        case Connective::top: return true;
        case Connective::bot: return false;
        case Connective::atom: return barred([&](NodeIndex b) { return m.holds(b, f.name()); });
        case Connective::conj: return brute_forces(m, a, f.lhs(), upset_only) && brute_forces(m, a, f.rhs(), upset_only);
        case Connective::disj:
            return barred([&](NodeIndex b) {
                return brute_forces(m, b, f.lhs(), upset_only) || brute_forces(m, b, f.rhs(), upset_only);
            });
        case Connective::neg:
            for (NodeIndex b = 0; b < m.size(); ++b)
                if (m.leq(a, b) && brute_forces(m, b, f.lhs(), upset_only)) return false;
            return true;
        case Connective::imp:
            for (NodeIndex b = 0; b < m.size(); ++b)
                if (m.leq(a, b) && brute_forces(m, b, f.lhs(), upset_only) && !brute_forces(m, b, f.rhs(), upset_only))
                    return false;
            return true;
        default: throw NonPropositionalFormula(print_formula(f));
    }
}

// A random propositional formula.
inline Formula random_prop(Rng& rng, const std::vector<std::string>& atoms, std::size_t depth) {
    static const FormulaWeights w{};
    FormulaSampler sampler(atoms, {}, false, w);
    return sampler.sample(rng, depth);
}

}  // namespace testing_support
