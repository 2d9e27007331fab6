#include "cepal/beth.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>

namespace cepal {

std::optional<NodeIndex> BethModel::find(const std::string& name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<NodeIndex>(it - names_.begin());
}

NodeIndex BethModel::index_of(const std::string& name) const {
    if (auto n = find(name)) return *n;
    throw UnknownNode(name);
}

namespace {

std::vector<std::vector<NodeIndex>> covering(const std::vector<char>& leq, std::size_t n) {
    std::vector<std::vector<NodeIndex>> covers(n);
    for (NodeIndex a = 0; a < n; ++a) {
        for (NodeIndex b = 0; b < n; ++b) {
            if (a == b || !leq[a * n + b]) continue;
            bool direct = true;
            for (NodeIndex c = 0; c < n && direct; ++c) {
                if (c != a && c != b && leq[a * n + c] && leq[c * n + b]) direct = false;
            }
            if (direct) covers[a].push_back(b);
        }
    }
    return covers;
}

}  // namespace

BethModel validate_beth(const RawBethModel& raw) {
    if (raw.nodes.empty()) throw Error("a Beth model needs at least one node");
    BethModel m;
    m.names_ = raw.nodes;
    const std::size_t n = raw.nodes.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (raw.nodes[i] == raw.nodes[j]) throw Error("duplicate node '" + raw.nodes[i] + "'");
        }
    }

    m.leq_.assign(n * n, 0);
    for (NodeIndex a = 0; a < n; ++a) m.leq_[a * n + a] = 1;
    for (const auto& [lo, hi] : raw.order) m.leq_[m.index_of(lo) * n + m.index_of(hi)] = 1;
    for (NodeIndex k = 0; k < n; ++k)
        for (NodeIndex a = 0; a < n; ++a)
            if (m.leq_[a * n + k])
                for (NodeIndex b = 0; b < n; ++b)
                    if (m.leq_[k * n + b]) m.leq_[a * n + b] = 1;

    for (NodeIndex a = 0; a < n; ++a)
        for (NodeIndex b = a + 1; b < n; ++b)
            if (m.leq(a, b) && m.leq(b, a)) throw NotAPartialOrder(m.names_[a], m.names_[b]);

    if (raw.root) {
        m.root_ = m.index_of(*raw.root);
        for (NodeIndex b = 0; b < n; ++b)
            if (!m.leq(m.root_, b)) throw NoRoot(m.names_[m.root_], m.names_[b], "declared root is not below");
    } else {
        std::vector<NodeIndex> minimal;
        for (NodeIndex b = 0; b < n; ++b) {
            bool is_min = true;
            for (NodeIndex a = 0; a < n; ++a)
                if (a != b && m.leq(a, b)) is_min = false;
            if (is_min) minimal.push_back(b);
        }
        if (minimal.size() != 1)
            throw NoRoot(m.names_[minimal[0]], m.names_[minimal[1]], "minimal nodes without a common lower bound");
        m.root_ = minimal.front();
    }

    m.valuation_.assign(n, {});
    m.atoms_ = raw.atoms;
    for (const auto& [node, atoms] : raw.valuation) {
        m.valuation_[m.index_of(node)] = atoms;
        m.atoms_.insert(atoms.begin(), atoms.end());
    }
    for (NodeIndex a = 0; a < n; ++a)
        for (NodeIndex b = 0; b < n; ++b)
            if (a != b && m.leq(a, b))
                for (const auto& p : m.valuation_[a])
                    if (!m.valuation_[b].count(p)) throw NonMonotoneValuation(m.names_[a], m.names_[b], p);

    m.covers_ = covering(m.leq_, n);
    return m;
}

BethModel BethModel::restrict_to(const std::vector<char>& keep) const {
    if (keep.size() != size() || !keep[root_]) throw std::logic_error("restriction must keep the root");
    for (NodeIndex a = 0; a < size(); ++a)
        for (NodeIndex b = 0; b < size(); ++b)
            if (keep[b] && leq(a, b) && !keep[a]) throw std::logic_error("restriction must be closed downwards");

    std::vector<NodeIndex> kept;
    for (NodeIndex a = 0; a < size(); ++a)
        if (keep[a]) kept.push_back(a);
    const std::size_t k = kept.size();

    BethModel out;
    out.atoms_ = atoms_;
    out.leq_.assign(k * k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        out.names_.push_back(names_[kept[i]]);
        out.valuation_.push_back(valuation_[kept[i]]);
        if (kept[i] == root_) out.root_ = i;
        for (std::size_t j = 0; j < k; ++j) out.leq_[i * k + j] = leq_[kept[i] * size() + kept[j]];
    }
    out.covers_ = covering(out.leq_, k);
    return out;
}

RawBethModel BethModel::to_raw() const {
    RawBethModel raw;
    raw.nodes = names_;
    raw.root = names_[root_];
    for (NodeIndex a = 0; a < size(); ++a) {
        for (NodeIndex b : covers_[a]) raw.order.emplace_back(names_[a], names_[b]);
        if (!valuation_[a].empty()) raw.valuation[names_[a]] = valuation_[a];
    }
    raw.atoms = atoms_;
    return raw;
}

namespace {

void check_node(const BethModel& m, NodeIndex a) {
    if (a >= m.size()) throw UnknownNode("#" + std::to_string(a));
}

}  // namespace

NodeSet up_set(const BethModel& m, NodeIndex a) {
    check_node(m, a);
    NodeSet out;
    for (NodeIndex b = 0; b < m.size(); ++b)
        if (m.leq(a, b)) out.insert(b);
    return out;
}

std::vector<Path> maximal_paths(const BethModel& m, NodeIndex a) {
    check_node(m, a);
    std::vector<Path> out;
    Path current{a};
    std::function<void(NodeIndex)> extend = [&](NodeIndex n) {
        if (m.is_leaf(n)) {
            out.push_back(current);
            return;
        }
        for (NodeIndex next : m.successors(n)) {
            current.push_back(next);
            extend(next);
            current.pop_back();
        }
    };
    extend(a);
    return out;
}

std::optional<Path> avoiding_path(const BethModel& m, NodeIndex a, const NodeTruth& member) {
    check_node(m, a);
    // dead[n]: every path from n meets the set.
    std::vector<char> dead(m.size(), 0);
    Path path;
    std::function<bool(NodeIndex)> search = [&](NodeIndex n) {
        if (member[n] || dead[n]) return false;
        path.push_back(n);
        if (m.is_leaf(n)) return true;
        for (NodeIndex next : m.successors(n))
            if (search(next)) return true;
        path.pop_back();
        dead[n] = 1;
        return false;
    };
    if (search(a)) return path;
    return std::nullopt;
}

bool meets_every_path(const BethModel& m, NodeIndex a, const NodeTruth& member) {
    return !avoiding_path(m, a, member).has_value();
}

bool is_bar(const BethModel& m, NodeIndex a, const NodeSet& bar) {
    check_node(m, a);
    NodeTruth member(m.size(), 0);
    for (NodeIndex b : bar) {
        check_node(m, b);
        if (!m.leq(a, b)) throw NodeOutsideUpSet(m.name(b), m.name(a));
        member[b] = 1;
    }
    return meets_every_path(m, a, member);
}

namespace clauses {

NodeTruth constant(const BethModel& m, bool value) { return NodeTruth(m.size(), value ? 1 : 0); }

NodeTruth atom(const BethModel& m, const std::string& name) {
    NodeTruth holds(m.size(), 0);
    for (NodeIndex b = 0; b < m.size(); ++b) holds[b] = m.holds(b, name) ? 1 : 0;
    NodeTruth out(m.size(), 0);
    for (NodeIndex a = 0; a < m.size(); ++a) out[a] = meets_every_path(m, a, holds) ? 1 : 0;
    return out;
}

NodeTruth neg(const BethModel& m, const NodeTruth& a) {
    NodeTruth out(m.size(), 1);
    for (NodeIndex x = 0; x < m.size(); ++x)
        for (NodeIndex y = 0; y < m.size(); ++y)
            if (m.leq(x, y) && a[y]) {
                out[x] = 0;
                break;
            }
    return out;
}

NodeTruth conj(const BethModel& m, const NodeTruth& a, const NodeTruth& b) {
    NodeTruth out(m.size(), 0);
    for (NodeIndex x = 0; x < m.size(); ++x) out[x] = (a[x] && b[x]) ? 1 : 0;
    return out;
}

NodeTruth disj(const BethModel& m, const NodeTruth& a, const NodeTruth& b) {
    NodeTruth either(m.size(), 0);
    for (NodeIndex x = 0; x < m.size(); ++x) either[x] = (a[x] || b[x]) ? 1 : 0;
    NodeTruth out(m.size(), 0);
    for (NodeIndex x = 0; x < m.size(); ++x) out[x] = meets_every_path(m, x, either) ? 1 : 0;
    return out;
}

NodeTruth imp(const BethModel& m, const NodeTruth& a, const NodeTruth& b) {
    NodeTruth out(m.size(), 1);
    for (NodeIndex x = 0; x < m.size(); ++x)
        for (NodeIndex y = 0; y < m.size(); ++y)
            if (m.leq(x, y) && a[y] && !b[y]) {
                out[x] = 0;
                break;
            }
    return out;
}

}  // namespace clauses

NodeTruth propositional_truth(const BethModel& m, const Formula& f) {
    if (classify(f) != FormulaClass::propositional) throw NonPropositionalFormula(print_formula(f));
    std::unordered_map<const void*, NodeTruth> memo;
    std::function<const NodeTruth&(const Formula&)> eval = [&](const Formula& g) -> const NodeTruth& {
        if (auto it = memo.find(g.id()); it != memo.end()) return it->second;
        NodeTruth t;
        switch (g.kind()) {
            case Connective::atom: t = clauses::atom(m, g.name()); break;
            case Connective::top: t = clauses::constant(m, true); break;
            case Connective::bot: t = clauses::constant(m, false); break;
            case Connective::neg: t = clauses::neg(m, eval(g.lhs())); break;
            case Connective::conj: t = clauses::conj(m, eval(g.lhs()), eval(g.rhs())); break;
            case Connective::disj: t = clauses::disj(m, eval(g.lhs()), eval(g.rhs())); break;
            case Connective::imp: t = clauses::imp(m, eval(g.lhs()), eval(g.rhs())); break;
            default: throw NonPropositionalFormula(print_formula(g));
        }
        return memo.emplace(g.id(), std::move(t)).first->second;
    };
    return eval(f);
}

bool forces_prop(const BethModel& m, NodeIndex a, const Formula& f) {
    check_node(m, a);
    return propositional_truth(m, f)[a] != 0;
}

bool leaf_shortcut_forces(const BethModel& m, NodeIndex a, const Formula& f) {
    check_node(m, a);
    if (classify(f) != FormulaClass::propositional) throw NonPropositionalFormula(print_formula(f));
    std::function<bool(NodeIndex, const Formula&)> rec = [&](NodeIndex x, const Formula& g) -> bool {
        switch (g.kind()) {
            case Connective::top: return true;
            case Connective::bot: return false;
            case Connective::atom:
                for (NodeIndex y = 0; y < m.size(); ++y)
                    if (m.leq(x, y) && m.is_leaf(y) && !m.holds(y, g.name())) return false;
                return true;
            case Connective::conj: return rec(x, g.lhs()) && rec(x, g.rhs());
            case Connective::disj:
                for (NodeIndex y = 0; y < m.size(); ++y)
                    if (m.leq(x, y) && m.is_leaf(y) && !rec(y, g.lhs()) && !rec(y, g.rhs())) return false;
                return true;
            case Connective::neg:
                for (NodeIndex y = 0; y < m.size(); ++y)
                    if (m.leq(x, y) && rec(y, g.lhs())) return false;
                return true;
            case Connective::imp:
                for (NodeIndex y = 0; y < m.size(); ++y)
                    if (m.leq(x, y) && rec(y, g.lhs()) && !rec(y, g.rhs())) return false;
                return true;
            default: throw NonPropositionalFormula(print_formula(g));
        }
    };
    return rec(a, f);
}

std::vector<PropositionalClass> propositional_classes(std::span<const BethModel* const> models,
                                                      const std::set<std::string>& atoms, std::size_t depth) {
    std::vector<PropositionalClass> classes;
    std::unordered_map<std::string, std::size_t> seen;

    auto key_of = [](const std::vector<NodeTruth>& tables) {
        std::string key;
        for (const auto& t : tables) {
            key.append(t.begin(), t.end());
            key.push_back('|');
        }
        return key;
    };
    auto add = [&](Formula f, std::vector<NodeTruth> tables) {
        std::string key = key_of(tables);
        if (seen.count(key)) return;
        seen.emplace(std::move(key), classes.size());
        classes.push_back({std::move(f), std::move(tables)});
    };
    auto apply = [&](auto&& clause) {
        return [&, clause](const PropositionalClass& a, const PropositionalClass* b) {
            std::vector<NodeTruth> tables;
            tables.reserve(models.size());
            for (std::size_t i = 0; i < models.size(); ++i)
                tables.push_back(clause(*models[i], a.tables[i], b ? b->tables[i] : a.tables[i]));
            return tables;
        };
    };

    for (const auto& p : atoms) {
        std::vector<NodeTruth> tables;
        for (const BethModel* m : models) tables.push_back(clauses::atom(*m, p));
        add(Formula::atom(p), std::move(tables));
    }
    {
        std::vector<NodeTruth> t, b;
        for (const BethModel* m : models) {
            t.push_back(clauses::constant(*m, true));
            b.push_back(clauses::constant(*m, false));
        }
        add(Formula::top(), std::move(t));
        add(Formula::bot(), std::move(b));
    }

    auto neg_tables = apply([](const BethModel& m, const NodeTruth& a, const NodeTruth&) { return clauses::neg(m, a); });
    auto conj_tables = apply([](const BethModel& m, const NodeTruth& a, const NodeTruth& b) { return clauses::conj(m, a, b); });
    auto disj_tables = apply([](const BethModel& m, const NodeTruth& a, const NodeTruth& b) { return clauses::disj(m, a, b); });
    auto imp_tables = apply([](const BethModel& m, const NodeTruth& a, const NodeTruth& b) { return clauses::imp(m, a, b); });

    std::size_t frontier_begin = 0;
    for (std::size_t round = 1; round <= depth; ++round) {
        const std::size_t frontier_end = classes.size();
        if (frontier_begin == frontier_end) break;
        for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
            auto tables = neg_tables(classes[i], nullptr);
            add(Formula::neg(classes[i].formula), std::move(tables));
        }
        for (std::size_t i = 0; i < frontier_end; ++i) {
            for (std::size_t j = 0; j < frontier_end; ++j) {
                if (i < frontier_begin && j < frontier_begin) continue;
                // `add` may reallocate, so no references survive across it.
                Formula fa = classes[i].formula;
                Formula fb = classes[j].formula;
                auto c = conj_tables(classes[i], &classes[j]);
                auto d = disj_tables(classes[i], &classes[j]);
                auto m = imp_tables(classes[i], &classes[j]);
                add(Formula::conj(fa, fb), std::move(c));
                add(Formula::disj(fa, fb), std::move(d));
                add(Formula::imp(fa, fb), std::move(m));
            }
        }
        frontier_begin = frontier_end;
    }
    return classes;
}

std::optional<Formula> equivalent_up_to_depth(const PointedBeth& x, const PointedBeth& y, std::size_t depth,
                                              const std::set<std::string>& atoms) {
    check_node(x.model, x.point);
    check_node(y.model, y.point);
    const BethModel* models[] = {&x.model, &y.model};
    for (const auto& c : propositional_classes(models, atoms, depth)) {
        if ((c.tables[0][x.point] != 0) != (c.tables[1][y.point] != 0)) return c.formula;
    }
    return std::nullopt;
}

}  // namespace cepal
