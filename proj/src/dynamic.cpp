#include "cepal/dynamic.hpp"

#include <algorithm>
#include <stdexcept>

namespace cepal {

BethKripkeModel::BethKripkeModel(std::vector<World> worlds, std::vector<std::string> agents,
                                 const std::map<std::string, std::set<std::pair<std::string, std::string>>>& access)
    : worlds_(std::move(worlds)), agents_(std::move(agents)) {
    for (std::size_t i = 0; i < worlds_.size(); ++i)
        for (std::size_t j = i + 1; j < worlds_.size(); ++j)
            if (worlds_[i].name == worlds_[j].name) throw Error("duplicate world '" + worlds_[i].name + "'");
    for (std::size_t i = 0; i < agents_.size(); ++i)
        for (std::size_t j = i + 1; j < agents_.size(); ++j)
            if (agents_[i] == agents_[j]) throw Error("duplicate agent '" + agents_[i] + "'");
    for (const auto& agent : agents_) access_[agent];
    for (const auto& [agent, pairs] : access) {
        if (!has_agent(agent)) throw UnknownAgent(agent);
        auto& rel = access_[agent];
        for (const auto& [from, to] : pairs) rel.emplace(world_index(from), world_index(to));
    }
}

std::optional<WorldIndex> BethKripkeModel::find_world(const std::string& name) const {
    for (WorldIndex s = 0; s < worlds_.size(); ++s)
        if (worlds_[s].name == name) return s;
    return std::nullopt;
}

WorldIndex BethKripkeModel::world_index(const std::string& name) const {
    if (auto s = find_world(name)) return *s;
    throw UnknownWorld(name);
}

bool BethKripkeModel::has_agent(const std::string& agent) const {
    return std::find(agents_.begin(), agents_.end(), agent) != agents_.end();
}

const AccessRelation& BethKripkeModel::access(const std::string& agent) const {
    auto it = access_.find(agent);
    if (it == access_.end()) throw UnknownAgent(agent);
    return it->second;
}

std::vector<WorldIndex> BethKripkeModel::accessible(const std::string& agent, WorldIndex s) const {
    std::vector<WorldIndex> out;
    for (const auto& [from, to] : access(agent))
        if (from == s) out.push_back(to);
    return out;
}

std::size_t BethKripkeModel::node_count() const {
    std::size_t n = 0;
    for (const auto& w : worlds_) n += w.model.size();
    return n;
}

// ---------------------------------------------------------------------------

struct Evaluator::Update {
    explicit Update(BethKripkeModel m) : model(std::move(m)), session(model) {}
    BethKripkeModel model;
    Evaluator session;
};

Evaluator::Evaluator(const BethKripkeModel& model) : model_(model) {}
Evaluator::~Evaluator() = default;

const Table& Evaluator::table(const Formula& f) {
    if (auto it = memo_.find(f); it != memo_.end()) return it->second;
    Table t = compute(f, [this](const Formula& g) -> const Table& { return table(g); });
    return memo_.emplace(f, std::move(t)).first->second;
}

bool Evaluator::forces(WorldIndex s, NodeIndex a, const Formula& f) {
    if (s >= model_.world_count()) throw UnknownWorld("#" + std::to_string(s));
    if (a >= model_.world(s).model.size()) throw UnknownNode("#" + std::to_string(a));
    return table(f)[s][a] != 0;
}

bool Evaluator::satisfies(WorldIndex s, const Formula& f) {
    if (s >= model_.world_count()) throw UnknownWorld("#" + std::to_string(s));
    return forces(s, model_.world(s).model.root(), f);
}

Table Evaluator::know_table(const std::string& agent, const Table& inner) const {
    if (!model_.has_agent(agent)) throw UnknownAgent(agent);
    const auto& rel = model_.access(agent);
    Table out(model_.world_count());
    for (WorldIndex s = 0; s < model_.world_count(); ++s) {
        bool known = true;
        for (auto it = rel.lower_bound({s, 0}); it != rel.end() && it->first == s && known; ++it) {
            const NodeTruth& row = inner[it->second];
            known = std::all_of(row.begin(), row.end(), [](char v) { return v != 0; });
        }
        out[s] = clauses::constant(model_.world(s).model, known);
    }
    return out;
}

Table Evaluator::compute(const Formula& f, const SubTable& sub) {
    const auto& worlds = model_.worlds();
    Table out(worlds.size());
    switch (f.kind()) {
        case Connective::atom:
            for (WorldIndex s = 0; s < worlds.size(); ++s) out[s] = clauses::atom(worlds[s].model, f.name());
            return out;
        case Connective::top:
        case Connective::bot:
            for (WorldIndex s = 0; s < worlds.size(); ++s)
                out[s] = clauses::constant(worlds[s].model, f.kind() == Connective::top);
            return out;
        case Connective::neg: {
            const Table& a = sub(f.lhs());
            for (WorldIndex s = 0; s < worlds.size(); ++s) out[s] = clauses::neg(worlds[s].model, a[s]);
            return out;
        }
        case Connective::conj:
        case Connective::disj:
        case Connective::imp: {
            const Table& a = sub(f.lhs());
            const Table& b = sub(f.rhs());
            for (WorldIndex s = 0; s < worlds.size(); ++s) {
                const BethModel& m = worlds[s].model;
                out[s] = f.kind() == Connective::conj   ? clauses::conj(m, a[s], b[s])
                         : f.kind() == Connective::disj ? clauses::disj(m, a[s], b[s])
                                                        : clauses::imp(m, a[s], b[s]);
            }
            return out;
        }
        case Connective::know: return know_table(f.name(), sub(f.lhs()));
        case Connective::announce:
        case Connective::diamond: {
            const Table& announced = sub(f.lhs());
            const bool box = f.kind() == Connective::announce;
            for (WorldIndex s = 0; s < worlds.size(); ++s) {
                const BethModel& m = worlds[s].model;
                // The root fails to force ~phi iff some node forces phi.
                const bool executable =
                    std::any_of(announced[s].begin(), announced[s].end(), [](char v) { return v != 0; });
                bool value;
                if (!executable) {
                    value = box;
                } else {
                    Evaluator& next = announced_session(f.lhs());
                    WorldIndex t = next.model().world_index(worlds[s].name);
                    value = next.satisfies(t, f.rhs());
                }
                out[s] = clauses::constant(m, value);
            }
            return out;
        }
    }
    throw std::logic_error("unhandled connective");
}

Table Evaluator::evaluate_pattern(const Formula& pattern, const std::map<std::string, const Table*>& metavariables) {
    std::unordered_map<const void*, Table> local;
    SubTable rec = [&](const Formula& g) -> const Table& {
        if (g.is_metavariable()) {
            auto it = metavariables.find(g.name());
            if (it == metavariables.end()) throw UnboundMetavariable(g.name());
            return *it->second;
        }
        if (g.kind() == Connective::announce || g.kind() == Connective::diamond)
            throw std::logic_error("evaluate_pattern: announcements are not supported in patterns");
        if (auto it = local.find(g.id()); it != local.end()) return it->second;
        Table t = compute(g, rec);
        return local.emplace(g.id(), std::move(t)).first->second;
    };
    return rec(pattern);
}

BethKripkeModel Evaluator::build_announcement(const Formula& phi) {
    const Table& t = table(phi);
    BethKripkeModel out;
    out.agents_ = model_.agents_;
    std::vector<std::optional<WorldIndex>> renumber(model_.world_count());
    for (WorldIndex s = 0; s < model_.world_count(); ++s) {
        const World& w = model_.world(s);
        NodeTruth keep = clauses::neg(w.model, t[s]);
        for (auto& k : keep) k = k ? 0 : 1;
        if (!keep[w.model.root()]) continue;
        renumber[s] = out.worlds_.size();
        out.worlds_.push_back({w.name, w.model.restrict_to(keep)});
    }
    for (const auto& [agent, rel] : model_.access_) {
        auto& next = out.access_[agent];
        for (const auto& [from, to] : rel)
            if (renumber[from] && renumber[to]) next.emplace(*renumber[from], *renumber[to]);
    }
    return out;
}

Evaluator& Evaluator::announced_session(const Formula& phi) {
    auto it = updates_.find(phi);
    if (it == updates_.end())
        it = updates_.emplace(phi, std::make_unique<Update>(build_announcement(phi))).first;
    return it->second->session;
}

const BethKripkeModel& Evaluator::announced(const Formula& phi) { return announced_session(phi).model(); }

std::optional<BethModel> Evaluator::restrict_world(WorldIndex s, const Formula& phi) {
    if (s >= model_.world_count()) throw UnknownWorld("#" + std::to_string(s));
    const BethModel& m = model_.world(s).model;
    NodeTruth keep = clauses::neg(m, table(phi)[s]);
    for (auto& k : keep) k = k ? 0 : 1;
    if (!keep[m.root()]) return std::nullopt;
    return m.restrict_to(keep);
}

// ---------------------------------------------------------------------------

EvalResult forces(const BethKripkeModel& m, const std::string& world, const std::string& node, const Formula& f,
                  bool want_trace, const TraceOptions& options) {
    WorldIndex s = m.world_index(world);
    NodeIndex a = m.world(s).model.index_of(node);
    Evaluator session(m);
    EvalResult r{session.forces(s, a, f), std::nullopt};
    if (want_trace) r.trace = explain(session, s, a, f, options);
    return r;
}

EvalResult satisfies(const BethKripkeModel& m, const std::string& world, const Formula& f, bool want_trace,
                     const TraceOptions& options) {
    WorldIndex s = m.world_index(world);
    return forces(m, world, m.world(s).model.name(m.world(s).model.root()), f, want_trace, options);
}

std::optional<BethModel> restrict_world(const BethKripkeModel& m, const std::string& world, const Formula& phi) {
    Evaluator session(m);
    return session.restrict_world(m.world_index(world), phi);
}

BethKripkeModel announce(const BethKripkeModel& m, const Formula& phi) {
    Evaluator session(m);
    return session.announced(phi);
}

std::map<std::string, S5Report> check_s5(const BethKripkeModel& m) {
    std::map<std::string, S5Report> out;
    auto name = [&](WorldIndex s) { return m.world(s).name; };
    for (const auto& agent : m.agents()) {
        const AccessRelation& rel = m.access(agent);
        S5Report r;
        for (WorldIndex s = 0; s < m.world_count() && r.reflexive.holds; ++s) {
            if (!rel.count({s, s})) r.reflexive = {false, std::make_pair(name(s), name(s))};
        }
        for (const auto& [s, t] : rel) {
            for (auto it = rel.lower_bound({t, 0}); it != rel.end() && it->first == t; ++it) {
                if (r.transitive.holds && !rel.count({s, it->second}))
                    r.transitive = {false, std::make_pair(name(s), name(it->second))};
            }
            for (auto it = rel.lower_bound({s, 0}); it != rel.end() && it->first == s; ++it) {
                if (r.euclidean.holds && !rel.count({t, it->second}))
                    r.euclidean = {false, std::make_pair(name(t), name(it->second))};
            }
        }
        out.emplace(agent, r);
    }
    return out;
}

bool is_s5(const BethKripkeModel& m) {
    for (const auto& [agent, r] : check_s5(m))
        if (!r.equivalence()) return false;
    return true;
}

}  // namespace cepal
