#include "cepal/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "cepal/document.hpp"

namespace cepal {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t seed, std::size_t trial) {
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(trial) + 1));
}

void validate(const GenParams& p) {
    if (p.max_nodes_per_world == 0 || p.max_worlds == 0 || p.num_agents == 0 || p.atom_count == 0)
        throw Error("generator bounds must all be at least 1");
}

std::vector<std::string> atom_names(std::size_t count) {
    static const char* letters[] = {"p", "q", "r", "s", "t", "u", "v", "w"};
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(i < 8 ? letters[i] : "p" + std::to_string(i));
    return out;
}

std::vector<std::string> agent_names(std::size_t count) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "agent" + std::to_string(i));
    return out;
}

// ---------------------------------------------------------------------------
// Generators

BethModel random_beth(Rng& rng, std::size_t max_nodes, const std::vector<std::string>& atoms) {
    const std::size_t k = 1 + rng.below(max_nodes);
    RawBethModel raw;
    for (std::size_t i = 0; i < k; ++i) raw.nodes.push_back("n" + std::to_string(i));
    raw.root = raw.nodes[0];
    std::vector<char> leq(k * k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        leq[i * k + i] = 1;
        leq[i] = 1;  // the fresh root n0 is below everything
    }
    for (std::size_t i = 1; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (rng.chance(0.4)) leq[i * k + j] = 1;
    for (std::size_t m = 0; m < k; ++m)
        for (std::size_t i = 0; i < k; ++i)
            if (leq[i * k + m])
                for (std::size_t j = 0; j < k; ++j)
                    if (leq[m * k + j]) leq[i * k + j] = 1;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (i != j && leq[i * k + j]) raw.order.emplace_back(raw.nodes[i], raw.nodes[j]);

    // Random seeds, closed upwards.
    std::vector<std::set<std::string>> seeded(k);
    for (std::size_t i = 0; i < k; ++i)
        for (const auto& a : atoms)
            if (rng.chance(0.35)) seeded[i].insert(a);
    for (std::size_t j = 0; j < k; ++j) {
        std::set<std::string> v;
        for (std::size_t i = 0; i < k; ++i)
            if (leq[i * k + j]) v.insert(seeded[i].begin(), seeded[i].end());
        if (!v.empty()) raw.valuation[raw.nodes[j]] = v;
    }
    raw.atoms.insert(atoms.begin(), atoms.end());
    return validate_beth(raw);
}

BethKripkeModel random_model(const GenParams& p) {
    validate(p);
    Rng rng(p.seed);
    const auto atoms = atom_names(p.atom_count);
    const auto agents = agent_names(p.num_agents);
    const std::size_t n = 1 + rng.below(p.max_worlds);
    std::vector<World> worlds;
    for (std::size_t i = 0; i < n; ++i) worlds.push_back({"w" + std::to_string(i), random_beth(rng, p.max_nodes_per_world, atoms)});
    std::map<std::string, std::set<std::pair<std::string, std::string>>> access;
    for (const auto& agent : agents) {
        auto& rel = access[agent];
        if (p.s5) {
            // A random partition; the relation is "same block".
            std::vector<std::size_t> block(n);
            for (auto& b : block) b = rng.below(n);
            for (std::size_t s = 0; s < n; ++s)
                for (std::size_t t = 0; t < n; ++t)
                    if (block[s] == block[t]) rel.emplace(worlds[s].name, worlds[t].name);
        } else {
            for (std::size_t s = 0; s < n; ++s)
                for (std::size_t t = 0; t < n; ++t)
                    if (s != t && rng.chance(0.5)) rel.emplace(worlds[s].name, worlds[t].name);
        }
    }
    return BethKripkeModel(std::move(worlds), agents, access);
}

BethKripkeModel single_world(const BethModel& m, const std::vector<std::string>& agents, const std::string& world) {
    std::map<std::string, std::set<std::pair<std::string, std::string>>> access;
    for (const auto& a : agents) access[a].emplace(world, world);
    return BethKripkeModel({World{world, m}}, agents, access);
}

FormulaSampler::FormulaSampler(std::vector<std::string> atoms, std::vector<std::string> agents, bool announcements,
                               FormulaWeights weights)
    : atoms_(std::move(atoms)), agents_(std::move(agents)), announcements_(announcements), w_(weights) {
    if (atoms_.empty()) throw Error("formula sampler needs at least one atom");
}

Formula FormulaSampler::sample(Rng& rng, std::size_t max_depth) const {
    struct Choice {
        unsigned weight;
        Connective kind;
    };
    std::vector<Choice> choices = {{w_.atom, Connective::atom}, {w_.top, Connective::top}, {w_.bot, Connective::bot}};
    if (max_depth > 0) {
        choices.insert(choices.end(), {{w_.neg, Connective::neg},
                                       {w_.conj, Connective::conj},
                                       {w_.disj, Connective::disj},
                                       {w_.imp, Connective::imp}});
        if (!agents_.empty()) choices.push_back({w_.know, Connective::know});
        if (announcements_) choices.insert(choices.end(), {{w_.announce, Connective::announce}, {w_.diamond, Connective::diamond}});
    }
    unsigned total = 0;
    for (const auto& c : choices) total += c.weight;
    if (total == 0) throw Error("formula sampler weights are all zero");
    std::size_t pick = rng.below(total);
    Connective kind = choices.back().kind;
    for (const auto& c : choices) {
        if (pick < c.weight) {
            kind = c.kind;
            break;
        }
        pick -= c.weight;
    }
    const std::size_t d = max_depth == 0 ? 0 : max_depth - 1;
    switch (kind) {
        case Connective::atom: return Formula::atom(atoms_[rng.below(atoms_.size())]);
        case Connective::top: return Formula::top();
        case Connective::bot: return Formula::bot();
        case Connective::neg: return Formula::neg(sample(rng, d));
        case Connective::know: {
            const auto& agent = agents_[rng.below(agents_.size())];
            return Formula::know(agent, sample(rng, d));
        }
        default: {
            Formula a = sample(rng, d);
            Formula b = sample(rng, d);
            switch (kind) {
                case Connective::conj: return Formula::conj(a, b);
                case Connective::disj: return Formula::disj(a, b);
                case Connective::imp: return Formula::imp(a, b);
                case Connective::announce: return Formula::announce(a, b);
                default: return Formula::diamond(a, b);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Small-model enumeration

namespace {

std::vector<std::vector<std::size_t>> permutations(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<std::size_t>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

// Key identifying a model up to isomorphism (minimum over relabelings).
std::string iso_key(const BethModel& m, const std::vector<std::string>& atoms) {
    std::string best;
    for (const auto& perm : permutations(m.size())) {
        std::string code(1, static_cast<char>('0' + m.size()));
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j) code.push_back(m.leq(perm[i], perm[j]) ? '1' : '0');
        for (std::size_t i = 0; i < m.size(); ++i) {
            code.push_back('/');
            for (const auto& a : atoms) code.push_back(m.holds(perm[i], a) ? '1' : '0');
        }
        if (best.empty() || code < best) best = code;
    }
    return best;
}

}  // namespace

std::vector<BethModel> enumerate_small_beth(std::size_t max_nodes, const std::set<std::string>& atom_set) {
    constexpr std::size_t kLimit = 4;
    if (max_nodes > kLimit) throw BoundTooLarge(max_nodes, kLimit);
    const std::vector<std::string> atoms(atom_set.begin(), atom_set.end());
    std::vector<BethModel> out;
    for (std::size_t n = 1; n <= max_nodes; ++n) {
        const std::size_t k = n - 1;  // nodes above the root
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (i != j) pairs.emplace_back(i, j);
        auto holds = [&](std::uint32_t mask, std::size_t i, std::size_t j) {
            for (std::size_t b = 0; b < pairs.size(); ++b)
                if (pairs[b] == std::make_pair(i, j)) return ((mask >> b) & 1U) != 0;
            return false;
        };
        const auto perms = permutations(k);
        std::set<std::uint32_t> canonical;
        for (std::uint32_t mask = 0; mask < (1U << pairs.size()); ++mask) {
            bool ok = true;
            for (std::size_t i = 0; i < k && ok; ++i)
                for (std::size_t j = 0; j < k && ok; ++j) {
                    if (i == j || !holds(mask, i, j)) continue;
                    if (holds(mask, j, i)) ok = false;
                    for (std::size_t l = 0; l < k && ok; ++l)
                        if (l != i && holds(mask, j, l) && !holds(mask, i, l)) ok = false;
                }
            if (!ok) continue;
            std::uint32_t best = mask;
            for (const auto& perm : perms) {
                std::uint32_t code = 0;
                for (std::size_t b = 0; b < pairs.size(); ++b)
                    if (holds(mask, perm[pairs[b].first], perm[pairs[b].second])) code |= 1U << b;
                best = std::min(best, code);
            }
            canonical.insert(best);
        }
        for (std::uint32_t code : canonical) {
            RawBethModel raw;
            for (std::size_t i = 0; i < n; ++i) raw.nodes.push_back("n" + std::to_string(i));
            raw.root = raw.nodes[0];
            for (std::size_t i = 0; i < k; ++i) raw.order.emplace_back("n0", raw.nodes[i + 1]);
            for (std::size_t b = 0; b < pairs.size(); ++b)
                if ((code >> b) & 1U) raw.order.emplace_back(raw.nodes[pairs[b].first + 1], raw.nodes[pairs[b].second + 1]);
            raw.atoms = atom_set;
            const BethModel shape = validate_beth(raw);

            std::vector<std::uint32_t> up_sets;
            for (std::uint32_t s = 0; s < (1U << n); ++s) {
                bool closed = true;
                for (std::size_t a = 0; a < n && closed; ++a)
                    for (std::size_t b = 0; b < n && closed; ++b)
                        if (((s >> a) & 1U) && shape.leq(a, b) && !((s >> b) & 1U)) closed = false;
                if (closed) up_sets.push_back(s);
            }
            std::vector<std::size_t> choice(atoms.size(), 0);
            while (true) {
                RawBethModel valued = raw;
                for (std::size_t a = 0; a < atoms.size(); ++a)
                    for (std::size_t node = 0; node < n; ++node)
                        if ((up_sets[choice[a]] >> node) & 1U) valued.valuation[raw.nodes[node]].insert(atoms[a]);
                out.push_back(validate_beth(valued));
                std::size_t pos = atoms.size();
                while (pos > 0 && ++choice[pos - 1] == up_sets.size()) choice[--pos] = 0;
                if (pos == 0) break;
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Schema instances and validity testing

namespace {

std::vector<Formula> formulas_up_to(std::size_t depth, const std::set<std::string>& atoms,
                                    const std::vector<std::string>& agents) {
    std::vector<std::vector<Formula>> by_depth(1);
    for (const auto& a : atoms) by_depth[0].push_back(Formula::atom(a));
    by_depth[0].push_back(Formula::top());
    by_depth[0].push_back(Formula::bot());
    for (std::size_t d = 1; d <= depth; ++d) {
        std::vector<Formula> level;
        for (const auto& f : by_depth[d - 1]) {
            level.push_back(Formula::neg(f));
            for (const auto& agent : agents) level.push_back(Formula::know(agent, f));
        }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                if (i != d - 1 && j != d - 1) continue;
                for (const auto& a : by_depth[i])
                    for (const auto& b : by_depth[j]) {
                        level.push_back(Formula::conj(a, b));
                        level.push_back(Formula::disj(a, b));
                        level.push_back(Formula::imp(a, b));
                    }
            }
        by_depth.push_back(std::move(level));
    }
    std::vector<Formula> out;
    for (auto& level : by_depth) out.insert(out.end(), level.begin(), level.end());
    return out;
}

std::vector<std::string> metavariables(const Formula& schema) {
    std::vector<std::string> out;
    for (const auto& a : schema.atoms())
        if (!a.empty() && std::isupper(static_cast<unsigned char>(a[0]))) out.push_back(a);
    return out;
}

Formula rename_agents(const Formula& f, const std::map<std::string, std::string>& agents) {
    switch (f.kind()) {
        case Connective::atom:
        case Connective::top:
        case Connective::bot: return f;
        case Connective::neg: return Formula::neg(rename_agents(f.lhs(), agents));
        case Connective::know: {
            auto it = agents.find(f.name());
            return Formula::know(it == agents.end() ? f.name() : it->second, rename_agents(f.lhs(), agents));
        }
        default: {
            Formula a = rename_agents(f.lhs(), agents);
            Formula b = rename_agents(f.rhs(), agents);
            switch (f.kind()) {
                case Connective::conj: return Formula::conj(a, b);
                case Connective::disj: return Formula::disj(a, b);
                case Connective::imp: return Formula::imp(a, b);
                case Connective::announce: return Formula::announce(a, b);
                default: return Formula::diamond(a, b);
            }
        }
    }
}

// Calls visit(assignment) for every assignment of `values` to `vars`.
template <class T, class Fn>
bool for_each_assignment(const std::vector<std::string>& vars, const std::vector<T>& values, Fn&& visit) {
    std::vector<std::size_t> idx(vars.size(), 0);
    if (!vars.empty() && values.empty()) return false;
    while (true) {
        if (visit(idx)) return true;
        std::size_t pos = vars.size();
        while (pos > 0 && ++idx[pos - 1] == values.size()) idx[--pos] = 0;
        if (pos == 0) return false;
    }
}

struct Found {
    std::string world;
    Formula instance;
};

std::optional<Found> first_failure(const SchemaInstanceSpace& space, const std::vector<Formula>& universe,
                                  const BethKripkeModel& m) {
    Evaluator session(m);
    // The universe collapses to one representative per truth table.
    std::vector<std::pair<Formula, const Table*>> classes;
    std::set<Table> seen;
    for (const auto& u : universe) {
        const Table& t = session.table(u);
        if (seen.insert(t).second) classes.emplace_back(u, &t);
    }
    const auto mvs = metavariables(space.schema);
    const std::set<std::string> vars_set = space.schema.agents();
    const std::vector<std::string> agent_vars(vars_set.begin(), vars_set.end());

    std::optional<Found> found;
    for_each_assignment(agent_vars, space.agents, [&](const std::vector<std::size_t>& ai) {
        std::map<std::string, std::string> agents;
        for (std::size_t i = 0; i < agent_vars.size(); ++i) agents[agent_vars[i]] = space.agents[ai[i]];
        const Formula pattern = rename_agents(space.schema, agents);
        return for_each_assignment(mvs, classes, [&](const std::vector<std::size_t>& ci) {
            std::map<std::string, const Table*> tables;
            for (std::size_t i = 0; i < mvs.size(); ++i) tables[mvs[i]] = classes[ci[i]].second;
            const Table result = session.evaluate_pattern(pattern, tables);
            for (WorldIndex s = 0; s < m.world_count(); ++s) {
                if (result[s][m.world(s).model.root()]) continue;
                Binding b;
                b.agents = agents;
                for (std::size_t i = 0; i < mvs.size(); ++i) b.formulas[mvs[i]] = classes[ci[i]].first;
                Formula instance = substitute(space.schema, b);
                Evaluator check(m);
                if (check.satisfies(s, instance))
                    throw std::logic_error("counterexample does not re-check: " + print_formula(instance));
                found = Found{m.world(s).name, instance};
                return true;
            }
            return false;
        });
    });
    return found;
}

}  // namespace

std::vector<Formula> SchemaInstanceSpace::universe() const { return formulas_up_to(depth, atoms, agents); }

void SchemaInstanceSpace::for_each_instance(const std::function<void(const Formula&)>& visit) const {
    const auto values = universe();
    const auto mvs = metavariables(schema);
    const std::set<std::string> vars_set = schema.agents();
    const std::vector<std::string> agent_vars(vars_set.begin(), vars_set.end());
    for_each_assignment(agent_vars, agents, [&](const std::vector<std::size_t>& ai) {
        Binding b;
        for (std::size_t i = 0; i < agent_vars.size(); ++i) b.agents[agent_vars[i]] = agents[ai[i]];
        for_each_assignment(mvs, values, [&](const std::vector<std::size_t>& ci) {
            for (std::size_t i = 0; i < mvs.size(); ++i) b.formulas[mvs[i]] = values[ci[i]];
            visit(substitute(schema, b));
            return false;
        });
        return false;
    });
}

std::string describe(const Verdict& v) {
    if (const auto* ok = std::get_if<NoCounterexample>(&v)) return "NoCounterexample(" + std::to_string(ok->trials) + ")";
    const auto& c = std::get<Counterexample>(v);
    return "Counterexample(trial " + std::to_string(c.trial) + ", world " + c.world + ", " + print_formula(c.instance) + ")";
}

Verdict test_validity(const SchemaInstanceSpace& space, const GenParams& gen, std::size_t trials) {
    validate(gen);
    SchemaInstanceSpace local = space;
    if (local.atoms.empty()) {
        auto names = atom_names(gen.atom_count);
        local.atoms.insert(names.begin(), names.end());
    }
    if (local.agents.empty()) local.agents = agent_names(gen.num_agents);
    const std::vector<Formula> universe = local.universe();
    for (std::size_t t = 0; t < trials; ++t) {
        GenParams p = gen;
        p.seed = trial_seed(gen.seed, t);
        BethKripkeModel m = random_model(p);
        if (auto found = first_failure(local, universe, m)) return Counterexample{std::move(m), found->world, found->instance, t};
    }
    return NoCounterexample{trials};
}

// ---------------------------------------------------------------------------
// Announcement hypothesis experiment

std::string model_digest(const BethKripkeModel& m) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : serialize_model(m)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return hex64(h);
}

HypothesisReport test_announcement_hypothesis(const GenParams& gen, std::size_t trials, const HypothesisOptions& options) {
    validate(gen);
    if (!gen.s5) throw Error("the announcement hypothesis is stated for S5 models");
    HypothesisReport report{gen, trials, options, {}, NoCounterexample{trials}};
    const auto atoms = atom_names(gen.atom_count);
    const auto agents = agent_names(gen.num_agents);
    const FormulaSampler sampler(atoms, agents, options.include_announcements);
    bool failed = false;
    for (std::size_t t = 0; t < trials; ++t) {
        GenParams p = gen;
        p.seed = trial_seed(gen.seed, t);
        BethKripkeModel m = random_model(p);
        const std::string digest = model_digest(m);
        Rng rng(splitmix64(p.seed));
        Evaluator session(m);
        for (std::size_t k = 0; k < options.pairs_per_model; ++k) {
            HypothesisRecord rec{t, p.seed, digest, sampler.sample(rng, options.depth), sampler.sample(rng, options.depth), std::nullopt};
            const Formula claim = Formula::iff(Formula::announce(rec.phi, rec.psi), Formula::imp(rec.phi, rec.psi));
            for (WorldIndex s = 0; s < m.world_count(); ++s) {
                if (!session.satisfies(s, claim)) {
                    rec.failing_world = m.world(s).name;
                    break;
                }
            }
            if (rec.failing_world && !failed) {
                failed = true;
                report.verdict = Counterexample{m, *rec.failing_world, claim, t};
            }
            report.records.push_back(std::move(rec));
        }
    }
    return report;
}

std::size_t HypothesisReport::failures() const {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const auto& r) { return r.failing_world.has_value(); }));
}

std::string HypothesisReport::text() const {
    std::ostringstream os;
    os << "# hypothesis: [phi]psi <-> (phi -> psi) on finite S5 Beth-Kripke models\n";
    os << "# seed=" << params.seed << " trials=" << trials << " max_nodes=" << params.max_nodes_per_world
       << " max_worlds=" << params.max_worlds << " agents=" << params.num_agents << " atoms=" << params.atom_count
       << " depth=" << options.depth << " pairs=" << options.pairs_per_model
       << " announcements=" << (options.include_announcements ? "yes" : "no") << "\n";
    for (const auto& r : records) {
        os << "trial=" << r.trial << " seed=" << hex64(r.seed) << " model=" << r.model_digest
           << " world=" << (r.failing_world ? *r.failing_world : "*") << " phi=" << print_formula(r.phi)
           << " psi=" << print_formula(r.psi) << " result=" << (r.failing_world ? "fails" : "holds") << "\n";
    }
    os << "# summary\n";
    os << "instances=" << records.size() << " holds=" << records.size() - failures() << " fails=" << failures() << "\n";
    os << "verdict=" << describe(verdict) << "\n";
    if (const auto* c = std::get_if<Counterexample>(&verdict)) {
        os << "# counterexample model (trial " << c->trial << ")\n";
        os << serialize_model(c->model);
    }
    return os.str();
}

std::string HypothesisReport::json() const {
    nlohmann::json j;
    j["hypothesis"] = "[phi]psi <-> (phi -> psi)";
    j["params"] = {{"seed", params.seed},
                   {"trials", trials},
                   {"max_nodes", params.max_nodes_per_world},
                   {"max_worlds", params.max_worlds},
                   {"agents", params.num_agents},
                   {"atoms", params.atom_count},
                   {"depth", options.depth},
                   {"pairs", options.pairs_per_model},
                   {"announcements", options.include_announcements}};
    j["records"] = nlohmann::json::array();
    for (const auto& r : records) {
        j["records"].push_back({{"trial", r.trial},
                                {"seed", hex64(r.seed)},
                                {"model", r.model_digest},
                                {"phi", print_formula(r.phi)},
                                {"psi", print_formula(r.psi)},
                                {"world", r.failing_world ? *r.failing_world : "*"},
                                {"result", r.failing_world ? "fails" : "holds"}});
    }
    j["summary"] = {{"instances", records.size()}, {"fails", failures()}, {"verdict", describe(verdict)}};
    if (const auto* c = std::get_if<Counterexample>(&verdict)) j["counterexample_model"] = serialize_model(c->model);
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Reference evaluator

namespace {

BethKripkeModel naive_announce(const BethKripkeModel& m, const Formula& phi) {
    std::vector<World> worlds;
    for (WorldIndex s = 0; s < m.world_count(); ++s) {
        const BethModel& w = m.world(s).model;
        std::vector<NodeIndex> kept;
        for (NodeIndex a = 0; a < w.size(); ++a) {
            bool can_become_true = false;
            for (NodeIndex b = 0; b < w.size() && !can_become_true; ++b)
                if (w.leq(a, b) && naive_forces(m, s, b, phi)) can_become_true = true;
            if (can_become_true) kept.push_back(a);
        }
        if (std::find(kept.begin(), kept.end(), w.root()) == kept.end()) continue;
        RawBethModel raw;
        raw.root = w.name(w.root());
        for (NodeIndex a : kept) {
            raw.nodes.push_back(w.name(a));
            if (!w.valuation(a).empty()) raw.valuation[w.name(a)] = w.valuation(a);
            for (NodeIndex b : kept)
                if (a != b && w.leq(a, b)) raw.order.emplace_back(w.name(a), w.name(b));
        }
        raw.atoms = w.atoms();
        worlds.push_back({m.world(s).name, validate_beth(raw)});
    }
    std::map<std::string, std::set<std::pair<std::string, std::string>>> access;
    auto survives = [&](const std::string& name) {
        return std::any_of(worlds.begin(), worlds.end(), [&](const World& w) { return w.name == name; });
    };
    for (const auto& agent : m.agents()) {
        auto& rel = access[agent];
        for (const auto& [s, t] : m.access(agent))
            if (survives(m.world(s).name) && survives(m.world(t).name)) rel.emplace(m.world(s).name, m.world(t).name);
    }
    return BethKripkeModel(std::move(worlds), m.agents(), access);
}

}  // namespace

bool naive_forces(const BethKripkeModel& m, WorldIndex s, NodeIndex a, const Formula& f) {
    if (s >= m.world_count()) throw UnknownWorld("#" + std::to_string(s));
    const BethModel& w = m.world(s).model;
    if (a >= w.size()) throw UnknownNode("#" + std::to_string(a));
    auto every_path = [&](auto pred) {
        for (const Path& path : maximal_paths(w, a))
            if (std::none_of(path.begin(), path.end(), pred)) return false;
        return true;
    };
    switch (f.kind()) {
        case Connective::top: return true;
        case Connective::bot: return false;
        case Connective::atom: return every_path([&](NodeIndex b) { return w.holds(b, f.name()); });
        case Connective::conj: return naive_forces(m, s, a, f.lhs()) && naive_forces(m, s, a, f.rhs());
        case Connective::disj:
            return every_path([&](NodeIndex b) { return naive_forces(m, s, b, f.lhs()) || naive_forces(m, s, b, f.rhs()); });
        case Connective::neg:
            for (NodeIndex b = 0; b < w.size(); ++b)
                if (w.leq(a, b) && naive_forces(m, s, b, f.lhs())) return false;
            return true;
        case Connective::imp:
            for (NodeIndex b = 0; b < w.size(); ++b)
                if (w.leq(a, b) && naive_forces(m, s, b, f.lhs()) && !naive_forces(m, s, b, f.rhs())) return false;
            return true;
        case Connective::know:
            if (!m.has_agent(f.name())) throw UnknownAgent(f.name());
            for (const auto& [from, to] : m.access(f.name())) {
                if (from != s) continue;
                for (NodeIndex b = 0; b < m.world(to).model.size(); ++b)
                    if (!naive_forces(m, to, b, f.lhs())) return false;
            }
            return true;
        case Connective::announce:
        case Connective::diamond: {
            const bool box = f.kind() == Connective::announce;
            bool executable = false;
            for (NodeIndex b = 0; b < w.size() && !executable; ++b)
                if (w.leq(w.root(), b) && naive_forces(m, s, b, f.lhs())) executable = true;
            if (!executable) return box;
            BethKripkeModel next = naive_announce(m, f.lhs());
            WorldIndex t = next.world_index(m.world(s).name);
            return naive_forces(next, t, next.world(t).model.root(), f.rhs());
        }
    }
    throw std::logic_error("unhandled connective");
}

// ---------------------------------------------------------------------------
// Non-translatability of <p>top

BethModel nontranslatability_model() {
    RawBethModel raw;
    raw.nodes = {"alpha", "beta", "gamma"};
    raw.root = "alpha";
    raw.order = {{"alpha", "beta"}, {"alpha", "gamma"}};
    raw.valuation["beta"] = {"p"};
    raw.atoms = {"p"};
    return validate_beth(raw);
}

WitnessReport nontranslatability_witness(std::size_t depth) {
    WitnessReport r;
    r.depth = depth;
    const Formula p = Formula::atom("p");
    const Formula executable = Formula::diamond(p, Formula::top());

    const BethModel witness = nontranslatability_model();
    const BethKripkeModel wm = single_world(witness);
    Evaluator session(wm);
    const NodeIndex gamma = witness.index_of("gamma");
    r.root_forces_diamond = session.satisfies(0, executable);
    r.leaf_forces_p = session.forces(0, gamma, p);
    r.leaf_valuation_empty = witness.valuation(gamma).empty();

    const auto models = enumerate_small_beth(3, {"p"});
    r.models = models.size();
    std::vector<char> target;
    for (const auto& m : models) {
        const BethKripkeModel km = single_world(m);
        Evaluator e(km);
        target.push_back(e.satisfies(0, executable) ? 1 : 0);
    }
    std::vector<const BethModel*> ptrs;
    for (const auto& m : models) ptrs.push_back(&m);
    const auto classes = propositional_classes(ptrs, {"p"}, depth);
    r.classes = classes.size();
    for (const auto& c : classes) {
        bool agrees = true;
        for (std::size_t i = 0; i < models.size() && agrees; ++i)
            agrees = (c.tables[i][models[i].root()] != 0) == (target[i] != 0);
        if (agrees) {
            r.equivalent = c.formula;
            break;
        }
    }
    return r;
}

std::string WitnessReport::text() const {
    std::ostringstream os;
    os << "witness model: alpha < beta, alpha < gamma; F(beta) = {p}, F(gamma) = {}\n";
    os << "alpha forces <p>top: " << (root_forces_diamond ? "true" : "false") << "\n";
    os << "gamma forces p: " << (leaf_forces_p ? "true" : "false") << "\n";
    os << "F(gamma) empty: " << (leaf_valuation_empty ? "true" : "false") << "\n";
    os << "search: propositional formulas over {p} up to depth " << depth << ", " << classes
       << " semantic classes, compared at the roots of " << models << " Beth models with <= 3 nodes\n";
    if (equivalent)
        os << "equivalent formula found: " << print_formula(*equivalent) << "\n";
    else
        os << "no propositional formula agrees with <p>top\n";
    return os.str();
}

std::string WitnessReport::json() const {
    nlohmann::json j{{"depth", depth},
                     {"root_forces_diamond", root_forces_diamond},
                     {"leaf_forces_p", leaf_forces_p},
                     {"leaf_valuation_empty", leaf_valuation_empty},
                     {"models", models},
                     {"classes", classes},
                     {"equivalent", equivalent ? nlohmann::json(print_formula(*equivalent)) : nlohmann::json(nullptr)}};
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Oracle comparison

OracleComparison compare_with_oracle(std::size_t max_nodes, const std::set<std::string>& atom_set, std::size_t depth) {
    const std::vector<std::string> atoms(atom_set.begin(), atom_set.end());
    const auto models = enumerate_small_beth(max_nodes, atom_set);
    std::vector<BethKripkeModel> kripke;
    std::unordered_map<std::string, std::size_t> by_shape;
    for (std::size_t i = 0; i < models.size(); ++i) {
        kripke.push_back(single_world(models[i]));
        by_shape.emplace(iso_key(models[i], atoms), i);
    }
    const std::size_t n = models.size();

    // Formulas are deduplicated by their tables over the whole family. The
    // tables are built compositionally; an announcement restricts a model
    // to one that is isomorphic to another member of the family, so its
    // value can be read off that member.
    struct Class {
        Formula formula;
        std::vector<NodeTruth> tables;
    };
    std::vector<Class> classes;
    std::unordered_map<std::string, std::size_t> seen;
    auto add = [&](Formula f, std::vector<NodeTruth> tables) {
        std::string key;
        for (const auto& t : tables) key.append(t.begin(), t.end());
        if (seen.emplace(key, classes.size()).second) classes.push_back({std::move(f), std::move(tables)});
    };
    auto constant = [&](std::size_t i, bool v) { return clauses::constant(models[i], v); };

    for (const auto& a : atoms) {
        std::vector<NodeTruth> t;
        for (const auto& m : models) t.push_back(clauses::atom(m, a));
        add(Formula::atom(a), std::move(t));
    }
    {
        std::vector<NodeTruth> t, b;
        for (std::size_t i = 0; i < n; ++i) {
            t.push_back(constant(i, true));
            b.push_back(constant(i, false));
        }
        add(Formula::top(), std::move(t));
        add(Formula::bot(), std::move(b));
    }

    // announced[c][i]: index of the family member isomorphic to models[i]
    // restricted by class c, or n when the announcement is not executable.
    std::vector<std::vector<std::size_t>> announced;
    auto restriction_of = [&](std::size_t c) -> const std::vector<std::size_t>& {
        while (announced.size() <= c) {
            const std::size_t k = announced.size();
            std::vector<std::size_t> row(n, n);
            for (std::size_t i = 0; i < n; ++i) {
                NodeTruth keep = clauses::neg(models[i], classes[k].tables[i]);
                for (auto& v : keep) v = v ? 0 : 1;
                if (!keep[models[i].root()]) continue;
                row[i] = by_shape.at(iso_key(models[i].restrict_to(keep), atoms));
            }
            announced.push_back(std::move(row));
        }
        return announced[c];
    };

    std::size_t frontier_begin = 0;
    for (std::size_t round = 1; round <= depth; ++round) {
        const std::size_t frontier_end = classes.size();
        for (std::size_t c = frontier_begin; c < frontier_end; ++c) {
            std::vector<NodeTruth> neg, know;
            for (std::size_t i = 0; i < n; ++i) {
                const NodeTruth& t = classes[c].tables[i];
                neg.push_back(clauses::neg(models[i], t));
                know.push_back(constant(i, std::all_of(t.begin(), t.end(), [](char v) { return v != 0; })));
            }
            Formula f = classes[c].formula;
            add(Formula::neg(f), std::move(neg));
            add(Formula::know("a", f), std::move(know));
        }
        for (std::size_t x = 0; x < frontier_end; ++x) {
            for (std::size_t y = 0; y < frontier_end; ++y) {
                if (x < frontier_begin && y < frontier_begin) continue;
                std::vector<NodeTruth> cj, dj, im, box, dia;
                const auto& restricted = restriction_of(x);
                for (std::size_t i = 0; i < n; ++i) {
                    const NodeTruth& a = classes[x].tables[i];
                    const NodeTruth& b = classes[y].tables[i];
                    cj.push_back(clauses::conj(models[i], a, b));
                    dj.push_back(clauses::disj(models[i], a, b));
                    im.push_back(clauses::imp(models[i], a, b));
                    const std::size_t j = restricted[i];
                    const bool after = j < n && classes[y].tables[j][models[j].root()] != 0;
                    box.push_back(constant(i, j == n || after));
                    dia.push_back(constant(i, j < n && after));
                }
                Formula fa = classes[x].formula;
                Formula fb = classes[y].formula;
                add(Formula::conj(fa, fb), std::move(cj));
                add(Formula::disj(fa, fb), std::move(dj));
                add(Formula::imp(fa, fb), std::move(im));
                add(Formula::announce(fa, fb), std::move(box));
                add(Formula::diamond(fa, fb), std::move(dia));
            }
        }
        frontier_begin = frontier_end;
    }

    OracleComparison out;
    out.models = n;
    out.formulas = classes.size();
    // Models are independent; each worker owns its evaluators.
    struct Partial {
        std::size_t judgements = 0;
        std::vector<std::string> disagreements;
        std::size_t missed = 0;
    };
    std::vector<Partial> partial(n);
    auto check_model = [&](std::size_t i) {
        Evaluator session(kripke[i]);
        Partial& p = partial[i];
        for (const auto& c : classes) {
            for (NodeIndex a = 0; a < models[i].size(); ++a) {
                const bool fast = session.forces(0, a, c.formula);
                const bool slow = naive_forces(kripke[i], 0, a, c.formula);
                const bool composed = c.tables[i][a] != 0;
                ++p.judgements;
                if (fast == slow && fast == composed) continue;
                if (p.disagreements.size() < 20)
                    p.disagreements.push_back(print_formula(c.formula) + " at model " + std::to_string(i) + " node "
                                              + models[i].name(a) + ": evaluator=" + std::to_string(fast)
                                              + " oracle=" + std::to_string(slow) + " composed=" + std::to_string(composed));
                else
                    ++p.missed;
            }
        }
    };
    const std::size_t workers = std::max(1U, std::min(8U, std::thread::hardware_concurrency()));
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < workers; ++t)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next++) < n;) check_model(i);
            });
    }
    for (auto& p : partial) {
        out.judgements += p.judgements;
        out.disagreements.insert(out.disagreements.end(), p.disagreements.begin(), p.disagreements.end());
        if (p.missed) out.disagreements.push_back("(" + std::to_string(p.missed) + " more disagreements omitted)");
    }
    return out;
}

}  // namespace cepal
