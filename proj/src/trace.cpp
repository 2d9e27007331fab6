#include "cepal/trace.hpp"

#include <sstream>

#include <json.hpp>

#include "cepal/dynamic.hpp"

namespace cepal {

namespace {

class Explainer {
public:
    Explainer(const TraceOptions& options) : options_(options) {}

    Trace run(Evaluator& session, WorldIndex s, NodeIndex a, const Formula& f, std::size_t depth) {
        const BethKripkeModel& model = session.model();
        const World& w = model.world(s);
        const BethModel& m = w.model;
        Trace t{print_formula(f), w.name, m.name(a), session.forces(s, a, f), "", {}, {}};
        if (depth >= options_.max_depth) {
            t.rule = "truncated";
            t.notes.push_back("depth limit reached");
            return t;
        }
        auto sub = [&](NodeIndex b, const Formula& g) { return run(session, s, b, g, depth + 1); };
        auto above = [&](auto pred) {
            std::vector<NodeIndex> out;
            for (NodeIndex b = 0; b < m.size(); ++b)
                if (m.leq(a, b) && pred(b)) out.push_back(b);
            return out;
        };

        switch (f.kind()) {
            case Connective::top:
            case Connective::bot: t.rule = "constant"; break;
            case Connective::atom: {
                t.rule = "atom";
                NodeTruth holds(m.size(), 0);
                for (NodeIndex b = 0; b < m.size(); ++b) holds[b] = m.holds(b, f.name());
                if (t.value) {
                    t.notes.push_back("bar: " + nodes(m, above([&](NodeIndex b) { return holds[b] != 0; })));
                } else {
                    t.notes.push_back("path avoiding " + f.name() + ": " + path(m, *avoiding_path(m, a, holds)));
                }
                break;
            }
            case Connective::neg: {
                t.rule = "negation";
                const NodeTruth& inner = session.table(f.lhs())[s];
                if (t.value) {
                    t.notes.push_back("no node above " + m.name(a) + " forces " + print_formula(f.lhs()));
                } else {
                    NodeIndex b = above([&](NodeIndex x) { return inner[x] != 0; }).front();
                    t.notes.push_back("witness " + m.name(b) + " forces " + print_formula(f.lhs()));
                    t.children.push_back(sub(b, f.lhs()));
                }
                break;
            }
            case Connective::conj: {
                t.rule = "conjunction";
                bool left = session.forces(s, a, f.lhs());
                if (t.value || !left) t.children.push_back(sub(a, f.lhs()));
                if (t.value || left) t.children.push_back(sub(a, f.rhs()));
                break;
            }
            case Connective::disj: {
                t.rule = "disjunction";
                const NodeTruth& l = session.table(f.lhs())[s];
                const NodeTruth& r = session.table(f.rhs())[s];
                NodeTruth either(m.size(), 0);
                for (NodeIndex b = 0; b < m.size(); ++b) either[b] = l[b] || r[b];
                if (t.value) {
                    auto bar = above([&](NodeIndex b) { return either[b] != 0; });
                    t.notes.push_back("bar: " + nodes(m, bar));
                    std::size_t shown = 0;
                    for (NodeIndex b : bar) {
                        bool minimal = true;
                        for (NodeIndex c : bar)
                            if (c != b && m.leq(c, b)) minimal = false;
                        if (!minimal) continue;
                        if (shown++ == options_.max_listing) {
                            t.notes.push_back("further bar nodes not expanded");
                            break;
                        }
                        t.children.push_back(sub(b, l[b] ? f.lhs() : f.rhs()));
                    }
                } else {
                    Path p = *avoiding_path(m, a, either);
                    t.notes.push_back("path forcing neither disjunct: " + path(m, p));
                }
                break;
            }
            case Connective::imp: {
                t.rule = "implication";
                const NodeTruth& l = session.table(f.lhs())[s];
                const NodeTruth& r = session.table(f.rhs())[s];
                if (t.value) {
                    t.notes.push_back("nodes above " + m.name(a) + " forcing the antecedent: "
                                      + nodes(m, above([&](NodeIndex b) { return l[b] != 0; })));
                } else {
                    NodeIndex b = above([&](NodeIndex x) { return l[x] && !r[x]; }).front();
                    t.notes.push_back("witness " + m.name(b) + " forces the antecedent but not the consequent");
                    t.children.push_back(sub(b, f.lhs()));
                    t.children.push_back(sub(b, f.rhs()));
                }
                break;
            }
            case Connective::know: {
                t.rule = "knowledge";
                auto reach = model.accessible(f.name(), s);
                std::vector<std::string> names;
                for (WorldIndex u : reach) names.push_back(model.world(u).name);
                t.notes.push_back(f.name() + "-accessible worlds: " + listing(names));
                if (!t.value) {
                    const Table& inner = session.table(f.lhs());
                    for (WorldIndex u : reach) {
                        const BethModel& um = model.world(u).model;
                        for (NodeIndex b = 0; b < um.size(); ++b) {
                            if (inner[u][b]) continue;
                            t.notes.push_back("witness " + model.world(u).name + "/" + um.name(b));
                            t.children.push_back(run(session, u, b, f.lhs(), depth + 1));
                            return t;
                        }
                    }
                }
                break;
            }
            case Connective::announce:
            case Connective::diamond: {
                t.rule = f.kind() == Connective::announce ? "announcement" : "diamond";
                const NodeTruth& phi = session.table(f.lhs())[s];
                bool executable = false;
                for (char v : phi) executable = executable || v;
                if (!executable) {
                    t.notes.push_back("root " + m.name(m.root()) + " forces ~" + print_formula(f.lhs())
                                      + "; announcement not executable here");
                    break;
                }
                Evaluator& next = session.announced_session(f.lhs());
                WorldIndex u = next.model().world_index(w.name);
                const BethModel& restricted = next.model().world(u).model;
                std::vector<std::string> dropped;
                for (const auto& n : m.names())
                    if (!restricted.find(n)) dropped.push_back(n);
                t.notes.push_back("announcing " + print_formula(f.lhs()) + " drops nodes " + listing(dropped));
                t.children.push_back(run(next, u, restricted.root(), f.rhs(), depth + 1));
                break;
            }
        }
        return t;
    }

private:
    std::string listing(const std::vector<std::string>& items) const {
        std::string out = "{";
        for (std::size_t i = 0; i < items.size(); ++i) {
            if (i == options_.max_listing) {
                out += ", ... (+" + std::to_string(items.size() - i) + " more)";
                break;
            }
            if (i) out += ", ";
            out += items[i];
        }
        return out + "}";
    }
    std::string nodes(const BethModel& m, const std::vector<NodeIndex>& ns) const {
        std::vector<std::string> names;
        for (NodeIndex n : ns) names.push_back(m.name(n));
        return listing(names);
    }
    std::string path(const BethModel& m, const Path& p) const {
        std::string out = "[";
        for (std::size_t i = 0; i < p.size(); ++i) out += (i ? ", " : "") + m.name(p[i]);
        return out + "]";
    }

    const TraceOptions& options_;
};

void render(std::ostringstream& os, const Trace& t, std::size_t indent) {
    std::string pad(indent * 2, ' ');
    os << pad << (t.value ? "[T] " : "[F] ") << t.formula << "  @ " << t.world << "/" << t.node << "  (" << t.rule
       << ")\n";
    for (const auto& n : t.notes) os << pad << "    - " << n << "\n";
    for (const auto& c : t.children) render(os, c, indent + 1);
}

nlohmann::json to_json(const Trace& t) {
    nlohmann::json j{{"formula", t.formula}, {"world", t.world}, {"node", t.node},
                     {"value", t.value},     {"rule", t.rule},   {"notes", t.notes}};
    j["children"] = nlohmann::json::array();
    for (const auto& c : t.children) j["children"].push_back(to_json(c));
    return j;
}

}  // namespace

Trace explain(Evaluator& session, WorldIndex s, NodeIndex a, const Formula& f, const TraceOptions& options) {
    return Explainer(options).run(session, s, a, f, 0);
}

std::string render_text(const Trace& t) {
    std::ostringstream os;
    render(os, t, 0);
    return os.str();
}

std::string render_json(const Trace& t) { return to_json(t).dump(2); }

}  // namespace cepal
