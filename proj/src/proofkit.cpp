#include "cepal/proofkit.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace cepal {

namespace {

std::vector<AxiomSchema> build_schemas() {
    struct Row {
        const char* id;
        const char* pattern;
        const char* description;
    };
    const Row rows[] = {
        {"A1.1", "X -> Y -> X", "weakening"},
        {"A1.2", "(X -> Y -> Z) -> (X -> Y) -> X -> Z", "distribution of implication"},
        {"A1.3", "X -> Y -> X & Y", "conjunction introduction"},
        {"A1.4", "X & Y -> X", "conjunction elimination (left)"},
        {"A1.5", "X & Y -> Y", "conjunction elimination (right)"},
        {"A1.6", "X -> X | Y", "disjunction introduction (left)"},
        {"A1.7", "Y -> X | Y", "disjunction introduction (right)"},
        {"A1.8", "(X -> Z) -> (Y -> Z) -> X | Y -> Z", "disjunction elimination"},
        {"A1.9", "(X -> Y) -> (X -> ~Y) -> ~X", "negation introduction"},
        {"A1.10", "~X -> X -> Y", "ex falso"},
        {"A2", "K{i} X & K{i} (X -> Y) -> K{i} Y", "distribution of knowledge"},
        {"A3", "K{i} X -> X", "factivity"},
        {"A4", "K{i} X -> K{i} K{i} X", "positive introspection"},
        {"A5", "~K{i} X -> K{i} ~K{i} X", "negative introspection"},
        {"A6", "~K{i} X | K{i} X", "decidability of knowledge"},
    };
    std::vector<AxiomSchema> out;
    for (const auto& r : rows) out.push_back({r.id, parse_formula(r.pattern, Syntax::schema), r.description});
    return out;
}

bool match(const Formula& pattern, const Formula& f, Binding& b) {
    if (pattern.is_metavariable()) {
        auto [it, fresh] = b.formulas.emplace(pattern.name(), f);
        return fresh || it->second == f;
    }
    if (pattern.kind() != f.kind()) return false;
    switch (pattern.kind()) {
        case Connective::atom: return pattern.name() == f.name();
        case Connective::top:
        case Connective::bot: return true;
        case Connective::know: {
            auto [it, fresh] = b.agents.emplace(pattern.name(), f.name());
            if (!fresh && it->second != f.name()) return false;
            return match(pattern.lhs(), f.lhs(), b);
        }
        case Connective::neg: return match(pattern.lhs(), f.lhs(), b);
        default: return match(pattern.lhs(), f.lhs(), b) && match(pattern.rhs(), f.rhs(), b);
    }
}

}  // namespace

const std::vector<AxiomSchema>& axiom_schemas() {
    static const std::vector<AxiomSchema> schemas = build_schemas();
    return schemas;
}

const AxiomSchema& axiom_schema(const std::string& id) {
    for (const auto& s : axiom_schemas())
        if (s.id == id) return s;
    throw Error("unknown axiom schema '" + id + "'");
}

std::optional<Binding> match_schema(const AxiomSchema& schema, const Formula& f) {
    Binding b;
    if (match(schema.pattern, f, b)) return b;
    return std::nullopt;
}

ProofVerdict check_proof(const ProofScript& script) {
    if (script.lines.empty()) return Rejected{0, "empty proof"};
    std::map<std::size_t, const ProofLine*> proved;
    for (const auto& line : script.lines) {
        auto reject = [&](std::string why) { return Rejected{line.index, std::move(why)}; };
        if (proved.count(line.index)) return reject("duplicate line index");
        if (!proved.empty() && line.index < proved.rbegin()->first) return reject("line indices not increasing");

        auto cited = [&](std::size_t i) -> std::variant<const ProofLine*, std::string> {
            if (i >= line.index) return std::string("cited index not smaller");
            auto it = proved.find(i);
            if (it == proved.end()) return std::string("cited line " + std::to_string(i) + " does not exist");
            return it->second;
        };

        if (const auto* ax = std::get_if<AxiomStep>(&line.justification)) {
            const AxiomSchema* schema = nullptr;
            for (const auto& s : axiom_schemas())
                if (s.id == ax->schema) schema = &s;
            if (!schema) return reject("unknown axiom schema " + ax->schema);
            auto binding = match_schema(*schema, line.formula);
            if (!binding) return reject("not an instance of " + ax->schema);
            if (ax->binding) {
                for (const auto& [k, v] : ax->binding->formulas) {
                    auto it = binding->formulas.find(k);
                    if (it == binding->formulas.end() || it->second != v)
                        return reject("binding " + k + "=" + print_formula(v) + " disagrees with the instance");
                }
                for (const auto& [k, v] : ax->binding->agents) {
                    auto it = binding->agents.find(k);
                    if (it == binding->agents.end() || it->second != v)
                        return reject("binding " + k + "=" + v + " disagrees with the instance");
                }
            }
        } else if (const auto* mp = std::get_if<ModusPonens>(&line.justification)) {
            auto minor = cited(mp->minor);
            if (auto* e = std::get_if<std::string>(&minor)) return reject(*e);
            auto major = cited(mp->major);
            if (auto* e = std::get_if<std::string>(&major)) return reject(*e);
            const Formula& imp = std::get<const ProofLine*>(major)->formula;
            if (imp.kind() != Connective::imp) return reject("major premise not an implication");
            if (imp.lhs() != std::get<const ProofLine*>(minor)->formula)
                return reject("antecedent of the major premise differs from the minor premise");
            if (imp.rhs() != line.formula) return reject("consequent of the major premise differs from this line");
        } else {
            const auto& nec = std::get<Necessitation>(line.justification);
            auto premise = cited(nec.premise);
            if (auto* e = std::get_if<std::string>(&premise)) return reject(*e);
            Formula expected = Formula::know(nec.agent, std::get<const ProofLine*>(premise)->formula);
            if (line.formula != expected) return reject("necessitation must conclude " + print_formula(expected));
        }
        proved.emplace(line.index, &line);
    }
    if (script.lines.back().formula != script.goal)
        return Rejected{script.lines.back().index, "last line does not match the goal"};
    return Accepted{};
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

std::size_t to_index(const std::string& w, std::size_t lineno) {
    if (w.empty() || !std::all_of(w.begin(), w.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw DocumentError(lineno, "expected a line index, found '" + w + "'");
    return std::stoul(w);
}

Binding parse_binding(const std::string& body, std::size_t lineno) {
    Binding b;
    std::size_t start = 0;
    while (start <= body.size()) {
        std::size_t comma = body.find(',', start);
        std::string item = trim(body.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (!item.empty()) {
            auto eq = item.find('=');
            if (eq == std::string::npos) throw DocumentError(lineno, "binding entry without '=': " + item);
            std::string key = trim(item.substr(0, eq));
            std::string value = trim(item.substr(eq + 1));
            if (key.empty() || !std::isalpha(static_cast<unsigned char>(key[0])))
                throw DocumentError(lineno, "bad binding key '" + key + "'");
            try {
                if (std::isupper(static_cast<unsigned char>(key[0])))
                    b.formulas[key] = parse_formula(value);
                else
                    b.agents[key] = value;
            } catch (const Error& e) {
                throw DocumentError(lineno, e.what());
            }
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return b;
}

}  // namespace

ProofScript parse_proof_script(std::string_view text) {
    ProofScript script;
    std::optional<Formula> goal;
    std::istringstream in{std::string(text)};
    std::size_t lineno = 0;
    for (std::string raw; std::getline(in, raw);) {
        ++lineno;
        std::string line = trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        try {
            if (line.rfind("goal:", 0) == 0) {
                goal = parse_formula(line.substr(5));
                continue;
            }
            auto dot = line.find('.');
            if (dot == std::string::npos) throw DocumentError(lineno, "expected '<index>. <formula> ; <justification>'");
            ProofLine pl;
            pl.index = to_index(trim(line.substr(0, dot)), lineno);
            auto semi = line.rfind(';');
            if (semi == std::string::npos || semi < dot) throw DocumentError(lineno, "missing ';' before justification");
            pl.formula = parse_formula(line.substr(dot + 1, semi - dot - 1));
            std::string just = trim(line.substr(semi + 1));
            auto w = words(just);
            if (w.empty()) throw DocumentError(lineno, "missing justification");
            if (w[0] == "MP") {
                if (w.size() != 3) throw DocumentError(lineno, "MP takes two line indices");
                pl.justification = ModusPonens{to_index(w[1], lineno), to_index(w[2], lineno)};
            } else if (w[0] == "NEC") {
                if (w.size() != 3) throw DocumentError(lineno, "NEC takes a line index and an agent");
                pl.justification = Necessitation{to_index(w[1], lineno), w[2]};
            } else if (w[0].size() >= 2 && w[0][0] == 'A') {
                AxiomStep ax;
                auto open = just.find('[');
                ax.schema = trim(just.substr(0, open));
                if (open != std::string::npos) {
                    auto close = just.rfind(']');
                    if (close == std::string::npos || close < open) throw DocumentError(lineno, "unterminated binding");
                    ax.binding = parse_binding(just.substr(open + 1, close - open - 1), lineno);
                }
                pl.justification = ax;
            } else {
                throw DocumentError(lineno, "unknown justification '" + w[0] + "'");
            }
            script.lines.push_back(std::move(pl));
        } catch (const DocumentError&) {
            throw;
        } catch (const Error& e) {
            throw DocumentError(lineno, e.what());
        }
    }
    if (script.lines.empty()) throw DocumentError(lineno, "proof has no lines");
    script.goal = goal ? *goal : script.lines.back().formula;
    return script;
}

std::string describe(const ProofVerdict& v) {
    if (std::holds_alternative<Accepted>(v)) return "accepted";
    const auto& r = std::get<Rejected>(v);
    return "rejected at line " + std::to_string(r.line) + ": " + r.reason;
}

}  // namespace cepal
