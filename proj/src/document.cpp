#include "cepal/document.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace cepal {

namespace {

struct Tok {
    std::string text;  // identifier or single punctuation character
    std::size_t line;
    bool ident;
};

std::vector<Tok> tokenize(std::string_view text) {
    std::vector<Tok> out;
    std::size_t line = 1;
    for (std::size_t i = 0; i < text.size();) {
        char c = text[i];
        if (c == '\n') {
            ++line;
            ++i;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
        } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
            out.push_back({std::string(text.substr(i, j - i)), line, true});
            i = j;
        } else if (std::string_view(":;,{}()<").find(c) != std::string_view::npos) {
            out.push_back({std::string(1, c), line, false});
            ++i;
        } else {
            throw DocumentError(line, std::string("unexpected character '") + c + "'");
        }
    }
    return out;
}

class DocParser {
public:
    explicit DocParser(std::vector<Tok> toks) : toks_(std::move(toks)) {}

    BethKripkeModel parse() {
        std::vector<std::string> agents;
        bool have_agents = false;
        std::vector<World> worlds;
        std::map<std::string, std::set<std::pair<std::string, std::string>>> access;
        while (!done()) {
            const Tok& t = next();
            if (t.ident && t.text == "agents") {
                if (have_agents) throw DocumentError(t.line, "agents declared twice");
                have_agents = true;
                punct(":");
                agents = ident_list();
                optional_punct(";");
            } else if (t.ident && t.text == "world") {
                worlds.push_back(world());
            } else if (t.ident && t.text == "access") {
                std::string agent = ident();
                punct(":");
                auto& pairs = access[agent];
                if (!done() && peek().text == "(") {
                    do {
                        punct("(");
                        std::string from = ident();
                        punct(",");
                        std::string to = ident();
                        punct(")");
                        pairs.emplace(from, to);
                    } while (optional_punct(","));
                }
                optional_punct(";");
            } else {
                throw DocumentError(t.line, "expected 'agents', 'world' or 'access', found '" + t.text + "'");
            }
        }
        if (worlds.empty()) throw DocumentError(last_line(), "document declares no worlds");
        return BethKripkeModel(std::move(worlds), std::move(agents), access);
    }

private:
    bool done() const { return pos_ >= toks_.size(); }
    std::size_t last_line() const { return toks_.empty() ? 1 : toks_.back().line; }
    const Tok& peek() const {
        if (done()) throw DocumentError(last_line(), "unexpected end of document");
        return toks_[pos_];
    }
    const Tok& next() {
        const Tok& t = peek();
        ++pos_;
        return t;
    }
    std::string ident() {
        const Tok& t = next();
        if (!t.ident || is_keyword(t.text)) throw DocumentError(t.line, "expected a name, found '" + t.text + "'");
        return t.text;
    }
    void punct(const char* p) {
        const Tok& t = next();
        if (t.ident || t.text != p) throw DocumentError(t.line, std::string("expected '") + p + "', found '" + t.text + "'");
    }
    bool optional_punct(const char* p) {
        if (!done() && !peek().ident && peek().text == p) {
            ++pos_;
            return true;
        }
        return false;
    }
    static bool is_keyword(const std::string& s) { return s == "agents" || s == "world" || s == "access"; }

    std::vector<std::string> ident_list() {
        std::vector<std::string> out;
        if (done() || !peek().ident || is_keyword(peek().text)) return out;
        do {
            out.push_back(ident());
        } while (optional_punct(","));
        return out;
    }

    World world() {
        World w;
        w.name = ident();
        punct("{");
        RawBethModel raw;
        bool have_nodes = false;
        while (!optional_punct("}")) {
            const Tok& t = next();
            if (!t.ident) throw DocumentError(t.line, "expected a world statement, found '" + t.text + "'");
            if (t.text == "root") {
                punct(":");
                raw.root = ident();
            } else if (t.text == "nodes") {
                punct(":");
                auto more = ident_list();
                raw.nodes.insert(raw.nodes.end(), more.begin(), more.end());
                have_nodes = true;
            } else if (t.text == "order") {
                punct(":");
                if (peek().ident) {
                    do {
                        std::string lo = ident();
                        punct("<");
                        std::string hi = ident();
                        raw.order.emplace_back(lo, hi);
                    } while (optional_punct(","));
                }
            } else if (t.text == "val") {
                std::string node = ident();
                punct(":");
                punct("{");
                auto& atoms = raw.valuation[node];
                if (peek().ident) {
                    do {
                        const Tok& a = next();
                        if (!a.ident || !std::islower(static_cast<unsigned char>(a.text[0])))
                            throw DocumentError(a.line, "atoms must start with a lowercase letter: '" + a.text + "'");
                        atoms.insert(a.text);
                    } while (optional_punct(","));
                }
                punct("}");
            } else {
                throw DocumentError(t.line, "unknown world statement '" + t.text + "'");
            }
            punct(";");
        }
        if (!have_nodes) throw DocumentError(last_line(), "world " + w.name + " has no 'nodes' statement");
        w.model = validate_beth(raw);
        return w;
    }

    std::vector<Tok> toks_;
    std::size_t pos_ = 0;
};

std::string joined(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
    return out;
}

}  // namespace

BethKripkeModel parse_model_document(std::string_view text) { return DocParser(tokenize(text)).parse(); }

std::string serialize_model(const BethKripkeModel& m) {
    std::ostringstream os;
    os << "agents: " << joined(m.agents()) << "\n";
    for (const auto& w : m.worlds()) {
        RawBethModel raw = w.model.to_raw();
        os << "world " << w.name << " {\n";
        os << "  root: " << *raw.root << ";\n";
        os << "  nodes: " << joined(raw.nodes) << ";\n";
        if (!raw.order.empty()) {
            std::vector<std::string> edges;
            for (const auto& [lo, hi] : raw.order) edges.push_back(lo + " < " + hi);
            os << "  order: " << joined(edges) << ";\n";
        }
        for (const auto& node : raw.nodes) {
            auto it = raw.valuation.find(node);
            if (it == raw.valuation.end()) continue;
            os << "  val " << node << ": {" << joined({it->second.begin(), it->second.end()}) << "};\n";
        }
        os << "}\n";
    }
    for (const auto& agent : m.agents()) {
        std::vector<std::string> pairs;
        for (const auto& [s, t] : m.access(agent)) pairs.push_back("(" + m.world(s).name + "," + m.world(t).name + ")");
        os << "access " << agent << ":" << (pairs.empty() ? "" : " " + joined(pairs)) << "\n";
    }
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

BethKripkeModel load_model_file(const std::string& path) { return parse_model_document(read_file(path)); }

}  // namespace cepal
