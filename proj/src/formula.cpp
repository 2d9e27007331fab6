#include "cepal/formula.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace cepal {

struct Formula::Node {
    Connective kind;
    std::string name;
    Formula lhs;
    Formula rhs;
    std::size_t hash = 0;
    std::size_t depth = 0;
    std::size_t size = 1;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

// FNV-1a, so hashes (and therefore iteration orders that depend on them)
// do not vary between standard libraries.
std::size_t hash_text(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
}

bool arity_one(Connective k) { return k == Connective::neg || k == Connective::know; }
bool arity_two(Connective k) {
    return k == Connective::conj || k == Connective::disj || k == Connective::imp
        || k == Connective::announce || k == Connective::diamond;
}

}  // namespace

const char* to_string(FormulaClass c) {
    switch (c) {
        case FormulaClass::propositional: return "propositional";
        case FormulaClass::epistemic: return "epistemic";
        case FormulaClass::announcement: return "announcement";
    }
    return "?";
}

Formula Formula::make(Connective kind, std::string name, const Formula* lhs, const Formula* rhs) {
    // Leaves are built without children so that the default Formula (top)
    // does not recurse into itself.
    auto node = std::make_shared<Node>(Node{kind, std::move(name), Formula(nullptr), Formula(nullptr)});
    std::size_t h = mix(static_cast<std::size_t>(kind) + 1, hash_text(node->name));
    if (lhs) {
        node->lhs = *lhs;
        h = mix(h, lhs->hash());
        node->depth = lhs->depth() + 1;
        node->size += lhs->size();
    }
    if (rhs) {
        node->rhs = *rhs;
        h = mix(h, rhs->hash());
        node->depth = std::max(node->depth, rhs->depth() + 1);
        node->size += rhs->size();
    }
    node->hash = h;
    return Formula(std::move(node));
}

Formula::Formula() : Formula(top()) {}

Formula Formula::atom(std::string name) { return make(Connective::atom, std::move(name), nullptr, nullptr); }

Formula Formula::top() {
    static const Formula t = make(Connective::top, "", nullptr, nullptr);
    return t;
}

Formula Formula::bot() {
    static const Formula b = make(Connective::bot, "", nullptr, nullptr);
    return b;
}

Formula Formula::neg(Formula f) { return make(Connective::neg, "", &f, nullptr); }
Formula Formula::conj(Formula a, Formula b) { return make(Connective::conj, "", &a, &b); }
Formula Formula::disj(Formula a, Formula b) { return make(Connective::disj, "", &a, &b); }
Formula Formula::imp(Formula a, Formula b) { return make(Connective::imp, "", &a, &b); }
Formula Formula::know(std::string agent, Formula f) { return make(Connective::know, std::move(agent), &f, nullptr); }
Formula Formula::announce(Formula a, Formula b) { return make(Connective::announce, "", &a, &b); }
Formula Formula::diamond(Formula a, Formula b) { return make(Connective::diamond, "", &a, &b); }
Formula Formula::iff(Formula a, Formula b) { return conj(imp(a, b), imp(b, a)); }

Connective Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
const Formula& Formula::lhs() const { return node_->lhs; }
const Formula& Formula::rhs() const { return node_->rhs; }
bool Formula::is_unary() const { return arity_one(kind()); }
bool Formula::is_binary() const { return arity_two(kind()); }
bool Formula::is_metavariable() const {
    return kind() == Connective::atom && !name().empty() && std::isupper(static_cast<unsigned char>(name()[0]));
}
std::size_t Formula::depth() const { return node_->depth; }
std::size_t Formula::size() const { return node_->size; }
std::size_t Formula::hash() const { return node_->hash; }

std::set<std::string> Formula::atoms() const {
    std::set<std::string> out;
    std::function<void(const Formula&)> walk = [&](const Formula& f) {
        if (f.kind() == Connective::atom) out.insert(f.name());
        if (f.is_unary() || f.is_binary()) walk(f.lhs());
        if (f.is_binary()) walk(f.rhs());
    };
    walk(*this);
    return out;
}

std::set<std::string> Formula::agents() const {
    std::set<std::string> out;
    std::function<void(const Formula&)> walk = [&](const Formula& f) {
        if (f.kind() == Connective::know) out.insert(f.name());
        if (f.is_unary() || f.is_binary()) walk(f.lhs());
        if (f.is_binary()) walk(f.rhs());
    };
    walk(*this);
    return out;
}

bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.hash() != b.hash() || a.kind() != b.kind() || a.size() != b.size() || a.name() != b.name())
        return false;
    if (a.is_unary()) return a.lhs() == b.lhs();
    if (a.is_binary()) return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    return true;
}

bool operator<(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return false;
    if (a.kind() != b.kind()) return a.kind() < b.kind();
    if (a.name() != b.name()) return a.name() < b.name();
    if (a.is_unary() || a.is_binary()) {
        if (a.lhs() != b.lhs()) return a.lhs() < b.lhs();
    }
    if (a.is_binary()) return a.rhs() < b.rhs();
    return false;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { ident, top, bot, neg, conj, disj, imp, iff, know_open, rbrace, lbrack, rbrack, lt, gt, lparen, rparen, end };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

const char* describe(Tok t) {
    switch (t) {
        case Tok::ident: return "identifier";
        case Tok::top: return "'top'";
        case Tok::bot: return "'bot'";
        case Tok::neg: return "'~'";
        case Tok::conj: return "'&'";
        case Tok::disj: return "'|'";
        case Tok::imp: return "'->'";
        case Tok::iff: return "'<->'";
        case Tok::know_open: return "'K{'";
        case Tok::rbrace: return "'}'";
        case Tok::lbrack: return "'['";
        case Tok::rbrack: return "']'";
        case Tok::lt: return "'<'";
        case Tok::gt: return "'>'";
        case Tok::lparen: return "'('";
        case Tok::rparen: return "')'";
        case Tok::end: return "end of input";
    }
    return "?";
}

struct Alias {
    std::string_view utf8;
    Tok kind;
};

constexpr Alias kUnicodeAliases[] = {
    {"\xC2\xAC", Tok::neg},          // ¬
    {"\xE2\x88\xA7", Tok::conj},     // ∧
    {"\xE2\x88\xA8", Tok::disj},     // ∨
    {"\xE2\x86\x92", Tok::imp},      // →
    {"\xE2\x86\x94", Tok::iff},      // ↔
    {"\xE2\x8A\xA4", Tok::top},      // ⊤
    {"\xE2\x8A\xA5", Tok::bot},      // ⊥
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < s.size() && ident_char(s[j])) ++j;
            std::string word(s.substr(i, j - i));
            if (word == "K" && j < s.size() && s[j] == '{') {
                out.push_back({Tok::know_open, "K{", i});
                i = j + 1;
                continue;
            }
            Tok kind = word == "top" ? Tok::top : word == "bot" ? Tok::bot : Tok::ident;
            out.push_back({kind, word, i});
            i = j;
            continue;
        }
        if (s.substr(i, 3) == "<->") {
            out.push_back({Tok::iff, "<->", i});
            i += 3;
            continue;
        }
        if (s.substr(i, 2) == "->") {
            out.push_back({Tok::imp, "->", i});
            i += 2;
            continue;
        }
        Tok single;
        bool matched = true;
        switch (c) {
            case '~': single = Tok::neg; break;
            case '&': single = Tok::conj; break;
            case '|': single = Tok::disj; break;
            case '}': single = Tok::rbrace; break;
            case '[': single = Tok::lbrack; break;
            case ']': single = Tok::rbrack; break;
            case '<': single = Tok::lt; break;
            case '>': single = Tok::gt; break;
            case '(': single = Tok::lparen; break;
            case ')': single = Tok::rparen; break;
            default: matched = false; single = Tok::end; break;
        }
        if (matched) {
            out.push_back({single, std::string(1, c), i});
            ++i;
            continue;
        }
        bool aliased = false;
        for (const auto& a : kUnicodeAliases) {
            if (s.substr(i, a.utf8.size()) == a.utf8) {
                out.push_back({a.kind, std::string(a.utf8), i});
                i += a.utf8.size();
                aliased = true;
                break;
            }
        }
        if (aliased) continue;
        // Report the whole UTF-8 sequence for non-ASCII characters.
        std::size_t len = 1;
        auto uc = static_cast<unsigned char>(c);
        if (uc >= 0xF0) len = 4;
        else if (uc >= 0xE0) len = 3;
        else if (uc >= 0xC0) len = 2;
        throw UnknownToken(i, std::string(s.substr(i, len)));
    }
    out.push_back({Tok::end, "", s.size()});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> toks, Syntax syntax) : toks_(std::move(toks)), syntax_(syntax) {}

    Formula parse_all() {
        Formula f = formula();
        expect(Tok::end);
        return f;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    bool accept(Tok t) {
        if (peek().kind != t) return false;
        ++pos_;
        return true;
    }
    [[noreturn]] void fail(std::vector<std::string> expected) const {
        throw SyntaxError(peek().pos, std::move(expected), peek().kind == Tok::end ? "end of input" : peek().text);
    }
    void expect(Tok t) {
        if (!accept(t)) fail({describe(t)});
    }

    Formula formula() {
        Formula a = implication();
        if (accept(Tok::iff)) {
            Formula b = implication();
            return Formula::iff(a, b);
        }
        return a;
    }

    Formula implication() {
        Formula a = disjunction();
        if (accept(Tok::imp)) return Formula::imp(a, implication());
        return a;
    }

    Formula disjunction() {
        Formula a = conjunction();
        while (accept(Tok::disj)) a = Formula::disj(a, conjunction());
        return a;
    }

    Formula conjunction() {
        Formula a = unary();
        while (accept(Tok::conj)) a = Formula::conj(a, unary());
        return a;
    }

    Formula unary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::neg:
                ++pos_;
                return Formula::neg(unary());
            case Tok::know_open: {
                ++pos_;
                if (peek().kind != Tok::ident) fail({"agent identifier"});
                std::string agent = peek().text;
                ++pos_;
                expect(Tok::rbrace);
                return Formula::know(std::move(agent), unary());
            }
            case Tok::lbrack: {
                ++pos_;
                Formula a = formula();
                expect(Tok::rbrack);
                return Formula::announce(a, unary());
            }
            case Tok::lt: {
                ++pos_;
                Formula a = formula();
                expect(Tok::gt);
                return Formula::diamond(a, unary());
            }
            case Tok::lparen: {
                ++pos_;
                Formula a = formula();
                expect(Tok::rparen);
                return a;
            }
            case Tok::top: ++pos_; return Formula::top();
            case Tok::bot: ++pos_; return Formula::bot();
            case Tok::ident: {
                if (syntax_ == Syntax::object && std::isupper(static_cast<unsigned char>(t.text[0])))
                    fail({"lowercase atom (metavariables are only allowed in schemas)"});
                ++pos_;
                return Formula::atom(t.text);
            }
            default:
                fail({"'~'", "'K{'", "'['", "'<'", "'('", "'top'", "'bot'", "identifier"});
        }
    }

    std::vector<Token> toks_;
    Syntax syntax_;
    std::size_t pos_ = 0;
};

// Binding strength used by the printer; higher binds tighter.
int level(Connective k) {
    switch (k) {
        case Connective::imp: return 1;
        case Connective::disj: return 2;
        case Connective::conj: return 3;
        default: return 4;
    }
}

void print(std::ostringstream& os, const Formula& f, int min_level) {
    bool parens = level(f.kind()) < min_level;
    if (parens) os << '(';
    switch (f.kind()) {
        case Connective::atom: os << f.name(); break;
        case Connective::top: os << "top"; break;
        case Connective::bot: os << "bot"; break;
        case Connective::neg:
            os << '~';
            print(os, f.lhs(), 4);
            break;
        case Connective::know:
            os << "K{" << f.name() << "} ";
            print(os, f.lhs(), 4);
            break;
        case Connective::announce:
            os << '[';
            print(os, f.lhs(), 0);
            os << ']';
            print(os, f.rhs(), 4);
            break;
        case Connective::diamond:
            os << '<';
            print(os, f.lhs(), 0);
            os << '>';
            print(os, f.rhs(), 4);
            break;
        case Connective::conj:
            print(os, f.lhs(), 3);
            os << " & ";
            print(os, f.rhs(), 4);
            break;
        case Connective::disj:
            print(os, f.lhs(), 2);
            os << " | ";
            print(os, f.rhs(), 3);
            break;
        case Connective::imp:
            print(os, f.lhs(), 2);
            os << " -> ";
            print(os, f.rhs(), 1);
            break;
    }
    if (parens) os << ')';
}

}  // namespace

SyntaxError::SyntaxError(std::size_t position, std::vector<std::string> expected, const std::string& found)
    : Error([&] {
          std::string msg = "syntax error at position " + std::to_string(position) + ": expected ";
          for (std::size_t i = 0; i < expected.size(); ++i) {
              if (i) msg += i + 1 == expected.size() ? " or " : ", ";
              msg += expected[i];
          }
          msg += ", found " + (found.empty() ? std::string("nothing") : "'" + found + "'");
          return msg;
      }()),
      position_(position),
      expected_(std::move(expected)) {}

UnknownToken::UnknownToken(std::size_t position, const std::string& text)
    : Error("unknown token '" + text + "' at position " + std::to_string(position)), position_(position) {}

Formula parse_formula(std::string_view text, Syntax syntax) {
    return Parser(lex(text), syntax).parse_all();
}

std::string print_formula(const Formula& f) {
    std::ostringstream os;
    print(os, f, 0);
    return os.str();
}

FormulaClass classify(const Formula& f) {
    bool epistemic = false;
    bool dynamic = false;
    std::function<void(const Formula&)> walk = [&](const Formula& g) {
        switch (g.kind()) {
            case Connective::know: epistemic = true; break;
            case Connective::announce:
            case Connective::diamond: dynamic = true; break;
            default: break;
        }
        if (g.is_unary() || g.is_binary()) walk(g.lhs());
        if (g.is_binary()) walk(g.rhs());
    };
    walk(f);
    if (dynamic) return FormulaClass::announcement;
    if (epistemic) return FormulaClass::epistemic;
    return FormulaClass::propositional;
}

Formula substitute(const Formula& schema, const Binding& binding) {
    switch (schema.kind()) {
        case Connective::atom: {
            if (!schema.is_metavariable()) return schema;
            auto it = binding.formulas.find(schema.name());
            if (it == binding.formulas.end()) throw UnboundMetavariable(schema.name());
            return it->second;
        }
        case Connective::top:
        case Connective::bot: return schema;
        case Connective::neg: return Formula::neg(substitute(schema.lhs(), binding));
        case Connective::know: {
            auto it = binding.agents.find(schema.name());
            std::string agent = it == binding.agents.end() ? schema.name() : it->second;
            return Formula::know(std::move(agent), substitute(schema.lhs(), binding));
        }
        case Connective::conj:
            return Formula::conj(substitute(schema.lhs(), binding), substitute(schema.rhs(), binding));
        case Connective::disj:
            return Formula::disj(substitute(schema.lhs(), binding), substitute(schema.rhs(), binding));
        case Connective::imp:
            return Formula::imp(substitute(schema.lhs(), binding), substitute(schema.rhs(), binding));
        case Connective::announce:
            return Formula::announce(substitute(schema.lhs(), binding), substitute(schema.rhs(), binding));
        case Connective::diamond:
            return Formula::diamond(substitute(schema.lhs(), binding), substitute(schema.rhs(), binding));
    }
    return schema;
}

std::string to_string(const Binding& b) {
    std::string out = "[";
    bool first = true;
    for (const auto& [k, v] : b.formulas) {
        if (!first) out += ", ";
        first = false;
        out += k + "=" + print_formula(v);
    }
    for (const auto& [k, v] : b.agents) {
        if (!first) out += ", ";
        first = false;
        out += k + "=" + v;
    }
    return out + "]";
}

}  // namespace cepal
