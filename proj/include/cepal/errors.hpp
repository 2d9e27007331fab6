#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cepal {

// Base of every error raised by the library. Callers that only need a
// diagnostic catch this; the subclasses carry structured payloads.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, std::vector<std::string> expected, const std::string& found);

    std::size_t position() const { return position_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    std::size_t position_;
    std::vector<std::string> expected_;
};

class UnknownToken : public Error {
public:
    UnknownToken(std::size_t position, const std::string& text);
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class UnboundMetavariable : public Error {
public:
    explicit UnboundMetavariable(const std::string& name)
        : Error("unbound metavariable '" + name + "'"), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class NotAPartialOrder : public Error {
public:
    NotAPartialOrder(const std::string& a, const std::string& b)
        : Error("order is not antisymmetric: " + a + " <= " + b + " <= " + a), first(a), second(b) {}
    std::string first, second;
};

class NoRoot : public Error {
public:
    NoRoot(const std::string& a, const std::string& b, const std::string& why)
        : Error("no root: " + why + " (" + a + ", " + b + ")"), first(a), second(b) {}
    std::string first, second;
};

class NonMonotoneValuation : public Error {
public:
    NonMonotoneValuation(const std::string& lower, const std::string& upper, const std::string& atom)
        : Error("valuation not monotone: " + atom + " holds at " + lower + " but not at " + upper
                + " although " + lower + " <= " + upper),
          lower(lower), upper(upper), atom(atom) {}
    std::string lower, upper, atom;
};

class UnknownNode : public Error {
public:
    explicit UnknownNode(const std::string& name) : Error("unknown node '" + name + "'") {}
};

class NodeOutsideUpSet : public Error {
public:
    NodeOutsideUpSet(const std::string& node, const std::string& anchor)
        : Error("node '" + node + "' is not above '" + anchor + "'") {}
};

class NonPropositionalFormula : public Error {
public:
    explicit NonPropositionalFormula(const std::string& text)
        : Error("formula is not propositional: " + text) {}
};

class UnknownWorld : public Error {
public:
    explicit UnknownWorld(const std::string& name) : Error("unknown world '" + name + "'") {}
};

class UnknownAgent : public Error {
public:
    explicit UnknownAgent(const std::string& name) : Error("unknown agent '" + name + "'") {}
};

class BoundTooLarge : public Error {
public:
    BoundTooLarge(std::size_t requested, std::size_t limit)
        : Error("enumeration bound " + std::to_string(requested) + " exceeds " + std::to_string(limit)) {}
};

class DocumentError : public Error {
public:
    DocumentError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace cepal
