#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cepal/formula.hpp"

namespace cepal {

// Axiom schema of IS6. Uppercase atoms are formula metavariables and every
// agent name in the pattern is an agent metavariable.
struct AxiomSchema {
    std::string id;  // "A1.1" ... "A1.10", "A2" ... "A6"
    Formula pattern;
    std::string description;
};

const std::vector<AxiomSchema>& axiom_schemas();
const AxiomSchema& axiom_schema(const std::string& id);  // throws Error

std::optional<Binding> match_schema(const AxiomSchema& schema, const Formula& f);

struct AxiomStep {
    std::string schema;
    std::optional<Binding> binding;  // partial bindings are checked too
};

// R1. `minor` proves phi, `major` proves phi -> this line.
struct ModusPonens {
    std::size_t minor;
    std::size_t major;
};

// R2. This line is K{agent} of line `premise`.
struct Necessitation {
    std::size_t premise;
    std::string agent;
};

using Justification = std::variant<AxiomStep, ModusPonens, Necessitation>;

struct ProofLine {
    std::size_t index = 0;
    Formula formula;
    Justification justification;
};

struct ProofScript {
    std::vector<ProofLine> lines;
    Formula goal;
};

struct Accepted {};

struct Rejected {
    std::size_t line = 0;  // index of the offending proof line
    std::string reason;
};

using ProofVerdict = std::variant<Accepted, Rejected>;

ProofVerdict check_proof(const ProofScript& script);

// Line-oriented script format:
//
//   # comment
//   goal: <formula>                  (optional; defaults to the last line)
//   <index>. <formula> ; <justification>
//
// where <justification> is one of
//   A1.1 ... A1.10 | A2 ... A6   optionally followed by [X=<formula>, i=<agent>, ...]
//   MP <i> <j>                   line j must be (line i) -> (this line)
//   NEC <i> <agent>              this line is K{agent} (line i)
//
// Throws DocumentError with the offending line number.
ProofScript parse_proof_script(std::string_view text);

std::string describe(const ProofVerdict& v);

}  // namespace cepal
