#pragma once

#include <string>
#include <string_view>

#include "cepal/dynamic.hpp"

namespace cepal {

// Model documents:
//
//   # comment
//   agents: a, b
//   world s {
//     root: alpha;
//     nodes: alpha, beta, gamma;
//     order: alpha < beta, alpha < gamma;
//     val beta: {p};
//     val gamma: {q};
//   }
//   access a: (s,s), (s,t)
//
// `order` lists covering edges (the closure is computed); a node without a
// `val` line has the empty valuation. Syntax errors raise DocumentError;
// semantic problems raise the validation errors of the model types.
BethKripkeModel parse_model_document(std::string_view text);

// Canonical document text; serializing a parsed canonical document gives
// the same text back. Declared-but-unused atoms are not part of the format.
std::string serialize_model(const BethKripkeModel& m);

std::string read_file(const std::string& path);  // throws Error
BethKripkeModel load_model_file(const std::string& path);

}  // namespace cepal
