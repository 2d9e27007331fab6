#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cepal {

// Explanation of one forcing judgement: the clause that decided it, the
// bars, paths or witnesses it used, and the sub-judgements it relied on.
struct Trace {
    std::string formula;
    std::string world;
    std::string node;
    bool value = false;
    std::string rule;
    std::vector<std::string> notes;
    std::vector<Trace> children;
};

struct TraceOptions {
    // Longest node/world listing printed before a truncation marker.
    std::size_t max_listing = 8;
    // Sub-judgements below this depth are summarised, not expanded.
    std::size_t max_depth = 12;
};

std::string render_text(const Trace& t);
std::string render_json(const Trace& t);

}  // namespace cepal
