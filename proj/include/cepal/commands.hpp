#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "cepal/lab.hpp"

namespace cepal {

// Exit statuses shared by every command.
enum Exit : int { exit_true = 0, exit_false = 1, exit_error = 2 };

enum class Format { text, json };

struct CheckOptions {
    std::string model_file;
    std::string world;  // empty: the model must have exactly one world
    std::string formula;
    bool explain = false;
    std::size_t max_listing = 8;
    Format format = Format::text;
};

struct AnnounceOptions {
    std::string model_file;
    std::string formula;
    std::string out_file;  // empty: the document goes to stdout
};

struct AxiomsOptions {
    std::size_t trials = 500;
    std::uint64_t seed = 1;
    std::size_t max_nodes = 4;
    std::size_t max_worlds = 3;
    std::size_t agents = 1;
    std::size_t atoms = 2;
    std::size_t depth = 1;  // metavariable instance depth
    std::string schema = "all";  // a schema id, "all" or "none"
    bool s5 = true;
    bool hypothesis = false;
    std::size_t pairs = 4;
    std::size_t hypothesis_depth = 2;
    std::string report_file;  // hypothesis report destination; empty: stdout
    Format format = Format::text;
};

struct ProveOptions {
    std::string proof_file;
};

struct SepOptions {
    int step = 0;
};

struct EnumerateOptions {
    std::size_t max_nodes = 3;
    std::string atoms = "p";  // comma separated
    bool documents = false;   // print every model, not just the count
    Format format = Format::text;
};

struct WitnessOptions {
    std::size_t depth = 4;
    Format format = Format::text;
};

// Each command writes its report to `out` and diagnostics to `err`.
int cmd_check(const CheckOptions& o, std::ostream& out, std::ostream& err);
int cmd_announce(const AnnounceOptions& o, std::ostream& out, std::ostream& err);
int cmd_axioms(const AxiomsOptions& o, std::ostream& out, std::ostream& err);
int cmd_prove(const ProveOptions& o, std::ostream& out, std::ostream& err);
int cmd_sep(const SepOptions& o, std::ostream& out, std::ostream& err);
int cmd_enumerate(const EnumerateOptions& o, std::ostream& out, std::ostream& err);
int cmd_witness(const WitnessOptions& o, std::ostream& out, std::ostream& err);

}  // namespace cepal
