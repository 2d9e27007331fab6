#include "cepal/commands.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "cepal/document.hpp"
#include "cepal/proofkit.hpp"
#include "cepal/sep.hpp"

namespace cepal {

namespace {

// Runs a command body, turning library errors into exit status 2.
template <class Fn>
int guarded(std::ostream& err, Fn&& body) {
    try {
        return body();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_error;
    }
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write '" + path + "'");
    f << text;
}

std::set<std::string> split_atoms(const std::string& s) {
    std::set<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty()) continue;
        if (!std::islower(static_cast<unsigned char>(item[0]))) throw Error("atoms must start with a lowercase letter: " + item);
        out.insert(item);
    }
    return out;
}

}  // namespace

int cmd_check(const CheckOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const BethKripkeModel m = load_model_file(o.model_file);
        const Formula f = parse_formula(o.formula);
        std::string world = o.world;
        if (world.empty()) {
            if (m.world_count() != 1) throw Error("the model has several worlds; pass --world");
            world = m.world(0).name;
        }
        TraceOptions topts;
        topts.max_listing = o.max_listing;
        const EvalResult r = satisfies(m, world, f, o.explain, topts);
        if (o.format == Format::json) {
            nlohmann::json j{{"world", world}, {"formula", print_formula(f)}, {"value", r.value}};
            if (r.trace) j["trace"] = nlohmann::json::parse(render_json(*r.trace));
            out << j.dump(2) << "\n";
        } else {
            out << (r.value ? "true" : "false") << "\n";
            if (r.trace) out << render_text(*r.trace);
        }
        return r.value ? exit_true : exit_false;
    });
}

int cmd_announce(const AnnounceOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const BethKripkeModel m = load_model_file(o.model_file);
        const Formula phi = parse_formula(o.formula);
        const BethKripkeModel next = announce(m, phi);
        // Report what was dropped; the document itself goes to --out or stdout.
        std::ostream& log = o.out_file.empty() ? err : out;
        for (const auto& w : m.worlds()) {
            auto kept = next.find_world(w.name);
            if (!kept) {
                log << "dropped world " << w.name << "\n";
                continue;
            }
            const BethModel& after = next.world(*kept).model;
            for (std::size_t i = 0; i < w.model.size(); ++i)
                if (!after.find(w.model.name(i))) log << "dropped node " << w.name << "." << w.model.name(i) << "\n";
        }
        if (next.empty()) {
            err << "announcement not executable anywhere\n";
            return exit_false;
        }
        const std::string doc = serialize_model(next);
        if (o.out_file.empty())
            out << doc;
        else
            write_file(o.out_file, doc);
        return exit_true;
    });
}

int cmd_axioms(const AxiomsOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        GenParams gen;
        gen.max_nodes_per_world = o.max_nodes;
        gen.max_worlds = o.max_worlds;
        gen.num_agents = o.agents;
        gen.atom_count = o.atoms;
        gen.seed = o.seed;
        gen.s5 = o.s5;
        validate(gen);

        std::vector<const AxiomSchema*> chosen;
        if (o.schema == "all") {
            for (const auto& s : axiom_schemas()) chosen.push_back(&s);
        } else if (o.schema != "none") {
            chosen.push_back(&axiom_schema(o.schema));
        }

        bool all_valid = true;
        nlohmann::json results = nlohmann::json::array();
        for (const AxiomSchema* s : chosen) {
            SchemaInstanceSpace space{s->pattern, o.depth, {}, {}};
            const Verdict v = test_validity(space, gen, o.trials);
            const auto* c = std::get_if<Counterexample>(&v);
            all_valid = all_valid && !c;
            if (o.format == Format::json) {
                nlohmann::json r{{"schema", s->id}, {"verdict", describe(v)}};
                if (c) r["counterexample"] = {{"world", c->world}, {"instance", print_formula(c->instance)}, {"trial", c->trial}, {"model", serialize_model(c->model)}};
                results.push_back(r);
            } else {
                out << s->id << ": " << describe(v) << "\n";
                if (c) {
                    out << "# counterexample: world " << c->world << " does not satisfy " << print_formula(c->instance) << "\n";
                    out << serialize_model(c->model);
                }
            }
        }
        if (o.format == Format::json && !o.hypothesis) out << results.dump(2) << "\n";

        if (o.hypothesis) {
            HypothesisOptions h;
            h.depth = o.hypothesis_depth;
            h.pairs_per_model = o.pairs;
            const HypothesisReport report = test_announcement_hypothesis(gen, o.trials, h);
            std::string text = report.text();
            if (o.format == Format::json) {
                nlohmann::json j{{"schemas", results}, {"hypothesis", nlohmann::json::parse(report.json())}};
                text = j.dump(2) + "\n";
            }
            if (o.report_file.empty()) {
                out << text;
            } else {
                write_file(o.report_file, text);
                out << "hypothesis report written to " << o.report_file << " (" << report.failures() << " of "
                    << report.records.size() << " instances fail)\n";
            }
        }
        return all_valid ? exit_true : exit_false;
    });
}

int cmd_prove(const ProveOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const ProofScript script = parse_proof_script(read_file(o.proof_file));
        const ProofVerdict v = check_proof(script);
        out << describe(v) << "\n";
        return std::holds_alternative<Accepted>(v) ? exit_true : exit_false;
    });
}

int cmd_sep(const SepOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        out << sep_report(o.step);
        return exit_true;
    });
}

int cmd_enumerate(const EnumerateOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto models = enumerate_small_beth(o.max_nodes, split_atoms(o.atoms));
        if (o.format == Format::json) {
            nlohmann::json j{{"max_nodes", o.max_nodes}, {"count", models.size()}};
            if (o.documents) {
                j["models"] = nlohmann::json::array();
                for (const auto& m : models) j["models"].push_back(serialize_model(single_world(m)));
            }
            out << j.dump(2) << "\n";
        } else {
            out << models.size() << " models\n";
            if (o.documents)
                for (std::size_t i = 0; i < models.size(); ++i)
                    out << "# model " << i << "\n" << serialize_model(single_world(models[i]));
        }
        return exit_true;
    });
}

int cmd_witness(const WitnessOptions& o, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const WitnessReport r = nontranslatability_witness(o.depth);
        out << (o.format == Format::json ? r.json() + "\n" : r.text());
        return r.equivalent ? exit_false : exit_true;
    });
}

}  // namespace cepal
