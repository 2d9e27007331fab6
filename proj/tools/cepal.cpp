// cepal: model checker and experiment runner for constructive epistemic
// logic with public announcements over Beth-Kripke models.

#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "cepal/commands.hpp"

int main(int argc, char** argv) {
    using cepal::Format;
    CLI::App app{"Constructive epistemic logic with public announcements"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 1;
    Format format = Format::text;
    const std::map<std::string, Format> formats{{"text", Format::text}, {"json", Format::json}};
    app.add_option("--seed", seed, "Seed for random experiments");
    app.add_option("--format", format, "Report format")->transform(CLI::CheckedTransformer(formats));

    cepal::CheckOptions check;
    auto* c = app.add_subcommand("check", "Evaluate a formula at a world");
    c->add_option("model", check.model_file, "Model document")->required();
    c->add_option("formula", check.formula, "Formula")->required();
    c->add_option("-w,--world", check.world, "World (default: the only world)");
    c->add_flag("--explain", check.explain, "Print the evaluation tree");
    c->add_option("--max-listing", check.max_listing, "Longest node listing in traces");

    cepal::AnnounceOptions ann;
    auto* a = app.add_subcommand("announce", "Publicly announce a formula and print the updated model");
    a->add_option("model", ann.model_file, "Model document")->required();
    a->add_option("formula", ann.formula, "Announced formula")->required();
    a->add_option("-o,--out", ann.out_file, "Write the document here");

    cepal::AxiomsOptions ax;
    bool no_s5 = false;
    auto* x = app.add_subcommand("axioms", "Test axiom schemas on random models");
    x->add_option("--trials", ax.trials, "Random models per schema");
    x->add_option("--max-nodes", ax.max_nodes, "Nodes per world");
    x->add_option("--max-worlds", ax.max_worlds, "Worlds per model");
    x->add_option("--agents", ax.agents, "Number of agents");
    x->add_option("--atoms", ax.atoms, "Number of atoms");
    x->add_option("--depth", ax.depth, "Depth of substituted formulas");
    x->add_option("--schema", ax.schema, "Schema id (A1.1 ... A6), all or none");
    x->add_flag("--no-s5", no_s5, "Random relations instead of equivalences");
    x->add_flag("--hypothesis", ax.hypothesis, "Also run the [phi]psi <-> (phi -> psi) experiment");
    x->add_option("--pairs", ax.pairs, "Formula pairs per model in the experiment");
    x->add_option("--hypothesis-depth", ax.hypothesis_depth, "Formula depth in the experiment");
    x->add_option("--report", ax.report_file, "Write the experiment report here");

    cepal::ProveOptions pr;
    auto* p = app.add_subcommand("prove", "Check a proof script");
    p->add_option("proof", pr.proof_file, "Proof script")->required();

    cepal::SepOptions sep;
    auto* s = app.add_subcommand("sep", "The surprise exam case study");
    s->add_option("--step", sep.step, "0, 1 or 2")->check(CLI::Range(0, 2));

    cepal::EnumerateOptions en;
    auto* e = app.add_subcommand("enumerate", "Enumerate small Beth models");
    e->add_option("--max-nodes", en.max_nodes, "At most 4");
    e->add_option("--atoms", en.atoms, "Comma separated atoms");
    e->add_flag("--documents", en.documents, "Print every model");

    cepal::WitnessOptions wi;
    auto* w = app.add_subcommand("witness", "Search for a propositional equivalent of <p>top");
    w->add_option("--depth", wi.depth, "Formula depth");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int code = app.exit(err);
        return code == 0 ? 0 : cepal::exit_error;
    }

    check.format = ax.format = en.format = wi.format = format;
    ax.seed = seed;
    ax.s5 = !no_s5;
    if (c->parsed()) return cepal::cmd_check(check, std::cout, std::cerr);
    if (a->parsed()) return cepal::cmd_announce(ann, std::cout, std::cerr);
    if (x->parsed()) return cepal::cmd_axioms(ax, std::cout, std::cerr);
    if (p->parsed()) return cepal::cmd_prove(pr, std::cout, std::cerr);
    if (s->parsed()) return cepal::cmd_sep(sep, std::cout, std::cerr);
    if (e->parsed()) return cepal::cmd_enumerate(en, std::cout, std::cerr);
    return cepal::cmd_witness(wi, std::cout, std::cerr);
}
