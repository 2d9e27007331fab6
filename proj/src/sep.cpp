#include "cepal/sep.hpp"

#include <sstream>

namespace cepal {

namespace {

const char* tf(bool v) { return v ? "true" : "false"; }

std::string node_list(const BethModel& m) {
    std::string out = "{";
    for (std::size_t i = 0; i < m.size(); ++i) out += (i ? ", " : "") + m.name(i);
    return out + "}";
}

}  // namespace

Formula SepBundle::announcement() const { return Formula::conj(phi0, Formula::disj(Formula::disj(phi1, phi2), phi3)); }

SepBundle make_sep() {
    RawBethModel raw;
    raw.nodes = {"alpha_s", "beta", "gamma", "delta"};
    raw.root = "alpha_s";
    raw.order = {{"alpha_s", "beta"}, {"alpha_s", "gamma"}, {"alpha_s", "delta"}};
    raw.valuation = {{"beta", {"p1"}}, {"gamma", {"p2"}}, {"delta", {"p3"}}};
    SepBundle b;
    b.model = BethKripkeModel({World{"s", validate_beth(raw)}}, {"student"}, {{"student", {{"s", "s"}}}});
    b.p1 = Formula::atom("p1");
    b.p2 = Formula::atom("p2");
    b.p3 = Formula::atom("p3");
    b.phi0 = parse_formula("(p1 | p2 | p3) & ~(p1 & p2) & ~(p1 & p3) & ~(p2 & p3)");
    b.phi1 = parse_formula("<p1>top & ~K{student} p1");
    b.phi2 = parse_formula("<~p1><p2>top & <~p1>~K{student} p2");
    b.phi3 = parse_formula("<~p1><~p2><p3>top & <~p1><~p2>~K{student} p3");
    return b;
}

std::string sep_report(int step) {
    if (step < 0 || step > 2) throw Error("sep step must be 0, 1 or 2");
    const SepBundle b = make_sep();
    const Formula not_p1 = Formula::neg(b.p1);
    const Formula not_p2 = Formula::neg(b.p2);
    auto know = [](const Formula& f) { return Formula::know("student", f); };
    std::ostringstream os;
    Evaluator root(b.model);
    auto line = [&](Evaluator& e, const std::string& label, const Formula& f) {
        os << "  " << label << ": " << tf(e.satisfies(0, f)) << "\n";
    };

    os << "surprise exam, step " << step << "\n";
    os << "world s, agent student, access {(s,s)}\n";
    os << "nodes " << node_list(b.model.world(0).model) << "; F(beta)={p1}, F(gamma)={p2}, F(delta)={p3}\n";
    os << "phi0 = " << print_formula(b.phi0) << "\n";
    os << "phi1 = " << print_formula(b.phi1) << "\n";
    os << "phi2 = " << print_formula(b.phi2) << "\n";
    os << "phi3 = " << print_formula(b.phi3) << "\n\n";

    if (step == 0) {
        os << "the teacher's announcement at (M,s):\n";
        os << "  φ0∧(φ1∨φ2∨φ3): " << tf(root.satisfies(0, b.announcement())) << "\n";
        line(root, "phi0", b.phi0);
        line(root, "phi1", b.phi1);
        line(root, "phi2", b.phi2);
        line(root, "phi3", b.phi3);
        os << "the day is not predetermined at alpha_s:\n";
        os << "  p3: " << tf(root.satisfies(0, b.p3)) << ", ~p3: " << tf(root.satisfies(0, Formula::neg(b.p3))) << "\n";
        const Formula open = parse_formula(
            "<p1>top & <~p1>top & <~p1><p2>top & <~p1><~p2>top & <~p1><~p2><p3>top");
        line(root, "every choice is still announceable", open);
        os << "\nthe backward argument: phi3 fails, so the students conclude (M,s) does not satisfy p3.\n";
        os << "classically that would give ~p3 and the argument could run backwards to ~p2 and ~p1.\n";
        os << "here ~p3 fails as well: the path alpha_s, delta can still reach p3, so the argument cannot start.\n";
        return os.str();
    }

    Evaluator& after1 = root.announced_session(not_p1);
    const BethKripkeModel& m1 = root.announced(not_p1);
    os << "after announcing ~p1: nodes " << node_list(m1.world(0).model) << "\n";
    if (step == 1) {
        line(after1, "<p2>top", Formula::diamond(b.p2, Formula::top()));
        line(after1, "~K{student} p2", Formula::neg(know(b.p2)));
        line(after1, "p2", b.p2);
        line(after1, "~p2", not_p2);
        os << "in the original model:\n";
        line(root, "phi2", b.phi2);
        return os.str();
    }

    Evaluator& after2 = after1.announced_session(not_p2);
    const BethKripkeModel& m2 = after1.announced(not_p2);
    os << "after announcing ~p2: nodes " << node_list(m2.world(0).model) << "\n";
    line(after2, "p3", b.p3);
    line(after2, "K{student}p3", know(b.p3));
    line(after2, "~K{student}p3", Formula::neg(know(b.p3)));
    line(after2, "<p3>top", Formula::diamond(b.p3, Formula::top()));
    os << "in the original model:\n";
    line(root, "phi3", b.phi3);
    line(root, "~phi3", Formula::neg(b.phi3));
    line(root, "p3", b.p3);
    line(root, "~p3", Formula::neg(b.p3));
    os << "\nonly delta is left above alpha_s, so the student knows p3 and the surprise conjunct of phi3 fails.\n";
    os << "that gives ~phi3 and hence not-p3 at the root, but not ~p3: delta is still reachable from alpha_s.\n";
    os << "without ~p3 there is no way to eliminate Thursday and then Wednesday.\n";
    return os.str();
}

}  // namespace cepal
