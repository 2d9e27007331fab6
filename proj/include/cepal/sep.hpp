#pragma once

#include <string>

#include "cepal/dynamic.hpp"
#include "cepal/formula.hpp"

namespace cepal {

// The surprise exam: the teacher likes exactly one of Wednesday (p1),
// Thursday (p2) and Friday (p3), and which one is not yet determined.
struct SepBundle {
    BethKripkeModel model;  // world s; alpha_s below beta {p1}, gamma {p2}, delta {p3}
    Formula p1, p2, p3;
    Formula phi0;  // exactly one day is liked
    Formula phi1;  // <p1>top & ~K p1
    Formula phi2;  // <~p1><p2>top & <~p1>~K p2
    Formula phi3;  // <~p1><~p2><p3>top & <~p1><~p2>~K p3
    Formula announcement() const;  // phi0 & (phi1 | phi2 | phi3)
};

SepBundle make_sep();

// Narrative report for step 0 (the original model), 1 (after ~p1) or
// 2 (after ~p1 then ~p2). Throws Error for any other step.
std::string sep_report(int step);

}  // namespace cepal
