#pragma once

// JSON serialization of the domain types.  Big integers are emitted as
// decimal strings so that values survive any JSON consumer unharmed.

#include <json.hpp>

#include "trisquare/digits.hpp"
#include "trisquare/driver.hpp"
#include "trisquare/exact.hpp"
#include "trisquare/families.hpp"
#include "trisquare/gap.hpp"
#include "trisquare/pade.hpp"
#include "trisquare/rnsolve.hpp"
#include "trisquare/sieve.hpp"

namespace trisquare {

using nlohmann::json;

inline json to_json(const BigInt& v) { return v.get_str(); }
inline json to_json(const Rational& v) { return v.get_str(); }

namespace digits {

inline json to_json(const SparseSquareHit& h) {
    json digits_json = json::array();
    for (std::size_t i = 0; i < h.square_expansion.digits.size(); ++i) {
        if (h.square_expansion.digits[i] != 0) {
            digits_json.push_back({static_cast<long>(i), h.square_expansion.digits[i]});
        }
    }
    return json{{"n", h.n.get_str()},
                {"q", h.square_expansion.base},
                {"square_digits", digits_json},
                {"nonzero_of_n", h.nonzero_of_n},
                {"nonzero_of_square", h.nonzero_of_square}};
}

}  // namespace digits

namespace families {

inline json to_json(const ThreeDigitSolution& s) {
    return json{{"q", s.q},         {"Y", s.Y.get_str()}, {"t", s.t.get_str()},
                {"M", s.M.get_str()}, {"N", s.N.get_str()}, {"m", s.m},
                {"n", s.n}};
}

inline ThreeDigitSolution solution_from_json(const json& j) {
    ThreeDigitSolution s;
    s.q = j.at("q").get<long>();
    s.Y = BigInt(j.at("Y").get<std::string>());
    s.t = BigInt(j.at("t").get<std::string>());
    s.M = BigInt(j.at("M").get<std::string>());
    s.N = BigInt(j.at("N").get<std::string>());
    s.m = j.at("m").get<long>();
    s.n = j.at("n").get<long>();
    s.validate();
    return s;
}

}  // namespace families

namespace sieve {

inline json to_json(const SieveTuple& t) {
    json j{{"t", t.t}, {"M", t.M}, {"N", t.N}, {"n0", t.n0}};
    switch (t.status) {
        case TupleStatus::Survivor:
            j["status"] = "SURVIVOR";
            break;
        case TupleStatus::Eliminated:
            j["status"] = "ELIMINATED";
            j["prime"] = *t.eliminated_by;
            break;
        case TupleStatus::Unavoidable:
            j["status"] = "UNAVOIDABLE";
            j["case"] = case_name(*t.why_unavoidable);
            break;
    }
    return j;
}

}  // namespace sieve

namespace pade {

inline json to_json(const QBoundReport& r) {
    json j{{"m", r.m}, {"n", r.n}, {"mu", r.mu.get_str()}, {"refined", r.refined}};
    j["q_max"] = r.q_max ? json(r.q_max->get_str()) : json("unbounded");
    return j;
}

}  // namespace pade

namespace rn {

inline json to_json(const RNSolution& s) {
    return json{{"Y", s.Y.get_str()}, {"n", s.n}};
}

inline json to_json(const MordellPoint& p) {
    return json{{"U", p.U.get_str()}, {"V", p.V.get_str()}};
}

}  // namespace rn

namespace gap {

inline json to_json(const GapWitness& w) {
    json j{{"delta", w.delta}, {"Y0", w.Y0.get_str()}, {"kappa", w.kappa.get_str()}};
    if (w.kappa1) j["kappa1"] = w.kappa1->get_str();
    if (w.kappa2) j["kappa2"] = w.kappa2->get_str();
    if (w.upsilon) j["upsilon"] = w.upsilon->get_str();
    return j;
}

inline json to_json(const CongruenceReport& r) {
    return json{{"upsilon_nonzero", r.upsilon_nonzero},
                {"stage_congruence", r.stage_congruence},
                {"upsilon_congruence", r.upsilon_congruence},
                {"product_congruence", r.product_congruence}};
}

}  // namespace gap

namespace driver {

inline json to_json(const VerificationReport& r) {
    json expected = json::array();
    for (const auto& v : r.expected_exceptional) expected.push_back(v.get_str());
    json found = json::array();
    for (const auto& v : r.found_exceptional) found.push_back(v.get_str());
    json fams = json::array();
    for (const auto& m : r.family_members) fams.push_back({{"n", m.n.get_str()}, {"form", m.form}});
    return json{{"q", r.q},
                {"expected_exceptional", expected},
                {"found_exceptional", found},
                {"family_members", fams},
                {"discrepancies", r.discrepancies}};
}

inline json to_json(const ClassifiedSolution& c) {
    json j = families::to_json(c.sol);
    j["family"] = families::tag_name(c.cls.tag);
    return j;
}

}  // namespace driver

}  // namespace trisquare
