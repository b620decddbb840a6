#pragma once

// Orchestration: decomposition of raw squares into solution tuples, the full
// enumerate -> sieve -> solve -> classify pipeline for a fixed odd prime
// base, verification of search results against the known catalog of
// exceptional values and parametric families, and the B_3 sets.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trisquare/digits.hpp"
#include "trisquare/exact.hpp"
#include "trisquare/families.hpp"
#include "trisquare/rnsolve.hpp"
#include "trisquare/sieve.hpp"

namespace trisquare::driver {

using families::Classification;
using families::FamilyTag;
using families::ThreeDigitSolution;

enum class DecomposeStatus { Solution, Degenerate, CNonsquare, NotThreeDigit };

struct DecomposeResult {
    DecomposeStatus status = DecomposeStatus::NotThreeDigit;
    std::optional<ThreeDigitSolution> solution;           // Solution only
    std::vector<std::pair<long, long>> nonzero_digits;    // (position, digit)
};

// Reads the base-q digits of y^2.  Exactly three nonzero digits with a
// square constant digit t^2 produce a solution tuple; two or fewer give the
// degenerate marker; a nonsquare constant digit is flagged.
inline DecomposeResult decompose(const BigInt& y, long q) {
    if (q < 2) throw std::domain_error("decompose: base must be >= 2");
    if (y < 1) throw std::domain_error("decompose: y must be positive");
    if (mpz_fdiv_ui(y.get_mpz_t(), static_cast<unsigned long>(q)) == 0) {
        throw std::domain_error("decompose: y must not be divisible by q");
    }
    DecomposeResult res;
    digits::BaseQExpansion e = digits::expand(BigInt(y * y), q);
    for (std::size_t i = 0; i < e.digits.size(); ++i) {
        if (e.digits[i] != 0) res.nonzero_digits.emplace_back(static_cast<long>(i), e.digits[i]);
    }
    if (res.nonzero_digits.size() > 3) {
        res.status = DecomposeStatus::NotThreeDigit;
        return res;
    }
    if (res.nonzero_digits.size() <= 2) {
        res.status = DecomposeStatus::Degenerate;
        return res;
    }
    const auto& [p0, c] = res.nonzero_digits[0];
    const auto& [p1, mcoef] = res.nonzero_digits[1];
    const auto& [p2, ncoef] = res.nonzero_digits[2];
    if (p0 != 0) {
        // cannot happen for y coprime to q
        res.status = DecomposeStatus::NotThreeDigit;
        return res;
    }
    auto t = perfect_square_root(BigInt(c));
    if (!t) {
        res.status = DecomposeStatus::CNonsquare;
        return res;
    }
    ThreeDigitSolution s;
    s.q = q;
    s.Y = y;
    s.t = *t;
    s.M = mcoef;
    s.N = ncoef;
    s.m = p1;
    s.n = p2;
    s.validate();
    res.status = DecomposeStatus::Solution;
    res.solution = std::move(s);
    return res;
}

enum class LiftKind { Solution, Trivial, Degenerate };

// Normalizes Y^2 = (t^2 + M q^m) + N q^n into the canonical three-term form
// with 1 <= m' < n' (sorting the exponents and carrying when they collide).
// Trivial means the two power terms cancel (Y = t); Degenerate means the
// combined form has fewer than two power terms.
inline LiftKind lift_rn_solution(long q, const BigInt& t, const BigInt& M, long N, long m,
                                 const rn::RNSolution& rs, std::optional<ThreeDigitSolution>& out) {
    out.reset();
    std::map<long, BigInt> coef;
    coef[m] += M;
    coef[rs.n] += N;
    for (auto it = coef.begin(); it != coef.end();) {
        if (it->second == 0) {
            it = coef.erase(it);
        } else {
            ++it;
        }
    }
    // carry a single overweight coefficient (|c| can be at most 2(q-1))
    for (auto it = coef.begin(); it != coef.end(); ++it) {
        if (it->second > q - 1) {
            BigInt hi = it->second / q;
            BigInt lo = it->second - hi * q;
            it->second = lo;
            coef[it->first + 1] += hi;
            if (lo == 0) coef.erase(it);
            break;
        }
    }
    if (coef.empty()) return LiftKind::Trivial;
    if (coef.size() != 2) return LiftKind::Degenerate;

    auto lo = coef.begin();
    auto hi = std::next(lo);
    if (lo->first < 1 || hi->second < 1) return LiftKind::Degenerate;
    ThreeDigitSolution s;
    s.q = q;
    s.Y = rs.Y;
    s.t = t;
    s.M = lo->second;
    s.N = hi->second;
    s.m = lo->first;
    s.n = hi->first;
    s.validate();
    out = std::move(s);
    return LiftKind::Solution;
}

struct ClassifiedSolution {
    ThreeDigitSolution sol;
    Classification cls;
};

struct PipelineResult {
    std::vector<ClassifiedSolution> solutions;  // deduplicated, sorted
    long trivial_hits = 0;
    long degenerate_hits = 0;
    long tuples_total = 0;
    long tuples_eliminated = 0;
};

// For every m in [m_from, m_to]: enumerate tuples, sieve them, solve the
// surviving bounded power equations, lift the hits and classify them.
inline PipelineResult pipeline(long q, long m_from, long m_to, long n_max, unsigned long L,
                               const sieve::SieveOptions& sopt = {}) {
    if (m_from < 1 || m_to < m_from) throw std::domain_error("pipeline: bad m range");
    if (n_max < 1) throw std::domain_error("pipeline: n_max must be positive");
    PipelineResult res;
    std::set<std::string> seen;
    for (long m = m_from; m <= m_to; ++m) {
        auto tuples = sieve::sieve_tuples(q, m, L, sopt);
        res.tuples_total += static_cast<long>(tuples.size());
        for (const auto& tu : tuples) {
            if (tu.status == sieve::TupleStatus::Eliminated) {
                ++res.tuples_eliminated;
                continue;
            }
            rn::RNInstance inst;
            inst.q = q;
            inst.N = tu.N;
            inst.n_max = n_max;
            inst.c = BigInt(tu.t) * tu.t + BigInt(tu.M) * ipow(q, static_cast<unsigned long>(m));
            for (const auto& rs : rn::solve_rn(inst)) {
                std::optional<ThreeDigitSolution> lifted;
                LiftKind kind = lift_rn_solution(q, BigInt(tu.t), BigInt(tu.M), tu.N, m, rs, lifted);
                if (kind == LiftKind::Trivial) {
                    ++res.trivial_hits;
                    continue;
                }
                if (kind == LiftKind::Degenerate) {
                    ++res.degenerate_hits;
                    continue;
                }
                std::string key = std::to_string(lifted->q) + "|" + lifted->Y.get_str() + "|" +
                                  lifted->t.get_str() + "|" + lifted->M.get_str() + "|" +
                                  lifted->N.get_str() + "|" + std::to_string(lifted->m) + "|" +
                                  std::to_string(lifted->n);
                if (!seen.insert(key).second) continue;
                ClassifiedSolution cs;
                cs.sol = *lifted;
                cs.cls = families::classify(*lifted);
                res.solutions.push_back(std::move(cs));
            }
        }
    }
    std::sort(res.solutions.begin(), res.solutions.end(),
              [](const ClassifiedSolution& a, const ClassifiedSolution& b) { return a.sol < b.sol; });
    return res;
}

// ---- Known catalog of sparse-square values, per base -------------------

namespace catalog {

// x == base^b for some b >= 0
inline bool is_power_of(const BigInt& x, long base) {
    if (x < 1) return false;
    BigInt v = x;
    while (v % base == 0) v /= base;
    return v == 1;
}

inline const std::vector<long>& exceptional_list(long q) {
    static const std::vector<long> q2 = {1, 5, 7, 23};
    static const std::vector<long> q3 = {1, 5, 8, 13};
    static const std::vector<long> q5 = {1, 4, 8, 9, 12, 16, 23, 24, 56, 177};
    static const std::vector<long> q8 = {92, 111, 124, 126, 158, 188, 316, 444, 479, 508, 10837};
    static const std::vector<long> empty = {};
    switch (q) {
        case 2: return q2;
        case 3: return q3;
        case 5: return q5;
        case 8: return q8;
        default: return empty;
    }
}

// Matches n against the catalog for base q; returns a short form name.
inline std::optional<std::string> match(long q, const BigInt& n) {
    auto in = [&](const std::vector<long>& v, const BigInt& x) {
        return x.fits_slong_p() &&
               std::find(v.begin(), v.end(), x.get_si()) != v.end();
    };
    switch (q) {
        case 2: {
            if (in(exceptional_list(2), n)) return "exceptional";
            if (n >= 2 && is_power_of(BigInt(n - 1), 2)) return "2^b+1";
            return std::nullopt;
        }
        case 3: {
            if (in(exceptional_list(3), n)) return "exceptional";
            if (n >= 2 && is_power_of(BigInt(n - 1), 3)) return "3^b+1";
            return std::nullopt;
        }
        case 4: {
            static const std::vector<long> ts = {1, 7, 15, 23, 31, 111};
            for (long u : {1, 2}) {
                if (n % u != 0) continue;
                BigInt t = n / u;
                if (in(ts, t)) return "u*t";
                if (t >= 2 && is_power_of(BigInt(t - 1), 4)) return "u*(4^b+1)";
                if (t >= 3 && (t - 1) % 2 == 0 && is_power_of(BigInt((t - 1) / 2), 4)) {
                    return "u*(2*4^b+1)";
                }
            }
            return std::nullopt;
        }
        case 5: {
            if (in(exceptional_list(5), n)) return "exceptional";
            if (n >= 2 && is_power_of(BigInt(n - 1), 5)) return "5^b+1";
            if (n >= 3 && (n - 1) % 2 == 0 && is_power_of(BigInt((n - 1) / 2), 5)) return "2*5^b+1";
            if (n >= 3 && is_power_of(BigInt(n - 2), 5)) return "5^b+2";
            return std::nullopt;
        }
        case 8: {
            if (n <= 63) return "small";
            if (in(exceptional_list(8), n)) return "exceptional";
            for (long r : {1, 2, 4}) {
                for (long s : {1, 2, 4}) {
                    BigInt rest = n - s;
                    if (rest >= r && rest % r == 0 && is_power_of(BigInt(rest / r), 8)) {
                        return "r*8^b+s";
                    }
                }
            }
            return std::nullopt;
        }
        case 16: {
            static const std::vector<long> ts = {111, 125, 126, 127};
            static const std::vector<std::pair<long, long>> pairs = [] {
                std::vector<std::pair<long, long>> v;
                for (long r : {1, 2, 4, 8}) {
                    for (long s : {1, 2, 4, 8}) v.emplace_back(r, s);
                }
                for (auto [a, b] : std::vector<std::pair<long, long>>{
                         {1, 3}, {2, 3}, {3, 8}, {2, 12}, {4, 12}, {8, 12}}) {
                    v.emplace_back(a, b);
                    v.emplace_back(b, a);
                }
                return v;
            }();
            for (long u : {1, 2, 4}) {
                if (n % u != 0) continue;
                BigInt t = n / u;
                if (t <= 100) return "u*t, t<=100";
                if (in(ts, t)) return "u*t, exceptional t";
                for (auto [r, s] : pairs) {
                    BigInt rest = t - s;
                    if (rest >= r && rest % r == 0 && is_power_of(BigInt(rest / r), 16)) {
                        return "u*(r*16^b+s)";
                    }
                }
            }
            return std::nullopt;
        }
        default:
            return std::nullopt;
    }
}

// The derived B_3 sets these searches must reproduce.
inline const std::vector<long>& b3_set(long q) {
    static const std::vector<long> q2 = {7, 23};
    static const std::vector<long> q3 = {13};
    static const std::vector<long> q4 = {23, 30, 31, 46, 62, 111, 222};
    static const std::vector<long> q5 = {56, 177};
    static const std::vector<long> q8 = {92, 111, 124, 126, 158, 188, 316, 444, 479, 508, 10837};
    static const std::vector<long> q16 = {364,  444,  446,  500,  504,  508,   574,   628,  680,
                                          760,  812,  888,  924,  958,  1012,  1016,  1020, 1022,
                                          1784, 2296, 3832, 3966, 4088, 10837, 15864, 43348};
    static const std::vector<long> empty = {};
    switch (q) {
        case 2: return q2;
        case 3: return q3;
        case 4: return q4;
        case 5: return q5;
        case 8: return q8;
        case 16: return q16;
        default: return empty;
    }
}

}  // namespace catalog

// Members n <= bound with N_q(n) >= N_q(n^2) = 3 and n !≡ 0 mod q.
inline std::vector<BigInt> compute_B3(long q, const BigInt& bound,
                                      const digits::SearchOptions& opt = {}) {
    std::vector<BigInt> out;
    for (const auto& hit : digits::find_sparse_squares(q, 3, bound, opt)) {
        if (hit.nonzero_of_square == 3 && hit.nonzero_of_n >= 3) out.push_back(hit.n);
    }
    return out;
}

struct VerificationReport {
    long q = 0;
    std::vector<BigInt> expected_exceptional;  // the published B_3 set
    std::vector<BigInt> found_exceptional;     // computed B_3 up to the bound
    struct Member {
        BigInt n;
        std::string form;
    };
    std::vector<Member> family_members;
    std::vector<std::string> discrepancies;

    bool passed() const { return discrepancies.empty(); }
};

// Runs the sparse-square search and checks it against the catalog: every hit
// must match some catalog clause, and the derived B_3 set must equal the
// published one (restricted to the bound).
inline VerificationReport verify_catalog(long q, const BigInt& bound,
                                         const digits::SearchOptions& opt = {}) {
    if (q != 2 && q != 3 && q != 4 && q != 5 && q != 8 && q != 16) {
        throw std::domain_error("verify_catalog: base must be one of 2, 3, 4, 5, 8, 16");
    }
    VerificationReport rep;
    rep.q = q;
    for (long v : catalog::b3_set(q)) {
        if (v <= bound) rep.expected_exceptional.push_back(BigInt(v));
    }

    auto hits = digits::find_sparse_squares(q, 3, bound, opt);
    std::set<BigInt> hit_set;
    for (const auto& h : hits) hit_set.insert(h.n);

    for (const auto& h : hits) {
        if (h.nonzero_of_square == 3 && h.nonzero_of_n >= 3) rep.found_exceptional.push_back(h.n);
        auto form = catalog::match(q, h.n);
        if (form) {
            rep.family_members.push_back({h.n, *form});
        } else {
            rep.discrepancies.push_back("hit " + h.n.get_str() + " matches no catalog clause");
        }
    }
    for (const auto& e : rep.expected_exceptional) {
        if (!hit_set.count(e)) {
            rep.discrepancies.push_back("expected member " + e.get_str() + " was not found");
        }
    }
    if (rep.found_exceptional != rep.expected_exceptional) {
        rep.discrepancies.push_back("computed B_3 set differs from the published set");
    }
    return rep;
}

}  // namespace trisquare::driver
