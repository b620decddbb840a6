#pragma once

// Gap machinery between the two exponents of a solution: extraction of the
// q-adic expansion witnesses (delta, Y0, kappa, kappa1, kappa2, upsilon),
// re-verification of the defining identities, the derived congruences, and
// the verdict "family / small m / large gap".

#include <optional>
#include <stdexcept>
#include <variant>

#include "trisquare/exact.hpp"
#include "trisquare/families.hpp"

namespace trisquare::gap {

using families::ThreeDigitSolution;

struct GapWitness {
    int delta = 0;
    BigInt Y0;
    BigInt kappa;
    std::optional<BigInt> kappa1;   // present when 3m < n < 4m
    std::optional<BigInt> kappa2;   // present when n >= 4m
    std::optional<BigInt> upsilon;  // present when n >= 6m
};

enum class GapSignal { FamilyF1, MZero };

using ExtractResult = std::variant<GapWitness, GapSignal>;

// Writes Y = q^m Y0 + (-1)^delta t (delta fixed by t == (-1)^delta Y mod q^m)
// and peels the staged witnesses:
//   2tY      = kappa  q^{2m} + (-1)^d (M q^m + 2t^2)
//   8t^3 Y   = kappa1 q^{3m} + (-1)^d (-M^2 q^{2m} + 4t^2 M q^m + 8t^4)
//   16t^5 Y  = kappa2 q^{4m} + (-1)^d (16t^6 + 8t^4 M q^m - 2t^2 M^2 q^{2m} + M^3 q^{3m})
//   (-1)^d 8 kappa2 t^2 + 5 M^4 = upsilon q^m
// Each stage is re-verified against the exact squared identity.
inline ExtractResult extract_witness(const ThreeDigitSolution& sol) {
    if (sol.q < 3 || sol.q % 2 == 0 || !is_prime_u64(static_cast<std::uint64_t>(sol.q))) {
        throw std::domain_error("extract_witness: q must be an odd prime");
    }
    if (sol.M == 0) return GapSignal::MZero;
    if (sol.n < 2 * sol.m) throw std::domain_error("extract_witness: requires n >= 2m");

    const BigInt qm = ipow(sol.q, static_cast<unsigned long>(sol.m));
    const BigInt q2m = qm * qm;
    const BigInt& t = sol.t;
    const BigInt& M = sol.M;
    const BigInt& Y = sol.Y;

    BigInt rem = mod_positive(Y, qm);
    int delta;
    if (rem == mod_positive(t, qm)) {
        delta = 0;
    } else if (rem == mod_positive(-t, qm)) {
        delta = 1;
    } else {
        throw std::logic_error("extract_witness: Y is not +-t modulo q^m");
    }
    const int sg = delta == 0 ? 1 : -1;

    GapWitness w;
    w.delta = delta;
    w.Y0 = exact_div(Y - sg * t, qm);

    BigInt head = sg * (M * qm + 2 * t * t);
    if (2 * t * Y == head) return GapSignal::FamilyF1;
    w.kappa = exact_div(2 * t * Y - head, q2m);
    if (w.kappa < 1) throw std::logic_error("extract_witness: kappa must be positive");

    // 4 t^2 N q^{n-2m} = (kappa q^m + (-1)^d M)^2 + 4 kappa (-1)^d t^2
    {
        BigInt lhs = 4 * t * t * sol.N * ipow(sol.q, static_cast<unsigned long>(sol.n - 2 * sol.m));
        BigInt base = w.kappa * qm + sg * M;
        BigInt rhs = base * base + 4 * sg * w.kappa * t * t;
        if (lhs != rhs) throw std::logic_error("extract_witness: kappa identity fails");
    }

    const BigInt q3m = q2m * qm;
    const BigInt q4m = q2m * q2m;

    if (3 * sol.m < sol.n && sol.n < 4 * sol.m) {
        BigInt head1 = sg * (-M * M * q2m + 4 * t * t * M * qm + 8 * t * t * t * t);
        w.kappa1 = exact_div(8 * t * t * t * Y - head1, q3m);
        BigInt k1 = *w.kappa1;
        BigInt lhs = 64 * ipow(t, 6) * sol.N * ipow(sol.q, static_cast<unsigned long>(sol.n - 3 * sol.m));
        BigInt rhs = k1 * k1 * q3m + ipow(M, 4) * qm - 8 * t * t * ipow(M, 3) +
                     sg * (-2 * k1 * M * M * q2m + 8 * t * t * k1 * M * qm + 16 * ipow(t, 4) * k1);
        if (lhs != rhs) throw std::logic_error("extract_witness: kappa1 identity fails");
    }

    if (sol.n >= 4 * sol.m) {
        BigInt head2 = sg * (16 * ipow(t, 6) + 8 * ipow(t, 4) * M * qm -
                             2 * t * t * M * M * q2m + ipow(M, 3) * q3m);
        w.kappa2 = exact_div(16 * ipow(t, 5) * Y - head2, q4m);
        if (*w.kappa2 < 0) throw std::logic_error("extract_witness: kappa2 must be nonnegative");
        BigInt k2 = *w.kappa2;
        BigInt lhs = 256 * ipow(t, 10) * sol.N * ipow(sol.q, static_cast<unsigned long>(sol.n - 4 * sol.m));
        BigInt rhs = k2 * k2 * q4m +
                     sg * (32 * k2 * ipow(t, 6) + 16 * k2 * ipow(t, 4) * M * qm -
                           4 * k2 * t * t * M * M * q2m + 2 * k2 * ipow(M, 3) * q3m) +
                     20 * ipow(t, 4) * ipow(M, 4) - 4 * t * t * ipow(M, 5) * qm +
                     ipow(M, 6) * q2m;
        if (lhs != rhs) throw std::logic_error("extract_witness: kappa2 identity fails");

        if (sol.n >= 6 * sol.m) {
            w.upsilon = exact_div(sg * 8 * k2 * t * t + 5 * ipow(M, 4), qm);
        }
    }

    return w;
}

enum class GapVerdict { FamilyF1, SmallM, GapOk, Fatal };

inline const char* verdict_name(GapVerdict v) {
    switch (v) {
        case GapVerdict::FamilyF1: return "FAMILY_F1";
        case GapVerdict::SmallM: return "SMALL_M";
        case GapVerdict::GapOk: return "GAP_OK";
        case GapVerdict::Fatal: return "FATAL";
    }
    return "?";
}

// m <= 3 is allowed outright; for m >= 4 a solution must either be in the
// square-completion family or satisfy n >= 10m-10.  Anything else would be a
// counterexample and is reported as Fatal.
inline GapVerdict verify_gap_lemma(const ThreeDigitSolution& sol) {
    if (sol.m <= 3) return GapVerdict::SmallM;
    if (sol.n < 2 * sol.m) return GapVerdict::Fatal;  // m >= 4 forces n >= 2m
    ExtractResult r = extract_witness(sol);
    if (std::holds_alternative<GapSignal>(r)) {
        return std::get<GapSignal>(r) == GapSignal::FamilyF1 ? GapVerdict::FamilyF1
                                                             : GapVerdict::SmallM;
    }
    if (sol.n >= 10 * sol.m - 10) return GapVerdict::GapOk;
    return GapVerdict::Fatal;
}

struct CongruenceReport {
    bool upsilon_nonzero = false;
    bool stage_congruence = false;     // (-1)^d 8 kappa2 t^2 + 5 M^4 == 0 mod q^m
    bool upsilon_congruence = false;   // 5 upsilon + (-1)^d 28 kappa2 M == 0 mod q^m
    bool product_congruence = false;   // 2 upsilon t^2 == 7 M^5 mod q^{m - [q=5]}
};

inline CongruenceReport check_congruences(const GapWitness& w, const ThreeDigitSolution& sol) {
    if (!w.kappa2 || !w.upsilon) {
        throw std::domain_error("check_congruences: kappa2 and upsilon must be present (n >= 6m)");
    }
    const int sg = w.delta == 0 ? 1 : -1;
    const BigInt qm = ipow(sol.q, static_cast<unsigned long>(sol.m));
    const BigInt& k2 = *w.kappa2;
    const BigInt& up = *w.upsilon;

    CongruenceReport rep;
    rep.upsilon_nonzero = up != 0;
    {
        BigInt v = sg * 8 * k2 * sol.t * sol.t + 5 * ipow(sol.M, 4);
        rep.stage_congruence = mpz_divisible_p(v.get_mpz_t(), qm.get_mpz_t()) != 0;
    }
    {
        BigInt v = 5 * up + sg * 28 * k2 * sol.M;
        rep.upsilon_congruence = mpz_divisible_p(v.get_mpz_t(), qm.get_mpz_t()) != 0;
    }
    {
        long drop = sol.q == 5 ? 1 : 0;
        BigInt mod = ipow(sol.q, static_cast<unsigned long>(sol.m - drop));
        BigInt v = 2 * up * sol.t * sol.t - 7 * ipow(sol.M, 5);
        rep.product_congruence = mpz_divisible_p(v.get_mpz_t(), mod.get_mpz_t()) != 0;
    }
    return rep;
}

}  // namespace trisquare::gap
