#pragma once

// Bounded solving of Y^2 = c + N q^n over 1 <= n <= n_max, a residue filter
// that discards impossible classes of n, and the cubic-curve change of
// variables U^2 = V^3 + k together with a bounded integer-point scan.

#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "trisquare/exact.hpp"

namespace trisquare::rn {

struct RNInstance {
    BigInt c;       // t^2 + M q^m for pipeline-generated instances
    long N = 1;
    long q = 0;     // odd prime
    long n_max = 0; // completeness is only claimed up to n_max

    void check() const {
        if (q < 3 || q % 2 == 0 || !is_prime_u64(static_cast<std::uint64_t>(q))) {
            throw std::domain_error("rn: q must be an odd prime");
        }
        if (N < 1) throw std::domain_error("rn: N must be positive");
        if (n_max < 1) throw std::domain_error("rn: n_max must be positive");
    }
};

struct RNSolution {
    BigInt Y;
    long n = 0;

    friend bool operator==(const RNSolution& a, const RNSolution& b) {
        return a.Y == b.Y && a.n == b.n;
    }
};

// All (Y, n) with 1 <= n <= n_max and c + N q^n >= 1 a perfect square,
// ascending in n.
inline std::vector<RNSolution> solve_rn(const RNInstance& inst) {
    inst.check();
    std::vector<RNSolution> out;
    BigInt power(inst.q);
    for (long n = 1; n <= inst.n_max; ++n) {
        BigInt v = inst.c + inst.N * power;
        if (v >= 1) {
            if (auto y = perfect_square_root(v)) out.push_back({*y, n});
        }
        power *= inst.q;
    }
    return out;
}

// Residues r mod ord_p(q) for which c + N q^n can be a square modulo p when
// n == r.  Classes outside the set carry no solutions (soundness is by
// construction: the value mod p only depends on n mod ord_p(q)).
inline std::set<unsigned long> hensel_filter(const RNInstance& inst, unsigned long p) {
    inst.check();
    if (p < 3 || !is_prime_u64(p)) throw std::domain_error("hensel_filter: p must be an odd prime");
    if (inst.q % static_cast<long>(p) == 0 || inst.N % static_cast<long>(p) == 0) {
        throw std::domain_error("hensel_filter: p must not divide 2 q N");
    }
    unsigned long ord = mult_order(BigInt(inst.q), p);
    std::vector<bool> squares = qr_table(p);
    std::uint64_t c_mod = mpz_fdiv_ui(inst.c.get_mpz_t(), p);
    std::uint64_t n_mod = static_cast<std::uint64_t>(inst.N % static_cast<long>(p));
    std::uint64_t qp = static_cast<std::uint64_t>(inst.q % static_cast<long>(p));

    std::set<unsigned long> admissible;
    std::uint64_t pw = 1;
    for (unsigned long r = 0; r < ord; ++r) {
        std::uint64_t v = (c_mod + n_mod * pw) % p;
        if (squares[v]) admissible.insert(r);
        pw = mulmod_u64(pw, qp, p);
    }
    return admissible;
}

// solve_rn restricted to classes passing the filters; must return the same
// set as the unfiltered solver.
inline std::vector<RNSolution> solve_rn_filtered(const RNInstance& inst,
                                                 const std::vector<unsigned long>& primes) {
    inst.check();
    struct Filter {
        unsigned long ord;
        std::set<unsigned long> admissible;
    };
    std::vector<Filter> filters;
    for (unsigned long p : primes) filters.push_back({mult_order(BigInt(inst.q), p), hensel_filter(inst, p)});

    std::vector<RNSolution> out;
    BigInt power(inst.q);
    for (long n = 1; n <= inst.n_max; ++n, power *= inst.q) {
        bool possible = true;
        for (const auto& f : filters) {
            if (!f.admissible.count(static_cast<unsigned long>(n) % f.ord)) {
                possible = false;
                break;
            }
        }
        if (!possible) continue;
        BigInt v = inst.c + inst.N * power;
        if (v >= 1) {
            if (auto y = perfect_square_root(v)) out.push_back({*y, n});
        }
    }
    return out;
}

struct MordellInstance {
    BigInt k;
    int n0 = 0;
};

struct MordellPoint {
    BigInt U;
    BigInt V;

    friend bool operator==(const MordellPoint& a, const MordellPoint& b) {
        return a.U == b.U && a.V == b.V;
    }
};

// k = N^2 q^{2 n0} (t^2 + M q^m); a solution with n == n0 (mod 3) maps to
// U = N q^{n0} Y, V = q^{(n+2n0)/3} N on U^2 = V^3 + k.
inline MordellInstance mordell_transform(const BigInt& t, const BigInt& M, long N, long m,
                                         int n0, long q) {
    if (n0 < 0 || n0 > 2) throw std::domain_error("mordell_transform: n0 must be 0, 1 or 2");
    MordellInstance inst;
    inst.n0 = n0;
    BigInt c = t * t + M * ipow(q, static_cast<unsigned long>(m));
    inst.k = BigInt(N) * N * ipow(q, static_cast<unsigned long>(2 * n0)) * c;
    return inst;
}

inline MordellPoint mordell_lift(const MordellInstance& inst, long q, long N, const BigInt& Y,
                                 long n) {
    if ((n + 2 * inst.n0) % 3 != 0) {
        throw std::domain_error("mordell_lift: n is not congruent to n0 mod 3");
    }
    MordellPoint pt;
    pt.U = BigInt(N) * ipow(q, static_cast<unsigned long>(inst.n0)) * Y;
    pt.V = ipow(q, static_cast<unsigned long>((n + 2 * inst.n0) / 3)) * N;
    if (pt.U * pt.U != pt.V * pt.V * pt.V + inst.k) {
        throw std::logic_error("mordell_lift: transformed point misses the curve");
    }
    return pt;
}

// Integer points with V^3 + k a perfect square, for 1 <= V <= V_max plus,
// when k > 0, the finitely many negative V with V^3 + k >= 0.
inline std::vector<MordellPoint> mordell_scan(const BigInt& k, const BigInt& V_max) {
    if (V_max < 1) throw std::domain_error("mordell_scan: V_max must be >= 1");
    std::vector<MordellPoint> out;
    if (k > 0) {
        BigInt lo = -root_floor(k, 3) - 1;
        for (BigInt V = lo; V <= -1; ++V) {
            BigInt v = V * V * V + k;
            if (v < 0) continue;
            if (auto u = perfect_square_root(v)) out.push_back({*u, V});
        }
    }
    for (BigInt V = 1; V <= V_max; ++V) {
        BigInt v = V * V * V + k;
        if (v < 0) continue;
        if (auto u = perfect_square_root(v)) out.push_back({*u, V});
    }
    return out;
}

}  // namespace trisquare::rn
