#pragma once

// Local solvability sieve over candidate tuples (t, M, N, n0) for fixed
// (q, m).  A tuple dies once some auxiliary prime p admits no residue class
// of n (mod lcm(ord_p(q), 3), within n == n0 mod 3) making
// t^2 + M q^m + N q^n a quadratic residue mod p.

#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "trisquare/exact.hpp"

namespace trisquare::sieve {

enum class TupleStatus { Survivor, Eliminated, Unavoidable };

// Tuples no congruential argument can kill: they carry actual identities.
enum class UnavoidableCase {
    SquareCompletion,  // (t, +-2tY0, Y0^2, 2m mod 3)
    HalfPowerSquare,   // even m: (t, Y0^2, 2tY0, m/2 mod 3)
    CancelIdentity,    // (t, -N, N, m mod 3)
};

inline const char* case_name(UnavoidableCase c) {
    switch (c) {
        case UnavoidableCase::SquareCompletion: return "square_completion";
        case UnavoidableCase::HalfPowerSquare: return "half_power_square";
        case UnavoidableCase::CancelIdentity: return "cancel_identity";
    }
    return "?";
}

struct SieveTuple {
    long t = 0;
    long M = 0;
    long N = 0;
    int n0 = 0;
    TupleStatus status = TupleStatus::Survivor;
    std::optional<unsigned long> eliminated_by;
    std::optional<UnavoidableCase> why_unavoidable;

    friend bool operator==(const SieveTuple& a, const SieveTuple& b) {
        return a.t == b.t && a.M == b.M && a.N == b.N && a.n0 == b.n0;
    }
};

inline std::optional<UnavoidableCase> classify_unavoidable(long q, long m, long t, long M,
                                                           long N, int n0) {
    // (t, +-2tY0, Y0^2, 2m mod 3) with max{t^2, Y0^2, 2tY0} < q
    {
        BigInt nn(N);
        auto y0 = perfect_square_root(nn);
        if (y0 && *y0 >= 1 && n0 == (2 * m) % 3) {
            long Y0 = y0->get_si();
            if (Y0 * Y0 < q && 2 * t * Y0 < q && (M == 2 * t * Y0 || M == -2 * t * Y0)) {
                return UnavoidableCase::SquareCompletion;
            }
        }
    }
    // even m: (t, Y0^2, 2tY0, (m/2) mod 3)
    if (m % 2 == 0 && M > 0) {
        BigInt mm(M);
        auto y0 = perfect_square_root(mm);
        if (y0 && *y0 >= 1 && n0 == (m / 2) % 3) {
            long Y0 = y0->get_si();
            if (Y0 * Y0 < q && 2 * t * Y0 < q && N == 2 * t * Y0) {
                return UnavoidableCase::HalfPowerSquare;
            }
        }
    }
    // (t, -N, N, m mod 3)
    if (M == -N && n0 == m % 3) return UnavoidableCase::CancelIdentity;
    return std::nullopt;
}

// All admissible tuples: 1 <= t^2 <= q-1, 1 <= |M| <= q-1, 1 <= N <= q-1,
// n0 in {0,1,2}; unavoidable ones pre-tagged.
inline std::vector<SieveTuple> enumerate_tuples(long q, long m) {
    if (q < 3 || q % 2 == 0 || !is_prime_u64(static_cast<std::uint64_t>(q))) {
        throw std::domain_error("enumerate_tuples: q must be an odd prime");
    }
    if (m < 1) throw std::domain_error("enumerate_tuples: m must be >= 1");
    std::vector<SieveTuple> out;
    for (long t = 1; t * t <= q - 1; ++t) {
        for (long Ma = 1; Ma <= q - 1; ++Ma) {
            for (int sign = 0; sign < 2; ++sign) {
                long M = sign ? -Ma : Ma;
                for (long N = 1; N <= q - 1; ++N) {
                    for (int n0 = 0; n0 < 3; ++n0) {
                        SieveTuple tu;
                        tu.t = t;
                        tu.M = M;
                        tu.N = N;
                        tu.n0 = n0;
                        if (auto c = classify_unavoidable(q, m, t, M, N, n0)) {
                            tu.status = TupleStatus::Unavoidable;
                            tu.why_unavoidable = c;
                        }
                        out.push_back(tu);
                    }
                }
            }
        }
    }
    return out;
}

struct SieveOptions {
    unsigned long prime_cap = 1'000'000;
};

// Odd primes p (not dividing q) whose multiplicative order ord_p(q) divides L.
inline std::vector<unsigned long> sieve_primes(long q, unsigned long L, unsigned long cap) {
    std::vector<unsigned long> out;
    for (std::uint32_t p : primes_up_to(static_cast<std::uint32_t>(cap))) {
        if (p == 2 || q % p == 0) continue;
        if (powmod_u64(static_cast<std::uint64_t>(q % p), L, p) == 1) out.push_back(p);
    }
    return out;
}

inline std::vector<SieveTuple> sieve_tuples(long q, long m, unsigned long L,
                                            const SieveOptions& opt = {}) {
    if (L < 1) throw std::domain_error("sieve_tuples: L must be positive");
    std::vector<SieveTuple> tuples = enumerate_tuples(q, m);
    std::vector<unsigned long> primes = sieve_primes(q, L, opt.prime_cap);
    if (primes.empty()) {
        throw std::runtime_error("sieve_tuples: no sieve primes found; increase L or the prime cap");
    }

    struct PrimeData {
        unsigned long p;
        unsigned long period;      // lcm(ord_p(q), 3)
        std::vector<std::uint64_t> qpow;  // q^r mod p for r < period
        std::vector<bool> squares;
        std::uint64_t qm;          // q^m mod p
    };
    std::vector<PrimeData> data;
    data.reserve(primes.size());
    for (unsigned long p : primes) {
        PrimeData d;
        d.p = p;
        unsigned long ord = mult_order(BigInt(q), p);
        d.period = std::lcm(ord, 3ul);
        d.qpow.resize(d.period);
        std::uint64_t acc = 1;
        for (unsigned long r = 0; r < d.period; ++r) {
            d.qpow[r] = acc;
            acc = mulmod_u64(acc, static_cast<std::uint64_t>(q % p), p);
        }
        d.squares = qr_table(p);
        d.qm = powmod_u64(static_cast<std::uint64_t>(q % p), static_cast<std::uint64_t>(m), p);
        data.push_back(std::move(d));
    }

    // Ascending prime scan keeps the recorded eliminating prime deterministic;
    // the survivor set itself does not depend on the order.
    for (SieveTuple& tu : tuples) {
        for (const PrimeData& d : data) {
            const std::uint64_t p = d.p;
            std::uint64_t base =
                ((static_cast<std::int64_t>(tu.t) * tu.t + static_cast<std::int64_t>(tu.M % static_cast<long>(p)) * static_cast<std::int64_t>(d.qm)) %
                     static_cast<std::int64_t>(p) +
                 static_cast<std::int64_t>(p)) %
                p;
            bool admissible = false;
            for (unsigned long r = static_cast<unsigned long>(tu.n0); r < d.period; r += 3) {
                std::uint64_t val = (base + static_cast<std::uint64_t>(tu.N) % p * d.qpow[r]) % p;
                if (d.squares[val]) {
                    admissible = true;
                    break;
                }
            }
            if (!admissible) {
                if (tu.status == TupleStatus::Unavoidable) {
                    throw std::logic_error("sieve_tuples: eliminated a tuple backed by an identity");
                }
                tu.status = TupleStatus::Eliminated;
                tu.eliminated_by = d.p;
                break;
            }
        }
    }
    return tuples;
}

}  // namespace trisquare::sieve
