#pragma once

// Base-q digit expansions, the nonzero-digit count / digit-sum statistics,
// and exhaustive searches for squares with few nonzero digits.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "trisquare/exact.hpp"
#include "trisquare/parallel.hpp"

namespace trisquare::digits {

struct BaseQExpansion {
    long base = 0;
    std::vector<long> digits;  // little-endian, most significant digit nonzero

    BigInt value() const {
        BigInt v = 0;
        for (std::size_t i = digits.size(); i-- > 0;) {
            v = v * base + digits[i];
        }
        return v;
    }
};

struct DigitStats {
    long nonzero_count = 0;  // N_q
    long digit_sum = 0;      // S_q
};

struct SparseSquareHit {
    BigInt n;
    BaseQExpansion square_expansion;
    long nonzero_of_n = 0;       // N_q(n)
    long nonzero_of_square = 0;  // N_q(n^2)

    friend bool operator==(const SparseSquareHit& a, const SparseSquareHit& b) {
        return a.n == b.n;
    }
};

inline BaseQExpansion expand(const BigInt& v, long q) {
    if (q < 2) throw std::domain_error("expand: base must be >= 2");
    if (v < 0) throw std::domain_error("expand: negative value");
    BaseQExpansion e;
    e.base = q;
    BigInt rest = v;
    while (rest > 0) {
        unsigned long d = mpz_fdiv_q_ui(rest.get_mpz_t(), rest.get_mpz_t(),
                                        static_cast<unsigned long>(q));
        e.digits.push_back(static_cast<long>(d));
    }
    return e;
}

inline DigitStats stats(const BaseQExpansion& e) {
    DigitStats s;
    for (long d : e.digits) {
        if (d != 0) {
            ++s.nonzero_count;
            s.digit_sum += d;
        }
    }
    return s;
}

// N_q(v); bails out early once the count exceeds `stop_above` (returns
// stop_above + 1 in that case).
inline long nonzero_digit_count(std::uint64_t v, std::uint64_t q, long stop_above) {
    long c = 0;
    while (v) {
        if (v % q != 0 && ++c > stop_above) return c;
        v /= q;
    }
    return c;
}

inline long nonzero_digit_count(const BigInt& v, long q, long stop_above) {
    if (v.fits_ulong_p()) return nonzero_digit_count(v.get_ui(), static_cast<std::uint64_t>(q), stop_above);
    long c = 0;
    BigInt rest = v;
    while (rest > 0) {
        unsigned long d = mpz_fdiv_q_ui(rest.get_mpz_t(), rest.get_mpz_t(),
                                        static_cast<unsigned long>(q));
        if (d != 0 && ++c > stop_above) return c;
    }
    return c;
}

struct SearchOptions {
    std::uint64_t chunk_size = std::uint64_t{1} << 20;
    unsigned threads = 0;  // 0 = use max_threads()
};

namespace detail {

// Scan [lo, hi]; keep n !≡ 0 (mod q) with N_q(n^2) <= k.  The uint64 fast
// path applies whenever hi^2 fits in 64 bits.
inline std::vector<SparseSquareHit> scan_range(long q, long k, std::uint64_t lo,
                                               std::uint64_t hi) {
    std::vector<SparseSquareHit> hits;
    const std::uint64_t uq = static_cast<std::uint64_t>(q);
    const bool fast = hi <= 0xFFFFFFFFull;
    for (std::uint64_t n = lo; n <= hi; ++n) {
        if (n % uq == 0) continue;
        long c;
        if (fast) {
            c = nonzero_digit_count(n * n, uq, k);
        } else {
            BigInt big(static_cast<unsigned long>(n));
            c = nonzero_digit_count(BigInt(big * big), q, k);
        }
        if (c > k) continue;
        SparseSquareHit h;
        h.n = BigInt(static_cast<unsigned long>(n));
        h.square_expansion = expand(BigInt(h.n * h.n), q);
        h.nonzero_of_square = c;
        h.nonzero_of_n = nonzero_digit_count(h.n, q, h.n.fits_ulong_p() ? 64 : 1 << 20);
        hits.push_back(std::move(h));
    }
    return hits;
}

}  // namespace detail

// All n <= bound with n !≡ 0 (mod q) and N_q(n^2) <= k, ascending.
inline std::vector<SparseSquareHit> find_sparse_squares(long q, long k, const BigInt& bound,
                                                        const SearchOptions& opt = {}) {
    if (q < 2) throw std::domain_error("find_sparse_squares: base must be >= 2");
    if (k < 1) throw std::domain_error("find_sparse_squares: k must be >= 1");
    if (bound < 1) return {};
    if (!bound.fits_ulong_p()) {
        throw std::domain_error("find_sparse_squares: bound too large for this build");
    }
    std::uint64_t hi = bound.get_ui();
    return parallel_chunk_map(1, hi + 1, opt.chunk_size, opt.threads,
                              [&](std::uint64_t a, std::uint64_t b) {
                                  return detail::scan_range(q, k, a, b - 1);
                              });
}

// Members of B_{k,j}(q) up to bound: n !≡ 0 (mod q), N_q(n) = j, N_q(n^2) = k.
inline std::vector<BigInt> compute_Bkj(long q, long k, long j, const BigInt& bound,
                                       const SearchOptions& opt = {}) {
    if (q < 2) throw std::domain_error("compute_Bkj: base must be >= 2");
    if (k < 1 || j < 1) throw std::domain_error("compute_Bkj: k and j must be >= 1");
    if (bound < 1) return {};
    if (!bound.fits_ulong_p()) throw std::domain_error("compute_Bkj: bound too large");
    std::uint64_t hi = bound.get_ui();
    const std::uint64_t uq = static_cast<std::uint64_t>(q);
    const bool fast = hi <= 0xFFFFFFFFull;
    return parallel_chunk_map(
        1, hi + 1, opt.chunk_size, opt.threads, [&](std::uint64_t a, std::uint64_t b) {
            std::vector<BigInt> out;
            for (std::uint64_t n = a; n < b; ++n) {
                if (n % uq == 0) continue;
                if (nonzero_digit_count(n, uq, j) != j) continue;
                long c;
                if (fast) {
                    c = nonzero_digit_count(n * n, uq, k);
                } else {
                    BigInt big(static_cast<unsigned long>(n));
                    c = nonzero_digit_count(BigInt(big * big), q, k);
                }
                if (c == k) out.push_back(BigInt(static_cast<unsigned long>(n)));
            }
            return out;
        });
}

}  // namespace trisquare::digits
