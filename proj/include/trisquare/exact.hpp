#pragma once

// Exact arithmetic foundation: arbitrary-precision integers and rationals
// (GMP-backed) plus the modular utilities shared by the search, sieve and
// approximation layers. No floating point anywhere in this layer.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace trisquare {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt ipow(const BigInt& base, unsigned long e) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

inline BigInt ipow(long base, unsigned long e) { return ipow(BigInt(base), e); }

// Rational from a numerator/denominator pair, reduced to lowest terms with a
// positive denominator (mpq_class does not canonicalize pair constructors).
inline Rational make_rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("make_rational: zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational make_rational(long num, long den) {
    return make_rational(BigInt(num), BigInt(den));
}

// Floor of the square root. Negative input is an error.
inline BigInt isqrt(const BigInt& v) {
    if (v < 0) throw std::domain_error("isqrt: negative input");
    BigInt r;
    mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
    return r;
}

// Root when v is a perfect square, nullopt otherwise (negatives included).
inline std::optional<BigInt> perfect_square_root(const BigInt& v) {
    if (v < 0) return std::nullopt;
    if (mpz_perfect_square_p(v.get_mpz_t()) == 0) return std::nullopt;
    return isqrt(v);
}

inline bool is_perfect_square(const BigInt& v) { return perfect_square_root(v).has_value(); }

// Largest e with q^e | v.  v = 0 has infinite valuation and is rejected.
inline unsigned long qadic_valuation(const BigInt& v, const BigInt& q) {
    if (v == 0) throw std::domain_error("qadic_valuation: zero input");
    if (q < 2) throw std::domain_error("qadic_valuation: modulus must be >= 2");
    BigInt reduced;
    return mpz_remove(reduced.get_mpz_t(), v.get_mpz_t(), q.get_mpz_t());
}

// Floor of the k-th root.
inline BigInt root_floor(const BigInt& v, unsigned long k) {
    if (v < 0) throw std::domain_error("root_floor: negative input");
    if (k == 0) throw std::domain_error("root_floor: zeroth root");
    BigInt r;
    mpz_root(r.get_mpz_t(), v.get_mpz_t(), k);
    return r;
}

inline BigInt binom(unsigned long n, unsigned long k) {
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

// Generalized binomial coefficient (a_num/2 choose k) for odd a_num, as an
// exact rational: prod_{i<k} (a_num - 2i) / (2^k k!).  Multiplying by 4^k
// always clears the denominator when a_num is odd.
inline Rational binom_half(long a_num, unsigned long k) {
    if (a_num % 2 == 0) throw std::domain_error("binom_half: numerator must be odd");
    BigInt num = 1;
    for (unsigned long i = 0; i < k; ++i) num *= BigInt(a_num) - 2 * BigInt(i);
    BigInt den;
    mpz_fac_ui(den.get_mpz_t(), k);
    den <<= k;
    return make_rational(num, den);
}

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    if (m == 1) return 0;
    std::uint64_t r = 1;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin, valid for the full 64-bit range.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 0; i + 1 < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

inline std::vector<std::uint32_t> primes_up_to(std::uint32_t n) {
    std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
    std::vector<std::uint32_t> primes;
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
    }
    return primes;
}

// Least d >= 1 with q^d == 1 (mod p), for prime p not dividing q.
// d divides p-1; the factorization of p-1 is peeled by trial division.
inline unsigned long mult_order(const BigInt& q, unsigned long p) {
    if (p < 2 || !is_prime_u64(p)) throw std::domain_error("mult_order: p must be prime");
    std::uint64_t a = mpz_fdiv_ui(q.get_mpz_t(), p);
    if (a == 0) throw std::domain_error("mult_order: p divides q");
    if (p == 2) return 1;

    std::uint64_t ord = p - 1;
    std::uint64_t rem = p - 1;
    std::vector<std::uint64_t> factors;
    for (std::uint64_t f = 2; f * f <= rem; ++f) {
        if (rem % f == 0) {
            factors.push_back(f);
            while (rem % f == 0) rem /= f;
        }
    }
    if (rem > 1) factors.push_back(rem);
    for (std::uint64_t f : factors) {
        while (ord % f == 0 && powmod_u64(a, ord / f, p) == 1) ord /= f;
    }
    return ord;
}

// Quadratic-residue test modulo an odd prime (0 counts as a residue).
inline bool is_qr_mod(const BigInt& a, unsigned long p) {
    if (p < 3 || p % 2 == 0 || !is_prime_u64(p)) {
        throw std::domain_error("is_qr_mod: p must be an odd prime");
    }
    std::uint64_t r = mpz_fdiv_ui(a.get_mpz_t(), p);
    if (r == 0) return true;
    return powmod_u64(r, (p - 1) / 2, p) == 1;
}

// Bitset of squares modulo p.  The sieve uses this instead of per-value Euler
// tests; building it is O(p) and it is immutable afterwards.
inline std::vector<bool> qr_table(unsigned long p) {
    std::vector<bool> table(p, false);
    for (std::uint64_t i = 0; i <= p / 2; ++i) table[(i * i) % p] = true;
    return table;
}

inline BigInt mod_positive(const BigInt& a, const BigInt& m) {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

// Exact quotient; throws if d does not divide v.
inline BigInt exact_div(const BigInt& v, const BigInt& d) {
    if (d == 0) throw std::domain_error("exact_div: zero divisor");
    if (!mpz_divisible_p(v.get_mpz_t(), d.get_mpz_t())) {
        throw std::domain_error("exact_div: not divisible");
    }
    BigInt r;
    mpz_divexact(r.get_mpz_t(), v.get_mpz_t(), d.get_mpz_t());
    return r;
}

}  // namespace trisquare
