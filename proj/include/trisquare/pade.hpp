#pragma once

// Exact Pade approximants to (1+x)^{1/2}: construction, remainder-series
// verification, the cross-product constant, the (n1, n2) parameter selection
// rule, archimedean bound checks, and the base-bounding inequalities.

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "trisquare/exact.hpp"
#include "trisquare/poly.hpp"

namespace trisquare::pade {

namespace detail {

// Memoized (j + 1/2 choose k) table; immutable after first use.
inline const Rational& half_binom_cached(long a_num, unsigned long k) {
    static const int kMaxHalf = 96;   // a_num in [-1, 2*kMaxHalf+1]
    static const int kMaxK = 96;
    static const std::vector<std::vector<Rational>> table = [] {
        std::vector<std::vector<Rational>> t(kMaxHalf + 2);
        for (int j = -1; j <= kMaxHalf; ++j) {
            auto& row = t[static_cast<std::size_t>(j + 1)];
            row.reserve(kMaxK + 1);
            for (int k = 0; k <= kMaxK; ++k) row.push_back(binom_half(2 * j + 1, k));
        }
        return t;
    }();
    long j2 = (a_num - 1) / 2;  // a_num = 2j+1
    if (a_num >= -1 && j2 >= -1 && j2 <= kMaxHalf && k <= static_cast<unsigned long>(kMaxK)) {
        return table[static_cast<std::size_t>(j2 + 1)][k];
    }
    static thread_local Rational scratch;
    scratch = binom_half(a_num, k);
    return scratch;
}

}  // namespace detail

// P_{n1,n2}(x) = sum_k (n2+1/2 choose k)(n1+n2-k choose n2) x^k.
inline RationalPoly pade_P(long n1, long n2) {
    if (n1 < 0 || n2 < 0) throw std::domain_error("pade_P: negative degree");
    std::vector<Rational> c;
    c.reserve(n1 + 1);
    for (long k = 0; k <= n1; ++k) {
        Rational term = detail::half_binom_cached(2 * n2 + 1, k);
        term *= Rational(binom(n1 + n2 - k, n2));
        c.push_back(term);
    }
    return RationalPoly(std::move(c));
}

// Q_{n1,n2}(x) = sum_k (n1-1/2 choose k)(n1+n2-k choose n1) x^k.
inline RationalPoly pade_Q(long n1, long n2) {
    if (n1 < 0 || n2 < 0) throw std::domain_error("pade_Q: negative degree");
    std::vector<Rational> c;
    c.reserve(n2 + 1);
    for (long k = 0; k <= n2; ++k) {
        Rational term = detail::half_binom_cached(2 * n1 - 1, k);
        term *= Rational(binom(n1 + n2 - k, n1));
        c.push_back(term);
    }
    return RationalPoly(std::move(c));
}

// First `order` power-series coefficients of P - (1+x)^{1/2} Q, by exact
// series multiplication.  Indices 0..n1+n2 must all vanish.
inline std::vector<Rational> remainder_series(long n1, long n2, long order) {
    if (order <= n1 + n2 + 1) {
        throw std::domain_error("remainder_series: order must exceed n1+n2+1");
    }
    RationalPoly P = pade_P(n1, n2);
    RationalPoly Q = pade_Q(n1, n2);
    std::vector<Rational> sqrt_series;
    sqrt_series.reserve(order);
    for (long j = 0; j < order; ++j) sqrt_series.push_back(detail::half_binom_cached(1, j));

    std::vector<Rational> out(order, Rational(0));
    for (long i = 0; i < order; ++i) {
        Rational acc = P.coeff(i);
        for (long j = 0; j <= i && j <= Q.degree(); ++j) {
            acc -= Q.coeff(j) * sqrt_series[i - j];
        }
        out[i] = acc;
    }
    return out;
}

// Coefficient c in P_{n1+1,n2} Q_{n1,n2+1} - P_{n1,n2+1} Q_{n1+1,n2} = c x^{n1+n2+2}.
// A non-monomial product signals a construction bug.
inline Rational cross_constant(long n1, long n2) {
    RationalPoly prod = pade_P(n1 + 1, n2) * pade_Q(n1, n2 + 1) -
                        pade_P(n1, n2 + 1) * pade_Q(n1 + 1, n2);
    long want = n1 + n2 + 2;
    if (prod.degree() != want || !prod.is_monomial() || prod.coeff(want) == 0) {
        throw std::logic_error("cross_constant: product is not a nonzero monomial of the expected degree");
    }
    return prod.coeff(want);
}

struct ParamSelection {
    long m = 0;
    long n = 0;
    int delta = 0;
    int Delta1 = 0;
    int Delta2 = 0;
    long n1 = 0;
    long n2 = 0;
};

// (n1, n2) = ([3n/4m] + delta - Delta1, [n/4m] - delta + Delta2), where the
// Delta's depend on the fractional part r/(4m) of n/(4m):
//   Delta1 = 1 iff {n/4m} in [0,1/4] u [1/3,1/2] u [2/3,3/4]
//   Delta2 = 1 iff {n/4m} > 0
inline ParamSelection select_params(long m, long n, int delta) {
    if (m < 4) throw std::domain_error("select_params: m must be >= 4");
    if (n < 10 * m - 10) throw std::domain_error("select_params: n must be >= 10m-10");
    if (delta != 0 && delta != 1) throw std::domain_error("select_params: delta must be 0 or 1");

    ParamSelection s;
    s.m = m;
    s.n = n;
    s.delta = delta;
    const long fm = 4 * m;
    const long r = n % fm;  // {n/4m} = r / 4m
    s.Delta1 = (r <= m) || (3 * r >= fm && r <= 2 * m) || (3 * r >= 2 * fm && r <= 3 * m) ? 1 : 0;
    s.Delta2 = r > 0 ? 1 : 0;
    s.n1 = (3 * n) / fm + delta - s.Delta1;
    s.n2 = n / fm - delta + s.Delta2;
    if (s.n1 < 0 || s.n2 < 0) throw std::logic_error("select_params: negative degree selected");
    if ((s.n1 + s.n2 + 1) * m < n) throw std::logic_error("select_params: coverage invariant failed");
    return s;
}

// mu = max{ n1(m+1), n2(m+1) + n1 - n2 + n/2 }; asserts the closed-form
// ceiling mu <= 3n/4 + 3n/4m + m - 5/4.
inline Rational exponent_bound(const ParamSelection& s) {
    Rational a(s.n1 * (s.m + 1));
    Rational b = Rational(s.n2 * (s.m + 1) + s.n1 - s.n2) + make_rational(s.n, 2);
    Rational mu = a > b ? a : b;
    Rational rhs = make_rational(3 * s.n, 4) + make_rational(3 * s.n, 4 * s.m) +
                   Rational(s.m) - make_rational(5, 4);
    if (mu > rhs) throw std::logic_error("exponent_bound: selection exceeds the closed-form bound");
    return mu;
}

// Verifies |P(x)| <= 2|x|^n1 and |Q(x)| <= 2^{n1+n2-1} (1+|x|/2)^{n2} by
// exact evaluation, for |x| >= 16.
inline bool lemma_bounds_hold(long n1, long n2, const Rational& x) {
    Rational ax = abs(x);
    if (ax < 16) throw std::domain_error("lemma_bounds_hold: |x| must be >= 16");
    if (n1 + n2 < 1) throw std::domain_error("lemma_bounds_hold: n1+n2 must be >= 1");

    auto rat_pow = [](const Rational& base, long e) {
        Rational r(1);
        for (long i = 0; i < e; ++i) r *= base;
        return r;
    };

    Rational pv = abs(Rational(pade_P(n1, n2).eval(x)));
    Rational p_bound = 2 * rat_pow(ax, n1);
    if (pv > p_bound) return false;

    Rational qv = abs(Rational(pade_Q(n1, n2).eval(x)));
    Rational q_bound = Rational(ipow(2, static_cast<unsigned long>(n1 + n2 - 1))) *
                       rat_pow(Rational(1) + ax / 2, n2);
    return qv <= q_bound;
}

// True iff q^{(n1+n2+1)m - n} divides binom(n1+n2, n2)^2; requires the
// exponent to be positive.
inline bool divisibility_criterion(const ParamSelection& s, const BigInt& q) {
    long e = (s.n1 + s.n2 + 1) * s.m - s.n;
    if (e <= 0) throw std::domain_error("divisibility_criterion: (n1+n2+1)m must exceed n");
    BigInt b = binom(s.n1 + s.n2, s.n2);
    BigInt b2 = b * b;
    BigInt qe = ipow(q, static_cast<unsigned long>(e));
    return mpz_divisible_p(b2.get_mpz_t(), qe.get_mpz_t()) != 0;
}

struct QBoundReport {
    long m = 0;
    long n = 0;
    Rational mu;                    // best (smaller) exponent over the two delta choices
    std::optional<BigInt> q_max;    // nullopt = unbounded
    bool refined = false;           // true when the divisibility refinement was used
};

namespace detail {

// Largest integer q >= 2 with q^e < R (or nullopt if none, which cannot
// happen for the inputs used here since R >= 4).
inline BigInt strict_root_bound(const BigInt& R, unsigned long e) {
    BigInt b;
    int exact = mpz_root(b.get_mpz_t(), R.get_mpz_t(), e);
    if (exact) b -= 1;
    return b;
}

}  // namespace detail

// Upper bound on the base q for a hypothetical solution at (m, n):
//  - when n(m-3) > 4m^2-5m, the closed-form bound q^D < 3^{6n+8m} with
//    D = mn-3n-4m^2+5m, evaluated with exact integer arithmetic;
//  - otherwise the refinement route: when q^{(n1+n2+1)m-n} cannot divide
//    binom(n1+n2,n2)^2 (automatic for primes q > n1+n2), the inequality
//    q^{2(n-mu)} < 3^{4 n1} holds for that parameter pair; with the exponent
//    positive for both pairs we may take the sharper of the two, otherwise
//    the worse one covers the unknown pair.
inline QBoundReport bound_q(long m, long n) {
    QBoundReport rep;
    rep.m = m;
    rep.n = n;

    ParamSelection sel[2] = {select_params(m, n, 0), select_params(m, n, 1)};
    Rational mu[2] = {exponent_bound(sel[0]), exponent_bound(sel[1])};
    rep.mu = mu[0] < mu[1] ? mu[0] : mu[1];

    const long D = m * n - 3 * n - 4 * m * m + 5 * m;
    if (D > 0) {
        BigInt R = ipow(3, static_cast<unsigned long>(6 * n + 8 * m));
        rep.q_max = detail::strict_root_bound(R, static_cast<unsigned long>(D));
        rep.refined = false;
        return rep;
    }

    // Per-pair bound from q^{2(n - mu)} < 3^{4 n1}, usable only when mu < n.
    auto pair_bound = [&](int d) -> std::optional<BigInt> {
        Rational gap = Rational(n) - mu[d];
        if (gap <= 0) return std::nullopt;
        Rational two_gap = 2 * gap;
        BigInt e(two_gap.get_num());  // mu is a multiple of 1/2, so 2*gap is integral
        if (two_gap.get_den() != 1) throw std::logic_error("bound_q: non half-integral exponent");
        BigInt R = ipow(3, static_cast<unsigned long>(4 * sel[d].n1));
        return detail::strict_root_bound(R, e.get_ui());
    };

    std::vector<int> guaranteed;  // pairs where the divisibility refinement applies
    for (int d = 0; d < 2; ++d) {
        long e = (sel[d].n1 + sel[d].n2 + 1) * m - n;
        if (e > 0 && pair_bound(d).has_value()) guaranteed.push_back(d);
    }

    if (!guaranteed.empty()) {
        BigInt best;
        bool first = true;
        long threshold = 0;
        for (int d : guaranteed) {
            BigInt b = *pair_bound(d);
            threshold = std::max(threshold, sel[d].n1 + sel[d].n2);
            if (first || b < best) best = b, first = false;
        }
        if (best < threshold) best = threshold;  // primes <= n1+n2 may divide the binomial
        rep.q_max = best;
        rep.refined = true;
        return rep;
    }

    auto b0 = pair_bound(0);
    auto b1 = pair_bound(1);
    if (b0 && b1) {
        rep.q_max = *b0 > *b1 ? *b0 : *b1;  // unknown which pair carries the lower bound
        rep.refined = true;
        return rep;
    }

    rep.q_max = std::nullopt;
    rep.refined = false;
    return rep;
}

}  // namespace trisquare::pade
