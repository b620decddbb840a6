#pragma once

// Catalog of polynomial solution families for Y^2 = t^2 + M q^m + N q^n and
// the fixed corpus of known sporadic solutions; classification of arbitrary
// solution tuples into a family, a sporadic match, or UNKNOWN.

#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "trisquare/exact.hpp"

namespace trisquare::families {

// A verified solution of Y^2 = t^2 + M q^m + N q^n with |M|, N, t^2 <= q-1.
// M = 0 encodes the two-term identity Y^2 = t^2 + N q^n; the m field is 0 in
// that case since there is no middle term.
struct ThreeDigitSolution {
    long q = 0;
    BigInt Y;
    BigInt t;
    BigInt M;
    BigInt N;
    long m = 0;
    long n = 0;

    BigInt rhs() const {
        BigInt v = t * t + N * ipow(q, static_cast<unsigned long>(n));
        if (M != 0) v += M * ipow(q, static_cast<unsigned long>(m));
        return v;
    }

    void validate() const {
        if (q < 2) throw std::domain_error("solution: base must be >= 2");
        if (Y < 1 || t < 1 || N < 1) throw std::domain_error("solution: Y, t, N must be positive");
        if (t * t > q - 1) throw std::domain_error("solution: t^2 exceeds q-1");
        if (abs(M) > q - 1) throw std::domain_error("solution: |M| exceeds q-1");
        if (N > q - 1) throw std::domain_error("solution: N exceeds q-1");
        if (M == 0) {
            if (m != 0 || n < 1) throw std::domain_error("solution: M=0 requires m=0, n>=1");
        } else {
            if (m < 1 || m >= n) throw std::domain_error("solution: need 1 <= m < n");
        }
        if (Y * Y != rhs()) throw std::domain_error("solution: defining equation fails");
        if (q >= 2 && is_prime_u64(static_cast<std::uint64_t>(q))) {
            BigInt g;
            BigInt qq(q);
            mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), qq.get_mpz_t());
            if (g != 1) throw std::domain_error("solution: gcd(t, q) != 1 for prime q");
        }
    }

    friend bool operator==(const ThreeDigitSolution& a, const ThreeDigitSolution& b) {
        return a.q == b.q && a.Y == b.Y && a.t == b.t && a.M == b.M && a.N == b.N &&
               a.m == b.m && a.n == b.n;
    }

    friend bool operator<(const ThreeDigitSolution& a, const ThreeDigitSolution& b) {
        auto key = [](const ThreeDigitSolution& s) {
            return std::tuple<long, long, long, BigInt, BigInt, BigInt>(s.q, s.m, s.n, s.Y, s.M,
                                                                        s.t);
        };
        return key(a) < key(b);
    }
};

enum class FamilyTag {
    F1_SQUARE_PLUS,   // (q^m Y0 +- t)^2 = t^2 +- 2tY0 q^m + Y0^2 q^{2m}
    F2_Q2_MINUS_T,    // (q^2 - t)^2 = t^2 + (q-2t) q^2 + (q-1) q^3
    F3_KAPPA1,        // (q0 q +- t)^2 = t^2 +- (2t q0 - q) q + (q0^2 +- 1) q^2
    F4_KAPPA2,        // (q0 q +- t)^2 = t^2 +- 2(t q0 - q) q + (q0^2 +- 2) q^2
    F5_M_ZERO,        // (q - t)^2 = t^2 + (q - 2t) q
    F6_R2PLUS1,       // q = r^2+1: (r(r^6+5r^4+7r^2+5)/2)^2 = r^2 + (r^2-1) q^2 + ((r^2+4)/4) q^6
    F7_64R2PLUS1,     // q = 64r^2+1: (r(32768 r^4+1280 r^2+15))^2 = 9r^2 - (40r^2+1) q + q^5
    SPORADIC_KNOWN,
    UNKNOWN,
};

inline const char* tag_name(FamilyTag t) {
    switch (t) {
        case FamilyTag::F1_SQUARE_PLUS: return "F1_SQUARE_PLUS";
        case FamilyTag::F2_Q2_MINUS_T: return "F2_Q2_MINUS_T";
        case FamilyTag::F3_KAPPA1: return "F3_KAPPA1";
        case FamilyTag::F4_KAPPA2: return "F4_KAPPA2";
        case FamilyTag::F5_M_ZERO: return "F5_M_ZERO";
        case FamilyTag::F6_R2PLUS1: return "F6_R2PLUS1";
        case FamilyTag::F7_64R2PLUS1: return "F7_64R2PLUS1";
        case FamilyTag::SPORADIC_KNOWN: return "SPORADIC_KNOWN";
        case FamilyTag::UNKNOWN: return "UNKNOWN";
    }
    return "?";
}

// Union of the parameters any family can need; unused fields stay default.
struct FamilyParams {
    long q = 0;
    BigInt t = 0;
    BigInt Y0 = 0;
    BigInt q0 = 0;
    long r = 0;
    long m = 0;
    int delta = 0;
};

struct Classification {
    FamilyTag tag = FamilyTag::UNKNOWN;
    FamilyParams params;
};

namespace detail {

inline void require(bool ok, const char* condition) {
    if (!ok) throw std::domain_error(std::string("generate: violated condition: ") + condition);
}

inline int sign_of(int delta) { return delta == 0 ? 1 : -1; }

}  // namespace detail

inline ThreeDigitSolution generate(FamilyTag tag, const FamilyParams& p) {
    using detail::require;
    ThreeDigitSolution s;
    switch (tag) {
        case FamilyTag::F1_SQUARE_PLUS: {
            require(p.q >= 3, "q >= 3");
            require(p.t >= 1 && p.Y0 >= 1, "t, Y0 >= 1");
            require(p.m >= 1, "m >= 1");
            require(p.delta == 0 || p.delta == 1, "delta in {0,1}");
            require(p.t * p.t < p.q, "t^2 < q");
            require(p.Y0 * p.Y0 < p.q, "Y0^2 < q");
            require(2 * p.t * p.Y0 < p.q, "2 t Y0 < q");
            int sg = detail::sign_of(p.delta);
            s.q = p.q;
            s.t = p.t;
            s.m = p.m;
            s.n = 2 * p.m;
            s.M = sg * 2 * p.t * p.Y0;
            s.N = p.Y0 * p.Y0;
            s.Y = ipow(p.q, p.m) * p.Y0 + sg * p.t;
            break;
        }
        case FamilyTag::F2_Q2_MINUS_T: {
            require(p.q >= 3, "q >= 3");
            require(p.t >= 1 && p.t * p.t <= p.q - 1, "1 <= t^2 <= q-1");
            require(p.q != 2 * p.t, "q != 2t");
            s.q = p.q;
            s.t = p.t;
            s.M = p.q - 2 * p.t;
            s.N = p.q - 1;
            s.m = 2;
            s.n = 3;
            s.Y = BigInt(p.q) * p.q - p.t;
            break;
        }
        case FamilyTag::F3_KAPPA1: {
            require(p.q >= 3, "q >= 3");
            require(p.t >= 1 && p.q0 >= 1, "t, q0 >= 1");
            require(p.delta == 0 || p.delta == 1, "delta in {0,1}");
            int sg = detail::sign_of(p.delta);
            BigInt M = sg * (2 * p.t * p.q0 - p.q);
            BigInt N = p.q0 * p.q0 + sg;
            require(M != 0, "M != 0");
            require(abs(M) <= p.q - 1, "|2 t q0 - q| <= q-1");
            require(N >= 1 && N <= p.q - 1, "1 <= q0^2 +- 1 <= q-1");
            require(p.t * p.t <= p.q - 1, "t^2 <= q-1");
            s.q = p.q;
            s.t = p.t;
            s.M = M;
            s.N = N;
            s.m = 1;
            s.n = 2;
            s.Y = p.q0 * p.q + sg * p.t;
            break;
        }
        case FamilyTag::F4_KAPPA2: {
            require(p.q >= 3, "q >= 3");
            require(p.t >= 1 && p.q0 >= 1, "t, q0 >= 1");
            require(p.delta == 0 || p.delta == 1, "delta in {0,1}");
            int sg = detail::sign_of(p.delta);
            BigInt M = sg * 2 * (p.t * p.q0 - p.q);
            BigInt N = p.q0 * p.q0 + 2 * sg;
            require(M != 0, "M != 0");
            require(abs(M) <= p.q - 1, "|2(t q0 - q)| <= q-1");
            require(N >= 1 && N <= p.q - 1, "1 <= q0^2 +- 2 <= q-1");
            require(p.t * p.t <= p.q - 1, "t^2 <= q-1");
            s.q = p.q;
            s.t = p.t;
            s.M = M;
            s.N = N;
            s.m = 1;
            s.n = 2;
            s.Y = p.q0 * p.q + sg * p.t;
            break;
        }
        case FamilyTag::F5_M_ZERO: {
            require(p.q >= 3, "q >= 3");
            require(p.t >= 1 && p.t * p.t <= p.q - 1, "1 <= t^2 <= q-1");
            require(p.q - 2 * p.t >= 1, "q - 2t >= 1");
            s.q = p.q;
            s.t = p.t;
            s.M = 0;
            s.N = p.q - 2 * p.t;
            s.m = 0;
            s.n = 1;
            s.Y = p.q - p.t;
            break;
        }
        case FamilyTag::F6_R2PLUS1: {
            require(p.r >= 2 && p.r % 2 == 0, "r even, r >= 2");
            long q = p.r * p.r + 1;
            require(is_prime_u64(static_cast<std::uint64_t>(q)), "q = r^2+1 prime");
            BigInt r(p.r);
            s.q = q;
            s.t = r;
            s.M = r * r - 1;
            s.N = exact_div(r * r + 4, BigInt(4));
            s.m = 2;
            s.n = 6;
            BigInt r2 = r * r;
            s.Y = exact_div(r * (r2 * r2 * r2 + 5 * r2 * r2 + 7 * r2 + 5), BigInt(2));
            break;
        }
        case FamilyTag::F7_64R2PLUS1: {
            require(p.r >= 1, "r >= 1");
            long q = 64 * p.r * p.r + 1;
            require(is_prime_u64(static_cast<std::uint64_t>(q)), "q = 64r^2+1 prime");
            BigInt r(p.r);
            BigInt r2 = r * r;
            s.q = q;
            s.t = 3 * r;
            s.M = -(40 * r2 + 1);
            s.N = 1;
            s.m = 1;
            s.n = 5;
            s.Y = r * (32768 * r2 * r2 + 1280 * r2 + 15);
            break;
        }
        default:
            throw std::domain_error("generate: tag has no generator");
    }
    s.validate();
    return s;
}

// Fixed list of known solutions that fit no encoded family.  C is the
// constant digit (equal to t^2 except for the entries flagged c_nonsquare,
// which fall outside the square-constant setting entirely).
struct SporadicEntry {
    long q = 0;
    BigInt Y;
    BigInt C;
    BigInt M;
    BigInt N;
    long m = 0;
    long n = 0;
    bool c_nonsquare = false;

    void verify() const {
        BigInt v = C + N * ipow(q, static_cast<unsigned long>(n));
        if (M != 0) v += M * ipow(q, static_cast<unsigned long>(m));
        if (Y * Y != v) throw std::runtime_error("sporadic corpus: identity fails to verify");
        if (c_nonsquare == is_perfect_square(C)) {
            throw std::runtime_error("sporadic corpus: c_nonsquare flag inconsistent");
        }
    }
};

inline std::vector<SporadicEntry> load_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("sporadic corpus: cannot open " + path);
    nlohmann::json j;
    in >> j;
    std::vector<SporadicEntry> out;
    for (const auto& e : j) {
        SporadicEntry s;
        s.q = e.at("q").get<long>();
        s.Y = BigInt(e.at("Y").get<std::string>());
        s.C = BigInt(e.at("C").get<std::string>());
        s.M = BigInt(e.at("M").get<std::string>());
        s.N = BigInt(e.at("N").get<std::string>());
        s.m = e.at("m").get<long>();
        s.n = e.at("n").get<long>();
        s.c_nonsquare = e.at("c_nonsquare").get<bool>();
        s.verify();
        out.push_back(std::move(s));
    }
    return out;
}

inline std::string default_corpus_path() {
    if (const char* p = std::getenv("TRISQUARE_CORPUS")) return p;
#ifdef TRISQUARE_CORPUS_PATH
    return TRISQUARE_CORPUS_PATH;
#else
    return "data/sporadic_corpus.json";
#endif
}

inline const std::vector<SporadicEntry>& sporadic_corpus() {
    static const std::vector<SporadicEntry> corpus = load_corpus(default_corpus_path());
    return corpus;
}

namespace detail {

inline std::optional<FamilyParams> match_F1(const ThreeDigitSolution& s) {
    if (s.M == 0 || s.m < 1 || s.n != 2 * s.m) return std::nullopt;
    auto y0 = perfect_square_root(s.N);
    if (!y0 || *y0 < 1) return std::nullopt;
    int delta = s.M > 0 ? 0 : 1;
    int sg = sign_of(delta);
    if (s.M != sg * 2 * s.t * (*y0)) return std::nullopt;
    if (s.Y != ipow(s.q, s.m) * (*y0) + sg * s.t) return std::nullopt;
    FamilyParams p;
    p.q = s.q;
    p.t = s.t;
    p.Y0 = *y0;
    p.m = s.m;
    p.delta = delta;
    return p;
}

inline std::optional<FamilyParams> match_F2(const ThreeDigitSolution& s) {
    if (s.m != 2 || s.n != 3) return std::nullopt;
    if (s.N != s.q - 1 || s.M != s.q - 2 * s.t) return std::nullopt;
    if (s.Y != BigInt(s.q) * s.q - s.t) return std::nullopt;
    FamilyParams p;
    p.q = s.q;
    p.t = s.t;
    return p;
}

// Shared for F3/F4: recover (q0, delta) from Y = q0 q + (-1)^delta t.
inline std::optional<std::pair<BigInt, int>> leading_split(const ThreeDigitSolution& s) {
    BigInt q(s.q);
    BigInt rem = mod_positive(s.Y, q);
    BigInt tmod = mod_positive(s.t, q);
    int delta;
    if (rem == tmod) {
        delta = 0;
    } else if (rem == mod_positive(-s.t, q)) {
        delta = 1;
    } else {
        return std::nullopt;
    }
    int sg = sign_of(delta);
    BigInt q0 = (s.Y - sg * s.t) / q;
    if (q0 * q + sg * s.t != s.Y || q0 < 1) return std::nullopt;
    return std::make_pair(q0, delta);
}

inline std::optional<FamilyParams> match_F3(const ThreeDigitSolution& s) {
    if (s.m != 1 || s.n != 2 || s.M == 0) return std::nullopt;
    auto split = leading_split(s);
    if (!split) return std::nullopt;
    auto [q0, delta] = *split;
    int sg = sign_of(delta);
    if (s.N != q0 * q0 + sg) return std::nullopt;
    if (s.M != sg * (2 * s.t * q0 - s.q)) return std::nullopt;
    FamilyParams p;
    p.q = s.q;
    p.t = s.t;
    p.q0 = q0;
    p.delta = delta;
    return p;
}

inline std::optional<FamilyParams> match_F4(const ThreeDigitSolution& s) {
    if (s.m != 1 || s.n != 2 || s.M == 0) return std::nullopt;
    auto split = leading_split(s);
    if (!split) return std::nullopt;
    auto [q0, delta] = *split;
    int sg = sign_of(delta);
    if (s.N != q0 * q0 + 2 * sg) return std::nullopt;
    if (s.M != sg * 2 * (s.t * q0 - s.q)) return std::nullopt;
    FamilyParams p;
    p.q = s.q;
    p.t = s.t;
    p.q0 = q0;
    p.delta = delta;
    return p;
}

inline std::optional<FamilyParams> match_F5(const ThreeDigitSolution& s) {
    if (s.M != 0 || s.n != 1) return std::nullopt;
    if (s.N != s.q - 2 * s.t || s.Y != s.q - s.t) return std::nullopt;
    FamilyParams p;
    p.q = s.q;
    p.t = s.t;
    return p;
}

inline std::optional<FamilyParams> match_F6(const ThreeDigitSolution& s) {
    if (s.m != 2 || s.n != 6) return std::nullopt;
    if (!s.t.fits_slong_p()) return std::nullopt;
    long r = s.t.get_si();
    if (r < 2 || r % 2 != 0 || s.q != r * r + 1) return std::nullopt;
    FamilyParams p;
    p.r = r;
    try {
        if (!(generate(FamilyTag::F6_R2PLUS1, p) == s)) return std::nullopt;
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
    return p;
}

inline std::optional<FamilyParams> match_F7(const ThreeDigitSolution& s) {
    if (s.m != 1 || s.n != 5 || s.N != 1) return std::nullopt;
    if (!s.t.fits_slong_p()) return std::nullopt;
    long t = s.t.get_si();
    if (t % 3 != 0) return std::nullopt;
    long r = t / 3;
    if (r < 1 || s.q != 64 * r * r + 1) return std::nullopt;
    FamilyParams p;
    p.r = r;
    try {
        if (!(generate(FamilyTag::F7_64R2PLUS1, p) == s)) return std::nullopt;
    } catch (const std::domain_error&) {
        return std::nullopt;
    }
    return p;
}

}  // namespace detail

// All family tags whose structural test matches; used to assert that family
// matches are unique.
inline std::vector<Classification> family_matches(const ThreeDigitSolution& s) {
    std::vector<Classification> out;
    if (auto p = detail::match_F1(s)) out.push_back({FamilyTag::F1_SQUARE_PLUS, *p});
    if (auto p = detail::match_F2(s)) out.push_back({FamilyTag::F2_Q2_MINUS_T, *p});
    if (auto p = detail::match_F3(s)) out.push_back({FamilyTag::F3_KAPPA1, *p});
    if (auto p = detail::match_F4(s)) out.push_back({FamilyTag::F4_KAPPA2, *p});
    if (auto p = detail::match_F5(s)) out.push_back({FamilyTag::F5_M_ZERO, *p});
    if (auto p = detail::match_F6(s)) out.push_back({FamilyTag::F6_R2PLUS1, *p});
    if (auto p = detail::match_F7(s)) out.push_back({FamilyTag::F7_64R2PLUS1, *p});
    return out;
}

// Family tags take precedence over sporadic matches (families are infinite,
// the sporadic list is a finite lookup).
inline Classification classify(const ThreeDigitSolution& s) {
    auto fams = family_matches(s);
    if (!fams.empty()) return fams.front();
    for (const auto& e : sporadic_corpus()) {
        if (e.c_nonsquare) continue;
        if (e.q == s.q && e.Y == s.Y && e.C == s.t * s.t && e.M == s.M && e.N == s.N &&
            e.m == s.m && e.n == s.n) {
            Classification c;
            c.tag = FamilyTag::SPORADIC_KNOWN;
            c.params.q = s.q;
            c.params.t = s.t;
            return c;
        }
    }
    return {FamilyTag::UNKNOWN, {}};
}

}  // namespace trisquare::families
