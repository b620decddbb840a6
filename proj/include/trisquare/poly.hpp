#pragma once

// Dense univariate polynomials over the rationals, little-endian coefficient
// order.  Degrees in this project stay below ~60, so naive arithmetic is fine.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "trisquare/exact.hpp"

namespace trisquare {

class RationalPoly {
public:
    RationalPoly() = default;

    explicit RationalPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    static RationalPoly constant(const Rational& a) { return RationalPoly({a}); }

    static RationalPoly monomial(const Rational& a, std::size_t deg) {
        std::vector<Rational> c(deg + 1, Rational(0));
        c[deg] = a;
        return RationalPoly(std::move(c));
    }

    bool is_zero() const { return coeffs_.empty(); }

    // -1 for the zero polynomial.
    long degree() const { return static_cast<long>(coeffs_.size()) - 1; }

    const Rational& coeff(std::size_t i) const {
        static const Rational zero(0);
        return i < coeffs_.size() ? coeffs_[i] : zero;
    }

    const std::vector<Rational>& coeffs() const { return coeffs_; }

    Rational eval(const Rational& x) const {
        Rational acc(0);
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            acc = acc * x + coeffs_[i];
        }
        return acc;
    }

    bool is_monomial() const {
        if (coeffs_.empty()) return false;
        for (std::size_t i = 0; i + 1 < coeffs_.size(); ++i) {
            if (coeffs_[i] != 0) return false;
        }
        return true;
    }

    RationalPoly& operator+=(const RationalPoly& o) {
        if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        trim();
        return *this;
    }

    RationalPoly& operator-=(const RationalPoly& o) {
        if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size(), Rational(0));
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        trim();
        return *this;
    }

    friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
    friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }

    friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
        if (a.is_zero() || b.is_zero()) return RationalPoly();
        std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                c[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return RationalPoly(std::move(c));
    }

    friend RationalPoly operator*(const Rational& s, const RationalPoly& p) {
        std::vector<Rational> c = p.coeffs_;
        for (auto& x : c) x *= s;
        return RationalPoly(std::move(c));
    }

    friend bool operator==(const RationalPoly& a, const RationalPoly& b) {
        return a.coeffs_ == b.coeffs_;
    }

    std::string to_string() const {
        if (coeffs_.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            if (i) s += " + ";
            s += "(" + coeffs_[i].get_str() + ")*x^" + std::to_string(i);
        }
        return s;
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<Rational> coeffs_;
};

}  // namespace trisquare
