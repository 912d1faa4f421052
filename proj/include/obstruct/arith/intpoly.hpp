#pragma once

// Dense univariate polynomials over Z and Q with exact arithmetic:
// resultants (subresultant PRS), discriminants, gcd, evaluation.

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "obstruct/errors.hpp"

namespace obstruct {

using Int = mpz_class;
using Rat = mpq_class;

inline Int int_pow(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline Int exact_quot(const Int& a, const Int& b) {
    Int r;
    mpz_divexact(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

// Polynomial over Z, constant term first.  Invariant: no trailing zero
// coefficients; the zero polynomial has an empty coefficient vector.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }
    IntPoly(std::initializer_list<long> coeffs) {
        for (long v : coeffs) c_.emplace_back(v);
        trim();
    }
    static IntPoly constant(Int v) {
        IntPoly f;
        f.c_.push_back(std::move(v));
        f.trim();
        return f;
    }
    static IntPoly x_power(std::size_t k, Int lead = 1) {
        IntPoly f;
        f.c_.assign(k + 1, Int(0));
        f.c_[k] = std::move(lead);
        f.trim();
        return f;
    }

    bool is_zero() const { return c_.empty(); }
    long degree() const { return static_cast<long>(c_.size()) - 1; }  // zero poly: -1
    const Int& operator[](std::size_t i) const { return c_[i]; }
    const std::vector<Int>& coeffs() const { return c_; }
    const Int& leading() const {
        assert(!c_.empty());
        return c_.back();
    }

    bool operator==(const IntPoly& o) const { return c_ == o.c_; }

    IntPoly operator-() const {
        IntPoly r(*this);
        for (auto& v : r.c_) v = -v;
        return r;
    }

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
        std::vector<Int> r(std::max(a.c_.size(), b.c_.size()), Int(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return IntPoly(std::move(r));
    }
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        if (a.is_zero() || b.is_zero()) return IntPoly();
        std::vector<Int> r(a.c_.size() + b.c_.size() - 1, Int(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return IntPoly(std::move(r));
    }
    friend IntPoly operator*(const Int& s, const IntPoly& a) {
        IntPoly r(a);
        for (auto& v : r.c_) v *= s;
        r.trim();
        return r;
    }

    Int eval(const Int& x) const {
        Int r = 0;
        for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }
    Rat eval(const Rat& x) const {
        Rat r = 0;
        for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }
    // b^deg * f(a/b), the homogenized value at (a : b)
    Int eval_homog(const Int& a, const Int& b) const {
        if (is_zero()) return Int(0);
        Int r = 0, bp = 1;
        for (std::size_t i = c_.size(); i-- > 0;) {
            r = r * a + c_[i] * bp;
            if (i > 0) bp *= b;
        }
        return r;
    }

    IntPoly derivative() const {
        if (c_.size() <= 1) return IntPoly();
        std::vector<Int> r(c_.size() - 1);
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = Int(static_cast<long>(i)) * c_[i];
        return IntPoly(std::move(r));
    }

    // x^deg f(1/x)
    IntPoly reversed() const {
        std::vector<Int> r(c_.rbegin(), c_.rend());
        return IntPoly(std::move(r));
    }

    // f(x + a) by Horner
    IntPoly shift(const Int& a) const {
        IntPoly xa(std::vector<Int>{a, Int(1)});
        IntPoly acc;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * xa + IntPoly::constant(c_[i]);
        return acc;
    }

    Int content() const {
        Int g = 0;
        for (const auto& v : c_) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
            if (g == 1) break;
        }
        return g;
    }
    IntPoly primitive_part() const {
        if (is_zero()) return *this;
        Int g = content();
        if (leading() < 0) g = -g;
        std::vector<Int> r(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) r[i] = exact_quot(c_[i], g);
        return IntPoly(std::move(r));
    }

    std::string str() const;

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Int> c_;
};

inline std::string IntPoly::str() const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        if (!s.empty()) s += (c_[i] > 0 ? " + " : " - ");
        else if (c_[i] < 0) s += "-";
        Int a = abs(c_[i]);
        if (a != 1 || i == 0) s += a.get_str();
        if (i > 0) {
            if (a != 1) s += "*";
            s += "x";
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

// Pseudo remainder: R with lc(B)^(degA-degB+1) * A = Q*B + R, deg R < deg B.
inline IntPoly pseudo_rem(const IntPoly& A, const IntPoly& B) {
    assert(!B.is_zero());
    IntPoly R = A;
    const Int& d = B.leading();
    long e = A.degree() - B.degree() + 1;
    while (!R.is_zero() && R.degree() >= B.degree()) {
        IntPoly S = IntPoly::x_power(static_cast<std::size_t>(R.degree() - B.degree()), R.leading()) * B;
        R = d * R - S;
        --e;
    }
    if (e > 0) R = int_pow(d, static_cast<unsigned long>(e)) * R;
    return R;
}

// Quotient of exact division (asserts divisibility over Z)
inline IntPoly exact_div(const IntPoly& a, const IntPoly& b) {
    assert(!b.is_zero());
    if (a.is_zero()) return IntPoly();
    long da = a.degree(), db = b.degree();
    assert(da >= db);
    std::vector<Int> rr(a.coeffs());
    std::vector<Int> qq(da - db + 1, Int(0));
    for (long k = da; k >= db; --k) {
        if (rr[k] == 0) continue;
        Int t = exact_quot(rr[k], b.leading());
        qq[k - db] = t;
        for (long i = 0; i <= db; ++i) rr[k - db + i] -= t * b[i];
    }
    for (const auto& v : rr) {
        (void)v;
        assert(v == 0);
    }
    return IntPoly(std::move(qq));
}

// Resultant via the subresultant PRS (Cohen, A Course in Computational
// Algebraic Number Theory, Algorithm 3.3.7).
inline Int resultant(const IntPoly& A0, const IntPoly& B0) {
    if (A0.is_zero() || B0.is_zero()) return Int(0);
    if (A0.degree() == 0) return int_pow(A0.leading(), static_cast<unsigned long>(B0.degree()));
    if (B0.degree() == 0) return int_pow(B0.leading(), static_cast<unsigned long>(A0.degree()));
    Int a_cont = A0.content(), b_cont = B0.content();
    IntPoly A = A0, B = B0;
    {
        std::vector<Int> ac(A.coeffs()), bc(B.coeffs());
        for (auto& v : ac) v = exact_quot(v, a_cont);
        for (auto& v : bc) v = exact_quot(v, b_cont);
        A = IntPoly(std::move(ac));
        B = IntPoly(std::move(bc));
    }
    Int g = 1, h = 1;
    int s = 1;
    Int t = int_pow(a_cont, static_cast<unsigned long>(B.degree())) *
            int_pow(b_cont, static_cast<unsigned long>(A.degree()));
    if (A.degree() < B.degree()) {
        if ((A.degree() % 2 == 1) && (B.degree() % 2 == 1)) s = -s;
        std::swap(A, B);
    }
    while (B.degree() > 0) {
        long delta = A.degree() - B.degree();
        if ((A.degree() % 2 == 1) && (B.degree() % 2 == 1)) s = -s;
        IntPoly R = pseudo_rem(A, B);
        A = B;
        Int divisor = g * int_pow(h, static_cast<unsigned long>(delta));
        if (R.is_zero()) {
            B = IntPoly();
        } else {
            std::vector<Int> rc(R.coeffs());
            for (auto& v : rc) v = exact_quot(v, divisor);
            B = IntPoly(std::move(rc));
        }
        g = A.leading();
        if (delta > 0) {
            Int gp = int_pow(g, static_cast<unsigned long>(delta));
            h = (delta == 1) ? gp : exact_quot(gp, int_pow(h, static_cast<unsigned long>(delta - 1)));
        }
        if (B.is_zero()) return Int(0);
    }
    long dA = A.degree();
    Int lB = B.leading();
    Int hfin = (dA == 0) ? Int(1)
                         : exact_quot(int_pow(lB, static_cast<unsigned long>(dA)),
                                      int_pow(h, static_cast<unsigned long>(dA - 1)));
    return Int(s) * t * hfin;
}

// disc(f) = (-1)^{n(n-1)/2} res(f, f') / lc(f)
inline Int poly_discriminant(const IntPoly& f) {
    assert(f.degree() >= 1);
    Int r = resultant(f, f.derivative());
    long n = f.degree();
    Int d = exact_quot(r, f.leading());
    if (((n * (n - 1)) / 2) % 2 == 1) d = -d;
    return d;
}

// gcd over Z (primitive, positive leading coefficient) via primitive PRS
inline IntPoly poly_gcd(IntPoly a, IntPoly b) {
    if (a.is_zero()) return b.is_zero() ? b : b.primitive_part();
    if (b.is_zero()) return a.primitive_part();
    a = a.primitive_part();
    b = b.primitive_part();
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        IntPoly r = pseudo_rem(a, b);
        a = b;
        b = r.is_zero() ? IntPoly() : r.primitive_part();
    }
    return a.primitive_part();
}

inline bool is_squarefree(const IntPoly& f) {
    if (f.degree() <= 0) return true;
    return poly_gcd(f, f.derivative()).degree() == 0;
}

// --- polynomials over Q (used for etale element representatives) ---

class RatPoly {
public:
    RatPoly() = default;
    explicit RatPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }
    explicit RatPoly(const IntPoly& f) {
        for (const auto& v : f.coeffs()) c_.emplace_back(v);
        trim();
    }
    static RatPoly constant(Rat v) {
        RatPoly f;
        f.c_.push_back(std::move(v));
        f.trim();
        return f;
    }

    bool is_zero() const { return c_.empty(); }
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    const Rat& operator[](std::size_t i) const { return c_[i]; }
    const std::vector<Rat>& coeffs() const { return c_; }
    const Rat& leading() const {
        assert(!c_.empty());
        return c_.back();
    }
    bool operator==(const RatPoly& o) const { return c_ == o.c_; }

    RatPoly operator-() const {
        RatPoly r(*this);
        for (auto& v : r.c_) v = -v;
        return r;
    }
    friend RatPoly operator+(const RatPoly& a, const RatPoly& b) {
        std::vector<Rat> r(std::max(a.c_.size(), b.c_.size()), Rat(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return RatPoly(std::move(r));
    }
    friend RatPoly operator-(const RatPoly& a, const RatPoly& b) { return a + (-b); }
    friend RatPoly operator*(const RatPoly& a, const RatPoly& b) {
        if (a.is_zero() || b.is_zero()) return RatPoly();
        std::vector<Rat> r(a.c_.size() + b.c_.size() - 1, Rat(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        return RatPoly(std::move(r));
    }
    friend RatPoly operator*(const Rat& s, const RatPoly& a) {
        RatPoly r(a);
        for (auto& v : r.c_) v *= s;
        r.trim();
        return r;
    }

    Rat eval(const Rat& x) const {
        Rat r = 0;
        for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
        return r;
    }

    // clear denominators: this = g/d with g a primitive IntPoly
    std::pair<IntPoly, Int> to_integral() const {
        Int d = 1;
        for (const auto& v : c_) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), v.get_den().get_mpz_t());
        std::vector<Int> g(c_.size());
        for (std::size_t i = 0; i < c_.size(); ++i) {
            Rat t = c_[i] * d;
            t.canonicalize();
            assert(t.get_den() == 1);
            g[i] = t.get_num();
        }
        return {IntPoly(std::move(g)), d};
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rat> c_;
};

inline void divrem(const RatPoly& a, const RatPoly& b, RatPoly& q, RatPoly& r) {
    assert(!b.is_zero());
    long db = b.degree();
    long da = a.degree();
    if (da < db) {
        q = RatPoly();
        r = a;
        return;
    }
    std::vector<Rat> rr(a.coeffs());
    std::vector<Rat> qq(da - db + 1, Rat(0));
    for (long k = da; k >= db; --k) {
        if (rr[k] == 0) continue;
        Rat t = rr[k] / b.leading();
        qq[k - db] = t;
        for (long i = 0; i <= db; ++i) rr[k - db + i] -= t * b[i];
    }
    rr.resize(db);
    q = RatPoly(std::move(qq));
    r = RatPoly(std::move(rr));
}

inline RatPoly poly_mod(const RatPoly& a, const RatPoly& b) {
    RatPoly q, r;
    divrem(a, b, q, r);
    return r;
}

// extended gcd over Q[x]: returns monic g = u*a + v*b
inline RatPoly poly_xgcd(const RatPoly& a, const RatPoly& b, RatPoly& u, RatPoly& v) {
    RatPoly r0 = a, r1 = b;
    RatPoly u0 = RatPoly::constant(1), u1;
    RatPoly v0, v1 = RatPoly::constant(1);
    while (!r1.is_zero()) {
        RatPoly q, r;
        divrem(r0, r1, q, r);
        RatPoly u2 = u0 - q * u1, v2 = v0 - q * v1;
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = u2;
        v0 = v1;
        v1 = v2;
    }
    if (!r0.is_zero()) {
        Rat inv = 1 / Rat(r0.leading());
        r0 = inv * r0;
        u0 = inv * u0;
        v0 = inv * v0;
    }
    u = u0;
    v = v0;
    return r0;
}

// Resultant of f (integral) with a rational polynomial g: Res(f, g) in Q,
// computed by clearing denominators.  Res(f, g/d) = Res(f, g)/d^{deg f}.
inline Rat resultant_q(const IntPoly& f, const RatPoly& g) {
    auto [gi, d] = g.to_integral();
    Int r = resultant(f, gi);
    Rat out(r);
    out /= Rat(int_pow(d, static_cast<unsigned long>(f.degree())));
    out.canonicalize();
    return out;
}

}  // namespace obstruct
