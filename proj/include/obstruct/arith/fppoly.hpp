#pragma once

// Arithmetic over F_p (p < 2^62) and F_q = F_p[u]/(phi), and univariate
// polynomial factorization over both (squarefree split, distinct-degree,
// Cantor-Zassenhaus equal-degree).  Randomized splits use a fixed seed so
// every run is reproducible.

#include <cassert>
#include <cstdint>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "obstruct/arith/intpoly.hpp"

namespace obstruct {

struct Fp {
    std::uint64_t p;
    explicit Fp(std::uint64_t p_) : p(p_) { assert(p >= 2 && p < (1ULL << 62)); }
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        if (s >= p || s < a) s -= p;
        return s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p - b; }
    std::uint64_t neg(std::uint64_t a) const { return a ? p - a : 0; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
    }
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t r = 1 % p;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    std::uint64_t inv(std::uint64_t a) const {
        assert(a % p != 0);
        // extended Euclid
        long long t = 0, newt = 1;
        long long r = static_cast<long long>(p), newr = static_cast<long long>(a % p);
        while (newr != 0) {
            long long q = r / newr;
            long long tmp = t - q * newt;
            t = newt;
            newt = tmp;
            tmp = r - q * newr;
            r = newr;
            newr = tmp;
        }
        assert(r == 1);
        if (t < 0) t += static_cast<long long>(p);
        return static_cast<std::uint64_t>(t);
    }
    std::uint64_t from_mpz(const Int& v) const {
        Int m = v % Int(p);
        if (m < 0) m += Int(p);
        return m.get_ui();
    }
};

// dense poly over F_p, constant term first, no trailing zeros
class FpPoly {
public:
    FpPoly() = default;
    explicit FpPoly(std::vector<std::uint64_t> c) : c_(std::move(c)) { trim(); }
    static FpPoly constant(std::uint64_t v) { return FpPoly(std::vector<std::uint64_t>{v}); }
    static FpPoly x_power(std::size_t k, std::uint64_t lead = 1) {
        std::vector<std::uint64_t> c(k + 1, 0);
        c[k] = lead;
        return FpPoly(std::move(c));
    }
    static FpPoly from_intpoly(const IntPoly& f, const Fp& F) {
        std::vector<std::uint64_t> c(f.coeffs().size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = F.from_mpz(f[i]);
        return FpPoly(std::move(c));
    }

    bool is_zero() const { return c_.empty(); }
    long degree() const { return static_cast<long>(c_.size()) - 1; }
    std::uint64_t operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
    const std::vector<std::uint64_t>& coeffs() const { return c_; }
    std::uint64_t leading() const {
        assert(!c_.empty());
        return c_.back();
    }
    bool operator==(const FpPoly& o) const { return c_ == o.c_; }

    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<std::uint64_t> c_;
};

inline FpPoly fp_add(const FpPoly& a, const FpPoly& b, const Fp& F) {
    std::vector<std::uint64_t> r(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = F.add(r[i], b.c_[i]);
    return FpPoly(std::move(r));
}
inline FpPoly fp_sub(const FpPoly& a, const FpPoly& b, const Fp& F) {
    std::vector<std::uint64_t> r(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] = a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] = F.sub(r[i], b.c_[i]);
    return FpPoly(std::move(r));
}
inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b, const Fp& F) {
    if (a.is_zero() || b.is_zero()) return FpPoly();
    std::vector<std::uint64_t> r(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (!a.c_[i]) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            r[i + j] = F.add(r[i + j], F.mul(a.c_[i], b.c_[j]));
    }
    return FpPoly(std::move(r));
}
inline FpPoly fp_scal(std::uint64_t s, const FpPoly& a, const Fp& F) {
    std::vector<std::uint64_t> r(a.c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = F.mul(s, a.c_[i]);
    return FpPoly(std::move(r));
}
inline void fp_divrem(const FpPoly& a, const FpPoly& b, const Fp& F, FpPoly& q, FpPoly& r) {
    assert(!b.is_zero());
    long db = b.degree(), da = a.degree();
    if (da < db) {
        q = FpPoly();
        r = a;
        return;
    }
    std::vector<std::uint64_t> rr(a.c_);
    std::vector<std::uint64_t> qq(da - db + 1, 0);
    std::uint64_t ilb = F.inv(b.leading());
    for (long k = da; k >= db; --k) {
        if (!rr[k]) continue;
        std::uint64_t t = F.mul(rr[k], ilb);
        qq[k - db] = t;
        for (long i = 0; i <= db; ++i) rr[k - db + i] = F.sub(rr[k - db + i], F.mul(t, b[i]));
    }
    rr.resize(db);
    q = FpPoly(std::move(qq));
    r = FpPoly(std::move(rr));
}
inline FpPoly fp_mod(const FpPoly& a, const FpPoly& b, const Fp& F) {
    FpPoly q, r;
    fp_divrem(a, b, F, q, r);
    return r;
}
inline FpPoly fp_gcd(FpPoly a, FpPoly b, const Fp& F) {
    while (!b.is_zero()) {
        FpPoly r = fp_mod(a, b, F);
        a = b;
        b = r;
    }
    if (!a.is_zero() && a.leading() != 1) a = fp_scal(F.inv(a.leading()), a, F);
    return a;
}
inline FpPoly fp_monic(const FpPoly& a, const Fp& F) {
    if (a.is_zero() || a.leading() == 1) return a;
    return fp_scal(F.inv(a.leading()), a, F);
}
inline FpPoly fp_powmod(FpPoly base, Int e, const FpPoly& mod, const Fp& F) {
    FpPoly r = FpPoly::constant(1);
    base = fp_mod(base, mod, F);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = fp_mod(fp_mul(r, base, F), mod, F);
        base = fp_mod(fp_mul(base, base, F), mod, F);
        e >>= 1;
    }
    return r;
}
inline FpPoly fp_derivative(const FpPoly& a, const Fp& F) {
    if (a.c_.size() <= 1) return FpPoly();
    std::vector<std::uint64_t> r(a.c_.size() - 1);
    for (std::size_t i = 1; i < a.c_.size(); ++i)
        r[i - 1] = F.mul(static_cast<std::uint64_t>(i % F.p), a.c_[i]);
    return FpPoly(std::move(r));
}
inline std::uint64_t fp_eval(const FpPoly& a, std::uint64_t x, const Fp& F) {
    std::uint64_t r = 0;
    for (std::size_t i = a.c_.size(); i-- > 0;) r = F.add(F.mul(r, x), a.c_[i]);
    return r;
}

// irreducibility over F_p: x^{p^n} == x mod f and gcd(x^{p^{n/l}} - x, f) = 1
inline bool fp_is_irreducible(const FpPoly& f, const Fp& F) {
    long n = f.degree();
    if (n <= 0) return false;
    if (n == 1) return true;
    Int p(static_cast<unsigned long>(F.p));
    FpPoly x = FpPoly::x_power(1);
    Int pn;
    mpz_pow_ui(pn.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(n));
    FpPoly xp = fp_powmod(x, pn, f, F);
    if (!(fp_sub(xp, x, F) == FpPoly())) return false;
    // prime divisors of n
    long m = n;
    for (long l = 2; l * l <= m; ++l) {
        if (m % l) continue;
        while (m % l == 0) m /= l;
        Int pk;
        mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(n / l));
        FpPoly g = fp_gcd(fp_sub(fp_powmod(x, pk, f, F), x, F), f, F);
        if (g.degree() != 0) return false;
    }
    if (m > 1) {
        Int pk;
        mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(n / m));
        FpPoly g = fp_gcd(fp_sub(fp_powmod(x, pk, f, F), x, F), f, F);
        if (g.degree() != 0) return false;
    }
    return true;
}

// deterministic scan for a monic irreducible of given degree
inline FpPoly fp_find_irreducible(long degree, const Fp& F) {
    assert(degree >= 1);
    if (degree == 1) return FpPoly(std::vector<std::uint64_t>{0, 1});
    for (std::uint64_t counter = 0;; ++counter) {
        std::vector<std::uint64_t> c(degree + 1, 0);
        c[degree] = 1;
        std::uint64_t t = counter;
        for (long i = 0; i < degree && (t || i == 0); ++i) {
            c[i] = t % F.p;
            t /= F.p;
        }
        c[0] = c[0] ? c[0] : 1;  // constant term nonzero avoids the root 0
        FpPoly f(std::move(c));
        if (f.degree() == degree && fp_is_irreducible(f, F)) return f;
    }
}

// ---- squarefree / distinct-degree / equal-degree factorization over F_p ----

// squarefree decomposition (Yun): returns list of (g_i, i) with f = prod g_i^i
inline std::vector<std::pair<FpPoly, unsigned>> fp_squarefree_decomp(FpPoly f, const Fp& F) {
    std::vector<std::pair<FpPoly, unsigned>> out;
    f = fp_monic(f, F);
    unsigned e_mult = 1;
    while (f.degree() > 0) {
        FpPoly d = fp_derivative(f, F);
        if (d.is_zero()) {
            // f = g(x^p): take p-th root and scale multiplicities
            std::vector<std::uint64_t> g((f.degree() / F.p) + 1, 0);
            for (std::size_t i = 0; i < g.size(); ++i) {
                std::uint64_t c = f[i * F.p];
                // coefficients are in F_p, so the p-th root is c itself
                g[i] = c;
            }
            f = FpPoly(std::move(g));
            e_mult *= static_cast<unsigned>(F.p);
            continue;
        }
        FpPoly a = fp_gcd(f, d, F);
        FpPoly b = FpPoly(), c = FpPoly();
        fp_divrem(f, a, F, b, c);  // b = f/a
        unsigned i = 1;
        while (b.degree() > 0) {
            FpPoly t = fp_gcd(b, a, F);
            FpPoly gi, tmp;
            fp_divrem(b, t, F, gi, tmp);
            if (gi.degree() > 0) out.emplace_back(fp_monic(gi, F), i * e_mult);
            b = t;
            FpPoly q2;
            fp_divrem(a, t, F, q2, tmp);
            a = q2;
            ++i;
        }
        if (a.degree() == 0) break;
        // a is the p-th-power part; recurse on it
        f = a;
        // restart: derivative of a may again vanish
    }
    return out;
}

// distinct-degree: f squarefree monic -> list of (product-of-deg-d-factors, d)
inline std::vector<std::pair<FpPoly, long>> fp_distinct_degree(FpPoly f, const Fp& F) {
    std::vector<std::pair<FpPoly, long>> out;
    FpPoly x = FpPoly::x_power(1);
    FpPoly h = x;
    long d = 0;
    while (f.degree() >= 2 * (d + 1)) {
        ++d;
        h = fp_powmod(h, Int(static_cast<unsigned long>(F.p)), f, F);
        FpPoly g = fp_gcd(fp_sub(h, x, F), f, F);
        if (g.degree() > 0) {
            out.emplace_back(g, d);
            FpPoly q, r;
            fp_divrem(f, g, F, q, r);
            f = fp_monic(q, F);
            h = fp_mod(h, f, F);
        }
    }
    if (f.degree() > 0) out.emplace_back(f, f.degree());
    return out;
}

// equal-degree (Cantor-Zassenhaus): f = product of irreducibles of degree d
inline void fp_equal_degree(const FpPoly& f, long d, const Fp& F, std::vector<FpPoly>& out,
                            std::mt19937_64& rng) {
    if (f.degree() == d) {
        out.push_back(fp_monic(f, F));
        return;
    }
    FpPoly g;
    while (true) {
        std::vector<std::uint64_t> a(f.degree(), 0);
        for (auto& v : a) v = rng() % F.p;
        FpPoly A(std::move(a));
        if (A.is_zero()) continue;
        if (F.p == 2) {
            // trace map over F_{2^d}
            FpPoly t = A, cur = A;
            for (long i = 1; i < d; ++i) {
                cur = fp_mod(fp_mul(cur, cur, F), f, F);
                t = fp_add(t, cur, F);
            }
            g = fp_gcd(t, f, F);
        } else {
            Int e = int_pow(Int(static_cast<unsigned long>(F.p)), static_cast<unsigned long>(d));
            e = (e - 1) / 2;
            FpPoly B = fp_powmod(A, e, f, F);
            g = fp_gcd(fp_sub(B, FpPoly::constant(1), F), f, F);
        }
        if (g.degree() > 0 && g.degree() < f.degree()) break;
    }
    FpPoly q, r;
    fp_divrem(f, g, F, q, r);
    fp_equal_degree(g, d, F, out, rng);
    fp_equal_degree(fp_monic(q, F), d, F, out, rng);
}

// full factorization over F_p: returns list of (irreducible monic, multiplicity)
inline std::vector<std::pair<FpPoly, unsigned>> fp_factor(const FpPoly& f0, const Fp& F) {
    std::vector<std::pair<FpPoly, unsigned>> out;
    std::mt19937_64 rng(0x5eedf00dULL);
    for (auto& [g, mult] : fp_squarefree_decomp(f0, F)) {
        for (auto& [h, d] : fp_distinct_degree(g, F)) {
            std::vector<FpPoly> irr;
            fp_equal_degree(h, d, F, irr, rng);
            for (auto& u : irr) out.emplace_back(u, mult);
        }
    }
    return out;
}

// roots of f in F_p
inline std::vector<std::uint64_t> fp_roots(const FpPoly& f, const Fp& F) {
    std::vector<std::uint64_t> out;
    for (auto& [g, mult] : fp_factor(f, F))
        if (g.degree() == 1) out.push_back(F.sub(0, g[0]));  // monic x + c -> root -c
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// =====================  F_q = F_p[u]/(phi)  =====================

struct FqCtx {
    Fp F;
    FpPoly phi;  // monic irreducible
    long f;      // degree

    FqCtx(const Fp& F_, FpPoly phi_) : F(F_), phi(std::move(phi_)), f(phi.degree()) {
        assert(f >= 1);
    }
    Int q() const { return int_pow(Int(static_cast<unsigned long>(F.p)), static_cast<unsigned long>(f)); }

    using Elt = FpPoly;  // deg < f
    Elt zero() const { return FpPoly(); }
    Elt one() const { return FpPoly::constant(1); }
    Elt gen() const {
        if (f == 1) return FpPoly::constant(F.sub(0, phi[0]));
        return FpPoly::x_power(1);
    }
    bool is_zero(const Elt& a) const { return a.is_zero(); }
    Elt add(const Elt& a, const Elt& b) const { return fp_add(a, b, F); }
    Elt sub(const Elt& a, const Elt& b) const { return fp_sub(a, b, F); }
    Elt neg(const Elt& a) const { return fp_sub(FpPoly(), a, F); }
    Elt mul(const Elt& a, const Elt& b) const { return fp_mod(fp_mul(a, b, F), phi, F); }
    Elt inv(const Elt& a) const {
        assert(!a.is_zero());
        // extended Euclid in F_p[x]
        FpPoly r0 = phi, r1 = a, s0 = FpPoly(), s1 = FpPoly::constant(1);
        while (!r1.is_zero()) {
            FpPoly q, r;
            fp_divrem(r0, r1, F, q, r);
            FpPoly s2 = fp_sub(s0, fp_mod(fp_mul(q, s1, F), phi, F), F);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
        }
        assert(r0.degree() == 0);
        return fp_scal(F.inv(r0.leading()), s0, F);
    }
    Elt pow(Elt a, Int e) const {
        Elt r = one();
        if (e < 0) {
            a = inv(a);
            e = -e;
        }
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    bool is_square(const Elt& a) const {
        if (a.is_zero()) return true;
        if (F.p == 2) return true;  // Frobenius is bijective
        Elt t = pow(a, (q() - 1) / 2);
        return t == one();
    }
    // sqrt in characteristic 2 (unique): a^{q/2} = a^{2^{f-1}}
    Elt sqrt_char2(const Elt& a) const {
        assert(F.p == 2);
        Elt r = a;
        for (long i = 0; i < f - 1; ++i) r = mul(r, r);
        return r;
    }
    // sqrt for odd q (Tonelli-Shanks); precondition: a is a square
    Elt sqrt_odd(const Elt& a) const {
        assert(F.p != 2);
        if (a.is_zero()) return a;
        Int Q = q() - 1;
        unsigned long S = mpz_scan1(Q.get_mpz_t(), 0);
        mpz_tdiv_q_2exp(Q.get_mpz_t(), Q.get_mpz_t(), S);
        // find a non-square z
        std::mt19937_64 rng(0xfeedbeefULL);
        Elt z;
        do {
            std::vector<std::uint64_t> c(f, 0);
            for (auto& v : c) v = rng() % F.p;
            z = FpPoly(std::move(c));
        } while (z.is_zero() || is_square(z));
        Elt M_c = pow(z, Q);
        Elt t = pow(a, Q);
        Elt r = pow(a, (Q + 1) / 2);
        unsigned long M = S;
        while (!(t == one())) {
            Elt tt = t;
            unsigned long i = 0;
            while (!(tt == one())) {
                tt = mul(tt, tt);
                ++i;
            }
            Elt b = M_c;
            for (unsigned long j = 0; j + i + 1 < M; ++j) b = mul(b, b);
            M = i;
            M_c = mul(b, b);
            t = mul(t, M_c);
            r = mul(r, b);
        }
        return r;
    }
    // solve y^2 + y = a over F_q with q = 2^f (Artin-Schreier); returns
    // false when no solution (absolute trace 1)
    bool solve_artin_schreier(const Elt& a, Elt& y) const {
        assert(F.p == 2);
        // linear map y -> y^2 + y on the F_2-space F_q; solve by elimination
        std::vector<std::vector<int>> M(f, std::vector<int>(f + 1, 0));
        for (long j = 0; j < f; ++j) {
            Elt ej = f == 1 ? FpPoly::constant(1) : fp_mod(FpPoly::x_power(j), phi, F);
            Elt im = add(mul(ej, ej), ej);
            for (long i = 0; i < f; ++i) M[i][j] = static_cast<int>(im[i] & 1);
        }
        for (long i = 0; i < f; ++i) M[i][f] = static_cast<int>(a[i] & 1);
        // Gaussian elimination over F_2
        std::vector<long> pivot_col(f, -1);
        long r = 0;
        for (long c = 0; c < f && r < f; ++c) {
            long sel = -1;
            for (long i = r; i < f; ++i)
                if (M[i][c]) {
                    sel = i;
                    break;
                }
            if (sel < 0) continue;
            std::swap(M[sel], M[r]);
            for (long i = 0; i < f; ++i)
                if (i != r && M[i][c])
                    for (long j = c; j <= f; ++j) M[i][j] ^= M[r][j];
            pivot_col[r] = c;
            ++r;
        }
        for (long i = r; i < f; ++i)
            if (M[i][f]) return false;
        std::vector<std::uint64_t> yc(f, 0);
        for (long i = 0; i < r; ++i)
            if (M[i][f]) yc[pivot_col[i]] = 1;
        y = FpPoly(std::move(yc));
        return true;
    }
};

// ---------------- polynomials over F_q ----------------

struct FqPoly {
    std::vector<FqCtx::Elt> c;  // constant first, no trailing zeros

    bool is_zero() const { return c.empty(); }
    long degree() const { return static_cast<long>(c.size()) - 1; }
    const FqCtx::Elt& operator[](std::size_t i) const { return c[i]; }
    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }
    static FqPoly constant(FqCtx::Elt e) {
        FqPoly r;
        r.c.push_back(std::move(e));
        r.trim();
        return r;
    }
    static FqPoly x_power(std::size_t k, FqCtx::Elt lead) {
        FqPoly r;
        r.c.assign(k + 1, FpPoly());
        r.c[k] = std::move(lead);
        r.trim();
        return r;
    }
    bool operator==(const FqPoly& o) const {
        if (c.size() != o.c.size()) return false;
        for (std::size_t i = 0; i < c.size(); ++i)
            if (!(c[i] == o.c[i])) return false;
        return true;
    }
};

inline FqPoly fq_add(const FqPoly& a, const FqPoly& b, const FqCtx& K) {
    FqPoly r;
    r.c.assign(std::max(a.c.size(), b.c.size()), K.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = K.add(r.c[i], b.c[i]);
    r.trim();
    return r;
}
inline FqPoly fq_sub(const FqPoly& a, const FqPoly& b, const FqCtx& K) {
    FqPoly r;
    r.c.assign(std::max(a.c.size(), b.c.size()), K.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = K.sub(r.c[i], b.c[i]);
    r.trim();
    return r;
}
inline FqPoly fq_mul(const FqPoly& a, const FqPoly& b, const FqCtx& K) {
    if (a.is_zero() || b.is_zero()) return FqPoly();
    FqPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, K.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (K.is_zero(a.c[i])) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = K.add(r.c[i + j], K.mul(a.c[i], b.c[j]));
    }
    r.trim();
    return r;
}
inline FqPoly fq_scal(const FqCtx::Elt& s, const FqPoly& a, const FqCtx& K) {
    FqPoly r = a;
    for (auto& v : r.c) v = K.mul(s, v);
    r.trim();
    return r;
}
inline void fq_divrem(const FqPoly& a, const FqPoly& b, const FqCtx& K, FqPoly& q, FqPoly& r) {
    assert(!b.is_zero());
    long db = b.degree(), da = a.degree();
    if (da < db) {
        q = FqPoly();
        r = a;
        return;
    }
    FqPoly rr = a;
    FqPoly qq;
    qq.c.assign(da - db + 1, K.zero());
    FqCtx::Elt ilb = K.inv(b.c.back());
    for (long k = da; k >= db; --k) {
        if (static_cast<std::size_t>(k) >= rr.c.size() || K.is_zero(rr.c[k])) continue;
        FqCtx::Elt t = K.mul(rr.c[k], ilb);
        qq.c[k - db] = t;
        for (long i = 0; i <= db; ++i) rr.c[k - db + i] = K.sub(rr.c[k - db + i], K.mul(t, b.c[i]));
    }
    rr.c.resize(db);
    rr.trim();
    qq.trim();
    q = qq;
    r = rr;
}
inline FqPoly fq_mod(const FqPoly& a, const FqPoly& b, const FqCtx& K) {
    FqPoly q, r;
    fq_divrem(a, b, K, q, r);
    return r;
}
inline FqPoly fq_gcd(FqPoly a, FqPoly b, const FqCtx& K) {
    while (!b.is_zero()) {
        FqPoly r = fq_mod(a, b, K);
        a = b;
        b = r;
    }
    if (!a.is_zero()) a = fq_scal(K.inv(a.c.back()), a, K);
    return a;
}
inline FqPoly fq_monic(const FqPoly& a, const FqCtx& K) {
    if (a.is_zero() || a.c.back() == K.one()) return a;
    return fq_scal(K.inv(a.c.back()), a, K);
}
inline FqPoly fq_powmod(FqPoly base, Int e, const FqPoly& mod, const FqCtx& K) {
    FqPoly r = FqPoly::constant(K.one());
    base = fq_mod(base, mod, K);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = fq_mod(fq_mul(r, base, K), mod, K);
        base = fq_mod(fq_mul(base, base, K), mod, K);
        e >>= 1;
    }
    return r;
}
inline FqPoly fq_derivative(const FqPoly& a, const FqCtx& K) {
    if (a.c.size() <= 1) return FqPoly();
    FqPoly r;
    r.c.assign(a.c.size() - 1, K.zero());
    for (std::size_t i = 1; i < a.c.size(); ++i)
        r.c[i - 1] = fp_scal(static_cast<std::uint64_t>(i % K.F.p), a.c[i], K.F);
    r.trim();
    return r;
}
inline FqCtx::Elt fq_eval(const FqPoly& a, const FqCtx::Elt& x, const FqCtx& K) {
    FqCtx::Elt r = K.zero();
    for (std::size_t i = a.c.size(); i-- > 0;) r = K.add(K.mul(r, x), a.c[i]);
    return r;
}

inline std::vector<std::pair<FqPoly, unsigned>> fq_squarefree_decomp(FqPoly f, const FqCtx& K);
inline std::vector<std::pair<FqPoly, long>> fq_distinct_degree(FqPoly f, const FqCtx& K);
inline void fq_equal_degree(const FqPoly& f, long d, const FqCtx& K, std::vector<FqPoly>& out,
                            std::mt19937_64& rng);

// full factorization over F_q
inline std::vector<std::pair<FqPoly, unsigned>> fq_factor(const FqPoly& f0, const FqCtx& K) {
    std::vector<std::pair<FqPoly, unsigned>> out;
    std::mt19937_64 rng(0xc0ffee11ULL);
    for (auto& [g, mult] : fq_squarefree_decomp(f0, K)) {
        for (auto& [h, d] : fq_distinct_degree(g, K)) {
            std::vector<FqPoly> irr;
            fq_equal_degree(h, d, K, irr, rng);
            for (auto& u : irr) out.emplace_back(u, mult);
        }
    }
    return out;
}

inline std::vector<std::pair<FqPoly, unsigned>> fq_squarefree_decomp(FqPoly f, const FqCtx& K) {
    std::vector<std::pair<FqPoly, unsigned>> out;
    f = fq_monic(f, K);
    unsigned e_mult = 1;
    while (f.degree() > 0) {
        FqPoly d = fq_derivative(f, K);
        if (d.is_zero()) {
            // f = g(x^p); p-th root needs Frobenius-inverse on coefficients
            FqPoly g;
            g.c.assign(f.degree() / K.F.p + 1, K.zero());
            for (std::size_t i = 0; i < g.c.size(); ++i) {
                FqCtx::Elt c = f.c[i * K.F.p];
                // p-th root in F_q: c^(q/p)
                g.c[i] = K.pow(c, K.q() / static_cast<unsigned long>(K.F.p));
            }
            g.trim();
            f = g;
            e_mult *= static_cast<unsigned>(K.F.p);
            continue;
        }
        FqPoly a = fq_gcd(f, d, K);
        FqPoly b, tmp;
        fq_divrem(f, a, K, b, tmp);
        unsigned i = 1;
        while (b.degree() > 0) {
            FqPoly t = fq_gcd(b, a, K);
            FqPoly gi;
            fq_divrem(b, t, K, gi, tmp);
            if (gi.degree() > 0) out.emplace_back(fq_monic(gi, K), i * e_mult);
            b = t;
            FqPoly q2;
            fq_divrem(a, t, K, q2, tmp);
            a = q2;
            ++i;
        }
        if (a.degree() == 0) break;
        f = a;
    }
    return out;
}

inline std::vector<std::pair<FqPoly, long>> fq_distinct_degree(FqPoly f, const FqCtx& K) {
    std::vector<std::pair<FqPoly, long>> out;
    FqPoly x = FqPoly::x_power(1, K.one());
    FqPoly h = x;
    long d = 0;
    while (f.degree() >= 2 * (d + 1)) {
        ++d;
        h = fq_powmod(h, K.q(), f, K);
        FqPoly g = fq_gcd(fq_sub(h, x, K), f, K);
        if (g.degree() > 0) {
            out.emplace_back(g, d);
            FqPoly q, r;
            fq_divrem(f, g, K, q, r);
            f = fq_monic(q, K);
            h = fq_mod(h, f, K);
        }
    }
    if (f.degree() > 0) out.emplace_back(f, f.degree());
    return out;
}

inline void fq_equal_degree(const FqPoly& f, long d, const FqCtx& K, std::vector<FqPoly>& out,
                            std::mt19937_64& rng) {
    if (f.degree() == d) {
        out.push_back(fq_monic(f, K));
        return;
    }
    FqPoly g;
    while (true) {
        FqPoly A;
        A.c.assign(f.degree(), K.zero());
        for (auto& v : A.c) {
            std::vector<std::uint64_t> cc(K.f, 0);
            for (auto& w : cc) w = rng() % K.F.p;
            v = FpPoly(std::move(cc));
        }
        A.trim();
        if (A.is_zero()) continue;
        if (K.F.p == 2) {
            // trace map over F_{q^d} down to F_2: sum of 2-power Frobenii
            FqPoly t = A, cur = A;
            long steps = K.f * d;
            for (long i = 1; i < steps; ++i) {
                cur = fq_mod(fq_mul(cur, cur, K), f, K);
                t = fq_add(t, cur, K);
            }
            g = fq_gcd(t, f, K);
        } else {
            Int e = int_pow(K.q(), static_cast<unsigned long>(d));
            e = (e - 1) / 2;
            FqPoly B = fq_powmod(A, e, f, K);
            g = fq_gcd(fq_sub(B, FqPoly::constant(K.one()), K), f, K);
        }
        if (g.degree() > 0 && g.degree() < f.degree()) break;
    }
    FqPoly q, r;
    fq_divrem(f, g, K, q, r);
    fq_equal_degree(g, d, K, out, rng);
    fq_equal_degree(fq_monic(q, K), d, K, out, rng);
}

// roots of f in F_q
inline std::vector<FqCtx::Elt> fq_roots(const FqPoly& f, const FqCtx& K) {
    std::vector<FqCtx::Elt> out;
    for (auto& [g, mult] : fq_factor(f, K))
        if (g.degree() == 1) out.push_back(K.neg(g.c[0]));
    return out;
}

}  // namespace obstruct
