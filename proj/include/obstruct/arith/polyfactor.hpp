#pragma once

// Factorization in Z[x], Zassenhaus style: Yun squarefree decomposition,
// factorization modulo a good prime, quadratic Hensel lifting to a
// Landau-Mignotte bound, exhaustive subset recombination.

#include <cassert>
#include <vector>

#include "obstruct/arith/fppoly.hpp"
#include "obstruct/arith/intpoly.hpp"

namespace obstruct {

struct PolyFactorization {
    Int content;  // signed content; content * prod(factors^mult) == input
    std::vector<std::pair<IntPoly, unsigned>> factors;  // primitive irreducible, lc > 0
    IntPoly value() const {
        IntPoly r = IntPoly::constant(content);
        for (const auto& [g, e] : factors)
            for (unsigned i = 0; i < e; ++i) r = r * g;
        return r;
    }
};

namespace detail {

// --- arithmetic on integer polys modulo M (coefficients in [0, M)) ---

inline void zm_reduce(std::vector<Int>& c, const Int& M) {
    for (auto& v : c) {
        v %= M;
        if (v < 0) v += M;
    }
    while (!c.empty() && c.back() == 0) c.pop_back();
}
inline std::vector<Int> zm_mul(const std::vector<Int>& a, const std::vector<Int>& b, const Int& M) {
    if (a.empty() || b.empty()) return {};
    std::vector<Int> r(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    zm_reduce(r, M);
    return r;
}
inline std::vector<Int> zm_add(std::vector<Int> a, const std::vector<Int>& b, const Int& M) {
    if (a.size() < b.size()) a.resize(b.size(), Int(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    zm_reduce(a, M);
    return a;
}
inline std::vector<Int> zm_sub(std::vector<Int> a, const std::vector<Int>& b, const Int& M) {
    if (a.size() < b.size()) a.resize(b.size(), Int(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    zm_reduce(a, M);
    return a;
}
// division with remainder by a monic divisor, mod M
inline void zm_divrem_monic(const std::vector<Int>& a, const std::vector<Int>& b, const Int& M,
                            std::vector<Int>& q, std::vector<Int>& r) {
    assert(!b.empty() && b.back() == 1);
    long db = static_cast<long>(b.size()) - 1;
    std::vector<Int> rr = a;
    long da = static_cast<long>(rr.size()) - 1;
    if (da < db) {
        q.clear();
        r = rr;
        return;
    }
    std::vector<Int> qq(da - db + 1, Int(0));
    for (long k = da; k >= db; --k) {
        Int t = rr[k] % M;
        if (t < 0) t += M;
        if (t == 0) continue;
        qq[k - db] = t;
        for (long i = 0; i <= db; ++i) rr[k - db + i] -= t * b[i];
        for (long i = std::max(0L, k - db); i <= k; ++i) {
            rr[i] %= M;
            if (rr[i] < 0) rr[i] += M;
        }
    }
    rr.resize(db);
    zm_reduce(rr, M);
    zm_reduce(qq, M);
    q = qq;
    r = rr;
}
inline std::vector<Int> zm_from_fp(const FpPoly& f) {
    std::vector<Int> r(f.coeffs().size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = Int(static_cast<unsigned long>(f[i]));
    return r;
}
inline std::vector<Int> zm_symmetric(std::vector<Int> c, const Int& M) {
    Int half = M / 2;
    for (auto& v : c)
        if (v > half) v -= M;
    while (!c.empty() && c.back() == 0) c.pop_back();
    return c;
}

// One quadratic Hensel step (von zur Gathen-Gerhard 15.10): from modulus m
// to m^2.  f == g*h, s*g + t*h == 1 (mod m); g, h monic.
struct HenselPair {
    std::vector<Int> g, h, s, t;
};
inline void hensel_step(const std::vector<Int>& f, HenselPair& P, const Int& m) {
    Int m2 = m * m;
    std::vector<Int> e = zm_sub(f, zm_mul(P.g, P.h, m2), m2);
    std::vector<Int> q, r;
    zm_divrem_monic(zm_mul(P.s, e, m2), P.h, m2, q, r);
    std::vector<Int> gstar = zm_add(zm_add(P.g, zm_mul(P.t, e, m2), m2), zm_mul(q, P.g, m2), m2);
    std::vector<Int> hstar = zm_add(P.h, r, m2);
    std::vector<Int> one{Int(1)};
    std::vector<Int> b = zm_sub(zm_add(zm_mul(P.s, gstar, m2), zm_mul(P.t, hstar, m2), m2), one, m2);
    std::vector<Int> c, d;
    zm_divrem_monic(zm_mul(P.s, b, m2), hstar, m2, c, d);
    std::vector<Int> sstar = zm_sub(P.s, d, m2);
    std::vector<Int> tstar = zm_sub(zm_sub(P.t, zm_mul(P.t, b, m2), m2), zm_mul(c, gstar, m2), m2);
    P.g = gstar;
    P.h = hstar;
    P.s = sstar;
    P.t = tstar;
}

// lift the monic factorization F == prod(parts) from mod p to mod p^(2^iters) >= target
inline void hensel_tree(const std::vector<Int>& F, const std::vector<FpPoly>& parts, const Fp& Fld,
                        const Int& p, const Int& target,
                        std::vector<std::vector<Int>>& out) {
    if (parts.size() == 1) {
        std::vector<Int> g = F;
        zm_reduce(g, target);
        out.push_back(g);
        return;
    }
    std::size_t half = parts.size() / 2;
    FpPoly G = FpPoly::constant(1), H = FpPoly::constant(1);
    for (std::size_t i = 0; i < half; ++i) G = fp_mul(G, parts[i], Fld);
    for (std::size_t i = half; i < parts.size(); ++i) H = fp_mul(H, parts[i], Fld);
    // Bezout mod p
    FpPoly r0 = G, r1 = H, s0 = FpPoly::constant(1), s1 = FpPoly(), t0 = FpPoly(),
           t1 = FpPoly::constant(1);
    while (!r1.is_zero()) {
        FpPoly q, r;
        fp_divrem(r0, r1, Fld, q, r);
        FpPoly s2 = fp_sub(s0, fp_mul(q, s1, Fld), Fld);
        FpPoly t2 = fp_sub(t0, fp_mul(q, t1, Fld), Fld);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    assert(r0.degree() == 0);
    std::uint64_t ir = Fld.inv(r0.leading());
    s0 = fp_scal(ir, s0, Fld);
    t0 = fp_scal(ir, t0, Fld);
    HenselPair P{zm_from_fp(G), zm_from_fp(H), zm_from_fp(s0), zm_from_fp(t0)};
    Int m = p;
    while (m < target) {
        hensel_step(F, P, m);
        m = m * m;
    }
    zm_reduce(P.g, target);
    zm_reduce(P.h, target);
    std::vector<FpPoly> left(parts.begin(), parts.begin() + half);
    std::vector<FpPoly> right(parts.begin() + half, parts.end());
    hensel_tree(P.g, left, Fld, p, target, out);
    hensel_tree(P.h, right, Fld, p, target, out);
}

// Landau-Mignotte: any factor of g has coefficients bounded by
// 2^deg * sqrt(deg+1) * maxnorm(g) * |lc(g)|
inline Int mignotte_bound(const IntPoly& g) {
    Int mx = 0;
    for (const auto& c : g.coeffs()) {
        Int a = abs(c);
        if (a > mx) mx = a;
    }
    Int b = int_pow(Int(2), static_cast<unsigned long>(g.degree() + 1));
    Int root(static_cast<long>(g.degree() + 2));
    return b * root * mx * abs(g.leading());
}

// factor a primitive squarefree polynomial with lc > 0
inline std::vector<IntPoly> factor_squarefree(const IntPoly& g) {
    if (g.degree() == 1) return {g};
    // choose a prime: lc stays a unit, reduction squarefree, few modular factors
    std::vector<std::uint64_t> primes;
    for (std::uint64_t p = 3; primes.size() < 6; p += 2) {
        if (!is_probable_prime(Int(static_cast<unsigned long>(p)), 1)) continue;
        if (mpz_divisible_ui_p(g.leading().get_mpz_t(), p)) continue;
        Fp F(p);
        FpPoly gp = FpPoly::from_intpoly(g, F);
        if (gp.degree() != g.degree()) continue;
        if (fp_gcd(gp, fp_derivative(gp, F), F).degree() != 0) continue;
        primes.push_back(p);
        if (p > 200 && !primes.empty()) break;
    }
    assert(!primes.empty());
    std::uint64_t best_p = 0;
    std::vector<FpPoly> best_parts;
    for (auto p : primes) {
        Fp F(p);
        FpPoly gp = fp_monic(FpPoly::from_intpoly(g, F), F);
        auto fac = fp_factor(gp, F);
        std::vector<FpPoly> parts;
        for (auto& [h, e] : fac) {
            assert(e == 1);
            parts.push_back(h);
        }
        if (best_parts.empty() || parts.size() < best_parts.size()) {
            best_parts = parts;
            best_p = p;
        }
        if (best_parts.size() == 1) break;
    }
    if (best_parts.size() == 1) return {g};

    Fp F(best_p);
    Int p(static_cast<unsigned long>(best_p));
    Int bound = 2 * mignotte_bound(g) + 1;
    Int target = p;
    while (target < bound) target = target * target;

    // monic F_target = g / lc mod target
    Int lc = g.leading();
    Int lc_inv;
    mpz_invert(lc_inv.get_mpz_t(), lc.get_mpz_t(), target.get_mpz_t());
    std::vector<Int> Fm(g.coeffs());
    for (auto& v : Fm) v = (v * lc_inv) % target;
    zm_reduce(Fm, target);

    std::vector<std::vector<Int>> lifted;
    hensel_tree(Fm, best_parts, F, p, target, lifted);

    // subset recombination
    std::vector<IntPoly> out;
    IntPoly rem = g;
    std::vector<int> alive(lifted.size(), 1);
    std::size_t alive_count = lifted.size();
    auto build_candidate = [&](const std::vector<std::size_t>& idx) -> IntPoly {
        std::vector<Int> prod{rem.leading() % target};
        for (auto i : idx) prod = zm_mul(prod, lifted[i], target);
        std::vector<Int> sym = zm_symmetric(prod, target);
        return IntPoly(std::move(sym)).primitive_part();
    };
    for (std::size_t size = 1; size <= alive_count && 2 * size <= alive_count + 1; ++size) {
        // iterate subsets of the alive indices of the given size
        std::vector<std::size_t> pool;
        for (std::size_t i = 0; i < lifted.size(); ++i)
            if (alive[i]) pool.push_back(i);
        if (size > pool.size()) break;
        std::vector<std::size_t> comb(size);
        for (std::size_t i = 0; i < size; ++i) comb[i] = i;
        bool restart = false;
        while (!restart) {
            std::vector<std::size_t> idx;
            for (auto c : comb) idx.push_back(pool[c]);
            // quick trailing-coefficient filter
            bool plausible = true;
            if (!rem.is_zero() && rem[0] != 0) {
                Int tr = rem.leading() % target;
                for (auto i : idx) tr = (tr * lifted[i][0]) % target;
                Int trs = tr;
                if (trs > target / 2) trs -= target;
                Int prod0 = rem[0] * rem.leading();
                if (trs != 0 && !mpz_divisible_p(prod0.get_mpz_t(), trs.get_mpz_t()))
                    plausible = false;
                if (trs == 0) plausible = (rem[0] == 0);
            }
            if (plausible) {
                IntPoly cand = build_candidate(idx);
                if (cand.degree() >= 1 && cand.degree() <= rem.degree()) {
                    // trial exact division over Z
                    IntPoly q, check;
                    // divide rem by cand over Q; accept if integral and exact
                    RatPoly qq, rr;
                    divrem(RatPoly(rem), RatPoly(cand), qq, rr);
                    if (rr.is_zero()) {
                        auto [qi, qd] = qq.to_integral();
                        if (qd == 1) {
                            out.push_back(cand.leading() > 0 ? cand : -cand);
                            rem = qi;
                            for (auto i : idx) {
                                alive[i] = 0;
                                --alive_count;
                            }
                            restart = true;
                            size = 0;  // restart subset sizes from 1
                            break;
                        }
                    }
                }
            }
            // next combination
            long pos = static_cast<long>(size) - 1;
            while (pos >= 0 && comb[pos] == pool.size() - size + pos) --pos;
            if (pos < 0) break;
            ++comb[pos];
            for (std::size_t j = pos + 1; j < size; ++j) comb[j] = comb[j - 1] + 1;
        }
    }
    if (rem.degree() >= 1) out.push_back(rem.leading() > 0 ? rem : -rem);
    return out;
}

}  // namespace detail

// Yun squarefree decomposition over Z for a primitive polynomial
inline std::vector<std::pair<IntPoly, unsigned>> squarefree_decomposition(const IntPoly& f0) {
    std::vector<std::pair<IntPoly, unsigned>> out;
    IntPoly f = f0.primitive_part();
    if (f.degree() <= 0) return out;
    IntPoly d = f.derivative();
    IntPoly a = poly_gcd(f, d);
    IntPoly b = exact_div(f, a);
    IntPoly c = exact_div(d, a);
    IntPoly d2 = c - b.derivative();
    unsigned i = 1;
    while (b.degree() > 0) {
        IntPoly ai = poly_gcd(b, d2);
        if (ai.degree() > 0) out.emplace_back(ai, i);
        b = exact_div(b, ai);
        c = exact_div(d2, ai);
        d2 = c - b.derivative();
        ++i;
    }
    return out;
}

// Full factorization over Z.
inline PolyFactorization factor_poly_over_Z(const IntPoly& f) {
    assert(!f.is_zero());
    PolyFactorization out;
    out.content = f.content();
    if (f.leading() < 0) out.content = -out.content;
    if (f.degree() == 0) {
        out.content = f[0];
        return out;
    }
    IntPoly g = f.primitive_part();
    for (auto& [sf, mult] : squarefree_decomposition(g)) {
        for (auto& irr : detail::factor_squarefree(sf)) out.factors.emplace_back(irr, mult);
    }
    std::sort(out.factors.begin(), out.factors.end(), [](const auto& a, const auto& b) {
        if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
        return a.first.coeffs() < b.first.coeffs();
    });
    return out;
}

inline bool is_irreducible_over_Z(const IntPoly& f) {
    if (f.degree() <= 0) return false;
    auto fac = factor_poly_over_Z(f);
    return fac.factors.size() == 1 && fac.factors[0].second == 1;
}

}  // namespace obstruct
