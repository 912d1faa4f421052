#pragma once

// Polynomials over a tower field at working precision: division by monic
// divisors, reduction to the residue field, Newton polygons, Euclid with
// valuation pivoting, and quantitative two-factor / multi-factor Hensel
// lifting.  Everything throws detail::need_more_precision when the working
// precision cannot support a decision; drivers double precision and retry.

#include <algorithm>
#include <cassert>
#include <numeric>
#include <vector>

#include "obstruct/padic/tower.hpp"

namespace obstruct {

struct TPoly {
    std::vector<TElt> c;  // constant first

    long degree() const { return static_cast<long>(c.size()) - 1; }
    bool empty() const { return c.empty(); }
};

inline TPoly tp_from_coeffs(std::vector<TElt> v) { return TPoly{std::move(v)}; }

inline TPoly tp_zero() { return TPoly{}; }

inline void tp_trim(const Tower& K, TPoly& a) {
    while (!a.c.empty() && K.is_zero(a.c.back())) a.c.pop_back();
}

inline TPoly tp_add(const Tower& K, const TPoly& a, const TPoly& b) {
    TPoly r;
    r.c.assign(std::max(a.c.size(), b.c.size()), K.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = K.add(r.c[i], b.c[i]);
    return r;
}
inline TPoly tp_sub(const Tower& K, const TPoly& a, const TPoly& b) {
    TPoly r;
    r.c.assign(std::max(a.c.size(), b.c.size()), K.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[i] = K.sub(r.c[i], b.c[i]);
    return r;
}
inline TPoly tp_mul(const Tower& K, const TPoly& a, const TPoly& b) {
    if (a.c.empty() || b.c.empty()) return TPoly{};
    TPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, K.zero());
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (K.is_zero(a.c[i])) continue;
        for (std::size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = K.add(r.c[i + j], K.mul(a.c[i], b.c[j]));
    }
    return r;
}
inline TPoly tp_scale(const Tower& K, const TElt& s, const TPoly& a) {
    TPoly r = a;
    for (auto& v : r.c) v = K.mul(s, v);
    return r;
}
inline TElt tp_eval(const Tower& K, const TPoly& a, const TElt& x) {
    TElt r = K.zero();
    for (std::size_t i = a.c.size(); i-- > 0;) r = K.add(K.mul(r, x), a.c[i]);
    return r;
}
inline TPoly tp_derivative(const Tower& K, const TPoly& a) {
    TPoly r;
    if (a.c.size() <= 1) return r;
    r.c.assign(a.c.size() - 1, K.zero());
    for (std::size_t i = 1; i < a.c.size(); ++i)
        r.c[i - 1] = K.mul_scalar(a.c[i], Int(static_cast<long>(i)));
    return r;
}

// division by a monic divisor (exact at precision)
inline void tp_divrem_monic(const Tower& K, const TPoly& a, const TPoly& b, TPoly& q, TPoly& r) {
    assert(!b.c.empty());
    assert(K.equal(b.c.back(), K.one()));
    long db = b.degree(), da = a.degree();
    if (da < db) {
        q = TPoly{};
        r = a;
        return;
    }
    TPoly rr = a;
    TPoly qq;
    qq.c.assign(da - db + 1, K.zero());
    for (long k = da; k >= db; --k) {
        TElt t = rr.c[k];
        if (K.is_zero(t)) continue;
        qq.c[k - db] = t;
        for (long i = 0; i <= db; ++i) rr.c[k - db + i] = K.sub(rr.c[k - db + i], K.mul(t, b.c[i]));
    }
    rr.c.resize(db, K.zero());
    q = qq;
    r = rr;
}

// minimum valuation over coefficients (pi-units); VAL_INF for the zero poly
inline long tp_content_val(const Tower& K, const TPoly& a) {
    long best = VAL_INF;
    for (const auto& v : a.c) {
        long w = K.val(v);
        if (w < best) best = w;
    }
    return best;
}

// multiply by pi^k (k may be negative)
inline TPoly tp_shift_val(const Tower& K, const TPoly& a, long k) {
    TElt f = K.pi_power(k);
    TPoly r = a;
    for (auto& v : r.c) {
        v = K.mul(v, f);
        K.normalize(v);
    }
    return r;
}

// reduce an integral polynomial mod pi to the residue field
inline FqPoly tp_reduce(const Tower& K, const TPoly& a) {
    FqPoly r;
    r.c.reserve(a.c.size());
    for (const auto& v : a.c) {
        long w = K.val(v);
        if (w < 0) throw detail::need_more_precision{};
        r.c.push_back(w > 0 || w >= VAL_INF ? K.res.zero() : K.residue(v));
    }
    r.trim();
    return r;
}
inline TPoly tp_lift(const Tower& K, const FqPoly& a) {
    TPoly r;
    r.c.reserve(a.c.size());
    for (const auto& v : a.c) r.c.push_back(K.from_residue(v));
    return r;
}

// G(x + a)
inline TPoly tp_taylor_shift(const Tower& K, const TPoly& g, const TElt& a) {
    TPoly acc;
    TPoly lin;
    lin.c = {a, K.one()};
    for (std::size_t i = g.c.size(); i-- > 0;) {
        acc = tp_mul(K, acc, lin);
        TPoly cst;
        cst.c = {g.c[i]};
        acc = tp_add(K, acc, cst);
    }
    return acc;
}

// G(pi^h x) / pi^{h deg G}: integral when the polygon lies above slope h
inline TPoly tp_rescale_root(const Tower& K, const TPoly& g, long h) {
    long d = g.degree();
    TPoly r = g;
    for (long i = 0; i <= d; ++i) {
        r.c[i] = K.mul(r.c[i], K.pi_power(h * (i - d)));
        K.normalize(r.c[i]);
    }
    return r;
}

// ---- Newton polygon ----

struct NPSegment {
    long h = 0, b = 1;   // slope h/b in lowest terms (>= 0 for integral roots)
    long length = 0;     // horizontal extent (number of roots with this slope)
};

// lower convex hull of (i, val(c_i)) from i = 0 to deg; returns segments
// ordered by decreasing slope (i.e. from the constant-term side).
inline std::vector<NPSegment> tp_newton_polygon(const Tower& K, const TPoly& g) {
    long d = g.degree();
    assert(d >= 1);
    std::vector<std::pair<long, long>> pts;  // (i, val)
    for (long i = 0; i <= d; ++i) {
        long v = K.val(g.c[i]);
        if (v < VAL_INF) pts.emplace_back(i, v);
    }
    assert(!pts.empty());
    assert(pts.back().first == d);  // monic callers
    // lower hull
    std::vector<std::pair<long, long>> hull;
    for (auto& pt : pts) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& m = hull[hull.size() - 1];
            // keep the hull lower-convex: slope(a,m) <= slope(m,pt)
            // cross product (m - a) x (pt - a) <= 0 means m above segment
            long cx = (m.first - a.first) * (pt.second - a.second) -
                      (pt.first - a.first) * (m.second - a.second);
            if (cx <= 0) hull.pop_back();
            else break;
        }
        hull.push_back(pt);
    }
    std::vector<NPSegment> segs;
    for (std::size_t i = 1; i < hull.size(); ++i) {
        long di = hull[i].first - hull[i - 1].first;
        long dv = hull[i - 1].second - hull[i].second;  // roots valuation = dv/di
        long g_ = std::gcd(std::abs(dv), di);
        if (g_ == 0) g_ = 1;
        NPSegment s;
        s.h = dv / g_;
        s.b = di / g_;
        s.length = di;
        segs.push_back(s);
    }
    return segs;
}

// ---- Euclid with valuation pivoting (gcd candidate at precision) ----

// monic-normalize: divide by the leading coefficient (tracks no explicit
// loss; dens inside elements carry it)
inline TPoly tp_monicize(const Tower& K, TPoly a) {
    tp_trim(K, a);
    assert(!a.c.empty());
    TElt inv = K.inv(a.c.back());
    for (auto& v : a.c) {
        v = K.mul(v, inv);
        K.normalize(v);
    }
    a.c.back() = K.one();
    return a;
}

// gcd candidate by Euclid; throws need_more_precision if the remainders'
// coefficient denominators blow past the budget.  The result is only a
// candidate: callers must gate it (division check / Hensel lift).
inline TPoly tp_gcd_candidate(const Tower& K, TPoly a, TPoly b) {
    tp_trim(K, a);
    tp_trim(K, b);
    long guard = 0;
    while (!b.c.empty()) {
        if (++guard > 2 * (a.degree() + b.degree() + 4)) throw detail::need_more_precision{};
        // normalize b monic, with valuation shift to keep coefficients sane
        long cv = tp_content_val(K, b);
        if (cv == VAL_INF) break;
        TPoly bm = tp_shift_val(K, b, -cv);
        bm = tp_monicize(K, bm);
        for (const auto& v : bm.c)
            if (v.den > K.N / 3) throw detail::need_more_precision{};
        TPoly q, r;
        tp_divrem_monic(K, a, bm, q, r);
        tp_trim(K, r);
        a = bm;
        b = r;
    }
    long cv = tp_content_val(K, a);
    if (cv == VAL_INF) throw detail::need_more_precision{};
    return tp_monicize(K, tp_shift_val(K, a, -cv));
}

// extended Euclid on monic-ish A, B: returns (U, V, r) with U A + V B = r,
// r a nonzero constant (as TElt).  Throws when precision can't support it.
inline void tp_bezout(const Tower& K, const TPoly& A, const TPoly& B, TPoly& U, TPoly& V,
                      TElt& r_out) {
    TPoly r0 = A, r1 = B;
    TPoly u0, u1, v0, v1;
    u0.c = {K.one()};
    v1.c = {K.one()};
    long guard = 0;
    while (true) {
        tp_trim(K, r1);
        if (r1.c.empty()) throw detail::need_more_precision{};  // not coprime at precision
        if (r1.degree() == 0) break;
        if (++guard > 2 * (A.degree() + B.degree() + 4)) throw detail::need_more_precision{};
        long cv = tp_content_val(K, r1);
        TPoly r1m = tp_shift_val(K, r1, -cv);
        r1m = tp_monicize(K, r1m);
        // scale factor s with r1 = s * r1m
        // divrem against the monic normalization, then undo the scaling in u,v
        TPoly q, rr;
        tp_divrem_monic(K, r0, r1m, q, rr);
        // r0 = q * r1m + rr with r1 = pi^{cv} * lead' * r1m, lead' the
        // leading coefficient after the valuation shift
        TPoly r1s = tp_shift_val(K, r1, -cv);
        TElt leadp = r1s.c[r1s.degree()];
        TElt s = K.mul(K.pi_power(cv), leadp);
        TElt sinv = K.inv(s);
        TPoly qs = tp_scale(K, sinv, q);
        TPoly u2 = tp_sub(K, u0, tp_mul(K, qs, u1));
        TPoly v2 = tp_sub(K, v0, tp_mul(K, qs, v1));
        r0 = r1;
        r1 = rr;
        u0 = u1;
        u1 = u2;
        v0 = v1;
        v1 = v2;
        for (const auto& vv : u1.c)
            if (vv.den > K.N / 3) throw detail::need_more_precision{};
    }
    U = u1;
    V = v1;
    r_out = r1.c[0];
}

// ---- quantitative two-factor Hensel ----
//
// F == A*B may hold only to limited accuracy: with s = val of the Bezout
// constant, the iteration converges as long as val(F - A*B) > 2s, and each
// sweep improves the error valuation by (err - 2s).

struct HenselPairResult {
    TPoly A, B;
};

inline HenselPairResult tp_hensel_pair(const Tower& K, const TPoly& F, TPoly A, TPoly B,
                                       long target_val) {
    assert(K.equal(F.c.back(), K.one()));
    A = tp_monicize(K, A);
    B = tp_monicize(K, B);
    TPoly U, V;
    TElt r;
    tp_bezout(K, A, B, U, V, r);
    long s = K.val(r);
    if (s >= VAL_INF) throw detail::need_more_precision{};
    TElt rinv = K.inv(r);
    long iter_guard = 0;
    while (true) {
        TPoly E = tp_sub(K, F, tp_mul(K, A, B));
        tp_trim(K, E);
        long ev = tp_content_val(K, E);
        if (ev >= target_val || ev >= VAL_INF) break;
        if (ev <= 2 * s) throw detail::need_more_precision{};
        if (++iter_guard > 4 * K.N * K.e() + 64) throw detail::need_more_precision{};
        // solve A*dB + B*dA = E:  dB = (U*E*rinv mod B... standard split
        TPoly UEr = tp_scale(K, rinv, tp_mul(K, U, E));
        TPoly q, dB;
        tp_divrem_monic(K, UEr, B, q, dB);
        TPoly dA = tp_add(K, tp_scale(K, rinv, tp_mul(K, V, E)), tp_mul(K, q, A));
        // keep degrees: deg dA < deg A enforced by reduction mod A
        TPoly q2, dA2;
        tp_divrem_monic(K, dA, A, q2, dA2);
        A = tp_add(K, A, dA2);
        B = tp_add(K, B, dB);
        for (auto& v : A.c) K.normalize(v);
        for (auto& v : B.c) K.normalize(v);
        A.c.back() = K.one();
        B.c.back() = K.one();
    }
    return {A, B};
}

// multi-factor Hensel: F monic; blocks = pairwise coprime monic reductions
// whose product is F mod pi.  Returns the lifted factors (same order).
inline std::vector<TPoly> tp_hensel_multi(const Tower& K, const TPoly& F,
                                          const std::vector<FqPoly>& blocks, long target_val) {
    assert(!blocks.empty());
    if (blocks.size() == 1) return {F};
    std::size_t half = blocks.size() / 2;
    FqPoly L = FqPoly::constant(K.res.one()), R = FqPoly::constant(K.res.one());
    for (std::size_t i = 0; i < half; ++i) L = fq_mul(L, blocks[i], K.res);
    for (std::size_t i = half; i < blocks.size(); ++i) R = fq_mul(R, blocks[i], K.res);
    auto pr = tp_hensel_pair(K, F, tp_lift(K, L), tp_lift(K, R), target_val);
    std::vector<FqPoly> lb(blocks.begin(), blocks.begin() + half);
    std::vector<FqPoly> rb(blocks.begin() + half, blocks.end());
    auto lout = tp_hensel_multi(K, pr.A, lb, target_val);
    auto rout = tp_hensel_multi(K, pr.B, rb, target_val);
    lout.insert(lout.end(), rout.begin(), rout.end());
    return lout;
}

// Newton iteration for a root from an approximate one; requires
// val(T(x0)) > 2 val(T'(x0)).  Converges to target or throws.
inline TElt tp_newton_root(const Tower& K, const TPoly& T, TElt x, long target_val) {
    TPoly Td = tp_derivative(K, T);
    long guard = 0;
    while (true) {
        TElt fx = tp_eval(K, T, x);
        long v = K.val(fx);
        if (v >= target_val || v >= VAL_INF) return x;
        TElt dfx = tp_eval(K, Td, x);
        long dv = K.val(dfx);
        if (dv >= VAL_INF || v <= 2 * dv) throw detail::need_more_precision{};
        if (++guard > 4 * K.N * K.e() + 64) throw detail::need_more_precision{};
        x = K.sub(x, K.mul(fx, K.inv(dfx)));
        K.normalize(x);
    }
}

}  // namespace obstruct
