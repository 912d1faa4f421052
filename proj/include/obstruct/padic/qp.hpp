#pragma once

// Exact p-adic facts about rational numbers (valuations, square classes,
// tame Hilbert symbols) and a lightweight local-solubility test for
// y^2 = F(x) over Q_p that needs no field extensions.  Everything here is
// decision-exact: inputs are rationals, so unit parts are known to
// arbitrary precision.

#include <cassert>
#include <optional>

#include "obstruct/arith/fppoly.hpp"
#include "obstruct/arith/intfactor.hpp"
#include "obstruct/arith/intpoly.hpp"
#include "obstruct/arith/realroots.hpp"
#include "obstruct/errors.hpp"

namespace obstruct {

// unit part of r at p: r / p^{v_p(r)}
inline Rat unit_part(const Rat& r, const Int& p) {
    assert(r != 0);
    long v = valuation(r, p);
    Rat pv(int_pow(p, static_cast<unsigned long>(std::abs(v))));
    Rat out = r;
    if (v >= 0) out /= pv;
    else out *= pv;
    out.canonicalize();
    return out;
}

// exact: is r a square in Q_p^x
inline bool is_square_qp(const Rat& r, const Int& p) {
    assert(r != 0);
    long v = valuation(r, p);
    if (v % 2 != 0) return false;
    Rat u = unit_part(r, p);
    if (p == 2) {
        // unit squares in Q_2 are exactly 1 mod 8
        Int num = u.get_num(), den = u.get_den();
        Int inv_den;
        mpz_invert(inv_den.get_mpz_t(), den.get_mpz_t(), Int(8).get_mpz_t());
        Int m = (num * inv_den) % 8;
        if (m < 0) m += 8;
        return m == 1;
    }
    Int num = u.get_num() % p, den = u.get_den() % p;
    if (num < 0) num += p;
    if (den < 0) den += p;
    Int inv_den;
    mpz_invert(inv_den.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
    Int m = (num * inv_den) % p;
    return mpz_legendre(m.get_mpz_t(), p.get_mpz_t()) == 1;
}

// additive Hilbert symbol (a,b)_p in {0,1} (1 encodes 1/2 in Q/Z), exact for
// rational arguments.  Odd p: tame formula.  p = 2: the classical unit
// formula.  Fast path for rational inputs; the extension-field machinery has
// its own certified search and is cross-checked against this in tests.
inline int hilbert_qp_rational(const Rat& a, const Rat& b, const Int& p) {
    assert(a != 0 && b != 0);
    long alpha = valuation(a, p), beta = valuation(b, p);
    Rat u = unit_part(a, p), w = unit_part(b, p);
    auto mod_m = [&](const Rat& x, const Int& m) -> Int {
        Int num = x.get_num() % m, den = x.get_den() % m;
        if (num < 0) num += m;
        if (den < 0) den += m;
        Int inv_den;
        mpz_invert(inv_den.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t());
        Int r = (num * inv_den) % m;
        if (r < 0) r += m;
        return r;
    };
    if (p != 2) {
        // class of (-1)^{alpha beta} u^beta w^{-alpha} in the residue field
        Int um = mod_m(u, p), wm = mod_m(w, p);
        int leg_u = mpz_legendre(um.get_mpz_t(), p.get_mpz_t());
        int leg_w = mpz_legendre(wm.get_mpz_t(), p.get_mpz_t());
        int eps = 0;
        Int minus1 = p - 1;
        if ((alpha % 2) && (beta % 2) && mpz_legendre(minus1.get_mpz_t(), p.get_mpz_t()) == -1)
            eps ^= 1;
        if ((beta % 2) && leg_u == -1) eps ^= 1;
        if ((alpha % 2) && leg_w == -1) eps ^= 1;
        return eps;
    }
    Int u8 = mod_m(u, Int(8)), w8 = mod_m(w, Int(8));
    auto eps2 = [](const Int& m) { return ((m - 1) / 2) % 2 != 0; };
    auto omega = [](const Int& m) { return ((m * m - 1) / 8) % 2 != 0; };
    int r = 0;
    if (eps2(u8) && eps2(w8)) r ^= 1;
    if ((alpha % 2) && omega(w8)) r ^= 1;
    if ((beta % 2) && omega(u8)) r ^= 1;
    return r;
}

// real place: 1/2 iff both negative
inline int hilbert_real(const Rat& a, const Rat& b) {
    assert(a != 0 && b != 0);
    return (a < 0 && b < 0) ? 1 : 0;
}

// ---------- local solubility of y^2 = F(x) over Q_p, x in P^1 ----------
//
// Residue-disc recursion carrying the disc's own polynomial
// G(t) = F(a + p^k t) / p^{content}: per disc we factor the reduction mod p,
// certify square values away from its roots (small p by scanning, large p by
// the Weil character-sum bound), and recurse only into root discs.  A simple
// root of the reduction forces points (nearby values attain every square
// class), which is also the Hensel exit.

namespace detail {

// G(a + s*t) for integer a, s; exact
inline IntPoly compose_affine(const IntPoly& G, const Int& a, const Int& s) {
    IntPoly acc;
    IntPoly lin(std::vector<Int>{a, s});
    for (std::size_t i = G.coeffs().size(); i-- > 0;)
        acc = acc * lin + IntPoly::constant(G[i]);
    return acc;
}

// does W(t) hit a nonzero square in F_p for some t?  exact decision
inline bool attains_nonzero_square(const FpPoly& W, const Fp& F) {
    Int p(static_cast<unsigned long>(F.p));
    if (W.degree() == 0) {
        Int c(static_cast<unsigned long>(W[0]));
        return mpz_legendre(c.get_mpz_t(), p.get_mpz_t()) == 1;
    }
    long d = W.degree();
    if (Int(static_cast<unsigned long>(F.p)) <= Int((d + 2)) * Int((d + 2))) {
        for (std::uint64_t t = 0; t < F.p; ++t) {
            std::uint64_t v = fp_eval(W, t, F);
            if (!v) continue;
            Int vv(static_cast<unsigned long>(v));
            if (mpz_legendre(vv.get_mpz_t(), p.get_mpz_t()) == 1) return true;
        }
        return false;
    }
    // large p: write W = c * S * H^2 with S squarefree.  If deg S >= 1 the
    // Weil bound on the character sum of c*S guarantees a nonzero square
    // value once p > (deg+2)^2.  Otherwise the class is that of c.
    auto decomp = fp_squarefree_decomp(W, F);
    std::uint64_t lead = W.leading();
    FpPoly S = FpPoly::constant(1);
    for (auto& [g, e] : decomp)
        if (e % 2 == 1) S = fp_mul(S, g, F);
    if (S.degree() >= 1) return true;
    Int c(static_cast<unsigned long>(lead));
    return mpz_legendre(c.get_mpz_t(), p.get_mpz_t()) == 1;
}

// points t in Z_p with p^{vacc} * G(t) a square, G content-free;
// vpar = vacc mod 2
inline bool soluble_disc(const IntPoly& G, const Int& p, int vpar, long cap) {
    if (cap < 0) throw precision_exhausted("local solubility recursion exceeded depth cap");
    assert(!G.is_zero());
    Fp F(p.get_ui());
    FpPoly W = FpPoly::from_intpoly(G, F);
    assert(!W.is_zero());
    if (p == 2) {
        // unit values of G are determined mod 8 by t mod 8; scan them
        for (long t = 0; t < 8; ++t) {
            Int v = G.eval(Int(t));
            if (v == 0) return true;  // exact Weierstrass-style point
            long w = valuation(v, Int(2));
            if ((w + vpar) % 2 != 0) continue;
            Int u = v / int_pow(Int(2), static_cast<unsigned long>(w));
            Int m = u % 8;
            if (m < 0) m += 8;
            if (m == 1) return true;
        }
    } else {
        if (vpar == 0 && attains_nonzero_square(W, F)) return true;
    }
    // roots of the reduction: simple root => all square classes nearby
    if (W.degree() >= 1) {
        FpPoly Wd = fp_derivative(W, F);
        for (std::uint64_t t0 : fp_roots(W, F)) {
            if (fp_eval(Wd, t0, F) != 0) return true;
            IntPoly G2 = compose_affine(G, Int(static_cast<unsigned long>(t0)), p);
            long V = -1;
            for (const auto& c : G2.coeffs()) {
                if (c == 0) continue;
                long v = valuation(c, p);
                if (V < 0 || v < V) V = v;
                if (V == 0) break;
            }
            std::vector<Int> cc(G2.coeffs());
            Int pv = int_pow(p, static_cast<unsigned long>(V));
            for (auto& c : cc) c = exact_quot(c, pv);
            if (soluble_disc(IntPoly(std::move(cc)), p, vpar ^ static_cast<int>(V & 1), cap - 1))
                return true;
        }
    }
    return false;
}

}  // namespace detail

// Does y^2 = F(x) have a Q_p-point with x in P^1(Q_p)?  F of even degree.
inline bool is_locally_soluble_qp(const IntPoly& F, const Int& p) {
    assert(F.degree() >= 1);
    Int d = poly_discriminant(F);
    assert(d != 0);
    long vdisc = valuation(d, p);
    long cap = 4 * (1 + vdisc) + (p == 2 ? 4 : 0) + 10;
    // chart 1: x in Z_p
    {
        IntPoly G = F;
        long V = -1;
        for (const auto& c : G.coeffs()) {
            if (c == 0) continue;
            long v = valuation(c, p);
            if (V < 0 || v < V) V = v;
            if (V == 0) break;
        }
        if (V > 0) {
            std::vector<Int> cc(G.coeffs());
            Int pv = int_pow(p, static_cast<unsigned long>(V));
            for (auto& c : cc) c = exact_quot(c, pv);
            G = IntPoly(std::move(cc));
        }
        if (detail::soluble_disc(G, p, static_cast<int>((V > 0 ? V : 0) & 1), cap)) return true;
    }
    // chart 2: u in p Z_p on u^{deg} F(1/u); covers x at infinity
    {
        IntPoly Frev = F.reversed();
        IntPoly G = detail::compose_affine(Frev, Int(0), p);
        long V = -1;
        for (const auto& c : G.coeffs()) {
            if (c == 0) continue;
            long v = valuation(c, p);
            if (V < 0 || v < V) V = v;
            if (V == 0) break;
        }
        std::vector<Int> cc(G.coeffs());
        Int pv = int_pow(p, static_cast<unsigned long>(V));
        for (auto& c : cc) c = exact_quot(c, pv);
        if (detail::soluble_disc(IntPoly(std::move(cc)), p, static_cast<int>(V & 1), cap))
            return true;
    }
    return false;
}

// real place: F takes a nonnegative value somewhere
inline bool is_locally_soluble_real(const IntPoly& F) {
    if (F.leading() > 0) return true;
    SturmChain ch(F);
    return ch.count_real_roots() > 0;
}

}  // namespace obstruct
