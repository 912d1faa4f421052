#pragma once

// Real root isolation for squarefree integer polynomials via exact rational
// Sturm sequences.  Sign decisions feed the Hilbert symbols at the real
// place, so everything here is exact; no floating point.

#include <cassert>
#include <vector>

#include "obstruct/arith/intpoly.hpp"

namespace obstruct {

struct IsolatingInterval {
    Rat lo, hi;  // lo <= root <= hi, exactly one root of the owning poly
};

class SturmChain {
public:
    explicit SturmChain(const IntPoly& f) {
        assert(!f.is_zero());
        chain_.push_back(scale_down(f));
        if (f.degree() == 0) return;
        chain_.push_back(scale_down(f.derivative()));
        while (chain_.back().degree() > 0) {
            const IntPoly& a = chain_[chain_.size() - 2];
            const IntPoly& b = chain_.back();
            IntPoly r = pseudo_rem(a, b);
            if (r.is_zero()) break;  // f not squarefree; chain ends at the gcd
            // prem scales by lc(b)^(delta+1); flip so the Sturm sign rule holds
            long delta = a.degree() - b.degree();
            bool neg_scale = (b.leading() < 0) && ((delta + 1) % 2 == 1);
            IntPoly next = neg_scale ? r : -r;
            chain_.push_back(scale_down(next));
        }
    }

    // sign variations of the chain at x
    int variations_at(const Rat& x) const {
        int var = 0, last = 0;
        for (const auto& s : chain_) {
            Rat v = s.eval(x);
            int sg = (v > 0) - (v < 0);
            if (sg == 0) continue;
            if (last != 0 && sg != last) ++var;
            last = sg;
        }
        return var;
    }
    int variations_at_minus_inf() const { return variations_inf(-1); }
    int variations_at_plus_inf() const { return variations_inf(+1); }

    // number of roots in (a, b]
    int count_roots(const Rat& a, const Rat& b) const {
        return variations_at(a) - variations_at(b);
    }
    int count_real_roots() const { return variations_at_minus_inf() - variations_at_plus_inf(); }

    const IntPoly& poly() const { return chain_.front(); }

private:
    // divide by the (positive) content; the sign of the polynomial must be kept
    static IntPoly scale_down(const IntPoly& f) {
        if (f.is_zero()) return f;
        Int g = f.content();
        std::vector<Int> r(f.coeffs().size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = exact_quot(f[i], g);
        return IntPoly(std::move(r));
    }

    int variations_inf(int dir) const {
        int var = 0, last = 0;
        for (const auto& s : chain_) {
            int sg = (s.leading() > 0) ? 1 : -1;
            if (dir < 0 && s.degree() % 2 == 1) sg = -sg;
            if (last != 0 && sg != last) ++var;
            last = sg;
        }
        return var;
    }
    std::vector<IntPoly> chain_;
};

// 1 + max |a_i| / |a_n|, as an exact rational
inline Rat cauchy_root_bound(const IntPoly& f) {
    assert(f.degree() >= 1);
    Int m = 0;
    for (const auto& c : f.coeffs()) {
        Int a = abs(c);
        if (a > m) m = a;
    }
    Rat b(m);
    b /= abs(Rat(f.leading()));
    return b + 1;
}

// All real roots of a squarefree f, one disjoint interval per root.
inline std::vector<IsolatingInterval> isolate_real_roots(const IntPoly& f) {
    assert(f.degree() >= 1);
    SturmChain ch(f);
    Rat B = cauchy_root_bound(f);
    std::vector<IsolatingInterval> out;
    struct Seg {
        Rat a, b;
        int count;
    };
    std::vector<Seg> work;
    {
        int total = ch.count_roots(-B, B);
        // the bound is strict, so all real roots lie in (-B, B]
        if (total > 0) work.push_back({-B, B, total});
    }
    while (!work.empty()) {
        Seg s = work.back();
        work.pop_back();
        if (s.count == 0) continue;
        if (s.count == 1) {
            Rat a = s.a, b = s.b;
            Rat fb = f.eval(b);
            if (fb == 0) {
                // exact rational root at b: shrink an interval around it
                Rat eps(1, 2);
                while (true) {
                    Rat lo = b - eps, hi = b + eps;
                    if (ch.count_roots(lo, hi) == 1 && f.eval(lo) != 0 && f.eval(hi) != 0) {
                        out.push_back({lo, hi});
                        break;
                    }
                    eps /= 2;
                }
                continue;
            }
            // the counted root lies strictly right of a; nudge a off any root
            Rat step = (b - a) / 4;
            while (f.eval(a) == 0) {
                Rat a2 = a + step;
                if (ch.count_roots(a2, b) == 1) a = a2;
                else step /= 2;
            }
            Rat fa = f.eval(a);
            if ((fa > 0) != (fb > 0)) {
                out.push_back({a, b});
                continue;
            }
            // equal endpoint signs with count 1 cannot happen; fall through
        }
        Rat mid = (s.a + s.b) / 2;
        int left = ch.count_roots(s.a, mid);
        work.push_back({s.a, mid, left});
        work.push_back({mid, s.b, s.count - left});
    }
    std::sort(out.begin(), out.end(),
              [](const IsolatingInterval& x, const IsolatingInterval& y) { return x.lo < y.lo; });
    return out;
}

// Shrink the interval below width eps, keeping the sign change.
inline IsolatingInterval refine_interval(const IntPoly& f, IsolatingInterval iv, const Rat& eps) {
    Rat fa = f.eval(iv.lo);
    assert(fa != 0);
    bool lo_pos = fa > 0;
    while (iv.hi - iv.lo >= eps) {
        Rat mid = (iv.lo + iv.hi) / 2;
        Rat fm = f.eval(mid);
        if (fm == 0) {
            // nudge: the root is exactly mid; tighten around it
            Rat w = (iv.hi - iv.lo) / 4;
            iv.lo = mid - w;
            iv.hi = mid + w;
            if (f.eval(iv.lo) == 0 || f.eval(iv.hi) == 0) {
                w /= 3;
                iv.lo = mid - w;
                iv.hi = mid + w;
            }
            if (iv.hi - iv.lo < eps) break;
            fa = f.eval(iv.lo);
            lo_pos = fa > 0;
            continue;
        }
        if ((fm > 0) == lo_pos) iv.lo = mid;
        else iv.hi = mid;
    }
    return iv;
}

// Exact sign of g at the unique root of f inside iv: -1, 0, +1.
inline int sign_at_root(const IntPoly& f, IsolatingInterval iv, const IntPoly& g) {
    if (g.is_zero()) return 0;
    IntPoly h = poly_gcd(f, g);
    if (h.degree() >= 1) {
        SturmChain hc(h);
        // h squarefree (divides squarefree f); root of f in iv is a root of g
        // iff h has a root in the (closed) interval
        if (h.eval(iv.lo) == 0 || h.eval(iv.hi) == 0) return 0;
        if (hc.count_roots(iv.lo, iv.hi) > 0) return 0;
    }
    // g has constant sign on a small enough interval around the root
    IntPoly gs = poly_gcd(g, g.derivative()).degree() > 0
                     ? exact_div(g.primitive_part(), poly_gcd(g, g.derivative()))
                     : g;
    SturmChain gc(gs);
    while (true) {
        Rat glo = g.eval(iv.lo), ghi = g.eval(iv.hi);
        if (glo != 0 && ghi != 0 && (glo > 0) == (ghi > 0)) {
            if (gc.count_roots(iv.lo, iv.hi) == 0) return glo > 0 ? 1 : -1;
        }
        iv = refine_interval(f, iv, (iv.hi - iv.lo) / 4);
    }
}

}  // namespace obstruct
