#pragma once

// Factorization of a squarefree integer polynomial over Q_p into certified
// irreducible factors, each realized as a tower field plus the root it
// contains.  Paths:
//   - multi-factor Hensel when the reduction has coprime parts;
//   - unramified bottom growth when the residue degree must grow;
//   - centering + Newton polygon for repeated linear reductions: integer
//     slopes rescale, a full-degree single slope certifies a totally
//     ramified step, and other slopes transform by the associated element
//     pi^h / x^b, whose minimal polynomial over the base either splits the
//     cluster or certifies a subfield to extend by.
// A global gate (degrees add up, minimal polynomials multiply back to the
// input at precision) certifies every run; precision doubles on doubt.

#include <algorithm>
#include <cassert>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "obstruct/padic/tpoly.hpp"

namespace obstruct {

// ---- maps between towers (evaluation of the monomial basis) ----

struct TowerShape {
    long f0 = 1;
    std::vector<long> bs;
    static TowerShape of(const Tower& K) {
        TowerShape s;
        s.f0 = K.f0();
        for (const auto& st : K.steps) s.bs.push_back(st.b);
        return s;
    }
};

// Maps elements of a source tower into a target tower, assuming step
// generators correspond by index (target steps extend the source's) and the
// source unramified generator maps to u_image.
class TowerMap {
public:
    TowerMap() = default;
    TowerMap(TowerShape shape, std::shared_ptr<const Tower> to, TElt u_image)
        : shape_(std::move(shape)), to_(std::move(to)), u_(std::move(u_image)) {}

    static TowerMap identity(const std::shared_ptr<const Tower>& K) {
        return TowerMap(TowerShape::of(*K), K, K->unram_gen());
    }
    // this: A -> B;  then: B -> C;  result: A -> C
    TowerMap then(const TowerMap& next) const {
        return TowerMap(shape_, next.to_, next.apply(u_));
    }

    const std::shared_ptr<const Tower>& target() const { return to_; }

    TElt apply(const TElt& x) const {
        TElt r = eval_level(x.c, static_cast<long>(shape_.bs.size()));
        r.den += x.den;
        to_->reduce(r);
        return r;
    }
    TPoly apply(const TPoly& g) const {
        TPoly r;
        r.c.reserve(g.c.size());
        for (const auto& v : g.c) r.c.push_back(apply(v));
        return r;
    }

private:
    TowerShape shape_;
    std::shared_ptr<const Tower> to_;
    TElt u_;

    long sub_size(long level) const {
        long s = shape_.f0;
        for (long j = 0; j < level; ++j) s *= shape_.bs[j];
        return s;
    }
    TElt eval_level(const std::vector<Int>& flat, long level) const {
        if (level == 0) {
            TElt acc = to_->zero();
            for (std::size_t i = flat.size(); i-- > 0;) {
                acc = to_->mul(acc, u_);
                acc = to_->add(acc, to_->from_int(flat[i]));
            }
            return acc;
        }
        long m = sub_size(level - 1);
        long b = shape_.bs[level - 1];
        TElt gen = to_->step_gen(level - 1);
        TElt acc = to_->zero();
        for (long i = b; i-- > 0;) {
            acc = to_->mul(acc, gen);
            std::vector<Int> blk(flat.begin() + i * m, flat.begin() + (i + 1) * m);
            acc = to_->add(acc, eval_level(blk, level - 1));
        }
        return acc;
    }
};

// cache of irreducible polynomials over F_p by degree
inline FpPoly cached_irreducible(const Fp& F, long degree) {
    static std::map<std::pair<std::uint64_t, long>, FpPoly> cache;
    auto key = std::make_pair(F.p, degree);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    FpPoly r = fp_find_irreducible(degree, F);
    cache.emplace(key, r);
    return r;
}

// enlarge the unramified bottom by a factor d > 1, keeping all steps
inline std::pair<std::shared_ptr<Tower>, TowerMap> rebase_tower(
    const std::shared_ptr<const Tower>& K, long d) {
    assert(d > 1);
    long newf = K->f0() * d;
    Fp F = K->res.F;
    FpPoly phi2 = cached_irreducible(F, newf);
    std::vector<Int> PhiC(phi2.coeffs().size());
    for (std::size_t i = 0; i < PhiC.size(); ++i)
        PhiC[i] = Int(static_cast<unsigned long>(phi2[i]));
    auto bottom = std::make_shared<Tower>(K->p, K->N, FqCtx(F, phi2), IntPoly(std::move(PhiC)));

    // root of the old residue polynomial in the new residue field
    FqCtx big(F, phi2);
    FqPoly phi_old;
    for (std::size_t i = 0; i < K->res.phi.coeffs().size(); ++i)
        phi_old.c.push_back(FpPoly::constant(K->res.phi[i]));
    phi_old.trim();
    auto roots = fq_roots(phi_old, big);
    if (roots.empty()) throw error("rebase: residue embedding root not found");
    std::sort(roots.begin(), roots.end(),
              [](const FpPoly& a, const FpPoly& b) { return a.coeffs() < b.coeffs(); });

    // p-adic lift of the embedding, in the bottom-only tower
    TPoly PhiOldT;
    for (std::size_t i = 0; i < K->Phi.coeffs().size(); ++i)
        PhiOldT.c.push_back(bottom->from_int(K->Phi[i]));
    TElt u_img = tp_newton_root(*bottom, PhiOldT, bottom->from_residue(roots.front()),
                                bottom->N - 2);

    // rebuild steps with mapped coefficients, one level at a time
    TowerShape src = TowerShape::of(*K);
    std::shared_ptr<Tower> cur = bottom;
    for (std::size_t j = 0; j < K->steps.size(); ++j) {
        TowerShape partial;
        partial.f0 = src.f0;
        partial.bs.assign(src.bs.begin(), src.bs.begin() + j);
        TowerMap pm(partial, cur, u_img);
        Tower::Step ns;
        ns.h = K->steps[j].h;
        ns.b = K->steps[j].b;
        for (const auto& Gi : K->steps[j].G) {
            TElt img = pm.apply(TElt{Gi, 0});
            if (img.den != 0) {
                cur->normalize(img);
                if (img.den != 0) throw detail::need_more_precision{};
            }
            ns.G.push_back(img.c);
        }
        auto next = std::make_shared<Tower>(*cur);
        next->steps.push_back(ns);
        next->rebuild_shape();
        cur = next;
    }
    TowerMap full(src, cur, u_img);
    return {cur, full};
}

// append a totally ramified step defined by a monic single-slope polynomial
// G (slope h/b, gcd(h,b)=1, deg G = b) over K.  Coefficients with postponed
// denominators are cleared by rescaling the generator: with x' = p^k x the
// defining polynomial becomes p^{k b} G(x'/p^k), still single-slope with
// h' = h + k e b.  Returns (tower, inclusion map, k) — the root of G is
// step_gen * p^{-k}.
inline std::tuple<std::shared_ptr<Tower>, TowerMap, long> extend_tower_step(
    const std::shared_ptr<const Tower>& K, const TPoly& G, long h, long b) {
    assert(G.degree() == b);
    long k = 0;
    for (const auto& c : G.c) k = std::max(k, c.den);
    Tower::Step ns;
    ns.b = b;
    ns.h = h + k * K->e() * b;
    for (long i = 0; i < b; ++i) {
        TElt ci = G.c[i];
        // multiply by p^{k(b-i)}
        Int f = int_pow(K->p, static_cast<unsigned long>(k * (b - i)));
        ci = K->mul_scalar(ci, f);
        K->normalize(ci);
        if (ci.den != 0) throw detail::need_more_precision{};
        ns.G.push_back(ci.c);
    }
    auto next = std::make_shared<Tower>(*K);
    next->steps.push_back(ns);
    next->rebuild_shape();
    TowerMap inc(TowerShape::of(*K), next, next->unram_gen());
    return {next, inc, k};
}

// ---- linear algebra over a tower: minimal polynomial of an algebra element ----

// Minimal polynomial over K of the element W of K[x]/(G); returns monic
// coefficients (constant first).  Gated by the caller.
inline std::vector<TElt> algebra_minpoly(const Tower& K, const TPoly& G, const TPoly& W) {
    long n = G.degree();
    // rows: power W^j as coefficient vector (length n) over K
    std::vector<std::vector<TElt>> reduced;   // echelon rows
    std::vector<long> pivots;
    std::vector<std::vector<TElt>> combos;    // row = sum combos[r][j] * W^j
    TPoly cur;
    cur.c = {K.one()};
    for (long j = 0; j <= n; ++j) {
        std::vector<TElt> v(n, K.zero());
        for (long i = 0; i <= cur.degree() && i < n; ++i) v[i] = cur.c[i];
        std::vector<TElt> combo(n + 1, K.zero());
        combo[j] = K.one();
        // reduce against echelon rows
        for (std::size_t r = 0; r < reduced.size(); ++r) {
            TElt factor = v[pivots[r]];
            if (K.is_zero(factor)) continue;
            for (long i = 0; i < n; ++i) {
                v[i] = K.sub(v[i], K.mul(factor, reduced[r][i]));
                K.normalize(v[i]);
            }
            for (long i = 0; i <= n; ++i) {
                combo[i] = K.sub(combo[i], K.mul(factor, combos[r][i]));
                K.normalize(combo[i]);
            }
        }
        // find pivot: minimal valuation coordinate
        long piv = -1, best = VAL_INF;
        for (long i = 0; i < n; ++i) {
            long w = K.val(v[i]);
            if (w < best) {
                best = w;
                piv = i;
            }
        }
        if (piv < 0 || best >= K.e() * (K.N / 2)) {
            // dependence: W^j = -sum_{i<j} combo[i] W^i (combo[j] = 1)
            std::vector<TElt> mp(j + 1, K.zero());
            for (long i = 0; i < j; ++i) mp[i] = combo[i];
            mp[j] = K.one();
            return mp;
        }
        TElt inv = K.inv(v[piv]);
        for (long i = 0; i < n; ++i) {
            v[i] = K.mul(v[i], inv);
            K.normalize(v[i]);
            if (v[i].den > K.N / 3) throw detail::need_more_precision{};
        }
        for (long i = 0; i <= n; ++i) {
            combo[i] = K.mul(combo[i], inv);
            K.normalize(combo[i]);
            if (combo[i].den > K.N / 3) throw detail::need_more_precision{};
        }
        reduced.push_back(std::move(v));
        combos.push_back(std::move(combo));
        pivots.push_back(piv);
        // next power
        if (j < n) {
            TPoly nxt = tp_mul(K, cur, W);
            TPoly q;
            tp_divrem_monic(K, nxt, G, q, cur);
        }
    }
    // W satisfies a degree <= n relation always; reaching here is a
    // precision artifact
    throw detail::need_more_precision{};
}

// ---- the resolver ----

struct RLeaf {
    std::shared_ptr<const Tower> K;
    TElt root;      // a root of the input polynomial, in K
    TowerMap from_base;
};

namespace detail_resolve {

struct Budget {
    long depth;
    void spend() {
        if (--depth < 0) throw precision_exhausted("cluster recursion exceeded depth budget");
    }
};

inline long hensel_target(const Tower& K) { return K.e() * K.N - 4 * K.e(); }

std::vector<RLeaf> resolve(const std::shared_ptr<const Tower>& K, TPoly G, Budget& budget);

// split G by the leaves of the minimal polynomial of W = pi^h / x^b
inline std::vector<RLeaf> w_transform_route(const std::shared_ptr<const Tower>& K, const TPoly& G,
                                            long h, long b, Budget& budget) {
    budget.spend();
    const Tower& Kr = *K;
    // x must be invertible mod G
    if (Kr.val(G.c[0]) >= VAL_INF) throw detail::need_more_precision{};
    // W = pi^h * inv(x^b) mod G
    TPoly xb;
    xb.c.assign(b + 1, Kr.zero());
    xb.c[b] = Kr.one();
    TPoly U, V;
    TElt r;
    tp_bezout(Kr, xb, G, U, V, r);  // U x^b + V G = r
    TElt rinv = Kr.inv(r);
    TPoly W = tp_scale(Kr, Kr.mul(Kr.pi_power(h), rinv), U);
    {
        TPoly q;
        tp_divrem_monic(Kr, W, G, q, W);
    }
    std::vector<TElt> mp = algebra_minpoly(Kr, G, W);
    long degM = static_cast<long>(mp.size()) - 1;
    if (degM < 1) throw detail::need_more_precision{};
    bool full_resolve_fallback = false;
    // gate: M(W) == 0 mod G at precision
    {
        TPoly acc;
        acc.c = {Kr.zero()};
        for (std::size_t i = mp.size(); i-- > 0;) {
            acc = tp_mul(Kr, acc, W);
            TPoly q;
            tp_divrem_monic(Kr, acc, G, q, acc);
            TPoly cst;
            cst.c = {mp[i]};
            acc = tp_add(Kr, acc, cst);
        }
        tp_trim(Kr, acc);
        long cv = tp_content_val(Kr, acc);
        if (cv < Kr.e() * (Kr.N / 2)) throw detail::need_more_precision{};
    }
    if (degM == 1) {
        // all values of W coincide in K: the shifted fallback handles this
        // degenerate collision; signal the caller
        throw detail::need_more_precision{};
    }
    TPoly M;
    M.c = mp;
    auto wleaves = resolve(K, M, budget);
    std::vector<RLeaf> out;
    for (auto& wl : wleaves) {
        const auto& Kw = wl.K;
        TPoly Gw = wl.from_base.apply(G);
        // D = x^b - pi^h * w^{-1}: the matching slice of G is gcd(G, D)
        TPoly D;
        D.c.assign(b + 1, Kw->zero());
        D.c[b] = Kw->one();
        TElt winv = Kw->inv(wl.root);
        D.c[0] = Kw->neg(Kw->mul(Kw->pi_power(h), winv));
        Kw->normalize(D.c[0]);
        TPoly Gj;
        bool gcd_ok = true;
        try {
            Gj = tp_gcd_candidate(*Kw, Gw, D);
            if (Gj.degree() < 1) gcd_ok = false;
            // progress requires a proper slice or a proper base extension
            if (Gj.degree() == Gw.degree() && Kw->n() == K->n()) gcd_ok = false;
            if (gcd_ok) {
                TPoly q, rem;
                tp_divrem_monic(*Kw, Gw, Gj, q, rem);
                tp_trim(*Kw, rem);
                if (!rem.c.empty() && tp_content_val(*Kw, rem) < Kw->e() * (Kw->N / 2))
                    gcd_ok = false;
            }
        } catch (const detail::need_more_precision&) {
            gcd_ok = false;
        }
        if (!gcd_ok) {
            // the p-adic Euclid could not isolate the slice; resolve the
            // whole cluster over an extension instead (conjugate leaves
            // deduplicate later, overextended leaves are repaired during
            // assembly)
            full_resolve_fallback = true;
            break;
        }
        auto sub = resolve(Kw, Gj, budget);
        for (auto& l : sub) {
            l.from_base = wl.from_base.then(l.from_base);
            out.push_back(std::move(l));
        }
    }
    if (full_resolve_fallback) {
        out.clear();
        const RLeaf* pick = nullptr;
        for (auto& wl : wleaves)
            if (!pick || wl.K->n() > pick->K->n()) pick = &wl;
        if (!pick || pick->K->n() == K->n())
            throw detail::need_more_precision{};  // no extension to work over
        TPoly Gw = pick->from_base.apply(G);
        auto sub = resolve(pick->K, Gw, budget);
        for (auto& l : sub) {
            l.from_base = pick->from_base.then(l.from_base);
            out.push_back(std::move(l));
        }
    }
    return out;
}

inline std::vector<RLeaf> resolve(const std::shared_ptr<const Tower>& K, TPoly G, Budget& budget) {
    const Tower& Kr = *K;
    tp_trim(Kr, G);
    assert(!G.c.empty());
    assert(Kr.equal(G.c.back(), Kr.one()));
    if (G.degree() == 1) {
        RLeaf leaf{K, Kr.neg(G.c[0]), TowerMap::identity(K)};
        return {leaf};
    }
    budget.spend();

    // reduction and its factorization
    FqPoly Gbar = tp_reduce(Kr, G);
    assert(Gbar.degree() == G.degree());
    auto fac = fq_factor(Gbar, Kr.res);
    // group by distinct irreducible
    if (fac.size() >= 2) {
        std::vector<FqPoly> blocks;
        for (auto& [psi, m] : fac) {
            FqPoly blk = FqPoly::constant(Kr.res.one());
            for (unsigned i = 0; i < m; ++i) blk = fq_mul(blk, psi, Kr.res);
            blocks.push_back(blk);
        }
        auto lifted = tp_hensel_multi(Kr, G, blocks, hensel_target(Kr));
        std::vector<RLeaf> out;
        for (auto& piece : lifted) {
            auto sub = resolve(K, piece, budget);
            for (auto& l : sub) out.push_back(std::move(l));
        }
        return out;
    }
    const FqPoly& psi = fac[0].first;
    unsigned m = fac[0].second;
    long d = psi.degree();

    if (d > 1) {
        // grow the unramified bottom; over the new base psi splits and the
        // conjugate blocks carry conjugate factors: keep one representative
        auto [K2, map] = rebase_tower(K, d);
        TPoly G2 = map.apply(G);
        // embed psi's residue coefficients through the lifted map
        FqPoly psi2;
        for (const auto& c : psi.c)
            psi2.c.push_back(K2->residue(map.apply(Kr.from_residue(c))));
        psi2.trim();
        auto roots = fq_roots(psi2, K2->res);
        if (roots.empty()) throw error("resolve: residue root vanished after rebase");
        std::sort(roots.begin(), roots.end(),
                  [](const FpPoly& a, const FpPoly& b) { return a.coeffs() < b.coeffs(); });
        FqCtx::Elt rho = roots.front();
        if (m == 1) {
            // unramified leaf: Newton root above rho
            TElt x0 = K2->from_residue(rho);
            TElt root = tp_newton_root(*K2, G2, x0, hensel_target(*K2));
            RLeaf leaf{K2, root, map};
            return {leaf};
        }
        // split the rho-block from the rest, keep the block
        FqPoly lin;
        lin.c = {K2->res.neg(rho), K2->res.one()};
        FqPoly blk = FqPoly::constant(K2->res.one());
        for (unsigned i = 0; i < m; ++i) blk = fq_mul(blk, lin, K2->res);
        FqPoly Gbar2 = tp_reduce(*K2, G2);
        FqPoly rest, remchk;
        fq_divrem(Gbar2, blk, K2->res, rest, remchk);
        if (!remchk.is_zero()) throw error("resolve: block division failed");
        std::vector<FqPoly> blocks{blk, rest};
        auto lifted = tp_hensel_multi(*K2, G2, blocks, hensel_target(*K2));
        auto sub = resolve(K2, lifted[0], budget);
        std::vector<RLeaf> out;
        for (auto& l : sub) {
            l.from_base = map.then(l.from_base);
            out.push_back(std::move(l));
        }
        return out;
    }

    // d == 1
    FqCtx::Elt rho = Kr.res.neg(psi.c[0]);
    if (m == 1) {
        TElt root = tp_newton_root(Kr, G, Kr.from_residue(rho), hensel_target(Kr));
        RLeaf leaf{K, root, TowerMap::identity(K)};
        return {leaf};
    }
    // center the cluster at a lift of rho
    TElt c0 = Kr.from_residue(rho);
    bool shifted = !Kr.res.is_zero(rho);
    if (shifted) G = tp_taylor_shift(Kr, G, c0);

    auto shift_back = [&](std::vector<RLeaf> leaves) {
        if (!shifted) return leaves;
        for (auto& l : leaves) {
            TElt cc = l.from_base.apply(c0);
            l.root = l.K->add(l.root, cc);
        }
        return leaves;
    };

    // exact/Hensel root at the center?
    {
        long v0 = Kr.val(G.c[0]);
        long v1 = Kr.val(G.c[1]);
        if (v0 >= VAL_INF) {
            if (v1 >= VAL_INF) throw detail::need_more_precision{};
            // x divides G at precision: extract the root 0
            TPoly lin;
            lin.c = {Kr.zero(), Kr.one()};
            TPoly q, rem;
            tp_divrem_monic(Kr, G, lin, q, rem);
            auto sub = resolve(K, q, budget);
            RLeaf zero_leaf{K, Kr.zero(), TowerMap::identity(K)};
            sub.push_back(zero_leaf);
            return shift_back(std::move(sub));
        }
        if (v1 < VAL_INF && v0 > 2 * v1) {
            TElt root = tp_newton_root(Kr, G, Kr.zero(), hensel_target(Kr));
            TPoly lin;
            lin.c = {Kr.neg(root), Kr.one()};
            TPoly q, rem;
            tp_divrem_monic(Kr, G, lin, q, rem);
            auto sub = resolve(K, q, budget);
            RLeaf leaf{K, root, TowerMap::identity(K)};
            sub.push_back(leaf);
            return shift_back(std::move(sub));
        }
    }

    auto segs = tp_newton_polygon(Kr, G);
    assert(!segs.empty());
    // guard against decisions beyond headroom
    for (const auto& s : segs)
        if (s.h > Kr.e() * (Kr.N - 6)) throw detail::need_more_precision{};

    if (segs.size() == 1) {
        long h = segs[0].h, b = segs[0].b;
        if (b == G.degree()) {
            // totally ramified certificate
            auto [K2, inc, kshift] = extend_tower_step(K, G, h, b);
            TElt root = K2->step_gen(K2->steps.size() - 1);
            if (kshift > 0) root = K2->shift_den(root, kshift);
            RLeaf leaf{K2, root, inc};
            return shift_back({leaf});
        }
        if (b == 1) {
            // rescale x -> pi^h x and re-run
            TPoly G2 = tp_rescale_root(Kr, G, h);
            auto sub = resolve(K, G2, budget);
            for (auto& l : sub) {
                TElt ph = l.from_base.apply(Kr.pi_power(h));
                l.root = l.K->mul(l.root, ph);
                l.K->normalize(l.root);
            }
            return shift_back(std::move(sub));
        }
        return shift_back(w_transform_route(K, G, h, b, budget));
    }
    // several slopes: if the shallowest is an integer, rescaling by it makes
    // the shallow segment's roots units and the rest reduce to a power of x;
    // the reduction then splits by Hensel
    if (segs.back().b == 1) {
        long h = segs.back().h;
        TPoly G2 = tp_rescale_root(Kr, G, h);
        auto sub = resolve(K, G2, budget);
        for (auto& l : sub) {
            TElt ph = l.from_base.apply(Kr.pi_power(h));
            l.root = l.K->mul(l.root, ph);
            l.K->normalize(l.root);
        }
        return shift_back(std::move(sub));
    }
    // otherwise transform by the steepest slope
    return shift_back(w_transform_route(K, G, segs.front().h, segs.front().b, budget));
}

}  // namespace detail_resolve

// ---- public surface: LocalAlgebra ----

struct LocalFactor {
    std::shared_ptr<const Tower> field;
    TElt theta;               // root of the curve polynomial F in this factor
    long e = 1, f = 1, n = 1;
    std::vector<Int> minpoly;  // of the monicized root, mod p^N, constant first
};

struct LocalAlgebra {
    Int p;
    long N = 0;
    IntPoly F;  // the (possibly non-monic) input polynomial
    std::vector<LocalFactor> factors;

    long total_degree() const {
        long s = 0;
        for (const auto& f : factors) s += f.n;
        return s;
    }
    // images of g(theta) in every factor
    std::vector<TElt> embed(const RatPoly& g) const {
        std::vector<TElt> out;
        out.reserve(factors.size());
        for (const auto& fac : factors) {
            const Tower& K = *fac.field;
            TElt acc = K.zero();
            for (std::size_t i = g.coeffs().size(); i-- > 0;) {
                acc = K.mul(acc, fac.theta);
                acc = K.add(acc, K.from_rat(g[i]));
                K.normalize(acc);
            }
            out.push_back(acc);
        }
        return out;
    }
};

namespace detail_resolve {

// minimal polynomial of the leaf root over Q_p by valuation-pivoted
// elimination on the power matrix, with degree discovery: the first power
// dependent on its predecessors at precision determines the degree.  The
// degree can be smaller than the tower's when a fallback resolved a cluster
// over a larger field than the root generates; callers repair that case.
inline std::vector<Int> leaf_minpoly(const RLeaf& leaf) {
    const Tower& K = *leaf.K;
    long n = K.n();
    std::vector<TElt> pw(n + 1);
    pw[0] = K.one();
    for (long j = 1; j <= n; ++j) {
        pw[j] = K.mul(pw[j - 1], leaf.root);
        K.normalize(pw[j]);
    }
    long D = 0;
    for (auto& x : pw) D = std::max(D, x.den);
    if (D > K.N / 3) throw detail::need_more_precision{};
    long zero_thresh = (2 * K.N) / 3;  // p-valuation treated as zero
    std::vector<std::vector<Int>> M(n, std::vector<Int>(n + 1, Int(0)));
    for (long j = 0; j <= n; ++j) {
        Int f = int_pow(K.p, static_cast<unsigned long>(D - pw[j].den));
        for (long r = 0; r < n; ++r) {
            Int v = pw[j].c[r] * f % K.pN;
            if (v < 0) v += K.pN;
            M[r][j] = v;
        }
    }
    long loss = 0;
    std::vector<long> piv_col_of_row(n, -1);
    long row = 0;
    for (long c = 0; c <= n; ++c) {
        long best = -1, bestv = VAL_INF;
        for (long r = row; r < n; ++r) {
            if (M[r][c] == 0) continue;
            long v = valuation(M[r][c], K.p);
            if (v < bestv) {
                bestv = v;
                best = r;
            }
        }
        if (best < 0 || bestv >= zero_thresh) {
            // dependence: power c is a combination of the pivot powers
            std::vector<Int> mp(c + 1, Int(0));
            mp[c] = 1;
            for (long r = 0; r < row; ++r) {
                long pc = piv_col_of_row[r];
                if (pc != r) throw detail::need_more_precision{};  // powers must pivot in order
                Int piv = M[r][pc];
                long v = valuation(piv, K.p);
                if (piv != int_pow(K.p, static_cast<unsigned long>(v)))
                    throw detail::need_more_precision{};
                Int rhs = M[r][c];
                if (v > 0) {
                    Int pv = int_pow(K.p, static_cast<unsigned long>(v));
                    if (!mpz_divisible_p(rhs.get_mpz_t(), pv.get_mpz_t()))
                        throw detail::need_more_precision{};
                    rhs /= pv;
                }
                rhs = -rhs % K.pN;
                if (rhs < 0) rhs += K.pN;
                mp[pc] = rhs;
            }
            return mp;
        }
        if (c == n) break;  // full-degree relation extracted below
        std::swap(M[row], M[best]);
        loss += bestv;
        if (loss > K.N / 3) throw detail::need_more_precision{};
        Int pv = int_pow(K.p, static_cast<unsigned long>(bestv));
        Int unit = M[row][c] / pv;
        Int uinv;
        mpz_invert(uinv.get_mpz_t(), unit.get_mpz_t(), K.pN.get_mpz_t());
        for (long j2 = c; j2 <= n; ++j2) M[row][j2] = M[row][j2] * uinv % K.pN;
        for (long r = 0; r < n; ++r) {
            if (r == row || M[r][c] == 0) continue;
            if (!mpz_divisible_p(M[r][c].get_mpz_t(), pv.get_mpz_t()))
                throw detail::need_more_precision{};
            Int factor = M[r][c] / pv;
            for (long j2 = c; j2 <= n; ++j2) {
                M[r][j2] = (M[r][j2] - factor * M[row][j2]) % K.pN;
                if (M[r][j2] < 0) M[r][j2] += K.pN;
            }
        }
        piv_col_of_row[row] = c;
        ++row;
    }
    // all n rows pivoted on columns 0..n-1: the degree is exactly n
    std::vector<Int> mp(n + 1, Int(0));
    mp[n] = 1;
    for (long r = 0; r < n; ++r) {
        long c = piv_col_of_row[r];
        if (c != r) throw detail::need_more_precision{};
        Int piv = M[r][c];
        long v = valuation(piv, K.p);
        if (piv != int_pow(K.p, static_cast<unsigned long>(v)))
            throw detail::need_more_precision{};
        Int rhs = M[r][n];
        if (v > 0) {
            Int pv = int_pow(K.p, static_cast<unsigned long>(v));
            if (!mpz_divisible_p(rhs.get_mpz_t(), pv.get_mpz_t()))
                throw detail::need_more_precision{};
            rhs /= pv;
        }
        rhs = -rhs % K.pN;
        if (rhs < 0) rhs += K.pN;
        mp[c] = rhs;
    }
    return mp;
}

struct AssembledLeaf {
    std::shared_ptr<const Tower> K;
    TElt root;
    std::vector<Int> mp;
};

// fix leaves whose tower is strictly larger than the field the root
// generates: re-resolve the minimal polynomial from scratch
inline AssembledLeaf assemble_leaf(const Int& p, long N, const RLeaf& leaf, int depth) {
    std::vector<Int> mp = leaf_minpoly(leaf);
    long k = static_cast<long>(mp.size()) - 1;
    if (k == leaf.K->n()) return {leaf.K, leaf.root, mp};
    if (depth > 4) throw detail::need_more_precision{};
    auto base = std::make_shared<Tower>(Tower::base_qp(p, N));
    TPoly M;
    M.c.reserve(mp.size());
    for (const auto& c : mp) M.c.push_back(base->from_int(c));
    Budget budget{16 * k + 64};
    auto leaves = resolve(base, M, budget);
    for (auto& l2 : leaves) {
        if (l2.K->n() != k) continue;
        AssembledLeaf a2 = assemble_leaf(p, N, l2, depth + 1);
        if (static_cast<long>(a2.mp.size()) - 1 == k) return a2;
    }
    throw detail::need_more_precision{};
}

}  // namespace detail_resolve

// factor F over Q_p at a fixed working precision; throws need_more_precision
inline LocalAlgebra qp_factor_at(const IntPoly& F, const Int& p, long N) {
    assert(F.degree() >= 1);
    long n = F.degree();
    // monicize: Fm(y) = lc^{n-1} F(y/lc) with y = lc x; the leading term is
    // F_n lc^{n-1} / lc^n = 1 and lower coefficients are F_i lc^{n-1-i}
    Int lc = F.leading();
    std::vector<Int> fm(n + 1);
    fm[n] = 1;
    for (long i = 0; i < n; ++i) fm[i] = F[i] * int_pow(lc, static_cast<unsigned long>(n - 1 - i));
    IntPoly Fm(std::move(fm));
    assert(Fm.degree() == n);
    assert(Fm.leading() == 1);

    auto base = std::make_shared<Tower>(Tower::base_qp(p, N));
    TPoly G;
    G.c.reserve(n + 1);
    for (long i = 0; i <= n; ++i) G.c.push_back(base->from_int(Fm[i]));

    detail_resolve::Budget budget{16 * n + 64};
    auto leaves = detail_resolve::resolve(base, G, budget);

    // assemble: minpolys (with overextension repair), dedup, global gate
    using Packed = detail_resolve::AssembledLeaf;
    std::vector<Packed> packed;
    for (auto& l : leaves) packed.push_back(detail_resolve::assemble_leaf(p, N, l, 0));
    // dedup at reduced precision
    long gate_N = (2 * N) / 3;
    Int gate_mod = int_pow(p, static_cast<unsigned long>(gate_N));
    auto key_of = [&](const std::vector<Int>& mp) {
        std::vector<Int> k(mp.size());
        for (std::size_t i = 0; i < mp.size(); ++i) k[i] = mp[i] % gate_mod;
        return k;
    };
    std::vector<Packed> uniq;
    std::vector<std::vector<Int>> seen;
    for (auto& pk : packed) {
        auto key = key_of(pk.mp);
        bool dup = false;
        for (auto& s : seen)
            if (s == key) {
                dup = true;
                break;
            }
        if (!dup) {
            seen.push_back(key);
            uniq.push_back(pk);
        }
    }
    long total = 0;
    for (auto& pk : uniq) total += static_cast<long>(pk.mp.size()) - 1;
    if (total != n) throw detail::need_more_precision{};
    // product gate
    {
        std::vector<Int> prod{Int(1)};
        for (auto& pk : uniq) {
            std::vector<Int> nxt(prod.size() + pk.mp.size() - 1, Int(0));
            for (std::size_t i = 0; i < prod.size(); ++i)
                for (std::size_t j = 0; j < pk.mp.size(); ++j)
                    nxt[i + j] = (nxt[i + j] + prod[i] * pk.mp[j]) % gate_mod;
            prod = std::move(nxt);
        }
        for (long i = 0; i <= n; ++i) {
            Int want = Fm[i] % gate_mod;
            if (want < 0) want += gate_mod;
            Int got = prod[i] % gate_mod;
            if (got < 0) got += gate_mod;
            if (want != got) throw detail::need_more_precision{};
        }
    }

    LocalAlgebra alg;
    alg.p = p;
    alg.N = N;
    alg.F = F;
    for (auto& pk : uniq) {
        LocalFactor lf;
        lf.field = pk.K;
        lf.e = pk.K->e();
        lf.f = pk.K->f0();
        lf.n = lf.e * lf.f;
        lf.minpoly = pk.mp;
        // theta = (monicized root) / lc
        const Tower& K = *pk.K;
        TElt th = K.mul(pk.root, K.from_rat(Rat(1) / Rat(lc)));
        K.normalize(th);
        lf.theta = th;
        alg.factors.push_back(std::move(lf));
    }
    std::sort(alg.factors.begin(), alg.factors.end(),
              [](const LocalFactor& a, const LocalFactor& b) {
                  if (a.n != b.n) return a.n < b.n;
                  return a.minpoly < b.minpoly;
              });
    return alg;
}

// driver with precision doubling
inline LocalAlgebra qp_factor(const IntPoly& F, const Int& p, long vdisc_hint = -1, long N0 = 0) {
    long vdisc = vdisc_hint;
    if (vdisc < 0) {
        Int d = poly_discriminant(F);
        assert(d != 0);
        vdisc = valuation(d, p);
    }
    long N = N0 > 0 ? N0 : std::max<long>(24, 2 * vdisc + F.degree() / 8 + 10);
    for (int attempt = 0; attempt < 7; ++attempt) {
        try {
            return qp_factor_at(F, p, N);
        } catch (const detail::need_more_precision&) {
            N *= 2;
        }
    }
    throw precision_exhausted("qp_factor: precision exhausted");
}

}  // namespace obstruct
