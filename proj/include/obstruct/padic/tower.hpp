#pragma once

// Finite extensions of Q_p represented as explicit towers: an unramified
// bottom U = Q_p[u]/(Phi) followed by "pure slope" steps
// K_j = K_{j-1}[x_j]/(G_j), where each G_j is monic of degree b_j whose
// Newton polygon is a single segment of slope h_j/b_j with gcd(h_j,b_j) = 1.
// In such a chain every valuation is exact (the slope terms are distinct
// mod b_j), the residue field is the bottom's, and an explicit uniformizer
// exists as a monomial in the step generators.
//
// Elements are flat coefficient vectors mod p^N over the monomial basis
// u^{i0} x_1^{i1} ... x_k^{ik}, plus a global denominator exponent: the
// value is c / p^den.

#include <cassert>
#include <climits>
#include <memory>
#include <vector>

#include "obstruct/arith/fppoly.hpp"
#include "obstruct/arith/intfactor.hpp"
#include "obstruct/arith/intpoly.hpp"
#include "obstruct/errors.hpp"

namespace obstruct {

inline constexpr long VAL_INF = LONG_MAX / 4;  // "zero at working precision"

struct TElt {
    std::vector<Int> c;  // flat coefficients, reduced into [0, p^N)
    long den = 0;        // value = c / p^den
};

class Tower {
public:
    Int p;
    long N;  // coefficient precision: coefficients live mod p^N
    Int pN;
    FqCtx res;    // residue field F_p[u]/(phi)
    IntPoly Phi;  // monic integral lift of phi

    struct Step {
        std::vector<std::vector<Int>> G;  // monic: G[0..b], each a flat sub-element
        long h = 0, b = 1;                // single slope h/b, gcd(h,b) = 1
    };
    std::vector<Step> steps;

    Tower(Int p_, long N_, FqCtx res_, IntPoly Phi_)
        : p(std::move(p_)), N(N_), res(std::move(res_)), Phi(std::move(Phi_)) {
        pN = int_pow(p, static_cast<unsigned long>(N));
        rebuild_shape();
    }

    static Tower base_qp(const Int& p, long N) {
        Fp F(p.get_ui());
        FpPoly phi = FpPoly::x_power(1);  // u = 0; residue field F_p itself
        return Tower(p, N, FqCtx(F, phi), IntPoly({0, 1}));
    }

    long f0() const { return res.f; }
    long e() const { return e_; }
    long n() const { return n_; }
    long vp2e() const { return p == 2 ? e_ : 0; }  // absolute ramification of 2

    void rebuild_shape() {
        dims_.clear();
        dims_.push_back(f0());
        for (const auto& s : steps) dims_.push_back(s.b);
        strides_.assign(dims_.size() + 1, 1);
        for (std::size_t i = 0; i < dims_.size(); ++i) strides_[i + 1] = strides_[i] * dims_[i];
        n_ = strides_.back();
        e_ = 1;
        for (const auto& s : steps) e_ *= s.b;
        pi_cache_.reset();
        pi_inv_cache_.reset();
    }

    // ---- element constructors ----
    TElt zero() const { return TElt{std::vector<Int>(n_, Int(0)), 0}; }
    TElt one() const {
        TElt r = zero();
        r.c[0] = 1;
        return r;
    }
    TElt from_int(const Int& v) const {
        TElt r = zero();
        r.c[0] = v % pN;
        if (r.c[0] < 0) r.c[0] += pN;
        return r;
    }
    TElt from_rat(const Rat& v) const {
        if (v == 0) return zero();
        Int num = v.get_num(), den = v.get_den();
        long vd = valuation(den, p);
        Int den_unit = den / int_pow(p, static_cast<unsigned long>(vd));
        Int inv;
        mpz_invert(inv.get_mpz_t(), den_unit.get_mpz_t(), pN.get_mpz_t());
        TElt r = zero();
        r.c[0] = (num % pN) * inv % pN;
        if (r.c[0] < 0) r.c[0] += pN;
        r.den = vd;
        return r;
    }
    // lift of a residue-field element
    TElt from_residue(const FqCtx::Elt& a) const {
        TElt r = zero();
        for (long i = 0; i < f0(); ++i) r.c[i] = Int(static_cast<unsigned long>(a[i]));
        return r;
    }
    // generator of step j (0-based among steps)
    TElt step_gen(std::size_t j) const {
        assert(j < steps.size());
        TElt r = zero();
        r.c[strides_[j + 1]] = 1;
        return r;
    }
    // u, the unramified generator
    TElt unram_gen() const {
        TElt r = zero();
        if (f0() == 1) return from_residue(res.gen());
        r.c[1] = 1;
        return r;
    }
    // inclusion of an element of the sub-tower with the last step dropped
    TElt from_sub(const TElt& x) const {
        assert(!steps.empty());
        long m = strides_[dims_.size() - 1];
        assert(static_cast<long>(x.c.size()) == m);
        TElt r = zero();
        for (long i = 0; i < m; ++i) r.c[i] = x.c[i];
        r.den = x.den;
        return r;
    }

    // ---- basic arithmetic ----
    void reduce(TElt& x) const {
        for (auto& v : x.c) {
            v %= pN;
            if (v < 0) v += pN;
        }
    }
    bool is_zero(const TElt& x) const {
        for (const auto& v : x.c)
            if (v % pN != 0) return false;
        return true;
    }
    TElt add(const TElt& a, const TElt& b) const {
        TElt x = a, y = b;
        align(x, y);
        for (long i = 0; i < n_; ++i) {
            x.c[i] += y.c[i];
            if (x.c[i] >= pN) x.c[i] -= pN;
        }
        return x;
    }
    TElt sub(const TElt& a, const TElt& b) const {
        TElt x = a, y = b;
        align(x, y);
        for (long i = 0; i < n_; ++i) {
            x.c[i] -= y.c[i];
            if (x.c[i] < 0) x.c[i] += pN;
        }
        return x;
    }
    TElt neg(const TElt& a) const {
        TElt x = a;
        for (auto& v : x.c) {
            if (v != 0) v = pN - v;
        }
        return x;
    }
    TElt mul(const TElt& a, const TElt& b) const {
        TElt r;
        r.c = mul_level(a.c, b.c, static_cast<long>(dims_.size()) - 1);
        r.den = a.den + b.den;
        return r;
    }
    TElt mul_scalar(const TElt& a, const Int& s) const {
        TElt r = a;
        Int ss = s % pN;
        if (ss < 0) ss += pN;
        for (auto& v : r.c) v = v * ss % pN;
        return r;
    }
    // divide by p (as a denominator shift)
    TElt shift_den(const TElt& a, long k) const {
        TElt r = a;
        r.den += k;
        return r;
    }
    // strip common powers of p between coefficients and den
    void normalize(TElt& x) const {
        while (x.den > 0) {
            bool all = true;
            for (const auto& v : x.c)
                if (v != 0 && !mpz_divisible_p(v.get_mpz_t(), p.get_mpz_t())) {
                    all = false;
                    break;
                }
            if (!all) break;
            for (auto& v : x.c) v /= p;
            --x.den;
        }
        if (x.den < 0) {
            Int f = int_pow(p, static_cast<unsigned long>(-x.den));
            for (auto& v : x.c) v = v * f % pN;
            x.den = 0;
        }
    }
    TElt pow(TElt a, long k) const {
        if (k < 0) {
            a = inv(a);
            k = -k;
        }
        TElt r = one();
        while (k) {
            if (k & 1) r = mul(r, a);
            a = mul(a, a);
            k >>= 1;
        }
        return r;
    }

    bool equal(const TElt& a, const TElt& b) const { return is_zero(sub(a, b)); }

    // ---- valuation (in pi-units, exact), residue, uniformizer ----

    // valuation of the integral part only (ignores den)
    long val_integral(const TElt& x) const { return val_level(x.c, static_cast<long>(dims_.size()) - 1); }
    // full valuation; VAL_INF when zero at precision
    long val(const TElt& x) const {
        long v = val_integral(x);
        if (v >= VAL_INF) return VAL_INF;
        return v - e_ * x.den;
    }

    TElt uniformizer() const {
        build_pi();
        return *pi_cache_;
    }
    TElt uniformizer_inv() const {
        build_pi();
        return *pi_inv_cache_;
    }
    TElt pi_power(long k) const {
        if (k >= 0) return pow(uniformizer(), k);
        return pow(uniformizer_inv(), -k);
    }

    // unit part x * pi^{-val(x)}
    TElt unit_part(const TElt& x) const {
        long w = val(x);
        if (w >= VAL_INF) throw detail::need_more_precision{};
        TElt u = mul(x, pi_power(-w));
        normalize(u);
        return u;
    }

    // residue in F_q of an element with val >= 0 (val > 0 gives 0)
    FqCtx::Elt residue(const TElt& x) const {
        long w = val(x);
        if (w >= VAL_INF) return res.zero();  // zero at precision: residue 0
        assert(w >= 0);
        if (w > 0) return res.zero();
        // the zero-monomial block carries the residue; coefficients of the
        // bottom u-poly must each be divisible by p^den
        std::vector<std::uint64_t> cc(f0());
        Int pd = int_pow(p, static_cast<unsigned long>(x.den));
        for (long i = 0; i < f0(); ++i) {
            Int v = x.c[i];
            if (!mpz_divisible_p(v.get_mpz_t(), pd.get_mpz_t()))
                throw detail::need_more_precision{};
            Int q = v / pd;
            q %= p;
            cc[i] = q.get_ui();
        }
        FpPoly r((std::vector<std::uint64_t>(cc)));
        return r;
    }

    // multiplicative inverse; x must be nonzero at precision
    TElt inv(const TElt& x) const {
        long w = val(x);
        if (w >= VAL_INF) throw detail::need_more_precision{};
        if (w == 0 && x.den == 0) return inv_unit(x);
        // x = pi^w * u: x^{-1} = pi^{-w} * u^{-1}
        TElt u = unit_part(x);
        TElt ui = inv_unit(u);
        TElt r = mul(ui, pi_power(-w));
        normalize(r);
        return r;
    }

    // ---- reduction of a *polynomial over the tower* mod pi (used by the
    // factorization engine): the residue of each coefficient ----

    // effective precision guard: decisions about valuations up to `need`
    // pi-digits require e*N - e*den headroom
    void require_headroom(const TElt& x, long need) const {
        if (e_ * (N - x.den) < need + 4 * e_) throw detail::need_more_precision{};
    }

private:
    std::vector<long> dims_;     // {f0, b1, ..., bk}
    std::vector<long> strides_;  // prefix products, strides_[i] = size of level i-1 ring
    long e_ = 1, n_ = 1;
    mutable std::shared_ptr<TElt> pi_cache_, pi_inv_cache_;

    void align(TElt& x, TElt& y) const {
        if (x.den == y.den) return;
        if (x.den < y.den) {
            Int f = int_pow(p, static_cast<unsigned long>(y.den - x.den));
            for (auto& v : x.c) v = v * f % pN;
            x.den = y.den;
        } else {
            Int f = int_pow(p, static_cast<unsigned long>(x.den - y.den));
            for (auto& v : y.c) v = v * f % pN;
            y.den = x.den;
        }
    }

    // multiply two level-j elements (flat arrays of size strides_[j+1])
    std::vector<Int> mul_level(const std::vector<Int>& a, const std::vector<Int>& b, long j) const {
        long m = strides_[j + 1];
        assert(static_cast<long>(a.size()) == m && static_cast<long>(b.size()) == m);
        if (j == 0) {
            // u-polys mod Phi
            long d = dims_[0];
            std::vector<Int> conv(2 * d - 1, Int(0));
            for (long i = 0; i < d; ++i) {
                if (a[i] == 0) continue;
                for (long l = 0; l < d; ++l) {
                    if (b[l] == 0) continue;
                    conv[i + l] += a[i] * b[l] % pN;
                }
            }
            for (auto& v : conv) v %= pN;
            for (long t = 2 * d - 2; t >= d; --t) {
                if (conv[t] == 0) continue;
                Int ct = conv[t];
                conv[t] = 0;
                for (long i = 0; i < d; ++i) {
                    if (Phi[i] == 0) continue;
                    conv[t - d + i] = (conv[t - d + i] - ct * Phi[i]) % pN;
                }
            }
            conv.resize(d);
            for (auto& v : conv) {
                v %= pN;
                if (v < 0) v += pN;
            }
            return conv;
        }
        long bsz = strides_[j];      // sub-element size
        long bj = dims_[j];          // step degree
        const auto& G = steps[j - 1].G;
        std::vector<std::vector<Int>> conv(2 * bj - 1, std::vector<Int>(bsz, Int(0)));
        auto block = [&](const std::vector<Int>& v, long i) {
            return std::vector<Int>(v.begin() + i * bsz, v.begin() + (i + 1) * bsz);
        };
        auto add_into = [&](std::vector<Int>& dst, const std::vector<Int>& src) {
            for (long i = 0; i < bsz; ++i) {
                dst[i] += src[i];
                if (dst[i] >= pN) dst[i] -= pN;
            }
        };
        auto sub_into = [&](std::vector<Int>& dst, const std::vector<Int>& src) {
            for (long i = 0; i < bsz; ++i) {
                dst[i] -= src[i];
                if (dst[i] < 0) dst[i] += pN;
            }
        };
        auto is_zero_vec = [&](const std::vector<Int>& v) {
            for (const auto& x : v)
                if (x != 0) return false;
            return true;
        };
        for (long i = 0; i < bj; ++i) {
            auto ai = block(a, i);
            if (is_zero_vec(ai)) continue;
            for (long l = 0; l < bj; ++l) {
                auto bl = block(b, l);
                if (is_zero_vec(bl)) continue;
                add_into(conv[i + l], mul_level(ai, bl, j - 1));
            }
        }
        for (long t = 2 * bj - 2; t >= bj; --t) {
            if (is_zero_vec(conv[t])) continue;
            std::vector<Int> ct = std::move(conv[t]);
            conv[t].assign(bsz, Int(0));
            for (long i = 0; i < bj; ++i) {
                if (is_zero_vec(G[i])) continue;
                sub_into(conv[t - bj + i], mul_level(ct, G[i], j - 1));
            }
        }
        std::vector<Int> out(m, Int(0));
        for (long i = 0; i < bj; ++i)
            for (long l = 0; l < bsz; ++l) out[i * bsz + l] = std::move(conv[i][l]);
        return out;
    }

    // exact valuation of a level-j element in level-j pi-units
    long val_level(const std::vector<Int>& a, long j) const {
        if (j == 0) {
            long best = VAL_INF;
            for (const auto& v : a) {
                if (v == 0) continue;
                long w = valuation(v, p);
                if (w < best) best = w;
                if (best == 0) break;
            }
            if (best >= N) return VAL_INF;  // indistinguishable from 0
            return best;
        }
        long bsz = strides_[j];
        long bj = dims_[j];
        long h = steps[j - 1].h;
        long best = VAL_INF;
        for (long i = 0; i < bj; ++i) {
            std::vector<Int> bi(a.begin() + i * bsz, a.begin() + (i + 1) * bsz);
            long w = val_level(bi, j - 1);
            if (w >= VAL_INF) continue;
            long total = bj * w + i * h;
            if (total < best) best = total;
        }
        return best;
    }

    void build_pi() const {
        if (pi_cache_) return;
        // bottom: pi = p
        TElt pi = from_int(p);
        TElt piinv = shift_den(one(), 1);  // 1/p
        long e_so_far = 1;
        for (std::size_t j = 0; j < steps.size(); ++j) {
            long h = steps[j].h, b = steps[j].b;
            // s*h + t*b = 1 with 0 <= s < b
            long s = 0;
            for (long cand = 0; cand < b; ++cand)
                if ((cand * h) % b == ((1 % b) + b) % b) {
                    s = cand;
                    break;
                }
            long t = (1 - s * h) / b;
            // new pi = x_j^s * (old pi)^t  (t <= 0 typically)
            TElt xj = step_gen(j);
            TElt np = pow(xj, s);
            if (t >= 0)
                for (long i = 0; i < t; ++i) np = mul(np, pi);
            else
                for (long i = 0; i < -t; ++i) np = mul(np, piinv);
            normalize(np);
            // new pi_inv = pi^{e_new - 1} * z^{-1} / p with z = pi^{e_new}/p
            e_so_far *= b;
            TElt pe = np;
            for (long i = 1; i < e_so_far; ++i) pe = mul(pe, np);
            // all coords of pi^{e} are divisible by p
            TElt z = pe;
            bool ok = true;
            for (auto& v : z.c) {
                if (v == 0) continue;
                if (!mpz_divisible_p(v.get_mpz_t(), p.get_mpz_t())) {
                    ok = false;
                    break;
                }
            }
            if (!ok) throw detail::need_more_precision{};
            for (auto& v : z.c) v /= p;
            z.den = pe.den;  // carries over
            normalize(z);
            TElt zi = inv_unit(z);
            TElt npi = zi;
            for (long i = 0; i < e_so_far - 1; ++i) npi = mul(npi, np);
            npi = shift_den(npi, 1);
            normalize(npi);
            pi = np;
            piinv = npi;
        }
        pi_cache_ = std::make_shared<TElt>(pi);
        pi_inv_cache_ = std::make_shared<TElt>(piinv);
    }

    // inverse of a unit (val == 0) by solving the multiplication linear
    // system mod p^N; all pivots are units, no precision loss
    TElt inv_unit(const TElt& x0) const {
        TElt x = x0;
        normalize(x);
        if (x.den != 0) {
            // val(x)=0 with den>0: multiply out the denominator and retry
            Int f = int_pow(p, static_cast<unsigned long>(x.den));
            // x = c/p^den with val 0; c has val e*den: x is a unit but its
            // integral rep is not unit-normalized.  Solve with rhs p^den.
            TElt c{x.c, 0};
            TElt y = solve_mul(c, f);
            return y;
        }
        return solve_mul(x, Int(1));
    }

    // solve  x * y = rhs_scalar  (rhs_scalar * e_0 as rhs vector)
    TElt solve_mul(const TElt& x, const Int& rhs_scalar) const {
        // build multiplication matrix: column i = x * basis_i
        long n = n_;
        std::vector<std::vector<Int>> M(n, std::vector<Int>(n + 1, Int(0)));
        for (long i = 0; i < n; ++i) {
            std::vector<Int> bas(n, Int(0));
            bas[i] = 1;
            std::vector<Int> col = mul_level(x.c, bas, static_cast<long>(dims_.size()) - 1);
            for (long r = 0; r < n; ++r) M[r][i] = col[r];
        }
        for (long r = 0; r < n; ++r) M[r][n] = 0;
        M[0][n] = rhs_scalar % pN;
        // Gaussian elimination with minimal-valuation pivoting
        std::vector<long> piv_col(n, -1);
        long total_loss = 0;
        long row = 0;
        for (long c = 0; c < n && row < n; ++c) {
            long best = -1, bestv = VAL_INF;
            for (long r = row; r < n; ++r) {
                if (M[r][c] == 0) continue;
                long v = valuation(M[r][c], p);
                if (v < bestv) {
                    bestv = v;
                    best = r;
                }
            }
            if (best < 0 || bestv >= N - total_loss - 2) throw detail::need_more_precision{};
            std::swap(M[row], M[best]);
            total_loss += bestv;
            if (total_loss > N / 2) throw detail::need_more_precision{};
            // scale pivot row: divide by unit part, shift valuation
            Int pv = int_pow(p, static_cast<unsigned long>(bestv));
            Int unit = M[row][c] / pv;
            Int uinv;
            mpz_invert(uinv.get_mpz_t(), unit.get_mpz_t(), pN.get_mpz_t());
            for (long j = c; j <= n; ++j) {
                M[row][j] = M[row][j] * uinv % pN;
            }
            // eliminate: other rows must subtract (entry / p^bestv) * pivrow;
            // entries may have lower valuation, so divide the pivot row's
            // p-power instead: multiply target rows is wrong; use exact method:
            for (long r = 0; r < n; ++r) {
                if (r == row || M[r][c] == 0) continue;
                // factor = M[r][c] / (p^bestv)  -- requires divisibility;
                // pivot had minimal valuation in the column among rows >= row,
                // but earlier rows were already cleared in this column
                if (!mpz_divisible_p(M[r][c].get_mpz_t(), pv.get_mpz_t()))
                    throw detail::need_more_precision{};
                Int factor = M[r][c] / pv;
                for (long j = c; j <= n; ++j) {
                    M[r][j] = (M[r][j] - factor * M[row][j]) % pN;
                    if (M[r][j] < 0) M[r][j] += pN;
                }
            }
            piv_col[row] = c;
            ++row;
        }
        if (row < n) throw detail::need_more_precision{};
        // read off solution: row r gives p^{loss_r} y_{piv_col[r]} = rhs_r...
        // with the normalization above each pivot entry is p^{bestv_r}
        TElt y = zero();
        // after full elimination the matrix is diagonal with entries p^{v_r}
        long den_needed = 0;
        std::vector<long> vr(n, 0);
        for (long r = 0; r < n; ++r) {
            long c = piv_col[r];
            Int piv = M[r][c];
            long v = piv == 0 ? VAL_INF : valuation(piv, p);
            if (piv != int_pow(p, static_cast<unsigned long>(v)))
                throw detail::need_more_precision{};
            vr[r] = v;
            if (v > den_needed) den_needed = v;
        }
        Int scale_all = int_pow(p, static_cast<unsigned long>(den_needed));
        for (long r = 0; r < n; ++r) {
            long c = piv_col[r];
            Int rhs = M[r][n];
            // y_c = rhs / p^{vr}: scale by p^{den_needed}
            Int val = rhs * (scale_all / int_pow(p, static_cast<unsigned long>(vr[r]))) % pN;
            y.c[c] = val;
        }
        y.den = den_needed;
        reduce(y);
        normalize(y);
        return y;
    }

    friend class TowerBuilder;
};

}  // namespace obstruct
