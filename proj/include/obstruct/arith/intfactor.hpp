#pragma once

// Integer factorization: trial division, Miller-Rabin primality
// (deterministic base set below 3.3*10^24), Pollard rho with Brent's cycle
// detection.  Incomplete factorizations are surfaced, never hidden.

#include <cassert>
#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "obstruct/errors.hpp"

namespace obstruct {

struct FactorBudget {
    unsigned long trial_bound = 1000000;   // trial division up to this
    unsigned long long rho_iters = 100000000ULL;  // total Brent iterations
    int mr_rounds = 40;                    // probabilistic rounds above the det. range
};

struct FactoredInteger {
    int sign = 1;                                  // +-1
    std::vector<std::pair<Int, unsigned>> factors; // (prime, exponent), primes ascending
    Int cofactor = 1;                              // 1 iff factorization complete

    bool complete() const { return cofactor == 1; }
    Int value() const {
        Int v = sign;
        for (const auto& [p, e] : factors) {
            Int pe;
            mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
            v *= pe;
        }
        return v * cofactor;
    }
    long valuation(const Int& p) const {
        for (const auto& [q, e] : factors)
            if (q == p) return e;
        return 0;
    }
};

namespace detail {

inline bool mr_witness(const Int& n, const Int& a, const Int& d, unsigned long s) {
    if (a % n == 0) return false;
    Int x;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) return false;
    for (unsigned long i = 1; i < s; ++i) {
        x = (x * x) % n;
        if (x == n - 1) return false;
    }
    return true;  // composite witness
}

}  // namespace detail

inline bool is_probable_prime(const Int& n, int extra_rounds = 40) {
    if (n < 2) return false;
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L}) {
        if (n == p) return true;
        if (n % p == 0) return false;
    }
    Int d = n - 1;
    unsigned long s = mpz_scan1(d.get_mpz_t(), 0);
    mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
    // deterministic for n < 3.317e24 with these 13 bases (Sorenson-Webster)
    for (long a : {2L, 3L, 5L, 7L, 11L, 13L, 17L, 19L, 23L, 29L, 31L, 37L, 41L})
        if (detail::mr_witness(n, Int(a), d, s)) return false;
    Int det_bound("3317044064679887385961981");
    if (n < det_bound) return true;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xabcdefUL);
    for (int i = 0; i < extra_rounds; ++i) {
        Int a = rng.get_z_range(n - 3) + 2;
        if (detail::mr_witness(n, a, d, s)) return false;
    }
    return true;
}

namespace detail {

// Brent's variant of Pollard rho; returns a nontrivial factor or 0 on budget
// exhaustion.  n must be composite, odd, and not a perfect power of a found
// factor -- the caller loops.
inline Int pollard_brent(const Int& n, unsigned long long& iters_left, unsigned long seed) {
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(seed);
    while (iters_left > 0) {
        Int y = rng.get_z_range(n - 1) + 1;
        Int c = rng.get_z_range(n - 1) + 1;
        Int m = 128;
        Int g = 1, r = 1, q = 1, x, ys;
        while (g == 1 && iters_left > 0) {
            x = y;
            for (Int i = 0; i < r; ++i) y = (y * y + c) % n;
            Int k = 0;
            while (k < r && g == 1 && iters_left > 0) {
                ys = y;
                Int lim = (m < r - k) ? m : r - k;
                for (Int i = 0; i < lim; ++i) {
                    y = (y * y + c) % n;
                    Int diff = x - y;
                    if (diff < 0) diff = -diff;
                    q = (q * diff) % n;
                    if (iters_left) --iters_left;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += lim;
            }
            r *= 2;
        }
        if (g == n) {
            // backtrack
            g = 1;
            while (g == 1) {
                ys = (ys * ys + c) % n;
                Int diff = x - ys;
                if (diff < 0) diff = -diff;
                mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
            }
        }
        if (g != n && g != 1) return g;
        // retry with a new polynomial
    }
    return Int(0);
}

}  // namespace detail

inline FactoredInteger factor_integer(Int n, const FactorBudget& budget = FactorBudget()) {
    assert(n != 0);
    FactoredInteger out;
    if (n < 0) {
        out.sign = -1;
        n = -n;
    }
    if (n == 1) return out;

    std::vector<Int> pending;
    // trial division
    {
        unsigned long p = 2;
        while (p <= budget.trial_bound) {
            if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
                unsigned e = 0;
                while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
                    mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
                    ++e;
                }
                out.factors.emplace_back(Int(static_cast<long>(p)), e);
            }
            if (Int(static_cast<long>(p)) * Int(static_cast<long>(p)) > n) break;
            p = (p == 2) ? 3 : p + 2;
        }
        if (n > 1 && Int(static_cast<unsigned long>(budget.trial_bound)) *
                             Int(static_cast<unsigned long>(budget.trial_bound)) > n) {
            // remainder below bound^2 with no small factor: prime
            out.factors.emplace_back(n, 1);
            n = 1;
        }
    }

    if (n > 1) pending.push_back(n);
    unsigned long long iters = budget.rho_iters;
    unsigned long seed = 0x9e3779b9UL;
    while (!pending.empty()) {
        Int m = pending.back();
        pending.pop_back();
        if (m == 1) continue;
        if (is_probable_prime(m, budget.mr_rounds)) {
            bool merged = false;
            for (auto& [p, e] : out.factors)
                if (p == m) {
                    ++e;
                    merged = true;
                    break;
                }
            if (!merged) out.factors.emplace_back(m, 1);
            continue;
        }
        // perfect power check helps rho on squares
        if (mpz_perfect_power_p(m.get_mpz_t())) {
            for (unsigned long k = 2; k <= mpz_sizeinbase(m.get_mpz_t(), 2); ++k) {
                Int r;
                if (mpz_root(r.get_mpz_t(), m.get_mpz_t(), k)) {
                    for (unsigned long i = 0; i < k; ++i) pending.push_back(r);
                    m = 1;
                    break;
                }
            }
            if (m == 1) continue;
        }
        Int d = detail::pollard_brent(m, iters, seed++);
        if (d == 0) {
            // budget exhausted: surface the cofactor
            out.cofactor *= m;
            for (const auto& q : pending) out.cofactor *= q;
            pending.clear();
            break;
        }
        pending.push_back(d);
        pending.push_back(m / d);
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    // merge duplicates after sorting
    std::vector<std::pair<Int, unsigned>> merged;
    for (auto& pe : out.factors) {
        if (!merged.empty() && merged.back().first == pe.first) merged.back().second += pe.second;
        else merged.push_back(pe);
    }
    out.factors = std::move(merged);
    return out;
}

// valuation of a nonzero rational at p: v(num) - v(den)
inline long valuation(const Int& n, const Int& p) {
    assert(n != 0);
    Int m = n;
    long v = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    return v;
}
inline long valuation(const Rat& r, const Int& p) {
    assert(r != 0);
    return valuation(Int(r.get_num()), p) - valuation(Int(r.get_den()), p);
}

inline bool is_square_rational(const Rat& r) {
    if (r == 0) return true;
    if (r < 0) return false;
    return mpz_perfect_square_p(r.get_num().get_mpz_t()) &&
           mpz_perfect_square_p(r.get_den().get_mpz_t());
}

}  // namespace obstruct
