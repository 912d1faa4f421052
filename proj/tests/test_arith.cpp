#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>

#include "obstruct/arith/f2.hpp"
#include "obstruct/arith/fppoly.hpp"
#include "obstruct/arith/intfactor.hpp"
#include "obstruct/arith/intpoly.hpp"
#include "obstruct/arith/polyfactor.hpp"
#include "obstruct/arith/realroots.hpp"

#include "fixtures.hpp"

using namespace obstruct;

namespace {

// Independent resultant oracle: Sylvester matrix determinant by exact
// fraction-free (Bareiss) elimination.
Int sylvester_resultant(const IntPoly& f, const IntPoly& g) {
    long m = f.degree(), n = g.degree();
    REQUIRE(m >= 0);
    REQUIRE(n >= 0);
    long N = m + n;
    if (N == 0) return Int(1);
    std::vector<std::vector<Int>> A(N, std::vector<Int>(N, Int(0)));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j <= m; ++j) A[i][i + j] = f[m - j];
    for (long i = 0; i < m; ++i)
        for (long j = 0; j <= n; ++j) A[n + i][i + j] = g[n - j];
    // Bareiss
    Int denom = 1;
    int sign = 1;
    for (long k = 0; k < N - 1; ++k) {
        if (A[k][k] == 0) {
            long sel = -1;
            for (long i = k + 1; i < N; ++i)
                if (A[i][k] != 0) {
                    sel = i;
                    break;
                }
            if (sel < 0) return Int(0);
            std::swap(A[k], A[sel]);
            sign = -sign;
        }
        for (long i = k + 1; i < N; ++i) {
            for (long j = k + 1; j < N; ++j) {
                Int t = A[i][j] * A[k][k] - A[i][k] * A[k][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), denom.get_mpz_t());
                A[i][j] = t;
            }
            A[i][k] = 0;
        }
        denom = A[k][k];
    }
    return Int(sign) * A[N - 1][N - 1];
}

}  // namespace

TEST_CASE("polynomial basics") {
    IntPoly f({-6, 0, 3});  // 3x^2 - 6
    REQUIRE(f.degree() == 2);
    REQUIRE(f.eval(Int(2)) == 6);
    REQUIRE(f.content() == 3);
    IntPoly g = f.primitive_part();
    REQUIRE(g == IntPoly({-2, 0, 1}));
    REQUIRE((f * g).degree() == 4);
    REQUIRE(f.shift(Int(1)) == IntPoly({-3, 6, 3}));
    REQUIRE(f.reversed() == IntPoly({3, 0, -6}));
    REQUIRE(f.eval_homog(Int(1), Int(2)) == -21);  // 4*f(1/2)
}

TEST_CASE("resultant against Sylvester determinant oracle") {
    // fixed small cases
    IntPoly f({-1, 0, 1});  // x^2-1
    REQUIRE(poly_discriminant(f) == 4);
    IntPoly g({0, -1, 0, 1});  // x^3-x
    REQUIRE(resultant(g, g.derivative()) == sylvester_resultant(g, g.derivative()));

    std::mt19937_64 rng(12345);
    for (int t = 0; t < 120; ++t) {
        IntPoly a = fixtures::random_poly(rng, 1 + static_cast<long>(rng() % 7), 12);
        IntPoly b = fixtures::random_poly(rng, 1 + static_cast<long>(rng() % 7), 12);
        REQUIRE(resultant(a, b) == sylvester_resultant(a, b));
    }
}

TEST_CASE("discriminant of the genus-5 fixture matches its known prime support") {
    Int d = poly_discriminant(fixtures::genus5_poly());
    Int expect = int_pow(Int(2), 6) * int_pow(Int(5), 2) * Int(29) * Int(151) * Int(54918937) *
                 Int("571571633") * Int("8389309314807991");
    REQUIRE(abs(d) == expect);
}

TEST_CASE("discriminant nonzero iff gcd(f, f') constant") {
    std::mt19937_64 rng(777);
    int checked = 0;
    for (int t = 0; t < 500; ++t) {
        IntPoly f = fixtures::random_poly(rng, 2 + static_cast<long>(rng() % 6), 8);
        if (f.degree() < 1) continue;
        Int d = poly_discriminant(f);
        bool sqfree = poly_gcd(f, f.derivative()).degree() == 0;
        REQUIRE((d != 0) == sqfree);
        ++checked;
    }
    REQUIRE(checked >= 490);
}

TEST_CASE("factor_integer basics") {
    SECTION("one") {
        auto r = factor_integer(Int(1));
        REQUIRE(r.factors.empty());
        REQUIRE(r.complete());
        REQUIRE(r.value() == 1);
    }
    SECTION("signed") {
        auto r = factor_integer(Int(-84));
        REQUIRE(r.sign == -1);
        REQUIRE(r.value() == -84);
        REQUIRE(r.complete());
    }
    SECTION("genus-5 discriminant has the seven known primes") {
        Int d = poly_discriminant(fixtures::genus5_poly());
        auto r = factor_integer(abs(d));
        REQUIRE(r.complete());
        std::map<Int, unsigned> got(r.factors.begin(), r.factors.end());
        std::map<Int, unsigned> expect{{Int(2), 6},         {Int(5), 2},
                                       {Int(29), 1},        {Int(151), 1},
                                       {Int(54918937), 1},  {Int("571571633"), 1},
                                       {Int("8389309314807991"), 1}};
        REQUIRE(got == expect);
    }
    SECTION("recovers a product of two random 20-bit primes") {
        std::mt19937_64 rng(2024);
        for (int t = 0; t < 10; ++t) {
            Int p, q;
            do {
                p = Int(static_cast<unsigned long>((rng() % (1 << 19)) + (1 << 19)));
            } while (!is_probable_prime(p));
            do {
                q = Int(static_cast<unsigned long>((rng() % (1 << 19)) + (1 << 19)));
            } while (!is_probable_prime(q) || q == p);
            auto r = factor_integer(p * q);
            REQUIRE(r.complete());
            REQUIRE(r.factors.size() == 2);
            REQUIRE(r.factors[0].first == std::min(p, q));
            REQUIRE(r.factors[1].first == std::max(p, q));
        }
    }
    SECTION("reassembly and primality of listed factors on random inputs") {
        std::mt19937_64 rng(99);
        for (int t = 0; t < 40; ++t) {
            Int n = Int(static_cast<unsigned long>(rng() % 1000000000ULL)) *
                        Int(static_cast<unsigned long>(rng() % 1000000ULL)) +
                    1;
            if (n == 1) continue;
            auto r = factor_integer(n);
            REQUIRE(r.value() == n);
            for (auto& [p, e] : r.factors) REQUIRE(is_probable_prime(p));
        }
    }
}

TEST_CASE("miller-rabin agrees with trial division up to 30000") {
    for (long n = 2; n < 30000; ++n) {
        bool prime = true;
        for (long d = 2; d * d <= n; ++d)
            if (n % d == 0) {
                prime = false;
                break;
            }
        REQUIRE(is_probable_prime(Int(n)) == prime);
    }
}

TEST_CASE("factor_poly_over_Z") {
    SECTION("x^2-1") {
        auto r = factor_poly_over_Z(IntPoly({-1, 0, 1}));
        REQUIRE(r.factors.size() == 2);
        REQUIRE(r.content == 1);
        REQUIRE(r.value() == IntPoly({-1, 0, 1}));
        REQUIRE(r.factors[0].first.degree() == 1);
        REQUIRE(r.factors[1].first.degree() == 1);
    }
    SECTION("x^4+1 irreducible, with exhaustive small-factor oracle") {
        IntPoly f({1, 0, 0, 0, 1});
        auto r = factor_poly_over_Z(f);
        REQUIRE(r.factors.size() == 1);
        REQUIRE(r.factors[0].second == 1);
        // independent oracle: no monic integer factor of degree 1 or 2 with
        // coefficients within the Mignotte-style bound divides it
        long B = 80;
        for (long a = -B; a <= B; ++a) {
            // degree 1: x + a
            RatPoly q, rr;
            divrem(RatPoly(f), RatPoly(IntPoly({a, 1})), q, rr);
            REQUIRE(!rr.is_zero());
        }
        for (long a = -B; a <= B; ++a)
            for (long b = -B; b <= B; ++b) {
                RatPoly q, rr;
                divrem(RatPoly(f), RatPoly(IntPoly({b, a, 1})), q, rr);
                REQUIRE(!rr.is_zero());
            }
    }
    SECTION("product of two random irreducible cubics is recovered") {
        std::mt19937_64 rng(5150);
        int done = 0;
        while (done < 5) {
            IntPoly a = fixtures::random_poly(rng, 3, 9);
            IntPoly b = fixtures::random_poly(rng, 3, 9);
            if (a.degree() != 3 || b.degree() != 3) continue;
            if (!is_irreducible_over_Z(a) || !is_irreducible_over_Z(b)) continue;
            auto r = factor_poly_over_Z(a * b);
            REQUIRE(r.factors.size() == 2);
            REQUIRE(r.value() == a * b);
            ++done;
        }
    }
    SECTION("multiply-back on 500 random polynomials of degree <= 12") {
        std::mt19937_64 rng(31337);
        for (int t = 0; t < 500; ++t) {
            long deg = 1 + static_cast<long>(rng() % 12);
            IntPoly f = fixtures::random_poly(rng, deg, 20);
            if (f.degree() < 1) continue;
            auto r = factor_poly_over_Z(f);
            REQUIRE(r.value() == f);
            for (auto& [g, e] : r.factors) {
                REQUIRE(g.leading() > 0);
                REQUIRE(g.content() == 1);
            }
        }
    }
}

TEST_CASE("real root isolation") {
    SECTION("x^2+1 has none") {
        REQUIRE(isolate_real_roots(IntPoly({1, 0, 1})).empty());
    }
    SECTION("(x-1)(x-2)(x-3)") {
        IntPoly f = IntPoly({-1, 1}) * IntPoly({-2, 1}) * IntPoly({-3, 1});
        auto ivs = isolate_real_roots(f);
        REQUIRE(ivs.size() == 3);
        for (int i = 0; i < 3; ++i) {
            REQUIRE(ivs[i].lo < Rat(i + 1));
            REQUIRE(Rat(i + 1) < ivs[i].hi);
        }
        // disjoint
        REQUIRE(ivs[0].hi <= ivs[1].lo);
        REQUIRE(ivs[1].hi <= ivs[2].lo);
    }
    SECTION("interval endpoint signs differ and counts match Sturm") {
        std::mt19937_64 rng(4242);
        for (int t = 0; t < 200; ++t) {
            IntPoly f = fixtures::random_poly(rng, 2 + static_cast<long>(rng() % 7), 15);
            if (f.degree() < 1 || !is_squarefree(f)) continue;
            auto ivs = isolate_real_roots(f);
            SturmChain ch(f);
            REQUIRE(static_cast<int>(ivs.size()) == ch.count_real_roots());
            for (auto& iv : ivs) {
                Rat a = f.eval(iv.lo), b = f.eval(iv.hi);
                REQUIRE(a != 0);
                REQUIRE(b != 0);
                REQUIRE(((a > 0) != (b > 0)));
            }
            for (std::size_t i = 1; i < ivs.size(); ++i) REQUIRE(ivs[i - 1].hi <= ivs[i].lo);
        }
    }
    SECTION("refinement shrinks on demand") {
        IntPoly f({-2, 0, 1});  // x^2 - 2
        auto ivs = isolate_real_roots(f);
        REQUIRE(ivs.size() == 2);
        auto iv = refine_interval(f, ivs[1], Rat(1, 1000000));
        REQUIRE(iv.hi - iv.lo < Rat(1, 1000000));
        REQUIRE(iv.lo < Rat(1414214, 1000000));
        REQUIRE(Rat(1414213, 1000000) < iv.hi);
    }
    SECTION("sign_at_root") {
        IntPoly f({-2, 0, 1});
        auto ivs = isolate_real_roots(f);
        // at sqrt(2): x - 1 positive, x - 2 negative, x^2 - 2 zero
        REQUIRE(sign_at_root(f, ivs[1], IntPoly({-1, 1})) == 1);
        REQUIRE(sign_at_root(f, ivs[1], IntPoly({-2, 1})) == -1);
        REQUIRE(sign_at_root(f, ivs[1], IntPoly({-2, 0, 1})) == 0);
        REQUIRE(sign_at_root(f, ivs[0], IntPoly({-1, 1})) == -1);
    }
}

TEST_CASE("genus-50 fixture has exactly two real roots", "[g50]") {
    auto ivs = isolate_real_roots(fixtures::genus50_inner_poly());
    REQUIRE(ivs.size() == 2);
}

TEST_CASE("F2 linear algebra") {
    SECTION("kernel of zero matrix has full dimension") {
        F2Matrix M(3, 5);
        auto k = f2_kernel(M);
        REQUIRE(k.size() == 5);
    }
    SECTION("kernel of identity is empty") {
        F2Matrix M(4, 4);
        for (int i = 0; i < 4; ++i) M.set(i, i, true);
        REQUIRE(f2_kernel(M).empty());
    }
    SECTION("random kernels verified exhaustively") {
        std::mt19937_64 rng(808);
        for (int t = 0; t < 30; ++t) {
            std::size_t rows = 4 + rng() % 8, cols = 6 + rng() % 9;  // cols <= 14
            F2Matrix M(rows, cols);
            for (std::size_t i = 0; i < rows; ++i)
                for (std::size_t j = 0; j < cols; ++j) M.set(i, j, rng() & 1);
            auto basis = f2_kernel(M);
            // every basis vector killed, basis independent
            F2Span span;
            for (auto& v : basis) {
                REQUIRE(M.mul(v).is_zero());
                REQUIRE(span.add(v));
            }
            // exhaustive count of kernel vectors equals 2^dim
            std::size_t cnt = 0;
            for (std::uint64_t mask = 0; mask < (1ULL << cols); ++mask) {
                F2Vector v(cols);
                for (std::size_t j = 0; j < cols; ++j)
                    if ((mask >> j) & 1) v.set(j, true);
                if (M.mul(v).is_zero()) ++cnt;
            }
            REQUIRE(cnt == (1ULL << basis.size()));
            // rank-nullity
            REQUIRE(M.rank() + basis.size() == cols);
        }
    }
    SECTION("rref involutive on reduced matrices") {
        std::mt19937_64 rng(111);
        for (int t = 0; t < 20; ++t) {
            F2Matrix M(5, 9);
            for (std::size_t i = 0; i < 5; ++i)
                for (std::size_t j = 0; j < 9; ++j) M.set(i, j, rng() & 1);
            F2Matrix A = M;
            A.rref();
            F2Matrix B = A;
            B.rref();
            bool same = true;
            for (std::size_t i = 0; i < 5 && same; ++i)
                for (std::size_t j = 0; j < 9; ++j)
                    if (A.get(i, j) != B.get(i, j)) {
                        same = false;
                        break;
                    }
            REQUIRE(same);
        }
    }
}

TEST_CASE("Fp polynomial factorization sanity") {
    std::mt19937_64 rng(606);
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 13ULL}) {
        Fp F(p);
        for (int t = 0; t < 40; ++t) {
            long deg = 2 + static_cast<long>(rng() % 7);
            std::vector<std::uint64_t> c(deg + 1);
            for (auto& v : c) v = rng() % p;
            c[deg] = 1;
            FpPoly f(std::move(c));
            if (f.degree() < 1) continue;
            auto fac = fp_factor(f, F);
            FpPoly prod = FpPoly::constant(1);
            for (auto& [g, e] : fac) {
                REQUIRE(fp_is_irreducible(g, F));
                for (unsigned i = 0; i < e; ++i) prod = fp_mul(prod, g, F);
            }
            REQUIRE(prod == f);
        }
    }
}

TEST_CASE("Fq arithmetic and factorization") {
    Fp F2f(2);
    FpPoly phi = fp_find_irreducible(3, F2f);  // F_8
    FqCtx K(F2f, phi);
    REQUIRE(K.q() == 8);
    SECTION("inverses") {
        std::mt19937_64 rng(2121);
        for (int t = 0; t < 50; ++t) {
            std::vector<std::uint64_t> c(3);
            for (auto& v : c) v = rng() % 2;
            FpPoly a(std::move(c));
            if (a.is_zero()) continue;
            auto ai = K.inv(a);
            REQUIRE(K.mul(a, ai) == K.one());
        }
    }
    SECTION("artin-schreier solve") {
        // y^2+y=a solvable for exactly half of F_8
        int solvable = 0;
        for (unsigned m = 0; m < 8; ++m) {
            std::vector<std::uint64_t> c{(m >> 0) & 1, (m >> 1) & 1, (m >> 2) & 1};
            FpPoly a(std::move(c));
            FpPoly y;
            if (K.solve_artin_schreier(a, y)) {
                ++solvable;
                REQUIRE(K.add(K.mul(y, y), y) == a);
            }
        }
        REQUIRE(solvable == 4);
    }
    SECTION("factorization over F_q multiply-back") {
        std::mt19937_64 rng(515);
        Fp F5(5);
        FpPoly phi5 = fp_find_irreducible(2, F5);  // F_25
        FqCtx K25(F5, phi5);
        for (int t = 0; t < 25; ++t) {
            FqPoly f;
            long deg = 2 + static_cast<long>(rng() % 5);
            f.c.assign(deg + 1, K25.zero());
            for (auto& v : f.c) {
                std::vector<std::uint64_t> cc{rng() % 5, rng() % 5};
                v = FpPoly(std::move(cc));
            }
            f.c[deg] = K25.one();
            f.trim();
            auto fac = fq_factor(f, K25);
            FqPoly prod = FqPoly::constant(K25.one());
            for (auto& [g, e] : fac)
                for (unsigned i = 0; i < e; ++i) prod = fq_mul(prod, g, K25);
            REQUIRE(prod == f);
        }
    }
    SECTION("sqrt in odd characteristic") {
        Fp F13(13);
        FpPoly phi13 = fp_find_irreducible(2, F13);
        FqCtx K169(F13, phi13);
        std::mt19937_64 rng(99);
        for (int t = 0; t < 30; ++t) {
            std::vector<std::uint64_t> c{rng() % 13, rng() % 13};
            FpPoly a(std::move(c));
            if (a.is_zero()) continue;
            FpPoly sq = K169.mul(a, a);
            REQUIRE(K169.is_square(sq));
            FpPoly r = K169.sqrt_odd(sq);
            REQUIRE(K169.mul(r, r) == sq);
        }
    }
}
