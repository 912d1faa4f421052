#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "obstruct/padic/factor.hpp"
#include "obstruct/padic/qp.hpp"

#include "fixtures.hpp"

using namespace obstruct;

namespace {

// multiply the factor minpolys back together mod p^k and compare with the
// monicized input
void check_multiply_back(const LocalAlgebra& alg, const IntPoly& F, const Int& p, long k) {
    long n = F.degree();
    Int lc = F.leading();
    Int mod = int_pow(p, static_cast<unsigned long>(k));
    std::vector<Int> want(n + 1);
    want[n] = 1;
    for (long i = 0; i < n; ++i) {
        want[i] = F[i] * int_pow(lc, static_cast<unsigned long>(n - 1 - i)) % mod;
        if (want[i] < 0) want[i] += mod;
    }
    std::vector<Int> prod{Int(1)};
    long degsum = 0;
    for (const auto& fac : alg.factors) {
        degsum += fac.n;
        REQUIRE(static_cast<long>(fac.minpoly.size()) - 1 == fac.n);
        std::vector<Int> nxt(prod.size() + fac.minpoly.size() - 1, Int(0));
        for (std::size_t i = 0; i < prod.size(); ++i)
            for (std::size_t j = 0; j < fac.minpoly.size(); ++j)
                nxt[i + j] = (nxt[i + j] + prod[i] * fac.minpoly[j]) % mod;
        prod = std::move(nxt);
    }
    REQUIRE(degsum == n);
    for (long i = 0; i <= n; ++i) {
        Int got = prod[i] % mod;
        if (got < 0) got += mod;
        REQUIRE(got == want[i]);
    }
}

// each factor's theta must satisfy F(theta) == 0 at working precision
void check_roots(const LocalAlgebra& alg) {
    for (const auto& fac : alg.factors) {
        const Tower& K = *fac.field;
        TElt acc = K.zero();
        for (std::size_t i = alg.F.coeffs().size(); i-- > 0;) {
            acc = K.mul(acc, fac.theta);
            acc = K.add(acc, K.from_int(alg.F[i]));
            K.normalize(acc);
        }
        long v = K.val(acc);
        REQUIRE(v >= K.e() * (K.N / 2));
    }
}

}  // namespace

TEST_CASE("tower basics over Q2(sqrt 2)") {
    auto alg = qp_factor(IntPoly({-2, 0, 1}), Int(2));
    REQUIRE(alg.factors.size() == 1);
    REQUIRE(alg.factors[0].e == 2);
    REQUIRE(alg.factors[0].f == 1);
    const Tower& K = *alg.factors[0].field;
    TElt th = alg.factors[0].theta;
    REQUIRE(K.val(th) == 1);            // sqrt(2) is a uniformizer
    REQUIRE(K.val(K.from_int(Int(2))) == 2);
    TElt sq = K.mul(th, th);
    REQUIRE(K.equal(sq, K.from_int(Int(2))));
    // inverse
    TElt inv = K.inv(th);
    TElt prod = K.mul(th, inv);
    REQUIRE(K.equal(prod, K.one()));
    REQUIRE(K.val(inv) == -1);
    // residue field is F_2
    REQUIRE(K.f0() == 1);
}

TEST_CASE("qp_factor on easy split/inert cases") {
    SECTION("x^2-1 at p=7 splits") {
        auto alg = qp_factor(IntPoly({-1, 0, 1}), Int(7));
        REQUIRE(alg.factors.size() == 2);
        REQUIRE(alg.factors[0].n == 1);
        REQUIRE(alg.factors[1].n == 1);
        check_multiply_back(alg, IntPoly({-1, 0, 1}), Int(7), 10);
        check_roots(alg);
    }
    SECTION("x^2+1 at p=3 inert (unramified quadratic)") {
        auto alg = qp_factor(IntPoly({1, 0, 1}), Int(3));
        REQUIRE(alg.factors.size() == 1);
        REQUIRE(alg.factors[0].e == 1);
        REQUIRE(alg.factors[0].f == 2);
        check_roots(alg);
    }
    SECTION("x^2 - p Eisenstein at several p") {
        for (long p : {2L, 3L, 5L, 13L}) {
            auto alg = qp_factor(IntPoly({-p, 0, 1}), Int(p));
            REQUIRE(alg.factors.size() == 1);
            REQUIRE(alg.factors[0].e == 2);
            REQUIRE(alg.factors[0].f == 1);
            check_roots(alg);
        }
    }
    SECTION("ramified-and-split mix: x^3 - p^2 x ... (x)(x^2-p^2)->roots") {
        // (x^2 - 2)(x - 1)(x + 3) at p = 2
        IntPoly F = IntPoly({-2, 0, 1}) * IntPoly({-1, 1}) * IntPoly({3, 1});
        auto alg = qp_factor(F, Int(2));
        long n1 = 0, n2 = 0;
        for (auto& f : alg.factors) {
            if (f.n == 1) ++n1;
            if (f.n == 2) ++n2;
        }
        REQUIRE(n1 == 2);
        REQUIRE(n2 == 1);
        check_multiply_back(alg, F, Int(2), 12);
        check_roots(alg);
    }
}

TEST_CASE("qp_factor multiply-back oracle on random squarefree sextics") {
    std::mt19937_64 rng(20240901);
    for (Int p : {Int(2), Int(3), Int(5)}) {
        int done = 0;
        while (done < 12) {
            IntPoly F = fixtures::random_poly(rng, 6, 20);
            if (F.degree() != 6) continue;
            Int d = poly_discriminant(F);
            if (d == 0) continue;
            auto alg = qp_factor(F, p);
            check_multiply_back(alg, F, p, 2 * alg.N / 3);
            check_roots(alg);
            // good primes: factor degrees match the mod-p factorization
            if (valuation(d, p) == 0 && valuation(F.leading(), p) == 0) {
                Fp Fld(p.get_ui());
                auto fac = fp_factor(FpPoly::from_intpoly(F, Fld), Fld);
                std::vector<long> want, got;
                for (auto& [g, e] : fac) {
                    REQUIRE(e == 1);
                    want.push_back(g.degree());
                }
                for (auto& f : alg.factors) {
                    REQUIRE(f.e == 1);
                    got.push_back(f.n);
                }
                std::sort(want.begin(), want.end());
                std::sort(got.begin(), got.end());
                REQUIRE(want == got);
            }
            ++done;
        }
    }
}

TEST_CASE("qp_factor handles wild 2-adic ramification") {
    SECTION("x^4 - 2 at 2: totally ramified quartic") {
        auto alg = qp_factor(IntPoly({-2, 0, 0, 0, 1}), Int(2));
        REQUIRE(alg.factors.size() == 1);
        REQUIRE(alg.factors[0].e == 4);
        check_roots(alg);
    }
    SECTION("x^2 - 8: slope 3/2") {
        auto alg = qp_factor(IntPoly({-8, 0, 1}), Int(2));
        REQUIRE(alg.factors.size() == 1);
        REQUIRE(alg.factors[0].e == 2);
        check_roots(alg);
    }
    SECTION("x^2 - 17: 17 is a 2-adic square, splits") {
        auto alg = qp_factor(IntPoly({-17, 0, 1}), Int(2));
        REQUIRE(alg.factors.size() == 2);
        check_roots(alg);
    }
    SECTION("x^2 + x + 1 at 2: unramified quadratic") {
        auto alg = qp_factor(IntPoly({1, 1, 1}), Int(2));
        REQUIRE(alg.factors.size() == 1);
        REQUIRE(alg.factors[0].f == 2);
        check_roots(alg);
    }
    SECTION("(x^2-2)(x^2-2-8) same slope, conjugate-looking clusters") {
        IntPoly F = IntPoly({-2, 0, 1}) * IntPoly({-10, 0, 1});
        auto alg = qp_factor(F, Int(2));
        REQUIRE(alg.factors.size() == 2);
        REQUIRE(alg.factors[0].e == 2);
        REQUIRE(alg.factors[1].e == 2);
        check_multiply_back(alg, F, Int(2), 2 * alg.N / 3);
        check_roots(alg);
    }
    SECTION("x^4 + 2x^2 + 4: irregular-looking cluster") {
        IntPoly F({4, 0, 2, 0, 1});
        Int d = poly_discriminant(F);
        REQUIRE(d != 0);
        auto alg = qp_factor(F, Int(2));
        check_multiply_back(alg, F, Int(2), 2 * alg.N / 3);
        check_roots(alg);
    }
}

TEST_CASE("genus-50 polynomial at p=5 has one linear factor with unit root = 3 mod 5",
          "[g50]") {
    IntPoly F = fixtures::genus50_curve_poly();  // 5 * f50
    auto alg = qp_factor(F, Int(5), 1);
    int linear = 0;
    for (auto& fac : alg.factors) {
        if (fac.n == 1) {
            ++linear;
            const Tower& K = *fac.field;
            REQUIRE(K.val(fac.theta) == 0);  // unit root
            auto r = K.residue(fac.theta);
            REQUIRE(r.degree() == 0);
            REQUIRE(r[0] == 3);
        }
    }
    REQUIRE(linear == 1);
}

TEST_CASE("local solubility over Q_p (lightweight)") {
    SECTION("y^2 = x^6+1 at several p") {
        IntPoly F({1, 0, 0, 0, 0, 0, 1});
        for (long p : {2L, 3L, 5L, 7L, 11L}) REQUIRE(is_locally_soluble_qp(F, Int(p)));
    }
    SECTION("y^2 = -x^6-1 is insoluble at the real place but soluble at odd p") {
        IntPoly F({-1, 0, 0, 0, 0, 0, -1});
        REQUIRE(!is_locally_soluble_real(F));
    }
    SECTION("y^2 = 3x^6+3 at 3: x must make x^6+1 divisible-compatible") {
        IntPoly F({3, 0, 0, 0, 0, 0, 3});
        // brute oracle at 3: scan x = a/3^k structures via projective scan mod 3^6
        bool brute = false;
        Int mod = int_pow(Int(3), 7);
        for (Int a = 0; a < mod && !brute; ++a) {
            Int v = F.eval(a);
            if (v == 0) {
                brute = true;
                break;
            }
            // certified square test of the exact value
            if (is_square_qp(Rat(v), Int(3))) brute = true;
        }
        // also the infinity chart
        IntPoly Frev = F.reversed();
        for (Int a = 0; a < mod && !brute; ++a) {
            Int u = 3 * a;
            Int v = Frev.eval(u);
            if (v != 0 && is_square_qp(Rat(v), Int(3))) brute = true;
        }
        REQUIRE(is_locally_soluble_qp(F, Int(3)) == brute);
    }
    SECTION("random sextics vs brute scan at p in {3,5}") {
        std::mt19937_64 rng(777123);
        for (Int p : {Int(3), Int(5)}) {
            int done = 0;
            while (done < 15) {
                IntPoly F = fixtures::random_poly(rng, 6, 30);
                if (F.degree() != 6 || poly_discriminant(F) == 0) continue;
                // brute projective scan: x integral to depth p^5, x = 1/u to
                // the same depth; exact square test of values
                bool brute = false;
                Int mod = int_pow(p, 5);
                for (Int a = 0; a < mod && !brute; ++a) {
                    Int v = F.eval(a);
                    if (v == 0 || is_square_qp(Rat(v), p)) brute = true;
                }
                IntPoly Frev = F.reversed();
                for (Int a = 0; a < mod && !brute; ++a) {
                    Int u = p * a;
                    Int v = Frev.eval(u);
                    if (v == 0 || (v != 0 && is_square_qp(Rat(v), p))) brute = true;
                }
                REQUIRE(is_locally_soluble_qp(F, p) == brute);
                ++done;
            }
        }
    }
}

TEST_CASE("rational Hilbert symbols: basics and product formula") {
    SECTION("known values") {
        REQUIRE(hilbert_real(Rat(-1), Rat(-1)) == 1);
        REQUIRE(hilbert_real(Rat(-1), Rat(2)) == 0);
        // (2,3)_3: 3-adic: v(2)=0,v(3)=1: class of 2^1 = 2 mod 3 non-residue -> 1/2
        REQUIRE(hilbert_qp_rational(Rat(2), Rat(3), Int(3)) == 1);
        // (-1,-1)_2 = 1/2
        REQUIRE(hilbert_qp_rational(Rat(-1), Rat(-1), Int(2)) == 1);
        // (2,7)_7: class of 2 mod 7 is a QR (3^2=2) -> 0
        REQUIRE(hilbert_qp_rational(Rat(2), Rat(7), Int(7)) == 0);
    }
    SECTION("product formula on random rationals") {
        std::mt19937_64 rng(424242);
        for (int t = 0; t < 500; ++t) {
            auto draw = [&]() {
                long num = static_cast<long>(rng() % 10000) + 1;
                long den = static_cast<long>(rng() % 10000) + 1;
                Rat r(num, den);
                if (rng() & 1) r = -r;
                r.canonicalize();
                return r;
            };
            Rat a = draw(), b = draw();
            int total = hilbert_real(a, b);
            Int ab = a.get_num() * a.get_den() * b.get_num() * b.get_den() * 2;
            auto fac = factor_integer(abs(ab));
            REQUIRE(fac.complete());
            for (auto& [p, e] : fac.factors) total ^= hilbert_qp_rational(a, b, p);
            REQUIRE(total == 0);
        }
    }
    SECTION("symmetry and bilinearity") {
        std::mt19937_64 rng(1001);
        for (Int p : {Int(2), Int(3), Int(5), Int(7)}) {
            for (int t = 0; t < 50; ++t) {
                auto draw = [&]() {
                    long v = static_cast<long>(rng() % 200) + 1;
                    Rat r(v);
                    if (rng() & 1) r = -r;
                    long e = static_cast<long>(rng() % 5) - 2;
                    if (e > 0) r *= Rat(int_pow(p, e));
                    if (e < 0) r /= Rat(int_pow(p, -e));
                    return r;
                };
                Rat a = draw(), b = draw(), c = draw();
                REQUIRE(hilbert_qp_rational(a, b, p) == hilbert_qp_rational(b, a, p));
                REQUIRE((hilbert_qp_rational(a, b * c, p) ^ hilbert_qp_rational(a, b, p) ^
                         hilbert_qp_rational(a, c, p)) == 0);
                REQUIRE(hilbert_qp_rational(a, -a, p) == 0);
                if (a != 1) REQUIRE(hilbert_qp_rational(a, 1 - a, p) == 0);
            }
        }
    }
}
