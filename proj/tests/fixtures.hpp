#pragma once

// Shared regression fixtures: two curves with known behavior used across the
// test suites, plus small helpers for building random polynomials.

#include <random>
#include <vector>

#include "obstruct/arith/intpoly.hpp"

namespace fixtures {

// Genus-5 curve y^2 = f(x), deg f = 12, lc = -17.  Known: S_min = {oo,2,5,17},
// everywhere locally soluble, discriminant factors into seven primes.
inline obstruct::IntPoly genus5_poly() {
    // constant term first
    return obstruct::IntPoly({-6, 13, 12, 19, -2, 4, -19, 5, -19, 6, -15, -13, -17});
}

// Genus-50 curve y^2 = 5*f50(x) with f50 monic of degree 102, f50(0) = 1.
// Known: two real roots, a single 5-adic root congruent to 3 mod 5,
// N(theta) = 1, and an obstruction generated by theta.
inline obstruct::IntPoly genus50_inner_poly() {
    static const int exps[] = {102, 101, 97, 95, 93, 90, 86, 80, 77, 75, 71, 70, 68, 65,
                               64,  63,  62, 59, 58, 53, 50, 49, 48, 46, 45, 44, 38, 37,
                               36,  35,  32, 31, 26, 25, 22, 16, 11, 8,  7,  1,  0};
    std::vector<obstruct::Int> c(103, obstruct::Int(0));
    for (int e : exps) c[e] = 1;
    return obstruct::IntPoly(std::move(c));
}

// 5 * f50: the actual curve polynomial of the genus-50 example
inline obstruct::IntPoly genus50_curve_poly() {
    return obstruct::Int(5) * genus50_inner_poly();
}

inline obstruct::IntPoly random_poly(std::mt19937_64& rng, long degree, long coeff_bound,
                                     bool exact_degree = true) {
    std::uniform_int_distribution<long> d(-coeff_bound, coeff_bound);
    std::vector<obstruct::Int> c(degree + 1);
    for (auto& v : c) v = d(rng);
    if (exact_degree)
        while (c.back() == 0) c.back() = d(rng);
    return obstruct::IntPoly(std::move(c));
}

}  // namespace fixtures
