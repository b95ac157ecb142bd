// Shared inputs for the unit tests and the acceptance run.
#ifndef FORMRED_TESTS_FIXTURES_HPP
#define FORMRED_TESTS_FIXTURES_HPP

#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include <formred/formred.hpp>

#include "oracles.hpp"

namespace fixture {

using namespace formred;

inline binary_form triangle()
{
    return make_form({1, -44, 1325, -32280, 480964, -5809376, 47831060});
}

inline binary_form pentagon()
{
    return from_upper_roots({{1, 5}, {1, 6}, {2, 6}, {3, 3}, {6, 1}});
}

/* lead * prod (x - a y) * prod (x^2 - 2 x_j x y + |alpha_j|^2 y^2) */
inline binary_form build_form(std::vector<long> const & real, std::vector<lattice_point> const & upper,
                              long lead = 1)
{
    std::vector<mpz_class> f{mpz_class(lead)};
    for (long a : real)
        f = detail::poly_mul(f, std::vector<mpz_class>{1, -a});
    for (auto const & p : upper)
        f = detail::poly_mul(f, std::vector<mpz_class>{1, -2 * p.x, p.x * p.x + p.y * p.y});
    return binary_form(f);
}

/* distinct integer real roots and distinct lattice upper roots, mixed signatures */
inline binary_form random_mixed_form(std::mt19937_64 & rng)
{
    std::uniform_int_distribution<long> dr(-8, 8), dx(-6, 6), dy(1, 6);
    std::uniform_int_distribution<int> dsig(0, 5);
    for (;;) {
        std::vector<long> real;
        std::vector<lattice_point> upper;
        switch (dsig(rng)) {
        case 0: upper.resize(2); break;
        case 1: upper.resize(3); break;
        case 2: real.resize(3); break;
        case 3: real.resize(2); upper.resize(1); break;
        case 4: real.resize(1); upper.resize(2); break;
        default: real.resize(4); upper.resize(1); break;
        }
        for (auto & a : real) a = dr(rng);
        for (auto & p : upper) p = {dx(rng), dy(rng)};
        auto rs = real;
        std::sort(rs.begin(), rs.end());
        if (std::adjacent_find(rs.begin(), rs.end()) != rs.end()) continue;
        auto us = upper;
        std::sort(us.begin(), us.end());
        if (std::adjacent_find(us.begin(), us.end()) != us.end()) continue;
        return build_form(real, upper);
    }
}

/* a random det-1 image that keeps every root finite */
inline std::pair<binary_form, unimodular_matrix> random_image(std::mt19937_64 & rng, binary_form const & f)
{
    for (;;) {
        auto m = oracle::random_sl2(rng, 3);
        auto g = transform(f, m);
        if (g.leading() != 0) return {g, m};
    }
}

inline std::vector<binary_form> fixed_sextics()
{
    return {
        triangle(),
        from_upper_roots({{0, 1}, {1, 2}, {3, 1}}),
        from_upper_roots({{-2, 3}, {0, 1}, {5, 2}}),
        from_upper_roots({{1, 1}, {1, 2}, {1, 3}}),
        build_form({0, 1, -2, 3}, {{0, 1}}),
        make_form({1, -3, 2, 5, -1, 4, 7}),
        make_form({2, 0, -5, 1, 3, 0, 1}),
        make_form({1, 1, 1, 1, 1, 1, 1}),
        make_form({3, -2, 0, 7, -4, 1, -5}),
        build_form({1, 2, -1, -3, 5, -4}, {}),
    };
}

inline std::vector<uhp_point> random_points(std::mt19937_64 & rng, int n, double lo = 1, double hi = 20)
{
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<uhp_point> p;
    for (int i = 0; i < n; ++i)
        p.push_back({d(rng), d(rng)});
    return p;
}

inline double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

} // namespace fixture

#endif
