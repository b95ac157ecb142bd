#ifndef FORMRED_REDUCE_HPP
#define FORMRED_REDUCE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "binary_form.hpp"
#include "errors.hpp"
#include "hyperbolic.hpp"
#include "julia.hpp"
#include "roots.hpp"
#include "rounding.hpp"

namespace formred {

enum class reduction_method { julia, hyperbolic, com, shift_descent, scaling, full };

inline std::string_view to_string(reduction_method m)
{
    switch (m) {
    case reduction_method::julia: return "julia";
    case reduction_method::hyperbolic: return "hyperbolic";
    case reduction_method::com: return "com";
    case reduction_method::shift_descent: return "shift-descent";
    case reduction_method::scaling: return "scaling";
    case reduction_method::full: return "full";
    }
    return "?";
}

struct stage_summary {
    reduction_method method;
    mpz_class input_height;
    mpz_class output_height;
};

/*
 * output = primitive(g(scale x, y)) with g = transform(input, matrix),
 * scale = u / v.
 */
struct reduction_report {
    binary_form input;
    binary_form output;
    unimodular_matrix matrix;
    mpq_class scale = 1;
    reduction_method method = reduction_method::full;
    mpz_class input_height;
    mpz_class output_height;
    std::optional<uhp_point> zero_used;
    std::vector<stage_summary> stages; // filled by minimize
};

namespace detail {

inline reduction_report make_report(binary_form const & in, binary_form const & out,
                                    unimodular_matrix const & m, reduction_method method)
{
    auto p = primitive(out);
    mpz_class h = height(p);
    return {in, std::move(p), m, 1, method, height(in), h, std::nullopt, {}};
}

/*
 * Translation taking the centre's real part to the rounded shift, then
 * fundamental-domain reduction if the centre still lies below |z| = 1.
 */
inline unimodular_matrix centering_matrix(uhp_point centre, mpq_class const & real_part,
                                          shift_rounding const & rounding)
{
    mpz_class k = centering_shift(real_part, rounding);
    if (!k.fits_slong_p()) throw numeric_error("centering shift exceeds 64 bits");
    auto tr = unimodular_matrix::translation(k.get_si());
    uhp_point z = act(centre, tr);
    if (z.norm2() >= 1) return tr;
    auto fd = reduce_to_fundamental(z);
    return tr * fd.matrix;
}

} // namespace detail

/*
 * Hyperbolic reduction: move the hyperbolic centroid of the roots to
 * the fundamental domain. Requires a form without real roots.
 */
inline reduction_report reduce_hyperbolic(binary_form const & f, shift_rounding const & rounding = {})
{
    auto roots = roots_upper(f);
    if (!roots.real.empty())
        throw domain_error("hyperbolic reduction needs a form without real roots");
    auto c = hyperbolic_centroid(roots.upper);
    mpq_class t(c.point.t);
    if (auto exact = exact_lattice_roots(f, roots)) t = centroid_real_part_exact(*exact);
    auto m = detail::centering_matrix(c.point, t, rounding);
    auto r = detail::make_report(f, transform(f, m), m, reduction_method::hyperbolic);
    r.zero_used = c.point;
    return r;
}

/* Shift the real part of the roots' centre of mass to the nearest integer. */
inline reduction_report reduce_com(binary_form const & f, shift_rounding const & rounding = {})
{
    auto roots = roots_upper(f);
    if (roots.upper.empty())
        throw domain_error("centre-of-mass reduction needs a non-real root");
    auto com = center_of_mass(roots.upper);
    mpq_class t(com.t);
    if (auto exact = exact_lattice_roots(f, roots)) t = center_of_mass_real_part_exact(*exact);
    mpz_class k = centering_shift(t, rounding);
    auto m = unimodular_matrix::translation(k.get_si());
    auto r = detail::make_report(f, transform(f, m), m, reduction_method::com);
    r.zero_used = com;
    return r;
}

/* Move the Julia zero (minimizer of theta0) into the fundamental domain. */
inline reduction_report julia_reduce(binary_form const & f, julia_options const & opt = {})
{
    auto j = minimize_theta0(f, opt);
    auto fd = reduce_to_fundamental(j.zero);
    auto r = detail::make_report(f, transform(f, fd.matrix), fd.matrix, reduction_method::julia);
    r.zero_used = j.zero;
    return r;
}

struct shift_directions {
    bool plus = false;
    bool minus = false;
};

/* which unit shifts x -> x +- y lower the height */
inline shift_directions shift_direction(binary_form const & f)
{
    mpz_class h = height(f);
    return {height(shift(f, 1L)) < h, height(shift(f, -1L)) < h};
}

/*
 * Integer-shift descent: look at shifts within +-patience of the current
 * position, move to the lowest one if it improves, repeat. The result
 * is no higher than any shift within the window around it.
 */
inline reduction_report shift_descent(binary_form const & f, int patience = 3)
{
    if (patience < 1) throw std::invalid_argument("shift_descent: patience must be >= 1");
    binary_form cur = primitive(f);
    mpz_class best = height(cur);
    long pos = 0;
    for (;;) {
        long best_k = 0;
        mpz_class best_h = best;
        for (int d = 1; d <= patience; ++d) {
            for (long k : {long(d), -long(d)}) {
                mpz_class h = height(shift(cur, k));
                if (h < best_h) {
                    best_h = h;
                    best_k = k;
                }
            }
        }
        if (best_k == 0) break;
        cur = shift(cur, best_k);
        best = best_h;
        pos += best_k;
    }
    return detail::make_report(f, cur, unimodular_matrix::translation(pos),
                               reduction_method::shift_descent);
}

namespace detail {

/* every prime factor of u divides a (a != 0); u = 1 always qualifies */
inline bool primes_divide(unsigned long u, mpz_class const & a)
{
    if (a == 0) return true;
    mpz_class rest = u;
    for (;;) {
        mpz_class g = gcd(rest, a);
        if (g == 1) break;
        rest /= g;
    }
    return rest == 1;
}

/* largest d with d^i | a_i for i = 1..n (ascending indexing), q = 1 if none */
inline mpz_class weighted_gcd(binary_form const & f)
{
    int n = f.degree();
    mpz_class g = 0;
    for (int i = 1; i <= n; ++i)
        g = gcd(g, f.ascending(i));
    if (g == 0) return 1;
    // trial division over g; a leftover cofactor is treated as one prime,
    // which can undercount q when it is a product of large primes
    auto exponent_ok = [&](mpz_class const & d) {
        for (int i = 1; i <= n; ++i) {
            mpz_class di;
            mpz_pow_ui(di.get_mpz_t(), d.get_mpz_t(), static_cast<unsigned long>(i));
            if (f.ascending(i) % di != 0) return false;
        }
        return true;
    };
    mpz_class q = 1, rest = g;
    auto take = [&](mpz_class const p) {
        mpz_class pk = p;
        while (exponent_ok(q * pk)) pk *= p;
        q *= pk / p;
        while (rest % p == 0) rest /= p;
    };
    for (unsigned long p = 2; p <= 1000000 && mpz_class(p) * p <= rest; ++p)
        if (rest % p == 0) take(mpz_class(p));
    if (rest > 1) take(rest);
    return q;
}

} // namespace detail

/*
 * Scaling from the weighted gcd: q = wgcd(a_1..a_n) with weights
 * (1..n), p = gcd(a_0, q), candidate primitive(f(p x, y)). Returns the
 * input when the candidate is not lower.
 */
inline reduction_report scale_lemma(binary_form const & f)
{
    mpz_class q = detail::weighted_gcd(f);
    mpz_class p = gcd(f.ascending(0), q);
    if (p == 0) p = q;
    auto cand = primitive(scale_cleared(f, p.get_ui(), 1));
    auto in = primitive(f);
    bool better = height(cand) < height(in);
    auto r = detail::make_report(f, better ? cand : in, unimodular_matrix::identity(),
                                 reduction_method::scaling);
    r.scale = better ? mpq_class(p) : mpq_class(1);
    return r;
}

/*
 * Exhaustive scaling search over x -> (u/v) x, 1 <= u, v <= bound,
 * gcd(u, v) = 1. Ties prefer u/v = 1, then the smallest u + v.
 *
 * A pair whose u has a prime not dividing the y^n coefficient (or whose
 * v has a prime not dividing the x^n coefficient) is dominated by the
 * pair with that prime removed, so those are skipped.
 */
inline reduction_report scale_search(binary_form const & f, unsigned long bound = 64)
{
    if (bound < 1) throw std::invalid_argument("scale_search: bound must be >= 1");
    binary_form in = primitive(f);
    binary_form best = in;
    mpz_class best_h = height(in);
    unsigned long bu = 1, bv = 1;
    mpz_class const & xn = in.ascending(in.degree());
    mpz_class const & yn = in.ascending(0);
    for (unsigned long s = 3; s <= 2 * bound; ++s) {
        for (unsigned long u = (s > bound ? s - bound : 1); u <= bound && u < s; ++u) {
            unsigned long v = s - u;
            if (std::gcd(u, v) != 1) continue;
            if (!detail::primes_divide(u, yn) || !detail::primes_divide(v, xn)) continue;
            auto cand = primitive(scale_cleared(in, u, v));
            mpz_class h = height(cand);
            if (h < best_h) {
                best_h = h;
                best = cand;
                bu = u;
                bv = v;
            }
        }
    }
    auto r = detail::make_report(f, best, unimodular_matrix::identity(), reduction_method::scaling);
    r.scale = mpq_class(bu, bv);
    r.scale.canonicalize();
    return r;
}

struct minimize_options {
    int patience = 3;
    unsigned long scale_bound = 64;
    shift_rounding rounding;
};

/*
 * Full pipeline: geometric reduction (hyperbolic and centre of mass, or
 * Julia when every root is real), shift descent from each candidate,
 * then the scaling search. No stage raises the height.
 */
inline reduction_report minimize(binary_form const & f, minimize_options const & opt = {})
{
    if (f.degree() < 2) throw domain_error("minimize: degree must be >= 2");
    auto roots = roots_upper(f);

    std::vector<reduction_report> starts;
    if (roots.real.empty()) starts.push_back(reduce_hyperbolic(f, opt.rounding));
    if (!roots.upper.empty()) starts.push_back(reduce_com(f, opt.rounding));
    if (roots.upper.empty()) starts.push_back(julia_reduce(f));

    reduction_report out = detail::make_report(f, f, unimodular_matrix::identity(),
                                               reduction_method::full);
    stage_summary geo{starts.front().method, out.input_height, out.input_height};
    for (auto const & s : starts)
        if (s.output_height < geo.output_height) {
            geo = {s.method, out.input_height, s.output_height};
            out.matrix = s.matrix;
            out.output = s.output;
            out.zero_used = s.zero_used;
        }
    out.output_height = geo.output_height;
    out.stages.push_back(geo);

    // descent from every start, keep the lowest
    stage_summary desc{reduction_method::shift_descent, out.output_height, out.output_height};
    auto try_descent = [&](binary_form const & g, unimodular_matrix const & m) {
        auto d = shift_descent(g, opt.patience);
        if (d.output_height < desc.output_height) {
            desc.output_height = d.output_height;
            out.output = d.output;
            out.matrix = m * d.matrix;
        }
    };
    try_descent(out.output, out.matrix);
    for (auto const & s : starts)
        try_descent(s.output, s.matrix);
    out.output_height = desc.output_height;
    out.stages.push_back(desc);

    auto sc = scale_search(out.output, opt.scale_bound);
    out.stages.push_back({reduction_method::scaling, out.output_height, sc.output_height});
    out.output = sc.output;
    out.output_height = sc.output_height;
    out.scale = sc.scale;
    return out;
}

} // namespace formred

#endif
