#ifndef FORMRED_HYPERBOLIC_HPP
#define FORMRED_HYPERBOLIC_HPP

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "binary_form.hpp"
#include "errors.hpp"
#include "quadratic.hpp"
#include "rounding.hpp"
#include "uhp_point.hpp"

namespace formred {

/* w = (a11 z + a12) / (a21 z + a22) */
inline uhp_point mobius(unimodular_matrix const & m, uhp_point const & p)
{
    std::complex<double> z = p.z();
    std::complex<double> w = (double(m.a11) * z + double(m.a12)) / (double(m.a21) * z + double(m.a22));
    // Im w = Im z / |a21 z + a22|^2 exactly for det 1
    double den = std::norm(double(m.a21) * z + double(m.a22));
    return {w.real(), p.u / den};
}

/*
 * Right action z.M = M^{-1}(z). The zero map satisfies
 * zero(Q^M) = act(zero(Q), M), and the roots of transform(f, M) are
 * the roots of f acted on by M.
 */
inline uhp_point act(uhp_point const & p, unimodular_matrix const & m)
{
    return mobius(m.inverse(), p);
}

/* hyperbolic distance; cosh d = 1 + |z - w|^2 / (2 u v) */
inline double dist_h(uhp_point const & z, uhp_point const & w)
{
    double e2 = (z.t - w.t) * (z.t - w.t) + (z.u - w.u) * (z.u - w.u);
    return 2 * std::asinh(std::sqrt(e2 / (4 * z.u * w.u)));
}

/*
 * psi(x, y) = sum_i (prod_{k != i} y_k / s_{n-1}(y)) x_i, which is the
 * mean of x weighted by 1/y.
 */
inline double psi(std::span<double const> x, std::span<double const> y)
{
    if (x.size() != y.size())
        throw std::invalid_argument("psi: length mismatch");
    if (x.empty())
        throw std::invalid_argument("psi: empty input");
    double num = 0, den = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(y[i] > 0))
            throw std::invalid_argument("psi: weights must be positive");
        num += x[i] / y[i];
        den += 1 / y[i];
    }
    return num / den;
}

inline uhp_point center_of_mass(std::span<uhp_point const> pts)
{
    if (pts.empty())
        throw std::invalid_argument("center_of_mass: empty point list");
    double t = 0, u = 0;
    for (auto const & p : pts) {
        t += p.t;
        u += p.u;
    }
    return {t / double(pts.size()), u / double(pts.size())};
}

struct centroid_result {
    uhp_point point;
    std::vector<double> weights;        // convex, proportional to 1/y_i
    quadratic_form<double> quadratic;   // sum_i w_i Q_{alpha_i}
};

/* Q_alpha = (x - alpha y)(x - conj(alpha) y) */
inline quadratic_form<double> root_quadratic(uhp_point const & a)
{
    return {1.0, -2 * a.t, a.norm2()};
}

/*
 * Hyperbolic centroid: the minimizer of
 *     sum_j ((t - x_j)^2 + (u - y_j)^2) / (u y_j),
 * from the closed form t = psi(x, y), |C|^2 = psi(|alpha|^2, y).
 */
inline centroid_result hyperbolic_centroid(std::span<uhp_point const> pts)
{
    if (pts.empty())
        throw std::invalid_argument("hyperbolic_centroid: empty point list");
    std::vector<double> w;
    double s = 0;
    for (auto const & p : pts) {
        if (!(p.u > 0))
            throw domain_error("hyperbolic_centroid: point not in the upper half plane");
        w.push_back(1 / p.u);
        s += 1 / p.u;
    }
    quadratic_form<double> q{0, 0, 0};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        w[i] /= s;
        auto qi = root_quadratic(pts[i]);
        q.a += w[i] * qi.a;
        q.b += w[i] * qi.b;
        q.c += w[i] * qi.c;
    }
    q.a = 1;
    double t = -q.b / 2;
    double u2 = q.c - t * t;
    if (!(u2 > 0))
        throw numeric_error("hyperbolic_centroid: |C|^2 - t^2 is not positive");
    return {{t, std::sqrt(u2)}, std::move(w), q};
}

/*
 * u^2 of the centroid from factor coefficients x^2 + a_i x y + b_i y^2,
 * d_i = sqrt(4 b_i - a_i^2), through the explicit double sum
 *     u^2 = prod d / (4 s^2) (s sum d + sum_{i<j} prod_{k != i,j} d_k (a_i - a_j)^2).
 */
inline double centroid_u2_from_factors(std::span<double const> a, std::span<double const> d)
{
    std::size_t n = a.size();
    auto prod_except = [&](std::size_t i, std::size_t j) {
        double p = 1;
        for (std::size_t k = 0; k < n; ++k)
            if (k != i && k != j) p *= d[k];
        return p;
    };
    double s = 0, sum_d = 0, prod_d = 1;
    for (std::size_t i = 0; i < n; ++i) {
        s += prod_except(i, i);
        sum_d += d[i];
        prod_d *= d[i];
    }
    double pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            pairs += prod_except(i, j) * (a[i] - a[j]) * (a[i] - a[j]);
    return prod_d / (4 * s * s) * (s * sum_d + pairs);
}

inline centroid_result centroid_from_factors(std::span<double const> a, std::span<double const> b)
{
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("centroid_from_factors: bad factor lists");
    std::vector<double> d;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double disc = 4 * b[i] - a[i] * a[i];
        if (!(disc > 0))
            throw domain_error("centroid_from_factors: factor is not positive definite");
        d.push_back(std::sqrt(disc));
    }
    double t = -psi(a, d) / 2;
    double c2 = psi(b, d);
    double u2 = centroid_u2_from_factors(a, d);
    double u2_alt = c2 - t * t;
    if (std::fabs(u2 - u2_alt) > 1e-8 * std::max(1.0, std::fabs(u2)))
        throw numeric_error("centroid_from_factors: closed forms disagree");

    std::vector<double> w;
    double s = 0;
    for (double di : d) {
        w.push_back(1 / di);
        s += 1 / di;
    }
    quadratic_form<double> q{0, 0, 0};
    for (std::size_t i = 0; i < a.size(); ++i) {
        w[i] /= s;
        q.a += w[i];
        q.b += w[i] * a[i];
        q.c += w[i] * b[i];
    }
    q.a = 1;
    return {{t, std::sqrt(u2)}, std::move(w), q};
}

/* real part of the centroid of Gaussian-integer points, exactly */
inline mpq_class centroid_real_part_exact(std::span<lattice_point const> pts)
{
    if (pts.empty())
        throw std::invalid_argument("centroid_real_part_exact: empty point list");
    mpz_class num = 0, den = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        mpz_class p = 1;
        for (std::size_t k = 0; k < pts.size(); ++k)
            if (k != i) p *= pts[k].y;
        num += p * pts[i].x;
        den += p;
    }
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

inline mpq_class center_of_mass_real_part_exact(std::span<lattice_point const> pts)
{
    if (pts.empty())
        throw std::invalid_argument("center_of_mass_real_part_exact: empty point list");
    mpz_class s = 0;
    for (auto const & p : pts)
        s += p.x;
    mpq_class q(s, static_cast<unsigned long>(pts.size()));
    q.canonicalize();
    return q;
}

struct fundamental_reduction {
    uhp_point point;
    unimodular_matrix matrix; // point == act(input, matrix)
};

/*
 * Move z into F = {|Re z| <= 1/2, |z| >= 1} by alternating
 * translations and z -> -1/z. On the boundary the representative with
 * Re >= 0 is chosen.
 */
inline fundamental_reduction reduce_to_fundamental(uhp_point z, int max_steps = 10000)
{
    if (!(z.u > 0))
        throw domain_error("reduce_to_fundamental: point not in the upper half plane");
    constexpr double eps = 1e-12;
    unimodular_matrix m;
    for (int step = 0; step < max_steps; ++step) {
        // t - k in (-1/2, 1/2]
        auto k = static_cast<std::int64_t>(std::ceil(z.t - 0.5));
        if (k != 0) {
            auto tr = unimodular_matrix::translation(k);
            z = act(z, tr);
            m = m * tr;
        }
        // rounding can leave t just above -1/2
        if (z.t < -0.5 + eps) {
            auto tr = unimodular_matrix::translation(-1);
            z = act(z, tr);
            m = m * tr;
        }
        if (z.norm2() < 1 - eps) {
            z = act(z, unimodular_matrix::inversion());
            m = m * unimodular_matrix::inversion();
            continue;
        }
        if (z.norm2() <= 1 + eps && z.t < -eps) {
            z = act(z, unimodular_matrix::inversion());
            m = m * unimodular_matrix::inversion();
        }
        return {z, m};
    }
    throw numeric_error("reduce_to_fundamental: too many steps");
}

} // namespace formred

#endif
