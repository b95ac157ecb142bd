#ifndef FORMRED_ROOTS_HPP
#define FORMRED_ROOTS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "binary_form.hpp"
#include "uhp_point.hpp"

namespace formred {

/* Roots of f(x, 1): one point per conjugate pair, plus the real roots. */
struct upper_root_set {
    std::vector<uhp_point> upper;
    std::vector<double> real;
    bool repeated = false;

    int degree() const { return static_cast<int>(real.size() + 2 * upper.size()); }
};

namespace detail {

using cld = std::complex<long double>;

inline cld horner(std::vector<long double> const & p, cld z)
{
    cld v = 0;
    for (long double c : p)
        v = v * z + c;
    return v;
}

/* value and derivative */
inline std::pair<cld, cld> horner2(std::vector<long double> const & p, cld z)
{
    cld v = 0, d = 0;
    for (long double c : p) {
        d = d * z + v;
        v = v * z + c;
    }
    return {v, d};
}

/*
 * All complex roots of the polynomial with (descending) coefficients p,
 * p[0] != 0, by Aberth-Ehrlich simultaneous iteration.
 */
inline std::vector<cld> aberth(std::vector<long double> p, int max_iter = 500)
{
    int n = static_cast<int>(p.size()) - 1;
    long double lead = p[0];
    for (auto & c : p)
        c /= lead;
    // Fujiwara-style bound for the initial circle
    long double radius = 0;
    for (int i = 1; i <= n; ++i)
        radius = std::max(radius, std::pow(std::fabs(p[i]), 1.0L / i));
    radius = std::max(radius, 1.0L);

    std::vector<cld> z(n);
    for (int k = 0; k < n; ++k) {
        long double ang = 2 * std::numbers::pi_v<long double> * k / n + 0.4L;
        z[k] = std::polar(radius, ang);
    }
    for (int it = 0; it < max_iter; ++it) {
        long double worst = 0;
        for (int k = 0; k < n; ++k) {
            auto [v, d] = horner2(p, z[k]);
            if (v == cld(0)) continue;
            cld ratio = v / d;
            cld s = 0;
            for (int j = 0; j < n; ++j)
                if (j != k) s += 1.0L / (z[k] - z[j]);
            cld step = ratio / (1.0L - ratio * s);
            z[k] -= step;
            worst = std::max(worst, std::abs(step) / (1 + std::abs(z[k])));
        }
        if (worst < 1e-17L) return z;
    }
    // Aberth converges slowly on clustered roots; accept if residuals are small
    long double worst = 0;
    for (auto const & r : z) {
        long double scale = 0, pw = 1;
        for (int i = n; i >= 0; --i) {
            scale += std::fabs(p[i]) * pw;
            pw *= std::abs(r);
        }
        worst = std::max(worst, std::abs(horner(p, r)) / scale);
    }
    if (worst > 1e-12L)
        throw numeric_error("root finder did not converge");
    return z;
}

} // namespace detail

/*
 * Numerically compute the roots of f(x, 1) and split them into upper
 * half plane points and real roots. A root is real when
 * |Im| <= tol (1 + |root|).
 */
template <class Int>
upper_root_set roots_upper(basic_binary_form<Int> const & f, double tol = 1e-8)
{
    if (f.leading() == 0)
        throw domain_error("form has a root at infinity (leading coefficient 0)");
    std::vector<long double> p;
    for (auto const & c : f.coeffs())
        p.push_back(static_cast<long double>(to_mpz(c).get_d()));
    auto z = detail::aberth(p);

    upper_root_set out;
    int lower = 0;
    for (auto const & r : z) {
        double re = static_cast<double>(r.real()), im = static_cast<double>(r.imag());
        double lim = tol * (1 + std::abs(std::complex<double>(re, im)));
        if (std::fabs(im) <= lim)
            out.real.push_back(re);
        else if (im > 0)
            out.upper.push_back({re, im});
        else
            ++lower;
    }
    if (lower != static_cast<int>(out.upper.size()))
        throw numeric_error("complex roots do not pair into conjugates");
    auto by_coord = [](uhp_point const & a, uhp_point const & b) {
        return a.t != b.t ? a.t < b.t : a.u < b.u;
    };
    std::sort(out.upper.begin(), out.upper.end(), by_coord);
    std::sort(out.real.begin(), out.real.end());

    for (std::size_t i = 0; i < z.size(); ++i)
        for (std::size_t j = i + 1; j < z.size(); ++j)
            if (std::abs(z[i] - z[j]) < 1e-6L * (1 + std::abs(z[i])))
                out.repeated = true;
    return out;
}

/*
 * If every root is an upper half plane Gaussian integer, return those
 * roots, verified by exact re-expansion against f.
 */
template <class Int>
std::optional<std::vector<lattice_point>> exact_lattice_roots(basic_binary_form<Int> const & f,
                                                              upper_root_set const & roots)
{
    if (!roots.real.empty() || roots.upper.empty()) return std::nullopt;
    std::vector<lattice_point> pts;
    for (auto const & z : roots.upper) {
        double x = std::round(z.t), y = std::round(z.u);
        if (y < 1 || std::fabs(x - z.t) > 1e-4 || std::fabs(y - z.u) > 1e-4) return std::nullopt;
        pts.push_back({static_cast<long>(x), static_cast<long>(y)});
    }
    auto g = from_upper_roots<mpz_class>(pts);
    mpz_class lead = to_mpz(f.leading());
    for (int i = 0; i <= f.degree(); ++i)
        if (to_mpz(f[i]) != lead * g[i]) return std::nullopt;
    std::sort(pts.begin(), pts.end());
    return pts;
}

} // namespace formred

#endif
