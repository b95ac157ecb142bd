#ifndef FORMRED_QUADRATIC_HPP
#define FORMRED_QUADRATIC_HPP

#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "binary_form.hpp"
#include "errors.hpp"
#include "uhp_point.hpp"

namespace formred {

/* Q(x, y) = a x^2 + b x y + c y^2, written [a, b, c]. */
template <class T>
struct quadratic_form {
    T a{}, b{}, c{};

    T discriminant() const { return T(b * b - 4 * a * c); }
    bool positive_definite() const { return a > 0 && discriminant() < 0; }

    friend bool operator==(quadratic_form const &, quadratic_form const &) = default;
    friend std::ostream & operator<<(std::ostream & o, quadratic_form const & q)
    {
        return o << "[" << q.a << "," << q.b << "," << q.c << "]";
    }
};

inline double as_double(double x) { return x; }
inline double as_double(std::int64_t x) { return static_cast<double>(x); }
inline double as_double(mpz_class const & x) { return x.get_d(); }
inline double as_double(mpq_class const & x) { return x.get_d(); }

/* Q(a11 x + a12 y, a21 x + a22 y); preserves the discriminant */
template <class T>
quadratic_form<T> transform(quadratic_form<T> const & q, unimodular_matrix const & m)
{
    T p = T(m.a11), r = T(m.a12), s = T(m.a21), w = T(m.a22);
    return {T(q.a * p * p + q.b * p * s + q.c * s * s),
            T(2 * q.a * p * r + q.b * (p * w + r * s) + 2 * q.c * s * w),
            T(q.a * r * r + q.b * r * w + q.c * w * w)};
}

/* the root (-b + sqrt(D)) / 2a in the upper half plane */
template <class T>
uhp_point zero_map(quadratic_form<T> const & q)
{
    if (!q.positive_definite())
        throw domain_error("zero map needs a positive definite quadratic");
    double a = as_double(q.a), b = as_double(q.b), d = as_double(q.discriminant());
    return {-b / (2 * a), std::sqrt(std::fabs(d)) / (2 * a)};
}

/* |b| <= a <= c */
template <class T>
bool is_reduced(quadratic_form<T> const & q)
{
    T ab = q.b < 0 ? T(-q.b) : q.b;
    return ab <= q.a && q.a <= q.c;
}

template <class T>
struct quadratic_reduction {
    quadratic_form<T> form;
    unimodular_matrix matrix; // transform(input, matrix) == form
};

namespace detail {

template <class T>
T nearest_div(T const & num, T const & den) // round(num / den), den > 0
{
    if constexpr (std::is_same_v<T, mpz_class>) {
        mpz_class q;
        mpz_class twice = 2 * num + den;
        mpz_class d2 = 2 * den;
        mpz_fdiv_q(q.get_mpz_t(), twice.get_mpz_t(), d2.get_mpz_t());
        return q;
    } else {
        T twice = 2 * num + den, d2 = 2 * den;
        T q = twice / d2;
        if ((twice % d2 != 0) && ((twice < 0) != (d2 < 0))) --q;
        return q;
    }
}

inline std::int64_t to_i64(mpz_class const & z)
{
    if (!z.fits_slong_p()) throw numeric_error("reduction step exceeds 64 bits");
    return z.get_si();
}
inline std::int64_t to_i64(std::int64_t z) { return z; }

} // namespace detail

/*
 * Gauss reduction of a positive definite integer quadratic: translate
 * b into (-a, a], swap a and c while a > c. Boundary cases end with
 * b >= 0 (|b| = a or a = c).
 */
template <class T>
quadratic_reduction<T> reduce(quadratic_form<T> q)
{
    if (!q.positive_definite())
        throw domain_error("reduction needs a positive definite quadratic");
    unimodular_matrix m;
    auto apply = [&](unimodular_matrix const & step) {
        q = transform(q, step);
        m = m * step;
    };
    for (;;) {
        // b' = b + 2 a k, choose k with b' in (-a, a]
        T k = detail::nearest_div(T(-q.b), T(2 * q.a));
        if (T(q.b + 2 * q.a * k) <= -q.a) k += 1;
        if (k != 0) apply(unimodular_matrix::translation(detail::to_i64(k)));
        if (q.a > q.c) {
            apply(unimodular_matrix::inversion());
            continue;
        }
        break;
    }
    if (q.a == q.c && q.b < 0) apply(unimodular_matrix::inversion());
    return {q, m};
}

/*
 * All reduced integer forms of discriminant -D (D > 0, D = 0, 3 mod 4),
 * with [a,-b,a] ~ [a,b,a] and [a,-a,c] ~ [a,a,c] identified. With
 * primitive_only the count is the class number h(-D).
 */
inline std::vector<quadratic_form<std::int64_t>> enumerate_reduced(std::int64_t D,
                                                                   bool primitive_only = false)
{
    if (D <= 0 || (D % 4 != 0 && D % 4 != 3))
        throw domain_error("discriminant -D needs D > 0 and D = 0 or 3 mod 4");
    std::vector<quadratic_form<std::int64_t>> out;
    auto bmax = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(D) / 3.0)));
    while ((bmax + 1) * (bmax + 1) * 3 <= D) ++bmax;
    while (bmax * bmax * 3 > D) --bmax;
    for (std::int64_t b = -bmax; b <= bmax; ++b) {
        if ((b * b + D) % 4 != 0) continue;
        std::int64_t ac = (b * b + D) / 4;
        for (std::int64_t a = std::max<std::int64_t>(1, b < 0 ? -b : b); a * a <= ac; ++a) {
            if (ac % a) continue;
            std::int64_t c = ac / a;
            if (b < 0 && (-b == a || a == c)) continue;
            if (primitive_only && std::gcd(std::gcd(a, b), c) != 1) continue;
            out.push_back({a, b, c});
        }
    }
    return out;
}

} // namespace formred

#endif
