#ifndef FORMRED_BINARY_FORM_HPP
#define FORMRED_BINARY_FORM_HPP

#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "errors.hpp"

namespace formred {

/* gcd/abs over the coefficient types we use (mpz_class, int64). */
inline mpz_class int_abs(mpz_class const & a) { return abs(a); }
inline std::int64_t int_abs(std::int64_t a) { return a < 0 ? -a : a; }
inline mpz_class int_gcd(mpz_class const & a, mpz_class const & b) { return gcd(a, b); }
inline std::int64_t int_gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }
inline mpz_class to_mpz(mpz_class const & a) { return a; }
inline mpz_class to_mpz(std::int64_t a) { return mpz_class(static_cast<long>(a)); }

/*
 * 2x2 integer matrix of determinant 1, entries
 *
 *     [ a11 a12 ]
 *     [ a21 a22 ]
 *
 * acting on forms by f(x, y) -> f(a11 x + a12 y, a21 x + a22 y).
 */
struct unimodular_matrix {
    std::int64_t a11 = 1, a12 = 0, a21 = 0, a22 = 1;

    static unimodular_matrix identity() { return {}; }
    /* f(x + m y, y); moves roots by -m */
    static unimodular_matrix translation(std::int64_t m) { return {1, m, 0, 1}; }
    /* z -> -1/z */
    static unimodular_matrix inversion() { return {0, -1, 1, 0}; }

    static unimodular_matrix checked(std::int64_t a11, std::int64_t a12,
                                     std::int64_t a21, std::int64_t a22)
    {
        unimodular_matrix m{a11, a12, a21, a22};
        if (m.det() != 1)
            throw std::invalid_argument("matrix determinant is not 1");
        return m;
    }

    std::int64_t det() const { return a11 * a22 - a12 * a21; }

    unimodular_matrix inverse() const { return {a22, -a12, -a21, a11}; }

    friend unimodular_matrix operator*(unimodular_matrix const & x,
                                       unimodular_matrix const & y)
    {
        auto mul_add = [](std::int64_t p, std::int64_t q, std::int64_t r, std::int64_t s) {
            std::int64_t u, v, w;
            if (__builtin_mul_overflow(p, q, &u) || __builtin_mul_overflow(r, s, &v)
                || __builtin_add_overflow(u, v, &w))
                throw numeric_error("unimodular matrix entries overflow 64 bits");
            return w;
        };
        return {mul_add(x.a11, y.a11, x.a12, y.a21), mul_add(x.a11, y.a12, x.a12, y.a22),
                mul_add(x.a21, y.a11, x.a22, y.a21), mul_add(x.a21, y.a12, x.a22, y.a22)};
    }

    friend bool operator==(unimodular_matrix const &, unimodular_matrix const &) = default;

    friend std::ostream & operator<<(std::ostream & o, unimodular_matrix const & m)
    {
        return o << "[[" << m.a11 << "," << m.a12 << "],[" << m.a21 << "," << m.a22 << "]]";
    }
};

/*
 * Binary form f(x, y) = sum_i c_i x^(n-i) y^i with exact integer
 * coefficients listed in descending powers of x (c_0 is the x^n
 * coefficient).
 */
template <class Int>
class basic_binary_form {
    std::vector<Int> c;

public:
    explicit basic_binary_form(std::vector<Int> coeffs) : c(std::move(coeffs))
    {
        if (c.size() < 2)
            throw std::invalid_argument("binary form needs degree >= 1");
        bool nonzero = false;
        for (auto const & x : c)
            nonzero = nonzero || x != 0;
        if (!nonzero)
            throw std::invalid_argument("zero form");
    }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    std::vector<Int> const & coeffs() const { return c; }
    Int const & operator[](std::size_t i) const { return c[i]; }
    Int const & leading() const { return c.front(); }

    /* the coefficient of x^i y^(n-i), i.e. ascending-x indexing */
    Int const & ascending(int i) const { return c[c.size() - 1 - i]; }

    friend bool operator==(basic_binary_form const & a, basic_binary_form const & b)
    {
        return a.c == b.c;
    }

    friend std::ostream & operator<<(std::ostream & o, basic_binary_form const & f)
    {
        o << "[";
        for (std::size_t i = 0; i < f.c.size(); ++i)
            o << (i ? "," : "") << f.c[i];
        return o << "]";
    }
};

using binary_form = basic_binary_form<mpz_class>;

inline binary_form make_form(std::initializer_list<long> cs)
{
    std::vector<mpz_class> v;
    for (long x : cs)
        v.emplace_back(x);
    return binary_form(std::move(v));
}

template <class Int>
Int content(basic_binary_form<Int> const & f)
{
    Int g = 0;
    for (auto const & x : f.coeffs())
        g = int_gcd(g, x);
    return int_abs(g);
}

/* divide by the content; leading nonzero coefficient made positive */
template <class Int>
basic_binary_form<Int> primitive(basic_binary_form<Int> const & f)
{
    Int g = content(f);
    std::vector<Int> v = f.coeffs();
    for (auto const & x : v) {
        if (x != 0) {
            if (x < 0) g = -g;
            break;
        }
    }
    for (auto & x : v)
        x /= g;
    return basic_binary_form<Int>(std::move(v));
}

/* naive height: max |c_i| of the primitive representative */
template <class Int>
Int height(basic_binary_form<Int> const & f)
{
    Int g = content(f);
    Int m = 0;
    for (auto const & x : f.coeffs()) {
        Int a = int_abs(x);
        if (a > m) m = a;
    }
    return Int(m / g);
}

/* f(x + m y, y), by repeated synthetic division (Taylor shift) */
template <class Int>
basic_binary_form<Int> shift(basic_binary_form<Int> const & f, Int const & m)
{
    std::vector<Int> v = f.coeffs();
    int n = f.degree();
    for (int i = 0; i < n; ++i)
        for (int j = 1; j <= n - i; ++j)
            v[j] += m * v[j - 1];
    return basic_binary_form<Int>(std::move(v));
}

inline binary_form shift(binary_form const & f, long m) { return shift(f, mpz_class(m)); }

namespace detail {

/* product of polynomials in one variable, coefficient lists in the same order */
template <class Int>
std::vector<Int> poly_mul(std::vector<Int> const & a, std::vector<Int> const & b)
{
    std::vector<Int> r(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

} // namespace detail

/* f(a11 x + a12 y, a21 x + a22 y) */
template <class Int>
basic_binary_form<Int> transform(basic_binary_form<Int> const & f, unimodular_matrix const & m)
{
    int n = f.degree();
    // powers of the two linear forms, as [x-coeff, y-coeff] descending lists
    std::vector<std::vector<Int>> pl(n + 1), ql(n + 1);
    pl[0] = ql[0] = {Int(1)};
    std::vector<Int> l1{Int(m.a11), Int(m.a12)}, l2{Int(m.a21), Int(m.a22)};
    for (int k = 1; k <= n; ++k) {
        pl[k] = detail::poly_mul(pl[k - 1], l1);
        ql[k] = detail::poly_mul(ql[k - 1], l2);
    }
    std::vector<Int> out(n + 1, Int(0));
    for (int i = 0; i <= n; ++i) {
        if (f[i] == 0) continue;
        auto term = detail::poly_mul(pl[n - i], ql[i]);
        for (int j = 0; j <= n; ++j)
            out[j] += f[i] * term[j];
    }
    return basic_binary_form<Int>(std::move(out));
}

/* Gaussian integer x + i y in the upper half plane */
struct lattice_point {
    long x = 0;
    long y = 0;

    friend auto operator<=>(lattice_point const &, lattice_point const &) = default;
    friend std::ostream & operator<<(std::ostream & o, lattice_point const & p)
    {
        return o << "(" << p.x << "," << p.y << ")";
    }
};

/*
 * Totally complex form prod_j (x^2 - 2 x_j x y + |alpha_j|^2 y^2) with
 * the given upper half-plane roots alpha_j = x_j + i y_j.
 */
template <class Int = mpz_class>
basic_binary_form<Int> from_upper_roots(std::span<lattice_point const> roots)
{
    if (roots.empty())
        throw std::invalid_argument("from_upper_roots: empty root list");
    std::vector<Int> f{Int(1)};
    for (auto const & r : roots) {
        if (r.y < 1)
            throw std::invalid_argument("from_upper_roots: root not in the upper half plane");
        Int x(r.x), y(r.y);
        f = detail::poly_mul(f, std::vector<Int>{Int(1), Int(-2 * x), Int(x * x + y * y)});
    }
    return basic_binary_form<Int>(std::move(f));
}

template <class Int = mpz_class>
basic_binary_form<Int> from_upper_roots(std::initializer_list<lattice_point> roots)
{
    return from_upper_roots<Int>(std::span<lattice_point const>(roots.begin(), roots.size()));
}

/*
 * Scale x -> (u/v) x and clear denominators: the coefficient of
 * x^i y^(n-i) becomes a_i u^i v^(n-i). Not divided by the content.
 */
inline binary_form scale_cleared(binary_form const & f, unsigned long u, unsigned long v)
{
    int n = f.degree();
    std::vector<mpz_class> out(n + 1);
    mpz_class up = 1;
    std::vector<mpz_class> vp(n + 1);
    vp[0] = 1;
    for (int k = 1; k <= n; ++k)
        vp[k] = vp[k - 1] * v;
    for (int i = 0; i <= n; ++i) {        // ascending index
        out[n - i] = f.ascending(i) * up * vp[n - i];
        up *= u;
    }
    return binary_form(std::move(out));
}

inline std::vector<std::string> to_strings(binary_form const & f)
{
    std::vector<std::string> s;
    for (auto const & x : f.coeffs())
        s.push_back(x.get_str());
    return s;
}

inline binary_form form_from_strings(std::span<std::string const> s)
{
    std::vector<mpz_class> v;
    for (auto const & x : s) {
        mpz_class z;
        if (z.set_str(x, 10) != 0)
            throw std::invalid_argument("not a decimal integer: " + x);
        v.push_back(z);
    }
    return binary_form(std::move(v));
}

} // namespace formred

#endif
