#ifndef FORMRED_ROUNDING_HPP
#define FORMRED_ROUNDING_HPP

#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace formred {

enum class tie_rule { even, zero, up };

/*
 * How a centre's real part becomes an integer shift.
 *
 * The real part is first quantized to `decimals` decimal places
 * (round-half-even on the exact value, like Python's round(t, 2)),
 * then rounded to an integer, exact halves resolved by `tie`.
 * decimals < 0 skips quantization.
 *
 * The default {2, up} reproduces the reference comparison counts.
 */
struct shift_rounding {
    int decimals = 2;
    tie_rule tie = tie_rule::up;
};

inline tie_rule parse_tie_rule(std::string_view s)
{
    if (s == "even") return tie_rule::even;
    if (s == "zero") return tie_rule::zero;
    if (s == "up") return tie_rule::up;
    throw std::invalid_argument("unknown tie rule: " + std::string(s));
}

inline std::string_view to_string(tie_rule t)
{
    switch (t) {
    case tie_rule::even: return "even";
    case tie_rule::zero: return "away-from-zero";
    case tie_rule::up: return "half-up";
    }
    return "?";
}

inline mpz_class round_rational(mpq_class const & q, tie_rule tie)
{
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    mpq_class frac = q - mpq_class(fl);
    int c = cmp(frac, mpq_class(1, 2));
    if (c < 0) return fl;
    if (c > 0) return fl + 1;
    switch (tie) {
    case tie_rule::up: return fl + 1;
    case tie_rule::zero: return sgn(q) > 0 ? mpz_class(fl + 1) : fl;
    case tie_rule::even: return mpz_even_p(fl.get_mpz_t()) ? fl : mpz_class(fl + 1);
    }
    return fl;
}

inline mpz_class centering_shift(mpq_class const & t, shift_rounding const & r = {})
{
    if (r.decimals < 0) return round_rational(t, r.tie);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(r.decimals));
    mpz_class n = round_rational(t * scale, tie_rule::even);
    mpq_class q(n, scale);
    q.canonicalize();
    return round_rational(q, r.tie);
}

/* Doubles are dyadic rationals, so this conversion is exact. */
inline mpz_class centering_shift(double t, shift_rounding const & r = {})
{
    return centering_shift(mpq_class(t), r);
}

} // namespace formred

#endif
