#ifndef FORMRED_UHP_POINT_HPP
#define FORMRED_UHP_POINT_HPP

#include <complex>
#include <ostream>

namespace formred {

/* t + i u, u > 0 */
struct uhp_point {
    double t = 0;
    double u = 1;

    std::complex<double> z() const { return {t, u}; }
    double norm2() const { return t * t + u * u; }

    friend bool operator==(uhp_point const &, uhp_point const &) = default;
    friend std::ostream & operator<<(std::ostream & o, uhp_point const & p)
    {
        return o << "(" << p.t << ", " << p.u << ")";
    }
};

} // namespace formred

#endif
