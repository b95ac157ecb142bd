#ifndef FORMRED_ERRORS_HPP
#define FORMRED_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace formred {

/* Input outside an operation's domain: real roots given to the
 * hyperbolic reduction, a non positive definite quadratic, ... */
struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

/* An iterative numeric method failed to converge. */
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace formred

#endif
