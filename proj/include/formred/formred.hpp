#ifndef FORMRED_FORMRED_HPP
#define FORMRED_FORMRED_HPP

#include "binary_form.hpp"
#include "dbgen.hpp"
#include "errors.hpp"
#include "hyperbolic.hpp"
#include "julia.hpp"
#include "quadratic.hpp"
#include "reduce.hpp"
#include "roots.hpp"
#include "rounding.hpp"

#endif
