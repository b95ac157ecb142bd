#ifndef FORMRED_JULIA_HPP
#define FORMRED_JULIA_HPP

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "binary_form.hpp"
#include "errors.hpp"
#include "hyperbolic.hpp"
#include "quadratic.hpp"
#include "roots.hpp"

namespace formred {

/* t_i for the real roots, u_j for the conjugate pairs */
struct julia_weights {
    std::vector<double> t;
    std::vector<double> u;
};

struct julia_result {
    quadratic_form<double> quadratic; // Julia quadratic, normalized weights
    double theta = 0;                 // Julia invariant
    julia_weights weights;            // prod t_i^2 prod u_j^4 = 1
    uhp_point zero;
    int iterations = 0;
    double gradient_norm = 0;         // max-norm, log-weight coordinates
};

struct julia_options {
    double tol = 1e-10;
    int max_iter = 10000;
    std::optional<julia_weights> start;
};

/*
 * Q_f = sum t_i^2 (x - alpha_i y)^2 + sum 2 u_j^2 (x - beta_j y)(x - conj(beta_j) y)
 */
inline quadratic_form<double> q_of_weights(upper_root_set const & roots, julia_weights const & w)
{
    if (w.t.size() != roots.real.size() || w.u.size() != roots.upper.size())
        throw std::invalid_argument("q_of_weights: weights do not match the signature");
    quadratic_form<double> q{0, 0, 0};
    for (std::size_t i = 0; i < w.t.size(); ++i) {
        double s = w.t[i] * w.t[i], a = roots.real[i];
        q.a += s;
        q.b += -2 * s * a;
        q.c += s * a * a;
    }
    for (std::size_t j = 0; j < w.u.size(); ++j) {
        double s = 2 * w.u[j] * w.u[j];
        auto const & b = roots.upper[j];
        q.a += s;
        q.b += -2 * s * b.t;
        q.c += s * b.norm2();
    }
    return q;
}

namespace detail {

/*
 * log theta0 in terms of p_k = log(weight_k^2), where each root
 * contributes weight^2 * (A_k x^2 + B_k x y + C_k y^2) to Q_f and m_k is
 * its multiplicity in the denominator (1 real, 2 pair).
 */
struct theta_model {
    std::vector<double> A, B, C, m;
    int n = 0;
    double log_lead2 = 0;

    theta_model(upper_root_set const & roots, double lead)
    {
        for (double a : roots.real) {
            A.push_back(1);
            B.push_back(-2 * a);
            C.push_back(a * a);
            m.push_back(1);
        }
        for (auto const & b : roots.upper) {
            A.push_back(2);
            B.push_back(-4 * b.t);
            C.push_back(2 * b.norm2());
            m.push_back(2);
        }
        n = roots.degree();
        log_lead2 = 2 * std::log(std::fabs(lead));
    }

    std::size_t size() const { return A.size(); }

    /* G = 4ac - b^2 = -D */
    double neg_disc(Eigen::VectorXd const & w) const
    {
        double a = 0, b = 0, c = 0;
        for (std::size_t k = 0; k < size(); ++k) {
            a += w[k] * A[k];
            b += w[k] * B[k];
            c += w[k] * C[k];
        }
        return 4 * a * c - b * b;
    }

    double log_theta(Eigen::VectorXd const & p) const
    {
        Eigen::VectorXd w = p.array().exp();
        double g = neg_disc(w);
        if (!(g > 0)) return INFINITY;
        double v = log_lead2 + 0.5 * n * std::log(g);
        for (std::size_t k = 0; k < size(); ++k)
            v -= m[k] * p[k];
        return v;
    }

    void grad_hess(Eigen::VectorXd const & p, Eigen::VectorXd & g, Eigen::MatrixXd & h) const
    {
        std::size_t K = size();
        Eigen::VectorXd w = p.array().exp();
        double a = 0, b = 0, c = 0;
        for (std::size_t k = 0; k < K; ++k) {
            a += w[k] * A[k];
            b += w[k] * B[k];
            c += w[k] * C[k];
        }
        double G = 4 * a * c - b * b;
        Eigen::VectorXd dG(K); // dG/dw_k
        for (std::size_t k = 0; k < K; ++k)
            dG[k] = 4 * (A[k] * c + a * C[k]) - 2 * b * B[k];
        double half_n = 0.5 * n;
        g.resize(K);
        h.resize(K, K);
        for (std::size_t k = 0; k < K; ++k)
            g[k] = half_n * w[k] * dG[k] / G - m[k];
        for (std::size_t k = 0; k < K; ++k)
            for (std::size_t l = 0; l < K; ++l) {
                double d2 = 4 * (A[k] * C[l] + A[l] * C[k]) - 2 * B[k] * B[l];
                double gkl = w[k] * w[l] * d2 + (k == l ? w[k] * dG[k] : 0);
                h(k, l) = half_n * (gkl / G - (w[k] * dG[k]) * (w[l] * dG[l]) / (G * G));
            }
    }
};

inline julia_weights weights_from_log(upper_root_set const & roots, Eigen::VectorXd const & p)
{
    julia_weights w;
    std::size_t r = roots.real.size();
    for (std::size_t k = 0; k < r; ++k)
        w.t.push_back(std::exp(p[k] / 2));
    for (std::size_t k = r; k < static_cast<std::size_t>(p.size()); ++k)
        w.u.push_back(std::exp(p[k] / 2));
    return w;
}

} // namespace detail

/*
 * theta0 = a0^2 |D_f|^(n/2) / (prod t_i^2 prod u_j^4), a0 the x^n
 * coefficient; invariant under scaling all weights.
 */
inline double theta0(double lead, upper_root_set const & roots, julia_weights const & w)
{
    auto q = q_of_weights(roots, w);
    double d = std::fabs(q.discriminant());
    if (!(d > 0))
        throw domain_error("theta0: degenerate quadratic (D_f = 0)");
    double logv = 2 * std::log(std::fabs(lead)) + 0.5 * roots.degree() * std::log(d);
    for (double t : w.t)
        logv -= 2 * std::log(t);
    for (double u : w.u)
        logv -= 4 * std::log(u);
    return std::exp(logv);
}

template <class Int>
double theta0(basic_binary_form<Int> const & f, upper_root_set const & roots,
              julia_weights const & w)
{
    return theta0(to_mpz(f.leading()).get_d(), roots, w);
}

/*
 * Minimize theta0 over the weights. log theta0 is convex in the
 * log-weights and constant along the all-ones direction, so a damped
 * Newton iteration with that direction regularized away converges to
 * the unique minimizer.
 */
inline julia_result minimize_theta0(double lead, upper_root_set const & roots,
                                    julia_options const & opt = {})
{
    if (roots.upper.empty() && roots.real.size() < 3)
        throw domain_error("minimize_theta0: needs a non-real root or >= 3 real roots");
    if (roots.degree() < 2)
        throw domain_error("minimize_theta0: degree too small");
    // the minimizing weights do not change under z -> (z - centre) / spread,
    // and normalized roots keep G = 4ac - b^2 free of cancellation
    double centre = 0, spread = 0;
    for (double a : roots.real) centre += a;
    for (auto const & b : roots.upper) centre += 2 * b.t;
    centre /= roots.degree();
    for (double a : roots.real) spread = std::max(spread, std::fabs(a - centre));
    for (auto const & b : roots.upper) spread = std::max(spread, std::hypot(b.t - centre, b.u));
    if (!(spread > 0))
        throw domain_error("minimize_theta0: all roots coincide");
    upper_root_set centred = roots;
    for (double & a : centred.real) a = (a - centre) / spread;
    for (auto & b : centred.upper) b = {(b.t - centre) / spread, b.u / spread};

    detail::theta_model model(centred, lead);
    std::size_t K = model.size();

    Eigen::VectorXd p = Eigen::VectorXd::Zero(K);
    if (opt.start) {
        auto const & s = *opt.start;
        if (s.t.size() != roots.real.size() || s.u.size() != roots.upper.size())
            throw std::invalid_argument("minimize_theta0: start weights do not match signature");
        for (std::size_t k = 0; k < s.t.size(); ++k)
            p[k] = 2 * std::log(s.t[k]);
        for (std::size_t k = 0; k < s.u.size(); ++k)
            p[s.t.size() + k] = 2 * std::log(s.u[k]);
    }
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(K);
    Eigen::VectorXd g;
    Eigen::MatrixXd h;
    double f = model.log_theta(p);
    int it = 0;
    double gnorm = 0;
    for (; it < opt.max_iter; ++it) {
        model.grad_hess(p, g, h);
        gnorm = g.lpNorm<Eigen::Infinity>();
        if (gnorm < opt.tol) break;
        Eigen::MatrixXd hr = h + ones * ones.transpose() / double(K);
        Eigen::VectorXd d;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(hr);
        if (ldlt.info() == Eigen::Success && ldlt.isPositive()) d = -ldlt.solve(g);
        if (d.size() == 0 || !d.allFinite() || d.dot(g) >= 0) d = -g;
        // keep steps bounded far from the minimum
        double dn = d.lpNorm<Eigen::Infinity>();
        if (dn > 4) d *= 4 / dn;
        // inside the quadratic region the decrease is below the rounding
        // of f, so take the full Newton step
        if (-g.dot(d) < 1e-12) {
            p += d;
            f = model.log_theta(p);
            continue;
        }
        double step = 1;
        double fn = model.log_theta(p + d);
        while (!(fn <= f + 1e-4 * step * g.dot(d)) && step > 1e-12) {
            step /= 2;
            fn = model.log_theta(p + step * d);
        }
        if (step <= 1e-12) {
            // no decrease representable in double: at the minimum to rounding
            model.grad_hess(p, g, h);
            gnorm = g.lpNorm<Eigen::Infinity>();
            if (gnorm < 1e3 * opt.tol) break;
            throw numeric_error("minimize_theta0: line search failed");
        }
        p += step * d;
        f = fn;
        if (p.lpNorm<Eigen::Infinity>() > 700)
            throw numeric_error("minimize_theta0: weights diverge (degenerate root configuration)");
    }
    if (it == opt.max_iter)
        throw numeric_error("minimize_theta0: no convergence");

    // normalization prod t^2 prod u^4 = 1, i.e. sum m_k p_k = 0
    double shift = 0;
    for (std::size_t k = 0; k < K; ++k)
        shift += model.m[k] * p[k];
    p.array() -= shift / model.n;

    julia_result res;
    res.weights = detail::weights_from_log(roots, p);
    res.quadratic = q_of_weights(roots, res.weights);
    // |D| picks up spread^2, so theta0 picks up spread^n
    res.theta = std::exp(model.log_theta(p) + model.n * std::log(spread));
    auto z = zero_map(q_of_weights(centred, res.weights));
    res.zero = {centre + spread * z.t, spread * z.u};
    res.iterations = it;
    res.gradient_norm = gnorm;
    return res;
}

template <class Int>
julia_result minimize_theta0(basic_binary_form<Int> const & f, julia_options const & opt = {})
{
    if (f.degree() < 2)
        throw domain_error("minimize_theta0: degree too small");
    auto roots = roots_upper(f);
    return minimize_theta0(to_mpz(f.leading()).get_d(), roots, opt);
}

} // namespace formred

#endif
