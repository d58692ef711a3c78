#pragma once

// Scalar (d = 1) transition kernels of the Matsumoto-Yor construction and
// the quadrature pipelines that evaluate them. All kernels are densities with
// respect to dx/x and are integrated on the axis t = log x.
//
//   P(r; dr~)   = B^{-1} (r~/r)^a (1 + r~/r)^{-(a+b)}           walk step
//   Q(s; ds~)   = P(s; ds~) e^{-s~}                               killed kernel
//   k(s; da)    = a^{a-b} (1 + s a)^{-a} e^{-1/a}                 K's density in a
//   K(s; da,dr) = k(s; da) delta(a^2 s / (1 + s a); dr)
//   phi(s)      = int k(s; da)
//   Kbar = K / phi,  Qbar(s; ds~) = phi(s~)/phi(s) Q(s; ds~)
//   eta(ds~)    = B^{-1} Gamma(b)^{-1} phi(s~) s~^a e^{-s~}
//   lambda      = Gamma(b)^{-1} a^{-b} e^{-1/a} da/a  delta(a; dr)
//   Pi f(r, a)  = int P(r; dr~) f(r~, a + r~)

#include "pdw/quadrature.hpp"
#include "pdw/special.hpp"

#include <functional>

namespace pdw {

// Test function of (r, a).
using Fn2 = std::function<double(double, double)>;
using Fn1 = std::function<double(double)>;

class KernelsD1 {
public:
    // Throws DomainError unless p.d == 1 and alpha, beta > 0.
    explicit KernelsD1(const ModelParams& p, const QuadratureSpec& q = {});

    const ModelParams& params() const { return p_; }
    const QuadratureSpec& quadrature() const { return q_; }

    double p_density(double r, double r_next) const;
    double q_density(double s, double s_next) const;
    double k_density(double s, double a) const;
    double qbar_density(double s, double s_next) const;
    double eta_density(double s) const;
    double lambda_density(double a) const;

    // Location of K's point mass in r given (s, a); lambda's is r = a.
    static double k_point(double s, double a) { return a * a * s / (1.0 + s * a); }

    double phi(double s) const;

    // int P(r; dr~) g(r~)
    double apply_p(double r, const Fn1& g) const;
    // int Q(s; ds~) g(s~)
    double apply_q(double s, const Fn1& g) const;
    // K f(s) = int k(s; da) f(r(s, a), a)
    double apply_k(double s, const Fn2& f) const;
    double apply_kbar(double s, const Fn2& f) const { return apply_k(s, f) / phi(s); }

    double k_pi(double s, const Fn2& f) const;
    double q_k(double s, const Fn2& f) const;
    double lambda_pi(const Fn2& f) const;
    double eta_kbar(const Fn2& f) const;

    double mass_p(double r) const;
    double mass_qbar(double s) const;
    double mass_eta() const;

    TabulatedCdf eta_cdf(int cells = 1500) const;
    TabulatedCdf qbar_cdf(double s, int cells = 1500) const;

private:
    double log_p(double lr, double lr_next) const;
    double log_k(double ls, double la) const;
    double log_eta(double ls) const;
    double log_lambda(double la) const;

    // int exp(log_w(t)) g(t) dt with the mapping centred on the peak of log_w.
    double integrate_weighted(const Fn1& log_w, const Fn1& g) const;

    ModelParams p_;
    QuadratureSpec q_;
    double log_b_;
    double lgamma_beta_;
};

}  // namespace pdw
