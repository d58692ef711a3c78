#include "pdw/kernels_d1.hpp"

#include "pdw/error.hpp"

#include <cmath>

namespace pdw {

KernelsD1::KernelsD1(const ModelParams& p, const QuadratureSpec& q) : p_(p), q_(q) {
    if (p.d != 1) throw DomainError("scalar kernels require d = 1");
    require_sampling(p);
    q.validate();
    log_b_ = log_multivariate_beta(1, p.alpha, p.beta);
    lgamma_beta_ = log_gamma(p.beta);
}

double KernelsD1::log_p(double lr, double lr_next) const {
    const double u = lr_next - lr;
    return -log_b_ + p_.alpha * u - (p_.alpha + p_.beta) * softplus(u);
}

double KernelsD1::log_k(double ls, double la) const {
    if (la < -700.0) return -HUGE_VAL;
    return (p_.alpha - p_.beta) * la - p_.alpha * softplus(la + ls) - std::exp(-la);
}

double KernelsD1::log_eta(double ls) const {
    // s^a e^{-s} underflows long before this point.
    if (ls > 7.5 || ls < -700.0) return -HUGE_VAL;
    const double s = std::exp(ls);
    return -log_b_ - lgamma_beta_ + std::log(phi(s)) + p_.alpha * ls - s;
}

double KernelsD1::log_lambda(double la) const {
    if (la < -700.0) return -HUGE_VAL;
    return -lgamma_beta_ - p_.beta * la - std::exp(-la);
}

double KernelsD1::p_density(double r, double r_next) const { return std::exp(log_p(std::log(r), std::log(r_next))); }

double KernelsD1::q_density(double s, double s_next) const { return p_density(s, s_next) * std::exp(-s_next); }

double KernelsD1::k_density(double s, double a) const { return std::exp(log_k(std::log(s), std::log(a))); }

double KernelsD1::qbar_density(double s, double s_next) const {
    return phi(s_next) / phi(s) * q_density(s, s_next);
}

double KernelsD1::eta_density(double s) const { return std::exp(log_eta(std::log(s))); }

double KernelsD1::lambda_density(double a) const { return std::exp(log_lambda(std::log(a))); }

double KernelsD1::phi(double s) const { return phi_d1(p_, s, q_); }

double KernelsD1::integrate_weighted(const Fn1& log_w, const Fn1& g) const {
    const PeakInfo pk = locate_peak(log_w);
    auto f = [&](double t) {
        const double lw = log_w(t) - pk.log_max;
        if (!(lw > -745.0)) return 0.0;
        return std::exp(lw) * g(t);
    };
    QuadratureSpec scaled = q_;
    scaled.abs_tol = q_.abs_tol * std::exp(-pk.log_max);
    if (!(scaled.abs_tol > 0.0) || !std::isfinite(scaled.abs_tol)) scaled.abs_tol = q_.abs_tol;
    return integrate_line(f, scaled, pk.center, pk.scale).value * std::exp(pk.log_max);
}

double KernelsD1::apply_p(double r, const Fn1& g) const {
    const double lr = std::log(r);
    return integrate_weighted([&](double t) { return log_p(lr, t); }, [&](double t) { return g(std::exp(t)); });
}

double KernelsD1::apply_q(double s, const Fn1& g) const {
    const double ls = std::log(s);
    return integrate_weighted(
        [&](double t) { return t > 700.0 ? -HUGE_VAL : log_p(ls, t) - std::exp(t); },
        [&](double t) { return g(std::exp(t)); });
}

double KernelsD1::apply_k(double s, const Fn2& f) const {
    const double ls = std::log(s);
    return integrate_weighted([&](double t) { return log_k(ls, t); },
                              [&](double t) {
                                  const double a = std::exp(t);
                                  return f(k_point(s, a), a);
                              });
}

double KernelsD1::k_pi(double s, const Fn2& f) const {
    return apply_k(s, [&](double r, double a) {
        return apply_p(r, [&](double r_next) { return f(r_next, a + r_next); });
    });
}

double KernelsD1::q_k(double s, const Fn2& f) const {
    return apply_q(s, [&](double s_next) { return apply_k(s_next, f); });
}

double KernelsD1::lambda_pi(const Fn2& f) const {
    return integrate_weighted([&](double t) { return log_lambda(t); },
                              [&](double t) {
                                  const double a = std::exp(t);
                                  return apply_p(a, [&](double r_next) { return f(r_next, a + r_next); });
                              });
}

double KernelsD1::eta_kbar(const Fn2& f) const {
    // eta(ds) Kbar f(s): the phi factors cancel.
    return integrate_weighted(
        [&](double t) { return t > 700.0 ? -HUGE_VAL : -log_b_ - lgamma_beta_ + p_.alpha * t - std::exp(t); },
        [&](double t) { return apply_k(std::exp(t), f); });
}

double KernelsD1::mass_p(double r) const {
    return apply_p(r, [](double) { return 1.0; });
}

double KernelsD1::mass_qbar(double s) const {
    return apply_q(s, [&](double s_next) { return phi(s_next); }) / phi(s);
}

double KernelsD1::mass_eta() const {
    return integrate_weighted([&](double t) { return log_eta(t); }, [](double) { return 1.0; });
}

TabulatedCdf KernelsD1::eta_cdf(int cells) const {
    return TabulatedCdf::automatic([&](double t) { return std::exp(log_eta(t)); }, cells, q_);
}

TabulatedCdf KernelsD1::qbar_cdf(double s, int cells) const {
    const double ls = std::log(s);
    const double lphi = std::log(phi(s));
    auto dens = [&, ls, lphi](double t) {
        if (t > 700.0 || t < -700.0) return 0.0;
        return std::exp(log_p(ls, t) - std::exp(t) + std::log(phi(std::exp(t))) - lphi);
    };
    return TabulatedCdf::automatic(dens, cells, q_);
}

}  // namespace pdw
