#include "pdw/special.hpp"

#include "pdw/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace pdw {

void require_shape(int d, double shape, const char* name) {
    if (d < 1) throw DomainError("dimension must be at least 1");
    if (!(shape > 0.5 * (d - 1)) || !std::isfinite(shape)) {
        std::ostringstream msg;
        msg << name << " = " << shape << " violates " << name << " > (d-1)/2 = " << 0.5 * (d - 1);
        throw DomainError(msg.str());
    }
}

void require_sampling(const ModelParams& p) {
    require_shape(p.d, p.alpha, "alpha");
    require_shape(p.d, p.beta, "beta");
}

void require_dufresne(const ModelParams& p) {
    require_sampling(p);
    if (!(p.beta - p.alpha > p.shape_floor())) {
        std::ostringstream msg;
        msg << "beta - alpha = " << p.beta - p.alpha << " violates beta - alpha > (d-1)/2 = " << p.shape_floor();
        throw DomainError(msg.str());
    }
}

const char* to_string(Law law) {
    switch (law) {
    case Law::Wishart: return "wishart";
    case Law::InvWishart: return "invwishart";
    case Law::BetaI: return "beta1";
    case Law::BetaII: return "beta2";
    }
    return "?";
}

Law parse_law(const std::string& name) {
    if (name == "wishart" || name == "W") return Law::Wishart;
    if (name == "invwishart" || name == "iw" || name == "IW") return Law::InvWishart;
    if (name == "beta1" || name == "betaI") return Law::BetaI;
    if (name == "beta2" || name == "betaII") return Law::BetaII;
    throw DomainError("unknown law '" + name + "'");
}

double digamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("digamma: argument must be positive and finite");
    double shift = 0.0;
    while (x < 10.0) {
        shift += 1.0 / x;
        x += 1.0;
    }
    const double r = 1.0 / (x * x);
    // Asymptotic series in 1/x^2 with Bernoulli coefficients B_2k / 2k.
    const double series =
        r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12))))));
    return std::log(x) - 0.5 / x - series - shift;
}

double log_gamma(double x) {
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

double log_multivariate_gamma(int d, double a) {
    require_shape(d, a, "a");
    double s = 0.25 * d * (d - 1) * std::log(std::numbers::pi);
    for (int k = 1; k <= d; ++k) s += log_gamma(a - 0.5 * (k - 1));
    return s;
}

double multivariate_gamma(int d, double a) { return std::exp(log_multivariate_gamma(d, a)); }

double log_multivariate_beta(int d, double a, double b) {
    return log_multivariate_gamma(d, a) + log_multivariate_gamma(d, b) - log_multivariate_gamma(d, a + b);
}

double multivariate_beta(int d, double a, double b) { return std::exp(log_multivariate_beta(d, a, b)); }

double log_density_wrt_mu(Law law, const ModelParams& p, const PosDef& x) {
    if (x.dim() != p.d) throw DomainError("density: dimension mismatch");
    const int d = p.d;
    switch (law) {
    case Law::Wishart:
        require_shape(d, p.alpha, "alpha");
        return -log_multivariate_gamma(d, p.alpha) + p.alpha * log_det(x) - trace(x);
    case Law::InvWishart:
        require_shape(d, p.beta, "beta");
        return -log_multivariate_gamma(d, p.beta) - p.beta * log_det(x) - trace(invert(x));
    case Law::BetaI: {
        require_sampling(p);
        const Mat rest = Mat::Identity(d, d) - x.matrix();
        auto u = try_cholesky(0.5 * (rest + rest.transpose()));
        if (!u) return -HUGE_VAL;
        double ld = 0.0;
        for (int k = 0; k < d; ++k) ld += 2.0 * std::log(u->matrix()(k, k));
        return -log_multivariate_beta(d, p.alpha, p.beta) + p.alpha * log_det(x) +
               (p.beta - 0.5 * (d + 1)) * ld;
    }
    case Law::BetaII:
        require_sampling(p);
        return -log_multivariate_beta(d, p.alpha, p.beta) + p.alpha * log_det(x) -
               (p.alpha + p.beta) * log_det(shift_identity(x));
    }
    return -HUGE_VAL;
}

double density_wrt_mu(Law law, const ModelParams& p, const PosDef& x) {
    return std::exp(log_density_wrt_mu(law, p, x));
}

double softplus(double u) { return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u)); }

double phi_d1(const ModelParams& p, double s, const QuadratureSpec& q) {
    if (p.d != 1) throw DomainError("phi_d1 requires d = 1");
    if (!(p.beta > 0.0) || !(p.alpha > 0.0)) throw DomainError("phi_d1: alpha and beta must be positive");
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("phi_d1: s must be positive");
    const double ls = std::log(s);
    auto log_f = [&](double t) {
        if (t < -700.0) return -HUGE_VAL;
        return (p.alpha - p.beta) * t - p.alpha * softplus(t + ls) - std::exp(-t);
    };
    return integrate_exp_line(log_f, q).value;
}

}  // namespace pdw
