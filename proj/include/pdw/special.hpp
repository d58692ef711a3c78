#pragma once

// Special functions and closed-form densities with respect to the invariant
// measure mu(dx) = |x|^{-(d+1)/2} prod dx_ij.

#include "pdw/matcore.hpp"
#include "pdw/quadrature.hpp"

#include <string>

namespace pdw {

struct ModelParams {
    int d = 1;
    double alpha = 1.0;
    double beta = 1.0;

    // (d - 1) / 2, the lower bound for every shape parameter.
    double shape_floor() const { return 0.5 * (d - 1); }
};

// Throws DomainError unless d >= 1 and shape > (d - 1)/2.
void require_shape(int d, double shape, const char* name);
// Both alpha and beta admissible.
void require_sampling(const ModelParams& p);
// beta - alpha > (d - 1)/2 in addition to require_sampling.
void require_dufresne(const ModelParams& p);

enum class Law { Wishart, InvWishart, BetaI, BetaII };

const char* to_string(Law law);
// Accepts wishart, invwishart, beta1, beta2 (and a few aliases).
Law parse_law(const std::string& name);

double digamma(double x);
double log_gamma(double x);

double log_multivariate_gamma(int d, double a);
double multivariate_gamma(int d, double a);
double log_multivariate_beta(int d, double a, double b);
double multivariate_beta(int d, double a, double b);

// Density with respect to mu. Wishart uses alpha, InvWishart uses beta,
// the Beta laws use both.
double log_density_wrt_mu(Law law, const ModelParams& p, const PosDef& x);
double density_wrt_mu(Law law, const ModelParams& p, const PosDef& x);

// phi(s) = int_0^inf x^{alpha-beta} (1 + s x)^{-alpha} e^{-1/x} dx/x at d = 1.
double phi_d1(const ModelParams& p, double s, const QuadratureSpec& q = {});

// log(1 + e^u) without overflow.
double softplus(double u);

}  // namespace pdw
