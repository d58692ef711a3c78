#pragma once

// Lyapunov exponents of invariant walks: closed forms, the i.i.d.
// Cholesky-diagonal estimator, and an eigenvalue-growth estimator.

#include "pdw/matcore.hpp"
#include "pdw/special.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pdw {

struct LyapunovReport {
    Law law = Law::BetaII;
    ModelParams params;
    std::string method;
    std::vector<double> mu_hat;
    std::vector<double> std_err;
    std::vector<double> mu_closed;
    int n_steps = 0;
    int n_replicas = 0;
    std::uint64_t seed = 0;
    // Eigenvalue method only: largest |sum_k mu_hat_k - log-det rate| over
    // replicas, the log-det rate taken from the increments' Cholesky
    // diagonals.
    double sum_rule_gap = 0.0;
};

// Wishart: psi(alpha - (k-1)/2); InvWishart: -psi(beta - (d-k)/2);
// BetaII: the difference. Descending in k.
std::vector<double> closed_form_mu(Law law, const ModelParams& p);

// Mean of log U_kk^2 over the Cholesky factors of n_steps * n_replicas
// independent increments. With one replica the standard error comes from the
// per-step spread.
LyapunovReport empirical_mu_cholesky(Law law, const ModelParams& p, int n_steps, int n_replicas,
                                     std::uint64_t seed);

// Growth of the top singular value of the k-th exterior power of the product
// G(n) = w(X(n)) ... w(X(1)), rescaled every 16 steps. Growth is measured
// over steps (n/8, n] so the O(1) start-up transient does not bias the rate.
LyapunovReport empirical_mu_eigen(Law law, const ModelParams& p, SplitKind kind, int n_steps, int n_replicas,
                                  std::uint64_t seed);

// k-th compound matrix: all k x k minors, subsets in lexicographic order.
Mat compound_matrix(const Mat& a, int k);

}  // namespace pdw
