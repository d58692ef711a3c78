#pragma once

// Exact samplers for the Wishart family through Bartlett-type triangular
// factors. Scale matrices are always the identity.

#include "pdw/matcore.hpp"
#include "pdw/rng.hpp"
#include "pdw/special.hpp"

#include <vector>

namespace pdw {

// U upper triangular with U_kk^2 ~ Gamma(alpha - (c_k - 1)/2) and
// U_ij ~ N(0, 1/2) for i < j, all independent.
struct BartlettSpec {
    double alpha = 1.0;
    std::vector<double> c;

    static BartlettSpec forward(int d, double alpha);   // c = (1, ..., d)
    static BartlettSpec backward(int d, double alpha);  // c = (d, ..., 1)
    void validate() const;
};

// Draw order: row by row, diagonal first, then the entries to its right.
UpperTri sample_bartlett(const BartlettSpec& spec, RngStream& rng);

// (omega U omega)^T with omega the reversal permutation.
UpperTri reverse_permute(const UpperTri& u);

// Cholesky factors of the laws below; each is upper triangular with positive
// diagonal and x = u^T u.
UpperTri wishart_factor(int d, double alpha, RngStream& rng);
UpperTri inv_wishart_factor(int d, double beta, RngStream& rng);
UpperTri beta2_factor(const ModelParams& p, RngStream& rng);

PosDef sample_wishart(const ModelParams& p, RngStream& rng);       // W_d(alpha)
PosDef sample_inv_wishart(const ModelParams& p, RngStream& rng);   // IW_d(beta)
PosDef sample_beta2(const ModelParams& p, RngStream& rng);         // B^II_d(alpha, beta)
PosDef sample_beta1(const ModelParams& p, RngStream& rng, SplitKind kind = SplitKind::Cholesky);
PosDef sample_inv_beta1(const ModelParams& p, RngStream& rng, SplitKind kind = SplitKind::Cholesky);

PosDef sample_law(Law law, const ModelParams& p, RngStream& rng);

// y (.) x = T_y(x); the convolution of laws when y and x are independent.
PosDef convolve(SplitKind kind, const PosDef& y, const PosDef& x);

}  // namespace pdw
