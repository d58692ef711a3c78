#include "pdw/matdist.hpp"

#include "pdw/error.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace pdw {

BartlettSpec BartlettSpec::forward(int d, double alpha) {
    BartlettSpec s;
    s.alpha = alpha;
    for (int k = 1; k <= d; ++k) s.c.push_back(k);
    return s;
}

BartlettSpec BartlettSpec::backward(int d, double alpha) {
    BartlettSpec s;
    s.alpha = alpha;
    for (int k = d; k >= 1; --k) s.c.push_back(k);
    return s;
}

void BartlettSpec::validate() const {
    if (c.empty()) throw DomainError("Bartlett spec: empty shape offsets");
    for (double ck : c) {
        if (!(alpha - 0.5 * (ck - 1.0) > 0.0)) {
            std::ostringstream msg;
            msg << "Bartlett spec: alpha - (c_k - 1)/2 must be positive (alpha = " << alpha << ", c_k = " << ck << ")";
            throw DomainError(msg.str());
        }
    }
}

UpperTri sample_bartlett(const BartlettSpec& spec, RngStream& rng) {
    spec.validate();
    const int d = static_cast<int>(spec.c.size());
    Mat u = Mat::Zero(d, d);
    const double sd = std::numbers::sqrt2 / 2.0;
    for (int i = 0; i < d; ++i) {
        double g = 0.0;
        // A zero gamma draw is possible for tiny shapes; redraw.
        do {
            g = rng.gamma(spec.alpha - 0.5 * (spec.c[i] - 1.0));
        } while (!(g > 0.0));
        u(i, i) = std::sqrt(g);
        for (int j = i + 1; j < d; ++j) u(i, j) = rng.normal(0.0, sd);
    }
    return UpperTri::from_matrix(u);
}

UpperTri reverse_permute(const UpperTri& u) {
    const int d = u.dim();
    Mat r(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) r(i, j) = u(d - 1 - j, d - 1 - i);
    return UpperTri::from_matrix(r);
}

UpperTri wishart_factor(int d, double alpha, RngStream& rng) {
    require_shape(d, alpha, "alpha");
    return sample_bartlett(BartlettSpec::forward(d, alpha), rng);
}

UpperTri inv_wishart_factor(int d, double beta, RngStream& rng) {
    require_shape(d, beta, "beta");
    return sample_bartlett(BartlettSpec::backward(d, beta), rng).inverse();
}

UpperTri beta2_factor(const ModelParams& p, RngStream& rng) {
    require_sampling(p);
    const UpperTri a = sample_bartlett(BartlettSpec::forward(p.d, p.alpha), rng);
    const UpperTri binv = sample_bartlett(BartlettSpec::backward(p.d, p.beta), rng).inverse();
    return a * binv;
}

PosDef sample_wishart(const ModelParams& p, RngStream& rng) {
    return PosDef::from_factor(wishart_factor(p.d, p.alpha, rng));
}

PosDef sample_inv_wishart(const ModelParams& p, RngStream& rng) {
    return PosDef::from_factor(inv_wishart_factor(p.d, p.beta, rng));
}

PosDef sample_beta2(const ModelParams& p, RngStream& rng) { return PosDef::from_factor(beta2_factor(p, rng)); }

PosDef sample_beta1(const ModelParams& p, RngStream& rng, SplitKind kind) {
    require_sampling(p);
    const PosDef ya = sample_wishart(p, rng);
    const PosDef yb = sample_wishart({p.d, p.beta, p.beta}, rng);
    return sym_product_alt(kind, invert(ya + yb), ya);
}

PosDef sample_inv_beta1(const ModelParams& p, RngStream& rng, SplitKind kind) {
    return invert(sample_beta1(p, rng, kind));
}

PosDef sample_law(Law law, const ModelParams& p, RngStream& rng) {
    switch (law) {
    case Law::Wishart: return sample_wishart(p, rng);
    case Law::InvWishart: return sample_inv_wishart(p, rng);
    case Law::BetaI: return sample_beta1(p, rng);
    case Law::BetaII: return sample_beta2(p, rng);
    }
    throw DomainError("unknown law");
}

PosDef convolve(SplitKind kind, const PosDef& y, const PosDef& x) { return sym_product(kind, y, x); }

}  // namespace pdw
