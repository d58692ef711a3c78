#include "pdw/walks.hpp"

#include "pdw/error.hpp"
#include "pdw/lyapunov.hpp"
#include "pdw/matdist.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace pdw {

const char* to_string(Construction c) { return c == Construction::Recursive ? "recursive" : "closed"; }

void WalkConfig::validate() const {
    if (steps < 0) throw DomainError("walk: steps must be nonnegative");
    require_sampling(params);
    if (init.kind == WalkInit::Kind::Fixed) {
        if (!init.value) throw DomainError("walk: fixed initial state missing");
        if (init.value->dim() != params.d) throw DomainError("walk: initial state has the wrong dimension");
    }
}

PosDef walk_step(SplitKind kind, const PosDef& state, const PosDef& increment) {
    return sym_product(kind, state, increment);
}

PosDef walk_closed(SplitKind kind, const PosDef& init, const std::vector<PosDef>& increments) {
    PosDef acc = PosDef::identity(init.dim());
    for (auto it = increments.rbegin(); it != increments.rend(); ++it) acc = sym_product(kind, *it, acc);
    return sym_product(kind, init, acc);
}

PosDef draw_initial(const WalkConfig& cfg, RngStream& rng) {
    switch (cfg.init.kind) {
    case WalkInit::Kind::InvWishartBeta: return sample_inv_wishart(cfg.params, rng);
    case WalkInit::Kind::Identity: return PosDef::identity(cfg.params.d);
    case WalkInit::Kind::Fixed: return *cfg.init.value;
    }
    throw DomainError("walk: unknown initial state");
}

PosDef my_functional(const PosDef& a_prev, const PosDef& r, const PosDef& a) {
    if (r.dim() != a_prev.dim() || a.dim() != a_prev.dim()) throw DomainError("my_functional: dimension mismatch");
    // Equals A(n-1)^{-1} - A(n)^{-1}. With R = G^T G and H = G A(n-1)^{-1}, the
    // Woodbury identity gives H^T (I + H G^T)^{-1} H, which keeps full relative
    // accuracy when R is nearly singular or A(n-1) is large.
    const int d = r.dim();
    const auto ua = a_prev.chol().matrix().triangularView<Eigen::Upper>();
    // l = u_A^{-T} G^T, so H = l^T u_A^{-T} and I + H G^T = [I; l]^T [I; l].
    const Mat l = ua.transpose().solve(r.chol().matrix().transpose());
    const Mat h = ua.solve(l).transpose();
    Mat stacked(2 * d, d);
    stacked << Mat::Identity(d, d), l;
    const PosDef k = gram_of(stacked);
    return gram_of(k.chol().matrix().transpose().triangularView<Eigen::Lower>().solve(h));
}

namespace {

[[noreturn]] void out_of_range(int step) {
    std::ostringstream msg;
    msg << "walk left the representable range at step " << step;
    throw StepOverflow(msg.str());
}

void guard(const PosDef& x, int step) {
    if (!(max_abs_entry(x) <= kOverflowBound)) out_of_range(step);
}

// Factors of valid states only lose rank through underflow.
template <class F>
PosDef in_range(F&& f, int step) {
    try {
        return f();
    } catch (const NotPositiveDefinite&) {
        out_of_range(step);
    }
}

// Walk state for either construction. The closed construction carries
// G(n) = w(X(n)) G(n-1), G(0) = w(M), so that R(n) = G(n)^T G(n).
class Walker {
public:
    Walker(const WalkConfig& cfg, const PosDef& init)
        : kind_(cfg.kind), closed_(cfg.construction == Construction::Closed), r_(init) {
        if (closed_) g_ = split_factor(kind_, init);
    }

    const PosDef& advance(const PosDef& x, int step) {
        // m is a square factor of the new state, R(n) = m^T m.
        Mat m;
        if (closed_) {
            g_ = split_factor(kind_, x) * g_;
            m = g_;
        } else {
            m = x.chol().matrix() * split_factor(kind_, r_);
        }
        // A product of upper factors is already the Cholesky factor.
        if (kind_ == SplitKind::Cholesky) m.triangularView<Eigen::StrictlyLower>().setZero();
        // The diagonal of m^T m bounds every entry of R(n).
        if (!(m.colwise().squaredNorm().maxCoeff() <= kOverflowBound)) out_of_range(step);
        r_ = in_range([&] { return gram_of(m); }, step);
        return r_;
    }

    const PosDef& state() const { return r_; }

private:
    SplitKind kind_;
    bool closed_;
    PosDef r_;
    Mat g_;
};

WalkTrace run(const WalkConfig& cfg, const PosDef& init, int steps, const std::function<PosDef(int)>& next) {
    WalkTrace tr;
    tr.r.reserve(steps + 1);
    tr.a.reserve(steps + 1);
    tr.s.reserve(steps);
    tr.r.push_back(init);
    tr.a.push_back(init);
    Walker w(cfg, init);
    for (int k = 1; k <= steps; ++k) {
        const PosDef& r = w.advance(next(k), k);
        // A(k) = A(k-1) + R(k) = [u_A; u_R]^T [u_A; u_R]
        Mat stacked(2 * r.dim(), r.dim());
        stacked << tr.a.back().chol().matrix(), r.chol().matrix();
        PosDef a = in_range([&] { return gram_of(stacked); }, k);
        guard(a, k);
        tr.s.push_back(in_range([&] { return my_functional(tr.a.back(), r, a); }, k));
        tr.r.push_back(r);
        tr.a.push_back(std::move(a));
    }
    return tr;
}

}  // namespace

WalkTrace simulate_walk(const WalkConfig& cfg, RngStream& rng) {
    cfg.validate();
    const PosDef init = draw_initial(cfg, rng);
    return run(cfg, init, cfg.steps, [&](int) { return sample_beta2(cfg.params, rng); });
}

WalkTrace walk_from_increments(const WalkConfig& cfg, const PosDef& init, const std::vector<PosDef>& increments) {
    for (const auto& x : increments) {
        if (x.dim() != init.dim()) throw DomainError("walk: increment dimension mismatch");
    }
    return run(cfg, init, static_cast<int>(increments.size()), [&](int k) { return increments[k - 1]; });
}

PosDef walk_endpoint(const WalkConfig& cfg, RngStream& rng) {
    cfg.validate();
    const PosDef init = draw_initial(cfg, rng);
    Walker w(cfg, init);
    for (int k = 1; k <= cfg.steps; ++k) w.advance(sample_beta2(cfg.params, rng), k);
    return w.state();
}

KestenState kesten_start(const PosDef& first_increment) { return {first_increment, 1}; }

KestenState kesten_step(SplitKind kind, const KestenState& state, const PosDef& increment) {
    return {sym_product(kind, increment, shift_identity(state.value)), state.step + 1};
}

KestenState kesten_prime_step(SplitKind kind, const KestenState& state, const PosDef& increment) {
    return {sym_product(kind, shift_identity(state.value), increment), state.step + 1};
}

int default_dufresne_max_terms(const ModelParams& p, double tail_tol) {
    const double mu1 = closed_form_mu(Law::BetaII, p).front();
    return 10 * static_cast<int>(std::ceil(std::log(1.0 / tail_tol) / std::abs(mu1)));
}

DufresneResult dufresne_series_ex(const WalkConfig& cfg, double tail_tol, int max_terms, RngStream& rng) {
    require_dufresne(cfg.params);
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw DomainError("dufresne: tail_tol must lie in (0, 1)");
    if (max_terms <= 0) max_terms = default_dufresne_max_terms(cfg.params, tail_tol);
    const ModelParams& p = cfg.params;

    // Prefix product G(k) = w(X(k)) ... w(X(1)) w(R(0)); term k is G^T G.
    Mat g;
    if (cfg.init.kind == WalkInit::Kind::InvWishartBeta && cfg.kind == SplitKind::Cholesky) {
        g = inv_wishart_factor(p.d, p.beta, rng).matrix();
    } else {
        g = split_factor(cfg.kind, draw_initial(cfg, rng));
    }
    Mat sum = g.transpose() * g;
    int small = 0;
    double ratio = 1.0;
    for (int k = 1; k <= max_terms; ++k) {
        if (cfg.kind == SplitKind::Cholesky) {
            g = beta2_factor(p, rng).matrix().triangularView<Eigen::Upper>() * g;
        } else {
            g = sqrt_factor(sample_beta2(p, rng)).matrix() * g;
        }
        const Mat term = g.transpose() * g;
        sum += term;
        ratio = term.trace() / sum.trace();
        small = ratio < tail_tol ? small + 1 : 0;
        if (small >= kDufresneConfirmTerms) return {PosDef::from_matrix(sum), k + 1, ratio};
    }
    std::ostringstream msg;
    msg << "dufresne series reached " << max_terms << " terms with trace ratio " << ratio;
    throw TruncationFailure(msg.str(), ratio);
}

PosDef dufresne_series(const WalkConfig& cfg, double tail_tol, int max_terms, RngStream& rng) {
    return dufresne_series_ex(cfg, tail_tol, max_terms, rng).value;
}

}  // namespace pdw
