#pragma once

// Multiplicative random walks on P_d, the running sum A, the functional S,
// Kesten recursions and the truncated Dufresne series.

#include "pdw/matcore.hpp"
#include "pdw/rng.hpp"
#include "pdw/special.hpp"

#include <optional>
#include <vector>

namespace pdw {

enum class Construction { Recursive, Closed };

const char* to_string(Construction c);

struct WalkInit {
    enum class Kind { InvWishartBeta, Identity, Fixed };

    Kind kind = Kind::InvWishartBeta;
    std::optional<PosDef> value;  // set iff kind == Fixed

    static WalkInit inv_wishart() { return {}; }
    static WalkInit identity() { return {Kind::Identity, std::nullopt}; }
    static WalkInit fixed(const PosDef& m) { return {Kind::Fixed, m}; }
};

struct WalkConfig {
    ModelParams params;
    SplitKind kind = SplitKind::Cholesky;
    Construction construction = Construction::Recursive;
    int steps = 0;
    WalkInit init;

    // Throws DomainError on negative steps, bad parameters, or a fixed
    // initial state of the wrong dimension.
    void validate() const;
};

// R(0..n), A(0..n), S(1..n).
struct WalkTrace {
    std::vector<PosDef> r;
    std::vector<PosDef> a;
    std::vector<PosDef> s;
};

// Entries above this magnitude abort a walk with StepOverflow.
inline constexpr double kOverflowBound = 1e300;

// T_state(increment)
PosDef walk_step(SplitKind kind, const PosDef& state, const PosDef& increment);

// T_init o T_{X(1)} o ... o T_{X(n)}(I), evaluated from the inside out.
PosDef walk_closed(SplitKind kind, const PosDef& init, const std::vector<PosDef>& increments);

// R(0) according to cfg.init; draws from rng only for InvWishartBeta.
PosDef draw_initial(const WalkConfig& cfg, RngStream& rng);

// The RNG is consumed as: R(0) (if random), then X(1), ..., X(n) in order,
// each X(k) ~ B^II_d(alpha, beta). Recursive and Closed configurations with
// the same stream therefore see identical increments.
WalkTrace simulate_walk(const WalkConfig& cfg, RngStream& rng);

// Same construction driven by given increments.
WalkTrace walk_from_increments(const WalkConfig& cfg, const PosDef& init, const std::vector<PosDef>& increments);

// R(n) only, same RNG consumption as simulate_walk.
PosDef walk_endpoint(const WalkConfig& cfg, RngStream& rng);

// A(k-1)^{-1} R(k) A(k)^{-1}, evaluated in a symmetric form from the factors
// of A(k-1) and R(k).
PosDef my_functional(const PosDef& a_prev, const PosDef& r, const PosDef& a);

struct KestenState {
    PosDef value;
    int step = 0;
};

// State after the first step from xi(0) = 0; T_X(I) = X for both recursions.
KestenState kesten_start(const PosDef& first_increment);
// xi(n) = T_{X(n)}(I + xi(n-1))
KestenState kesten_step(SplitKind kind, const KestenState& state, const PosDef& increment);
// xi'(n) = T_{I + xi'(n-1)}(X(n))
KestenState kesten_prime_step(SplitKind kind, const KestenState& state, const PosDef& increment);

struct DufresneResult {
    PosDef value;
    int terms = 0;
    double last_ratio = 0.0;
};

// Number of consecutive small terms required before the series stops.
inline constexpr int kDufresneConfirmTerms = 3;

// 10 * ceil(log(1/tail_tol) / |mu_1|) with mu_1 the top Lyapunov exponent of
// the B^II(alpha, beta) walk.
int default_dufresne_max_terms(const ModelParams& p, double tail_tol);

// Partial sums of R(k) = T_{R(0)} o T_{X(1)} o ... o T_{X(k)}(I) sharing the
// prefix product, stopped once tr R(k) < tail_tol * tr A(k) for
// kDufresneConfirmTerms consecutive terms. max_terms <= 0 selects the
// default. Throws TruncationFailure when the budget runs out and DomainError
// outside beta - alpha > (d-1)/2.
DufresneResult dufresne_series_ex(const WalkConfig& cfg, double tail_tol, int max_terms, RngStream& rng);
PosDef dufresne_series(const WalkConfig& cfg, double tail_tol, int max_terms, RngStream& rng);

}  // namespace pdw
