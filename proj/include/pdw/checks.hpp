#pragma once

// Monte Carlo and quadrature checks of the distributional identities. Every
// check is deterministic given its seed and returns a TestReport built from
// named sub-tests.

#include "pdw/kernels_d1.hpp"
#include "pdw/matcore.hpp"
#include "pdw/special.hpp"
#include "pdw/stats.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pdw {

inline constexpr double kKsPThreshold = 1e-3;

struct SubTest {
    enum class Kind {
        PValue,      // passes iff value (a p-value) > limit
        UpperBound,  // passes iff value <= limit
        LowerBound,  // passes iff value > limit
    };

    std::string name;
    Kind kind = Kind::UpperBound;
    double value = 0.0;
    double limit = 0.0;
    // KS sub-tests also carry the distance and its critical value.
    double distance = -1.0;
    double critical = -1.0;
    bool gating = true;
    bool passed = false;

    // Normalised score; <= 1 iff passed (for gating sub-tests).
    double score() const;
};

struct TestReport {
    std::string name;
    // Largest normalised sub-test score; passed == (statistic <= threshold).
    double statistic = 0.0;
    double threshold = 1.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    bool passed = false;
    std::uint64_t seed = 0;
    std::string details;
    std::vector<SubTest> subtests;

    void add_ks(const std::string& what, const KsResult& ks, double effective_n, double p_min = kKsPThreshold);
    void add_upper(const std::string& what, double value, double limit, bool gating = true);
    void add_lower(const std::string& what, double value, double limit, bool gating = true);
    void note(const std::string& line);
    // Recomputes statistic and passed from the gating sub-tests.
    void finalize();

    const SubTest* find(const std::string& what) const;
};

// Concatenates reports; sub-test names are prefixed with each part's name.
TestReport merge_reports(const std::string& name, const std::vector<TestReport>& parts);

// A_inf from the truncated series against IW_d(beta - alpha): two-sample KS on
// trace, log-det and lambda_max; at d = 1 also a one-sample KS against the
// quadrature CDF and a 3 SE mean test when beta - alpha > 1.
TestReport check_dufresne(const ModelParams& p, std::size_t n_samples, std::uint64_t seed, double tail_tol = 1e-10);

// Post-burn-in samples of both Kesten recursions against direct
// B^II(alpha, beta - alpha) draws (trace and log-det), plus one-step push
// through of direct draws for each recursion.
TestReport check_fixed_point(const ModelParams& p, int burn_in, std::size_t n_samples, std::uint64_t seed,
                             SplitKind kind = SplitKind::Cholesky, int thin = 0);

// K Pi f = Q K f on s_grid for the fixed test-function suite and f = 1, and
// lambda Pi f = eta Kbar f. Relative discrepancy limit 1e-6.
TestReport check_intertwining_d1(const ModelParams& p, const std::vector<double>& s_grid,
                                 const QuadratureSpec& q = {});

// S(1) against eta and S(2) | S(1) in s0 (1 +- h) against Qbar(s0; .).
// Throws InsufficientBinCount when fewer than 500 traces fall in the bin.
TestReport check_my_markov_d1(const ModelParams& p, std::size_t n_traces, std::uint64_t seed, double h = 0.05);

// Pairwise two-sample tests of R(n) over {Recursive, Closed} x {SquareRoot,
// Cholesky}, and the shared-stream Cholesky Recursive/Closed comparison.
TestReport check_construction_equivalence(const ModelParams& p, int n, std::size_t n_samples, std::uint64_t seed,
                                          std::size_t n_shared = 2000);

// Correlations between {trace, log-det, entry(0,0)} of T~_{(X+Y)^{-1}}(X) and
// of X + Y, X ~ W(alpha), Y ~ W(beta); all must stay below 4/sqrt(n). With
// negative_control the dependent variant is used instead and the largest
// correlation must exceed the bound.
TestReport check_lukacs(const ModelParams& p, std::size_t n_samples, SplitKind kind, std::uint64_t seed,
                        bool negative_control = false);

// Both kinds plus the negative controls (the latter only for d >= 2).
TestReport check_lukacs_suite(const ModelParams& p, std::size_t n_samples, std::uint64_t seed);

// W(alpha) = W(alpha + beta) (.) B^I(alpha, beta) and
// IW(alpha) = IW(alpha + beta) (.) IB^I(alpha, beta) for each d in dims.
TestReport check_beta_gamma(double alpha, double beta, const std::vector<int>& dims, std::size_t n_samples,
                            std::uint64_t seed);

// Random inverse-gamma gRSK runs: identity discrepancy < 1e-9, product
// identity < 1e-12 relative.
TestReport check_grsk(double alpha, double beta, int runs, int steps, std::uint64_t seed);

// Both Lyapunov estimators against the closed forms and against each other
// (3 SE), sum rule (1e-8) and the sign of the top exponent for beta2.
TestReport check_lyapunov(const std::vector<std::pair<Law, ModelParams>>& cases, int n_steps, int n_replicas,
                          std::uint64_t seed);

// Names run by `verify all`, in order.
std::vector<std::string> default_check_names();
// Every name accepted by run_named_check.
std::vector<std::string> known_check_names();

// Runs a check with its documented default parameters. scale < 1 shrinks the
// Monte Carlo sample sizes proportionally (used by calibration runs).
TestReport run_named_check(const std::string& name, std::uint64_t seed, double scale = 1.0);

}  // namespace pdw
