#include "support.hpp"

#include "pdw/error.hpp"
#include "pdw/grsk.hpp"
#include "pdw/matdist.hpp"
#include "pdw/stats.hpp"
#include "pdw/walks.hpp"

#include <doctest.h>

#include <cmath>

using namespace pdw;
using pdw::test::random_posdef;
using pdw::test::rel_frob;

namespace {

WalkConfig config(int d, double alpha, double beta, int steps, SplitKind kind = SplitKind::Cholesky,
                  Construction c = Construction::Recursive) {
    WalkConfig cfg;
    cfg.params = {d, alpha, beta};
    cfg.steps = steps;
    cfg.kind = kind;
    cfg.construction = c;
    return cfg;
}

}  // namespace

TEST_SUITE("walks") {

TEST_CASE("walk_step examples") {
    RngStream rng(51, 0);
    const PosDef x = random_posdef(3, rng);
    for (auto kind : {SplitKind::SquareRoot, SplitKind::Cholesky}) {
        CHECK(rel_frob(walk_step(kind, PosDef::identity(3), x).matrix(), x.matrix()) < 1e-14);
        CHECK(walk_step(kind, PosDef::scalar(1.5), PosDef::scalar(4.0))(0, 0) == doctest::Approx(6.0));
    }
    const PosDef x1 = random_posdef(2, rng), x2 = random_posdef(2, rng);
    const PosDef r2 = walk_step(SplitKind::SquareRoot, walk_step(SplitKind::SquareRoot, PosDef::identity(2), x1), x2);
    const Mat h = sqrt_factor(x1).matrix();
    CHECK(rel_frob(r2.matrix(), h * x2.matrix() * h) < 1e-12);
}

TEST_CASE("walk_closed examples") {
    RngStream rng(52, 0);
    const PosDef m = random_posdef(2, rng);
    CHECK(rel_frob(walk_closed(SplitKind::Cholesky, m, {}).matrix(), m.matrix()) < 1e-14);
    CHECK(walk_closed(SplitKind::SquareRoot, PosDef::scalar(2.0), {PosDef::scalar(3.0), PosDef::scalar(0.5)})(0, 0) ==
          doctest::Approx(3.0));
    for (int d : {2, 3, 5}) {
        for (int t = 0; t < 20; ++t) {
            const PosDef init = random_posdef(d, rng);
            std::vector<PosDef> incs;
            PosDef r = init;
            for (int k = 0; k < 12; ++k) {
                incs.push_back(sample_beta2({d, 3.0, 4.0}, rng));
                r = walk_step(SplitKind::Cholesky, r, incs.back());
            }
            const PosDef c = walk_closed(SplitKind::Cholesky, init, incs);
            CHECK((r.matrix() - c.matrix()).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, max_abs_entry(r)));
        }
    }
}

TEST_CASE("trace at n = 0 holds only the initial state") {
    WalkConfig cfg = config(2, 2.0, 5.0, 0);
    RngStream rng(53, 0);
    const WalkTrace tr = simulate_walk(cfg, rng);
    CHECK(tr.r.size() == 1);
    CHECK(tr.a.size() == 1);
    CHECK(tr.s.empty());
    CHECK(rel_frob(tr.a[0].matrix(), tr.r[0].matrix()) == 0.0);
}

TEST_CASE("hand-evaluated trace at d = 1") {
    WalkConfig cfg = config(1, 2.0, 5.0, 2);
    cfg.init = WalkInit::identity();
    const WalkTrace tr = walk_from_increments(cfg, PosDef::scalar(1.0), {PosDef::scalar(2.0), PosDef::scalar(3.0)});
    const double r[] = {1, 2, 6}, a[] = {1, 3, 9};
    for (int k = 0; k < 3; ++k) {
        CHECK(tr.r[k](0, 0) == doctest::Approx(r[k]).epsilon(1e-15));
        CHECK(tr.a[k](0, 0) == doctest::Approx(a[k]).epsilon(1e-15));
    }
    REQUIRE(tr.s.size() == 2);
    CHECK(tr.s[0](0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(tr.s[1](0, 0) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("trace invariants and log-det additivity") {
    for (auto c : {Construction::Recursive, Construction::Closed}) {
        for (auto kind : {SplitKind::SquareRoot, SplitKind::Cholesky}) {
            WalkConfig cfg = config(3, 2.5, 6.0, 30, kind, c);
            RngStream rng(54, 0);
            std::vector<PosDef> incs;
            const PosDef init = draw_initial(cfg, rng);
            for (int k = 0; k < cfg.steps; ++k) incs.push_back(sample_beta2(cfg.params, rng));
            const WalkTrace tr = walk_from_increments(cfg, init, incs);
            REQUIRE(tr.r.size() == 31);
            REQUIRE(tr.s.size() == 30);
            double ld = log_det(init);
            for (int k = 1; k <= cfg.steps; ++k) {
                ld += log_det(incs[k - 1]);
                CHECK(std::abs(log_det(tr.r[k]) - ld) <= 1e-10 * std::max(1.0, std::abs(ld)));
                CHECK(try_cholesky(tr.a[k].matrix() - tr.r[k].matrix()).has_value());
            }
        }
    }
}

TEST_CASE("S(n) vanishes in the contracting regime") {
    WalkConfig cfg = config(2, 2.0, 5.0, 400);
    RngStream rng(55, 0);
    const WalkTrace tr = simulate_walk(cfg, rng);
    CHECK(lambda_max(tr.s.back()) < 1e-6);
}

TEST_CASE("divergent regime raises StepOverflow") {
    WalkConfig cfg = config(2, 8.0, 2.0, 4000);
    RngStream rng(56, 0);
    CHECK_THROWS_AS(simulate_walk(cfg, rng), StepOverflow);
}

TEST_CASE("config validation") {
    RngStream rng(57, 0);
    CHECK_THROWS_AS(simulate_walk(config(2, 0.5, 5.0, 3), rng), DomainError);
    WalkConfig bad = config(2, 2.0, 5.0, -1);
    CHECK_THROWS_AS(bad.validate(), DomainError);
    WalkConfig wrong_dim = config(2, 2.0, 5.0, 3);
    wrong_dim.init = WalkInit::fixed(PosDef::identity(3));
    CHECK_THROWS_AS(wrong_dim.validate(), DomainError);
    WalkConfig fixed = config(2, 2.0, 5.0, 3);
    fixed.init = WalkInit::fixed(PosDef::diagonal({2.0, 3.0}));
    CHECK(rel_frob(simulate_walk(fixed, rng).r[0].matrix(), PosDef::diagonal({2.0, 3.0}).matrix()) == 0.0);
}

TEST_CASE("Kesten recursions") {
    const KestenState s0 = kesten_start(PosDef::scalar(2.0));
    CHECK(s0.value(0, 0) == 2.0);
    CHECK(s0.step == 1);
    for (auto kind : {SplitKind::SquareRoot, SplitKind::Cholesky}) {
        CHECK(kesten_step(kind, s0, PosDef::scalar(3.0)).value(0, 0) == doctest::Approx(9.0));
        CHECK(kesten_prime_step(kind, s0, PosDef::scalar(3.0)).value(0, 0) == doctest::Approx(9.0));
    }
    const KestenState id{PosDef::identity(2), 1};
    const auto next = kesten_step(SplitKind::SquareRoot, id, PosDef::diagonal({4.0, 9.0}));
    CHECK(rel_frob(next.value.matrix(), PosDef::diagonal({8.0, 18.0}).matrix()) < 1e-14);
    CHECK(next.step == 2);
}

TEST_CASE("Kesten chain at d = 1 has stationary mean one") {
    // Stationary law is beta-prime(2, 3), mean 2 / (3 - 1) = 1.
    const ModelParams p{1, 2.0, 5.0};
    const ModelParams incp{1, 2.0, 5.0};
    RngStream rng(58, 0);
    std::vector<double> xs;
    for (int chain = 0; chain < 40; ++chain) {
        KestenState s = kesten_start(sample_beta2(incp, rng));
        for (int k = 0; k < 500; ++k) s = kesten_step(SplitKind::Cholesky, s, sample_beta2(incp, rng));
        for (int j = 0; j < 500; ++j) {
            for (int k = 0; k < 50; ++k) s = kesten_step(SplitKind::Cholesky, s, sample_beta2(incp, rng));
            xs.push_back(s.value(0, 0));
        }
    }
    CHECK(std::abs(mean(xs) - p.alpha / (p.beta - p.alpha - 1.0)) < 3.0 * standard_error(xs));
}

TEST_CASE("Dufresne series at d = 1") {
    WalkConfig cfg = config(1, 2.0, 5.0, 0);
    RngStream rng(59, 0);
    std::vector<double> xs;
    double terms = 0.0;
    for (int i = 0; i < 100000; ++i) {
        const auto r = dufresne_series_ex(cfg, 1e-10, 0, rng);
        xs.push_back(r.value(0, 0));
        terms += r.terms;
        CHECK(r.last_ratio < 1e-10);
    }
    CHECK(std::abs(mean(xs) - 0.5) < 3.0 * standard_error(xs));
    terms /= xs.size();
    // Term count is of the order log(tol) / mu with mu = digamma(2) - digamma(5).
    const double predicted = std::log(1e-10) / (0.42278433509846713 - 1.5061176684318003);
    CHECK(terms > 0.5 * predicted);
    CHECK(terms < 2.0 * predicted);
}

TEST_CASE("Dufresne partial sums increase and the budget is enforced") {
    WalkConfig cfg = config(2, 2.0, 6.0, 0);
    RngStream a(60, 0), b(60, 0);
    const auto small = dufresne_series_ex(cfg, 1e-3, 0, a);
    const auto large = dufresne_series_ex(cfg, 1e-12, 0, b);
    CHECK(large.terms >= small.terms);
    CHECK(try_cholesky(large.value.matrix() - small.value.matrix()).has_value());
    RngStream c(61, 0);
    try {
        dufresne_series_ex(cfg, 1e-12, 3, c);
        CHECK(false);
    } catch (const TruncationFailure& e) {
        CHECK(e.achieved_ratio() > 1e-12);
    }
    RngStream d(62, 0);
    CHECK_THROWS_AS(dufresne_series(config(2, 3.0, 3.0, 0), 1e-10, 0, d), DomainError);
    CHECK(default_dufresne_max_terms({1, 2.0, 6.0}, 1e-8) ==
          10 * static_cast<int>(std::ceil(std::log(1e8) / (1.7061176684318003 - 0.42278433509846713))));
}

TEST_CASE("gRSK steps") {
    const GrskState s = grsk_step({1.0, 1.0, 1.0}, 2.0, 3.0);
    CHECK(s.x == doctest::Approx(3.0));
    CHECK(s.y == doctest::Approx(8.0));
    CHECK(s.z == doctest::Approx(0.75));
    const GrskState t = grsk_step({1.0, 1.0, 1.0}, 1.0, 1.0);
    CHECK(t.x == doctest::Approx(1.0));
    CHECK(t.y == doctest::Approx(2.0));
    CHECK(t.z == doctest::Approx(0.5));
}

TEST_CASE("gRSK identities") {
    CHECK(grsk_my_identity_check({1.0, 1.0, 1.0}, {2.0}, {3.0}, 1) < 1e-12);
    CHECK(grsk_my_identity_check({1.0, 1.0, 1.0}, std::vector<double>(10, 1.0), std::vector<double>(10, 1.0), 10) <
          1e-12);
    RngStream rng(63, 0);
    for (int run = 0; run < 100; ++run) {
        std::vector<double> a, b;
        for (int k = 0; k < 50; ++k) {
            a.push_back(1.0 / rng.gamma(2.0));
            b.push_back(1.0 / rng.gamma(5.0));
        }
        const GrskState init{rng.gamma(2.0), rng.gamma(2.0), rng.gamma(2.0)};
        CHECK(grsk_my_identity_check(init, a, b, 50) < 1e-9);
        CHECK(grsk_product_identity_check(init, a, b, 50) < 1e-12);
    }
}

}  // TEST_SUITE
