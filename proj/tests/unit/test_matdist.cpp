#include "support.hpp"

#include "pdw/error.hpp"
#include "pdw/matdist.hpp"
#include "pdw/parallel.hpp"
#include "pdw/stats.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <doctest.h>

#include <cmath>

using namespace pdw;

namespace {

constexpr double kP = 1e-3;

template <class F>
std::vector<PosDef> draw(std::size_t n, std::uint64_t seed, F&& f) {
    RngStream rng(seed, 0);
    std::vector<PosDef> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(f(rng));
    return out;
}

std::vector<double> values_of(const std::vector<PosDef>& xs, const Functional& f) { return project(xs, f); }

double se_of(const std::vector<double>& v) { return standard_error(v); }

}  // namespace

TEST_SUITE("matdist") {

TEST_CASE("Bartlett spec validation") {
    CHECK_NOTHROW(BartlettSpec::forward(3, 1.01).validate());
    CHECK_THROWS_AS(BartlettSpec::forward(3, 1.0).validate(), DomainError);
    CHECK_THROWS_AS(BartlettSpec::backward(2, 0.5).validate(), DomainError);
    const auto b = BartlettSpec::backward(3, 2.0);
    CHECK(b.c == std::vector<double>{3.0, 2.0, 1.0});
}

TEST_CASE("Bartlett diagonal and off-diagonal moments") {
    RngStream rng(21, 0);
    const int n = 100000;
    std::vector<double> diag2(n), off(n);
    for (int i = 0; i < n; ++i) {
        const UpperTri u1 = sample_bartlett(BartlettSpec::forward(1, 3.0), rng);
        diag2[i] = u1(0, 0) * u1(0, 0);
        const UpperTri u2 = sample_bartlett(BartlettSpec::forward(2, 3.0), rng);
        off[i] = u2(0, 1);
        CHECK(u2(1, 0) == 0.0);
    }
    CHECK(std::abs(mean(diag2) - 3.0) < 3.0 * se_of(diag2));
    // Variance of the off-diagonal entries is 1/2; SE of the sample variance ~ sqrt(2/n) * 1/2.
    CHECK(std::abs(sample_variance(off) - 0.5) < 3.0 * 0.5 * std::sqrt(2.0 / n));
}

TEST_CASE("reverse permutation exchanges forward and backward Bartlett laws") {
    const int n = 20000, d = 3;
    RngStream r1(22, 0), r2(22, 1);
    std::vector<std::vector<double>> a(d), b(d);
    for (int i = 0; i < n; ++i) {
        const UpperTri f = reverse_permute(sample_bartlett(BartlettSpec::forward(d, 2.5), r1));
        const UpperTri g = sample_bartlett(BartlettSpec::backward(d, 2.5), r2);
        for (int k = 0; k < d; ++k) {
            a[k].push_back(f(k, k));
            b[k].push_back(g(k, k));
        }
    }
    for (int k = 0; k < d; ++k) CHECK(ks_two_sample(a[k], b[k]).p_value > kP);
}

TEST_CASE("Wishart at d = 1 is gamma") {
    const auto xs = values_of(draw(100000, 23, [](RngStream& r) { return sample_wishart({1, 2.5, 1.0}, r); }),
                          Functional::trace());
    const auto ks = ks_one_sample(xs, [](double x) { return boost::math::gamma_p(2.5, x); });
    CHECK(ks.distance < 0.01);
    CHECK(ks.p_value > kP);
}

TEST_CASE("Wishart trace mean and positivity") {
    const auto xs = draw(100000, 24, [](RngStream& r) { return sample_wishart({2, 3.0, 1.0}, r); });
    for (const auto& x : xs) CHECK(det(x) > 0.0);
    const auto tr = values_of(xs, Functional::trace());
    CHECK(std::abs(mean(tr) - 6.0) < 3.0 * se_of(tr));
    RngStream rng(1, 0);
    CHECK_THROWS_AS(sample_wishart({2, 0.5, 1.0}, rng), DomainError);
}

TEST_CASE("inverse Wishart moments and inversion law") {
    const auto iw1 = values_of(draw(100000, 25, [](RngStream& r) { return sample_inv_wishart({1, 1.0, 5.0}, r); }),
                           Functional::trace());
    CHECK(std::abs(mean(iw1) - 0.25) < 3.0 * se_of(iw1));
    const auto ks1 = ks_one_sample(iw1, [](double x) { return boost::math::gamma_q(5.0, 1.0 / x); });
    CHECK(ks1.p_value > kP);

    std::vector<PosDef> inv;
    for (const auto& x : draw(50000, 26, [](RngStream& r) { return sample_inv_wishart({2, 1.0, 4.0}, r); }))
        inv.push_back(invert(x));
    const auto w = draw(50000, 27, [](RngStream& r) { return sample_wishart({2, 4.0, 1.0}, r); });
    CHECK(ks_two_sample(values_of(inv, Functional::trace()), values_of(w, Functional::trace())).p_value > kP);
    for (const auto& x : inv) CHECK(det(x) > 0.0);
}

TEST_CASE("Beta II moments, inverse law and convolution route") {
    const auto b1 = values_of(draw(100000, 28, [](RngStream& r) { return sample_beta2({1, 2.0, 5.0}, r); }),
                          Functional::trace());
    CHECK(std::abs(mean(b1) - 0.5) < 3.0 * se_of(b1));

    std::vector<PosDef> inv;
    for (const auto& x : draw(50000, 29, [](RngStream& r) { return sample_beta2({2, 2.5, 4.0}, r); }))
        inv.push_back(invert(x));
    const auto swapped = draw(50000, 30, [](RngStream& r) { return sample_beta2({2, 4.0, 2.5}, r); });
    CHECK(ks_two_sample(values_of(inv, Functional::log_det()), values_of(swapped, Functional::log_det())).p_value > kP);

    const ModelParams p{2, 2.5, 4.0};
    const auto conv = draw(50000, 31, [&](RngStream& r) {
        const PosDef y = sample_inv_wishart(p, r);
        const PosDef x = sample_wishart(p, r);
        return convolve(SplitKind::SquareRoot, y, x);
    });
    const auto direct = draw(50000, 32, [&](RngStream& r) { return sample_beta2(p, r); });
    CHECK(ks_two_sample(values_of(conv, Functional::trace()), values_of(direct, Functional::trace())).p_value > kP);
}

TEST_CASE("Beta I moments, support and bridge to Beta II") {
    const auto b1 = values_of(draw(100000, 33, [](RngStream& r) { return sample_beta1({1, 2.0, 3.0}, r); }),
                          Functional::trace());
    CHECK(std::abs(mean(b1) - 0.4) < 3.0 * se_of(b1));
    for (double v : b1) CHECK((v > 0.0 && v < 1.0));

    int outside = 0;
    RngStream rng(34, 0);
    for (int i = 0; i < 100000; ++i) {
        const PosDef x = sample_beta1({2, 2.0, 3.0}, rng, i % 2 ? SplitKind::Cholesky : SplitKind::SquareRoot);
        if (!try_cholesky(Mat::Identity(2, 2) - x.matrix())) ++outside;
    }
    CHECK(outside == 0);

    std::vector<PosDef> bridge;
    for (const auto& x : draw(50000, 35, [](RngStream& r) { return sample_inv_beta1({2, 2.5, 3.0}, r); }))
        bridge.push_back(PosDef::from_matrix(x.matrix() - Mat::Identity(2, 2)));
    const auto b2 = draw(50000, 36, [](RngStream& r) { return sample_beta2({2, 3.0, 2.5}, r); });
    CHECK(ks_two_sample(values_of(bridge, Functional::trace()), values_of(b2, Functional::trace())).p_value > kP);
}

TEST_CASE("Wishart additivity") {
    const auto sum = draw(50000, 37, [](RngStream& r) {
        return sample_wishart({2, 1.5, 1.0}, r) + sample_wishart({2, 2.0, 1.0}, r);
    });
    const auto direct = draw(50000, 38, [](RngStream& r) { return sample_wishart({2, 3.5, 1.0}, r); });
    for (const auto& f : standard_functionals()) CHECK(ks_two_sample(values_of(sum, f), values_of(direct, f)).p_value > kP);
}

TEST_CASE("orthogonal invariance of the laws") {
    RngStream rot_rng(39, 0);
    Mat g(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) = rot_rng.normal(0.0, 1.0);
    const Mat k = Eigen::HouseholderQR<Mat>(g).householderQ();
    const ModelParams p{3, 2.5, 4.0};
    for (Law law : {Law::Wishart, Law::InvWishart, Law::BetaII}) {
        std::vector<PosDef> rotated;
        for (const auto& x : draw(30000, 40, [&](RngStream& r) { return sample_law(law, p, r); }))
            rotated.push_back(congruence(k, x));
        const auto plain = draw(30000, 41, [&](RngStream& r) { return sample_law(law, p, r); });
        CHECK(ks_two_sample(values_of(rotated, Functional::entry(0, 1)), values_of(plain, Functional::entry(0, 1))).p_value >
              kP);
        CHECK(ks_two_sample(values_of(rotated, Functional::entry(0, 0)), values_of(plain, Functional::entry(0, 0))).p_value >
              kP);
    }
}

TEST_CASE("identical seed and stream give bit-identical samples") {
    const ModelParams p{3, 2.5, 4.0};
    for (Law law : {Law::Wishart, Law::InvWishart, Law::BetaI, Law::BetaII}) {
        RngStream a(42, 7), b(42, 7), c(42, 8);
        bool all_equal = true, any_differs = false;
        for (int i = 0; i < 100; ++i) {
            const Mat x = sample_law(law, p, a).matrix();
            const Mat y = sample_law(law, p, b).matrix();
            const Mat z = sample_law(law, p, c).matrix();
            all_equal = all_equal && (x.array() == y.array()).all();
            any_differs = any_differs || !(x.array() == z.array()).all();
        }
        CHECK(all_equal);
        CHECK(any_differs);
    }
}

TEST_CASE("Beta II factor reconstructs the sample") {
    RngStream rng(43, 0);
    for (int i = 0; i < 50; ++i) {
        const UpperTri u = beta2_factor({3, 2.0, 4.0}, rng);
        const PosDef x = PosDef::from_factor(u);
        CHECK(pdw::test::rel_frob(x.chol().matrix(), u.matrix()) < 1e-15);
        CHECK(pdw::test::rel_frob(cholesky(PosDef::from_matrix(x.matrix())).matrix(), u.matrix()) < 1e-10);
    }
}

}  // TEST_SUITE
