#include "support.hpp"

#include "pdw/error.hpp"
#include "pdw/matcore.hpp"

#include <doctest.h>

using namespace pdw;
using pdw::test::mat2;
using pdw::test::random_posdef;
using pdw::test::rel_frob;

TEST_SUITE("matcore") {

TEST_CASE("cholesky of identity and diagonal") {
    CHECK(cholesky(PosDef::identity(2)).matrix().isApprox(Mat::Identity(2, 2)));
    const Mat u = cholesky(PosDef::diagonal({4.0, 9.0})).matrix();
    CHECK(u(0, 0) == doctest::Approx(2.0));
    CHECK(u(1, 1) == doctest::Approx(3.0));
    CHECK(u(0, 1) == 0.0);
    CHECK(u(1, 0) == 0.0);
}

TEST_CASE("cholesky of [[2,1],[1,2]]") {
    const Mat u = cholesky(PosDef::from_matrix(mat2(2, 1, 1, 2))).matrix();
    CHECK(u(0, 0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(u(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(u(1, 0) == 0.0);
    CHECK(u(1, 1) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));
    CHECK(rel_frob(u.transpose() * u, mat2(2, 1, 1, 2)) < 1e-12);
}

TEST_CASE("from_matrix rejects indefinite and near-singular input") {
    CHECK_THROWS_AS(PosDef::from_matrix(mat2(1, 2, 2, 1)), NotPositiveDefinite);
    CHECK_THROWS_AS(PosDef::from_matrix(mat2(1, 1, 1, 1)), NotPositiveDefinite);
    CHECK_THROWS_AS(PosDef::scalar(0.0), NotPositiveDefinite);
    CHECK_THROWS_AS(PosDef::from_matrix(Mat(2, 3)), NotPositiveDefinite);
    // Pivot 1e-14 relative to the largest diagonal is below the tolerance.
    CHECK_THROWS_AS(PosDef::diagonal({1.0, 1e-14}), NotPositiveDefinite);
    CHECK_NOTHROW(PosDef::diagonal({1.0, 1e-12}));
}

TEST_CASE("from_matrix symmetrizes") {
    const PosDef x = PosDef::from_matrix(mat2(2, 1.2, 0.8, 2));
    CHECK(x(0, 1) == 1.0);
    CHECK(x(1, 0) == 1.0);
}

TEST_CASE("upper triangular validation") {
    CHECK_THROWS_AS(UpperTri::from_matrix(mat2(1, 0, 1, 1)), DomainError);
    CHECK_THROWS_AS(UpperTri::from_matrix(mat2(1, 0, 0, -1)), DomainError);
    const UpperTri u = UpperTri::from_matrix(mat2(2, 1, 0, 4));
    CHECK(rel_frob((u * u.inverse()).matrix(), Mat::Identity(2, 2)) < 1e-15);
}

TEST_CASE("sqrt_factor examples") {
    CHECK(sqrt_factor(PosDef::identity(3)).matrix().isApprox(Mat::Identity(3, 3)));
    const Mat b = sqrt_factor(PosDef::diagonal({4.0, 9.0})).matrix();
    CHECK(b(0, 0) == doctest::Approx(2.0));
    CHECK(b(1, 1) == doctest::Approx(3.0));
    CHECK(std::abs(b(0, 1)) < 1e-15);
    CHECK(sqrt_factor(PosDef::scalar(16.0))(0, 0) == 4.0);
}

TEST_CASE("congruence examples") {
    const PosDef x = PosDef::from_matrix(mat2(2, 1, 1, 2));
    CHECK(congruence(Mat::Identity(2, 2), x).matrix().isApprox(x.matrix()));
    const PosDef y = congruence(mat2(2, 0, 0, 3), PosDef::identity(2));
    CHECK(y.matrix().isApprox(mat2(4, 0, 0, 9)));
    Mat a(1, 1);
    a(0, 0) = 3.0;
    CHECK(congruence(a, PosDef::scalar(2.0))(0, 0) == doctest::Approx(18.0));
    CHECK_THROWS_AS(congruence(mat2(1, 2, 2, 4), x), SingularTransform);
    CHECK_THROWS_AS(congruence(Mat::Zero(2, 2), x), SingularTransform);
}

TEST_CASE("sym_product examples") {
    const PosDef x = PosDef::from_matrix(mat2(2, 1, 1, 2));
    for (auto kind : {SplitKind::SquareRoot, SplitKind::Cholesky}) {
        CHECK(rel_frob(sym_product(kind, PosDef::identity(2), x).matrix(), x.matrix()) < 1e-15);
        CHECK(sym_product(kind, PosDef::scalar(2.0), PosDef::scalar(3.0))(0, 0) == doctest::Approx(6.0));
        CHECK(rel_frob(sym_product_alt(kind, PosDef::identity(2), x).matrix(), x.matrix()) < 1e-15);
        CHECK(sym_product_alt(kind, PosDef::scalar(2.0), PosDef::scalar(3.0))(0, 0) == doctest::Approx(6.0));
    }
    const PosDef r = sym_product(SplitKind::SquareRoot, PosDef::diagonal({4.0, 9.0}), x);
    CHECK(rel_frob(r.matrix(), mat2(8, 6, 6, 18)) < 1e-14);
    CHECK_THROWS_AS(sym_product(SplitKind::Cholesky, PosDef::identity(3), x), DomainError);
}

TEST_CASE("sym_product_alt coincides with sym_product for the square root") {
    RngStream rng(11, 0);
    for (int t = 0; t < 50; ++t) {
        const PosDef y = random_posdef(3, rng), x = random_posdef(3, rng);
        CHECK(rel_frob(sym_product_alt(SplitKind::SquareRoot, y, x).matrix(),
                       sym_product(SplitKind::SquareRoot, y, x).matrix()) < 1e-12);
    }
}

TEST_CASE("eigenvalue examples") {
    const Vec e3 = eigenvalues(PosDef::identity(3));
    CHECK(e3.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(e3(i) == doctest::Approx(1.0));
    const Vec e = eigenvalues(PosDef::diagonal({4.0, 9.0}));
    CHECK(e(0) == doctest::Approx(9.0));
    CHECK(e(1) == doctest::Approx(4.0));
    const Vec f = eigenvalues(PosDef::from_matrix(mat2(2, 1, 1, 2)));
    CHECK(f(0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(f(1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lambda_max(PosDef::diagonal({9.0, 4.0})) == doctest::Approx(9.0));
    CHECK(lambda_min(PosDef::diagonal({9.0, 4.0})) == doctest::Approx(4.0));
}

TEST_CASE("invert, det, trace examples") {
    CHECK(invert(PosDef::identity(2)).matrix().isApprox(Mat::Identity(2, 2)));
    CHECK(det(PosDef::diagonal({2.0, 3.0})) == doctest::Approx(6.0));
    CHECK(log_det(PosDef::diagonal({2.0, 3.0})) == doctest::Approx(std::log(6.0)));
    CHECK(trace(PosDef::from_matrix(mat2(2, 1, 1, 2))) == 4.0);
}

TEST_CASE("reconstruction and inverse properties on random matrices") {
    RngStream rng(12, 0);
    for (int d : {1, 2, 3, 5, 8}) {
        for (int t = 0; t < 40; ++t) {
            const PosDef x = random_posdef(d, rng);
            const Mat u = cholesky(x).matrix();
            CHECK(rel_frob(u.transpose() * u, x.matrix()) < 1e-12);
            for (int k = 0; k < d; ++k) CHECK(u(k, k) > 0.0);
            const Mat b = sqrt_factor(x).matrix();
            CHECK(rel_frob(b * b, x.matrix()) < 1e-10);
            CHECK(rel_frob(x.matrix() * invert(x).matrix(), Mat::Identity(d, d)) < 1e-10);
            const Vec ev = eigenvalues(x);
            for (int k = 1; k < d; ++k) CHECK(ev(k - 1) >= ev(k));
            CHECK(ev.minCoeff() > 0.0);
            CHECK(std::abs(ev.sum() - trace(x)) <= 1e-10 * trace(x));
        }
    }
}

TEST_CASE("eigenvalue sum and product bounds") {
    RngStream rng(13, 0);
    for (int d : {2, 3, 4}) {
        for (int t = 0; t < 100; ++t) {
            const PosDef x = random_posdef(d, rng), y = random_posdef(d, rng);
            const double tol = 1e-12;
            const PosDef s = x + y;
            CHECK(lambda_min(x) + lambda_min(y) <= lambda_min(s) * (1 + tol));
            CHECK(lambda_max(s) <= (lambda_max(x) + lambda_max(y)) * (1 + tol));
            for (auto kind : {SplitKind::SquareRoot, SplitKind::Cholesky}) {
                const PosDef p = sym_product(kind, y, x);
                CHECK(lambda_min(x) * lambda_min(y) <= lambda_min(p) * (1 + 1e-9));
                CHECK(lambda_min(p) <= lambda_max(p));
                CHECK(lambda_max(p) <= lambda_max(x) * lambda_max(y) * (1 + 1e-9));
            }
        }
    }
}

TEST_CASE("determinant multiplicativity and spectra of the two products") {
    RngStream rng(14, 0);
    auto same_spectrum = [](const PosDef& a, const PosDef& b) {
        const Vec ea = eigenvalues(a), eb = eigenvalues(b);
        return ((ea - eb).cwiseAbs().array() <= 1e-8 * ea.cwiseAbs().array().max(1.0)).all();
    };
    for (int d : {1, 2, 3, 6}) {
        for (int t = 0; t < 60; ++t) {
            const PosDef x = random_posdef(d, rng), y = random_posdef(d, rng);
            const PosDef pc = sym_product(SplitKind::Cholesky, y, x);
            const PosDef ps = sym_product(SplitKind::SquareRoot, y, x);
            const double target = det(x) * det(y);
            CHECK(std::abs(det(pc) - target) <= 1e-10 * target);
            CHECK(std::abs(det(ps) - target) <= 1e-10 * target);
            // With y = u^T u the square-root product is similar to x y while the
            // Cholesky product is similar to x u u^T.
            const PosDef uut = PosDef::from_matrix(y.chol().matrix() * y.chol().matrix().transpose());
            CHECK(same_spectrum(pc, sym_product(SplitKind::SquareRoot, uut, x)));
            // When x commutes with everything the two spectra coincide.
            const PosDef cx = PosDef::from_matrix(2.5 * Mat::Identity(d, d));
            CHECK(same_spectrum(sym_product(SplitKind::Cholesky, y, cx), sym_product(SplitKind::SquareRoot, y, cx)));
        }
    }
    // The spectra differ in general: traces 5.5 and 6.
    const PosDef x = PosDef::from_matrix(mat2(1, 0, 0, 2)), y = PosDef::from_matrix(mat2(2, 1, 1, 2));
    CHECK(trace(sym_product(SplitKind::Cholesky, y, x)) == doctest::Approx(5.5).epsilon(1e-14));
    CHECK(trace(sym_product(SplitKind::SquareRoot, y, x)) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("split factors satisfy x = w^T w") {
    RngStream rng(15, 0);
    for (int t = 0; t < 30; ++t) {
        const PosDef x = random_posdef(4, rng);
        for (auto kind : {SplitKind::SquareRoot, SplitKind::Cholesky}) {
            const Mat w = split_factor(kind, x);
            CHECK(rel_frob(w.transpose() * w, x.matrix()) < 1e-10);
        }
    }
    CHECK(std::string(to_string(SplitKind::SquareRoot)) == "sqrt");
    CHECK(std::string(to_string(SplitKind::Cholesky)) == "cholesky");
}

}  // TEST_SUITE
