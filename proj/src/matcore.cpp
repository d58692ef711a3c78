#include "pdw/matcore.hpp"

#include "pdw/error.hpp"

#include <cmath>
#include <string>

namespace pdw {

const char* to_string(SplitKind kind) {
    switch (kind) {
    case SplitKind::SquareRoot: return "sqrt";
    case SplitKind::Cholesky: return "cholesky";
    }
    return "?";
}

UpperTri UpperTri::from_matrix(const Mat& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw DomainError("UpperTri: matrix must be square and nonempty");
    }
    const auto d = m.rows();
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = j + 1; i < d; ++i) {
            if (m(i, j) != 0.0) throw DomainError("UpperTri: nonzero entry below the diagonal");
        }
        if (!(m(j, j) > 0.0)) throw DomainError("UpperTri: diagonal must be strictly positive");
    }
    return UpperTri(m);
}

UpperTri UpperTri::identity(int d) { return UpperTri(Mat::Identity(d, d)); }

UpperTri UpperTri::inverse() const {
    const auto d = m_.rows();
    Mat inv = m_.triangularView<Eigen::Upper>().solve(Mat::Identity(d, d));
    inv.triangularView<Eigen::StrictlyLower>().setZero();
    return UpperTri(std::move(inv));
}

UpperTri UpperTri::operator*(const UpperTri& rhs) const {
    Mat p = m_.triangularView<Eigen::Upper>() * rhs.m_;
    p.triangularView<Eigen::StrictlyLower>().setZero();
    return UpperTri(std::move(p));
}

std::optional<UpperTri> try_cholesky(const Mat& sym) {
    const auto d = sym.rows();
    if (d == 0 || sym.cols() != d) return std::nullopt;
    double max_diag = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
        if (!std::isfinite(sym(k, k))) return std::nullopt;
        max_diag = std::max(max_diag, sym(k, k));
    }
    if (!(max_diag > 0.0)) return std::nullopt;
    const double floor = kPivotTolerance * max_diag;

    // Row-oriented upper factorization: x = u^T u.
    Mat u = Mat::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        double pivot = sym(i, i);
        for (Eigen::Index k = 0; k < i; ++k) pivot -= u(k, i) * u(k, i);
        if (!(pivot > floor) || !std::isfinite(pivot)) return std::nullopt;
        const double uii = std::sqrt(pivot);
        u(i, i) = uii;
        for (Eigen::Index j = i + 1; j < d; ++j) {
            double s = sym(i, j);
            for (Eigen::Index k = 0; k < i; ++k) s -= u(k, i) * u(k, j);
            u(i, j) = s / uii;
        }
    }
    return UpperTri(std::move(u));
}

PosDef PosDef::from_matrix(const Mat& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw NotPositiveDefinite("PosDef: matrix must be square and nonempty");
    }
    Mat s = 0.5 * (m + m.transpose());
    auto u = try_cholesky(s);
    if (!u) throw NotPositiveDefinite("PosDef: Cholesky pivot below tolerance");
    return PosDef(std::move(s), std::move(*u));
}

PosDef PosDef::identity(int d) { return PosDef(Mat::Identity(d, d), UpperTri::identity(d)); }

PosDef PosDef::diagonal(const Vec& diag) { return from_matrix(diag.asDiagonal().toDenseMatrix()); }

PosDef PosDef::diagonal(std::initializer_list<double> diag) {
    Vec v(static_cast<Eigen::Index>(diag.size()));
    Eigen::Index i = 0;
    for (double x : diag) v(i++) = x;
    return diagonal(v);
}

PosDef PosDef::scalar(double v) {
    Mat m(1, 1);
    m(0, 0) = v;
    return from_matrix(m);
}

PosDef PosDef::from_factor(const UpperTri& u) {
    Mat g = u.gram();
    Mat s = 0.5 * (g + g.transpose());
    return PosDef(std::move(s), u);
}

UpperTri cholesky(const PosDef& x) { return x.chol(); }

namespace {

Eigen::SelfAdjointEigenSolver<Mat> eigensolve(const Mat& m, bool vectors) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw EigenFailure("symmetric eigensolver did not converge");
    return es;
}

void check_same_dim(const PosDef& a, const PosDef& b, const char* where) {
    if (a.dim() != b.dim()) {
        throw DomainError(std::string(where) + ": dimension mismatch");
    }
}

}  // namespace

PosDef gram_of(const Mat& m) {
    if (m.rows() < m.cols() || m.cols() == 0) throw NotPositiveDefinite("gram_of: matrix must be nonempty with rows >= cols");
    if (!m.allFinite()) throw NotPositiveDefinite("gram_of: non-finite entry");
    // m = QR, so m^T m = R^T R; flipping row signs makes R the Cholesky factor.
    Mat r = Eigen::HouseholderQR<Mat>(m).matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        if (r(i, i) < 0.0) r.row(i) *= -1.0;
        if (!(r(i, i) > 0.0)) throw NotPositiveDefinite("gram_of: matrix is singular");
    }
    return PosDef::from_factor(UpperTri(std::move(r)));
}

PosDef sqrt_factor(const PosDef& x) {
    if (x.dim() == 1) return PosDef::scalar(std::sqrt(x(0, 0)));
    // Singular values of the Cholesky factor are the square roots of the
    // eigenvalues of x, resolved at the square root of its condition number.
    Eigen::JacobiSVD<Mat> svd(x.chol().matrix(), Eigen::ComputeFullV);
    const Vec& sig = svd.singularValues();
    if (!(sig.minCoeff() > 0.0)) throw NotPositiveDefinite("sqrt_factor: singular input");
    const Mat& v = svd.matrixV();
    // b = V S V^T = (S^{1/2} V^T)^T (S^{1/2} V^T)
    return gram_of(sig.cwiseSqrt().asDiagonal() * v.transpose());
}

Mat split_factor(SplitKind kind, const PosDef& y) {
    switch (kind) {
    case SplitKind::Cholesky: return y.chol().matrix();
    case SplitKind::SquareRoot: return sqrt_factor(y).matrix();
    }
    return {};
}

PosDef congruence(const Mat& a, const PosDef& x) {
    if (a.rows() != x.dim() || a.cols() != x.dim()) throw DomainError("congruence: dimension mismatch");
    // Hadamard ratio |det a| / prod ||a_j|| lies in [0, 1] and vanishes exactly
    // on singular matrices.
    const double d = std::abs(a.partialPivLu().determinant());
    double colprod = 1.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) colprod *= a.col(j).norm();
    if (!(colprod > 0.0) || !(d / colprod > 1e-14)) {
        throw SingularTransform("congruence: transform is numerically singular");
    }
    return gram_of(x.chol().matrix() * a);
}

PosDef sym_product(SplitKind kind, const PosDef& y, const PosDef& x) {
    check_same_dim(y, x, "sym_product");
    if (kind == SplitKind::Cholesky) {
        // u_y^T u_x^T u_x u_y: the factor is the triangular product u_x u_y.
        return PosDef::from_factor(x.chol() * y.chol());
    }
    return gram_of(x.chol().matrix() * split_factor(kind, y));
}

PosDef sym_product_alt(SplitKind kind, const PosDef& y, const PosDef& x) {
    check_same_dim(y, x, "sym_product_alt");
    return gram_of(x.chol().matrix() * split_factor(kind, y).transpose());
}

Vec eigenvalues(const PosDef& x) {
    if (x.dim() == 1) return x.matrix().col(0);
    auto es = eigensolve(x.matrix(), false);
    Vec asc = es.eigenvalues();
    return asc.reverse();
}

double lambda_max(const PosDef& x) { return eigenvalues(x)(0); }

double lambda_min(const PosDef& x) { return eigenvalues(x)(x.dim() - 1); }

PosDef invert(const PosDef& x) {
    // x^{-1} = u^{-1} u^{-T} = (u^{-T})^T (u^{-T})
    return gram_of(x.chol().inverse().matrix().transpose());
}

double det(const PosDef& x) {
    const auto& u = x.chol().matrix();
    double p = 1.0;
    for (Eigen::Index k = 0; k < u.rows(); ++k) p *= u(k, k) * u(k, k);
    return p;
}

double log_det(const PosDef& x) {
    const auto& u = x.chol().matrix();
    double s = 0.0;
    for (Eigen::Index k = 0; k < u.rows(); ++k) s += std::log(u(k, k));
    return 2.0 * s;
}

double trace(const PosDef& x) { return x.matrix().trace(); }

PosDef operator+(const PosDef& a, const PosDef& b) {
    check_same_dim(a, b, "operator+");
    return PosDef::from_matrix(a.matrix() + b.matrix());
}

PosDef shift_identity(const PosDef& x) {
    return PosDef::from_matrix(x.matrix() + Mat::Identity(x.dim(), x.dim()));
}

double max_abs_entry(const PosDef& x) { return x.matrix().cwiseAbs().maxCoeff(); }

}  // namespace pdw
