#pragma once

// Dense linear algebra on the cone of symmetric positive definite matrices.
//
// PosDef is the state space of every process in the library. It is always
// stored exactly symmetric and carries its (upper) Cholesky factor, which is
// computed once at construction and doubles as the validity check.

#include <Eigen/Dense>

#include <initializer_list>
#include <optional>

namespace pdw {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// The two splitting functions w with x = w(x)^T w(x).
enum class SplitKind { SquareRoot, Cholesky };

const char* to_string(SplitKind kind);

// Relative Cholesky pivot tolerance: a pivot must exceed this times the
// largest diagonal entry.
inline constexpr double kPivotTolerance = 1e-13;

class PosDef;
PosDef gram_of(const Mat& m);

// Upper triangular matrix with strictly positive diagonal.
class UpperTri {
public:
    // Throws DomainError if m has nonzero entries below the diagonal or a
    // nonpositive diagonal entry.
    static UpperTri from_matrix(const Mat& m);
    static UpperTri identity(int d);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Mat& matrix() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

    UpperTri inverse() const;
    UpperTri operator*(const UpperTri& rhs) const;

    // u^T u
    Mat gram() const { return m_.transpose() * m_; }

private:
    explicit UpperTri(Mat m) : m_(std::move(m)) {}
    friend std::optional<UpperTri> try_cholesky(const Mat& sym);
    friend PosDef gram_of(const Mat& m);
    friend class PosDef;

    Mat m_;
};

class PosDef {
public:
    // Symmetrizes (m + m^T)/2 and validates by Cholesky.
    // Throws NotPositiveDefinite on failure.
    static PosDef from_matrix(const Mat& m);
    static PosDef identity(int d);
    static PosDef diagonal(const Vec& diag);
    static PosDef diagonal(std::initializer_list<double> diag);
    static PosDef scalar(double v);
    // x = u^T u for a valid triangular factor; no refactorization needed.
    static PosDef from_factor(const UpperTri& u);

    int dim() const { return static_cast<int>(m_.rows()); }
    const Mat& matrix() const { return m_; }
    const UpperTri& chol() const { return u_; }
    double operator()(int i, int j) const { return m_(i, j); }

private:
    PosDef(Mat m, UpperTri u) : m_(std::move(m)), u_(std::move(u)) {}

    Mat m_;
    UpperTri u_;
};

// Unique upper triangular u with positive diagonal and x = u^T u. Returns
// nullopt when a pivot falls below kPivotTolerance * max diag. Only the upper
// triangle of sym is read.
std::optional<UpperTri> try_cholesky(const Mat& sym);

UpperTri cholesky(const PosDef& x);

// m^T m for m with at least as many rows as columns, with its Cholesky factor
// taken from a QR decomposition of m so that
// ill-conditioned products keep a valid factor. Throws NotPositiveDefinite if
// m has deficient column rank or non-finite entries.
PosDef gram_of(const Mat& m);

// Symmetric square root, from the SVD of the Cholesky factor.
PosDef sqrt_factor(const PosDef& x);

// w(y) for the chosen splitting function.
Mat split_factor(SplitKind kind, const PosDef& y);

// a^T x a. Throws SingularTransform if a is numerically singular.
// Results of congruences are built from their factor and are not re-validated
// against kPivotTolerance.
PosDef congruence(const Mat& a, const PosDef& x);

// T^w_y(x) = w(y)^T x w(y)
PosDef sym_product(SplitKind kind, const PosDef& y, const PosDef& x);

// T~^w_y(x) = w(y) x w(y)^T
PosDef sym_product_alt(SplitKind kind, const PosDef& y, const PosDef& x);

// Descending.
Vec eigenvalues(const PosDef& x);
double lambda_max(const PosDef& x);
double lambda_min(const PosDef& x);

PosDef invert(const PosDef& x);
double det(const PosDef& x);
double log_det(const PosDef& x);
double trace(const PosDef& x);

PosDef operator+(const PosDef& a, const PosDef& b);

// I + x
PosDef shift_identity(const PosDef& x);

// Largest absolute entry; used by overflow guards.
double max_abs_entry(const PosDef& x);

}  // namespace pdw
