#pragma once

// Adaptive Gauss-Kronrod quadrature on finite, semi-infinite and doubly
// infinite ranges, plus a tabulated CDF built from a density on the log axis.

#include <functional>
#include <vector>

namespace pdw {

struct QuadratureSpec {
    enum class Transform { LogSubstitution };

    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    int max_subdivisions = 2000;
    Transform transform = Transform::LogSubstitution;

    // Throws DomainError on nonpositive tolerances or budget.
    void validate() const;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int subdivisions = 0;
};

using Integrand = std::function<double(double)>;

// Fixed 21-point Kronrod rule with embedded 10-point Gauss error estimate.
QuadResult gauss_kronrod21(const Integrand& f, double a, double b);

QuadResult integrate_interval(const Integrand& f, double a, double b, const QuadratureSpec& q);

// Integral over [a, inf) using t = a + scale * u / (1 - u).
QuadResult integrate_upper_tail(const Integrand& f, double a, const QuadratureSpec& q, double scale = 1.0);

// Integral over (-inf, b] using t = b - scale * u / (1 - u).
QuadResult integrate_lower_tail(const Integrand& f, double b, const QuadratureSpec& q, double scale = 1.0);

// Integral over the whole real line using t = center + scale * u / (1 - u^2).
QuadResult integrate_line(const Integrand& f, const QuadratureSpec& q, double center, double scale);

// Integral of exp(log_f(t)) over the real line. Center and scale of the
// mapping are located by a coarse scan of log_f on [-60, 60].
QuadResult integrate_exp_line(const Integrand& log_f, const QuadratureSpec& q);

struct PeakInfo {
    double center = 0.0;
    double scale = 1.0;
    double log_max = 0.0;
    double lo = 0.0;  // leftmost scan point within the significant window
    double hi = 0.0;  // rightmost scan point within the significant window
};

// Scans log_f on [-60, 60]; the window keeps points with log_f > max - drop.
PeakInfo locate_peak(const Integrand& log_f, double drop = 70.0);

// Cumulative distribution of a law on (0, inf) given by its density with
// respect to dt, t = log x. Cells are integrated with a 21-point Kronrod rule
// and interpolated by cubic Hermite splines whose slopes are the density
// itself. The total mass is reported and not renormalised.
class TabulatedCdf {
public:
    TabulatedCdf(const Integrand& density_t, double t_lo, double t_hi, int cells, const QuadratureSpec& tails);

    // Range chosen by locate_peak applied to log(density_t).
    static TabulatedCdf automatic(const Integrand& density_t, int cells = 1500, const QuadratureSpec& tails = {});

    // P(X <= x) for x > 0; 0 for x <= 0.
    double operator()(double x) const;
    double at_log(double t) const;
    double mass() const { return mass_; }
    double t_lo() const { return t_lo_; }
    double t_hi() const { return t_hi_; }

private:
    double t_lo_, t_hi_, h_;
    std::vector<double> cum_;   // cumulative mass at nodes
    std::vector<double> dens_;  // density at nodes
    double lower_tail_ = 0.0;
    double mass_ = 0.0;
};

}  // namespace pdw
