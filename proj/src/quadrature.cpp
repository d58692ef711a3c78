#include "pdw/quadrature.hpp"

#include "pdw/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace pdw {

void QuadratureSpec::validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw DomainError("quadrature tolerances must be positive");
    if (max_subdivisions < 1) throw DomainError("quadrature budget must be at least one subdivision");
}

namespace {

constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7, 9.
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

double finite_or_zero(double v) { return std::isfinite(v) ? v : 0.0; }

}  // namespace

QuadResult gauss_kronrod21(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = finite_or_zero(f(c));
    double kron = kWgk[10] * fc;
    double gauss = 0.0;
    for (int j = 0; j < 10; ++j) {
        const double dx = h * kXgk[j];
        const double fsum = finite_or_zero(f(c - dx)) + finite_or_zero(f(c + dx));
        kron += kWgk[j] * fsum;
        if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
    }
    QuadResult r;
    r.value = kron * h;
    r.error = std::abs((kron - gauss) * h);
    r.subdivisions = 1;
    return r;
}

namespace {

QuadResult adaptive(const Integrand& f, double a, double b, const QuadratureSpec& q, int initial_pieces) {
    q.validate();
    std::priority_queue<Piece> heap;
    double total = 0.0, err = 0.0;
    const double w = (b - a) / initial_pieces;
    for (int i = 0; i < initial_pieces; ++i) {
        const double lo = a + i * w;
        const double hi = (i + 1 == initial_pieces) ? b : a + (i + 1) * w;
        auto r = gauss_kronrod21(f, lo, hi);
        heap.push({lo, hi, r.value, r.error});
        total += r.value;
        err += r.error;
    }
    int pieces = initial_pieces;
    while (err > std::max(q.abs_tol, q.rel_tol * std::abs(total))) {
        if (pieces >= q.max_subdivisions) {
            std::ostringstream msg;
            msg << "adaptive quadrature did not converge (achieved error " << err << ")";
            throw QuadratureNoConvergence(msg.str(), err);
        }
        Piece p = heap.top();
        heap.pop();
        const double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b)) {
            // Interval exhausted at machine resolution; accept it as is.
            std::ostringstream msg;
            msg << "adaptive quadrature hit machine resolution (achieved error " << err << ")";
            throw QuadratureNoConvergence(msg.str(), err);
        }
        auto l = gauss_kronrod21(f, p.a, mid);
        auto r = gauss_kronrod21(f, mid, p.b);
        heap.push({p.a, mid, l.value, l.error});
        heap.push({mid, p.b, r.value, r.error});
        total += l.value + r.value - p.value;
        err += l.error + r.error - p.error;
        ++pieces;
        if (pieces % 64 == 0) {
            // Resum to keep running totals free of cancellation drift.
            auto copy = heap;
            total = 0.0;
            err = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                err += copy.top().error;
                copy.pop();
            }
        }
    }
    QuadResult res;
    res.value = 0.0;
    res.error = 0.0;
    while (!heap.empty()) {
        res.value += heap.top().value;
        res.error += heap.top().error;
        heap.pop();
    }
    res.subdivisions = pieces;
    return res;
}

}  // namespace

QuadResult integrate_interval(const Integrand& f, double a, double b, const QuadratureSpec& q) {
    if (a == b) return {};
    if (a > b) {
        auto r = integrate_interval(f, b, a, q);
        r.value = -r.value;
        return r;
    }
    return adaptive(f, a, b, q, 1);
}

QuadResult integrate_upper_tail(const Integrand& f, double a, const QuadratureSpec& q, double scale) {
    auto g = [&](double u) {
        const double om = 1.0 - u;
        if (om <= 0.0) return 0.0;
        return f(a + scale * u / om) * scale / (om * om);
    };
    return adaptive(g, 0.0, 1.0, q, 4);
}

QuadResult integrate_lower_tail(const Integrand& f, double b, const QuadratureSpec& q, double scale) {
    auto g = [&](double u) {
        const double om = 1.0 - u;
        if (om <= 0.0) return 0.0;
        return f(b - scale * u / om) * scale / (om * om);
    };
    return adaptive(g, 0.0, 1.0, q, 4);
}

QuadResult integrate_line(const Integrand& f, const QuadratureSpec& q, double center, double scale) {
    auto g = [&](double u) {
        const double om = 1.0 - u * u;
        if (om <= 0.0) return 0.0;
        const double t = center + scale * u / om;
        return f(t) * scale * (1.0 + u * u) / (om * om);
    };
    return adaptive(g, -1.0, 1.0, q, 8);
}

PeakInfo locate_peak(const Integrand& log_f, double drop) {
    constexpr double lo = -60.0, hi = 60.0, step = 0.5;
    const int n = static_cast<int>((hi - lo) / step) + 1;
    std::vector<double> vals(n);
    double best = -std::numeric_limits<double>::infinity();
    int arg = -1;
    for (int i = 0; i < n; ++i) {
        const double v = log_f(lo + i * step);
        vals[i] = std::isnan(v) ? -std::numeric_limits<double>::infinity() : v;
        if (vals[i] > best) {
            best = vals[i];
            arg = i;
        }
    }
    if (arg < 0 || !std::isfinite(best)) throw DomainError("locate_peak: integrand vanishes on the scan window");
    int left = arg, right = arg;
    for (int i = 0; i < n; ++i) {
        if (vals[i] > best - drop) {
            left = std::min(left, i);
            right = std::max(right, i);
        }
    }
    PeakInfo p;
    p.center = lo + arg * step;
    p.log_max = best;
    p.lo = lo + left * step;
    p.hi = lo + right * step;
    p.scale = std::clamp(0.25 * (p.hi - p.lo), 0.5, 20.0);
    return p;
}

QuadResult integrate_exp_line(const Integrand& log_f, const QuadratureSpec& q) {
    const PeakInfo p = locate_peak(log_f);
    // Factor out the peak so the rule works on O(1) values.
    auto f = [&](double t) { return std::exp(log_f(t) - p.log_max); };
    QuadratureSpec scaled = q;
    scaled.abs_tol = q.abs_tol * std::exp(-p.log_max);
    if (!(scaled.abs_tol > 0.0) || !std::isfinite(scaled.abs_tol)) scaled.abs_tol = q.abs_tol;
    auto r = integrate_line(f, scaled, p.center, p.scale);
    const double m = std::exp(p.log_max);
    r.value *= m;
    r.error *= m;
    return r;
}

TabulatedCdf::TabulatedCdf(const Integrand& density_t, double t_lo, double t_hi, int cells,
                           const QuadratureSpec& tails)
    : t_lo_(t_lo), t_hi_(t_hi), h_((t_hi - t_lo) / cells) {
    if (!(t_hi > t_lo) || cells < 1) throw DomainError("TabulatedCdf: empty range");
    cum_.resize(cells + 1);
    dens_.resize(cells + 1);
    lower_tail_ = integrate_lower_tail(density_t, t_lo, tails).value;
    double acc = lower_tail_;
    cum_[0] = acc;
    dens_[0] = finite_or_zero(density_t(t_lo));
    for (int i = 0; i < cells; ++i) {
        const double a = t_lo + i * h_;
        const double b = (i + 1 == cells) ? t_hi : t_lo + (i + 1) * h_;
        acc += gauss_kronrod21(density_t, a, b).value;
        cum_[i + 1] = acc;
        dens_[i + 1] = finite_or_zero(density_t(b));
    }
    mass_ = acc + integrate_upper_tail(density_t, t_hi, tails).value;
}

TabulatedCdf TabulatedCdf::automatic(const Integrand& density_t, int cells, const QuadratureSpec& tails) {
    auto log_f = [&](double t) { return std::log(density_t(t)); };
    const PeakInfo p = locate_peak(log_f);
    return TabulatedCdf(density_t, p.lo - 1.0, p.hi + 1.0, cells, tails);
}

double TabulatedCdf::at_log(double t) const {
    // Outside the table the residual tail mass is below the scan threshold.
    if (t <= t_lo_) return lower_tail_;
    if (t >= t_hi_) return t == t_hi_ ? cum_.back() : mass_;
    const double pos = (t - t_lo_) / h_;
    std::size_t i = static_cast<std::size_t>(pos);
    if (i >= cum_.size() - 1) i = cum_.size() - 2;
    const double s = pos - static_cast<double>(i);
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    return h00 * cum_[i] + h10 * h_ * dens_[i] + h01 * cum_[i + 1] + h11 * h_ * dens_[i + 1];
}

double TabulatedCdf::operator()(double x) const {
    if (!(x > 0.0)) return 0.0;
    return at_log(std::log(x));
}

}  // namespace pdw
