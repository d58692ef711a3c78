#include "pdw/stats.hpp"

#include "pdw/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace pdw {

Functional Functional::linear_form(const Vec& v) {
    if (!(v.norm() > 0.0)) throw DomainError("linear form: vector must be nonzero");
    Functional f = of(Kind::LinearForm);
    f.v = v / v.norm();
    return f;
}

std::string Functional::name() const {
    switch (kind) {
    case Kind::Trace: return "trace";
    case Kind::LogDet: return "logdet";
    case Kind::LambdaMax: return "lambda_max";
    case Kind::LambdaMin: return "lambda_min";
    case Kind::Entry: {
        std::ostringstream s;
        s << "entry(" << i << "," << j << ")";
        return s.str();
    }
    case Kind::LinearForm: return "linear_form";
    }
    return "?";
}

double Functional::operator()(const PosDef& x) const {
    switch (kind) {
    case Kind::Trace: return pdw::trace(x);
    case Kind::LogDet: return pdw::log_det(x);
    case Kind::LambdaMax: return pdw::lambda_max(x);
    case Kind::LambdaMin: return pdw::lambda_min(x);
    case Kind::Entry:
        if (i < 0 || j < 0 || i >= x.dim() || j >= x.dim()) throw DomainError("entry functional: index out of range");
        return x(i, j);
    case Kind::LinearForm:
        if (v.size() != x.dim()) throw DomainError("linear form: dimension mismatch");
        return v.dot(x.matrix() * v);
    }
    return 0.0;
}

std::vector<Functional> standard_functionals() {
    return {Functional::trace(), Functional::log_det(), Functional::lambda_max()};
}

std::vector<double> project(const std::vector<PosDef>& xs, const Functional& f) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(f(x));
    return out;
}

double kolmogorov_survival(double lambda) {
    if (!(lambda > 0.0)) return 1.0;
    if (lambda < 1.0) {
        // Theta-function form converges fast for small arguments.
        const double c = std::sqrt(2.0 * std::numbers::pi) / lambda;
        double s = 0.0;
        for (int k = 1; k <= 50; ++k) {
            const double t = (2 * k - 1) * std::numbers::pi / lambda;
            const double term = std::exp(-t * t / 8.0);
            s += term;
            if (term < 1e-300) break;
        }
        return std::clamp(1.0 - c * s, 0.0, 1.0);
    }
    double s = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        s += (k % 2 == 1 ? 1.0 : -1.0) * term;
        if (term < 1e-300) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

namespace {

double scaled_lambda(double distance, double effective_n) {
    const double rn = std::sqrt(effective_n);
    return (rn + 0.12 + 0.11 / rn) * distance;
}

}  // namespace

double ks_p_value(double distance, double effective_n) {
    return kolmogorov_survival(scaled_lambda(distance, effective_n));
}

double ks_critical_distance(double p, double effective_n) {
    double lo = 0.0, hi = 10.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (kolmogorov_survival(mid) > p) lo = mid; else hi = mid;
    }
    const double rn = std::sqrt(effective_n);
    return hi / (rn + 0.12 + 0.11 / rn);
}

KsResult ks_two_sample(std::vector<double> xs, std::vector<double> ys) {
    if (xs.empty() || ys.empty()) throw EmptySample("two-sample KS: empty sample");
    std::sort(xs.begin(), xs.end());
    std::sort(ys.begin(), ys.end());
    const double n1 = static_cast<double>(xs.size()), n2 = static_cast<double>(ys.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < xs.size() && j < ys.size()) {
        const double v = std::min(xs[i], ys[j]);
        while (i < xs.size() && xs[i] == v) ++i;
        while (j < ys.size() && ys[j] == v) ++j;
        d = std::max(d, std::abs(i / n1 - j / n2));
    }
    KsResult r;
    r.distance = d;
    r.p_value = ks_p_value(d, n1 * n2 / (n1 + n2));
    return r;
}

KsResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf) {
    if (xs.empty()) throw EmptySample("one-sample KS: empty sample");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double f = cdf(xs[k]);
        d = std::max({d, (k + 1) / n - f, f - k / n});
    }
    KsResult r;
    r.distance = d;
    r.p_value = ks_p_value(d, n);
    return r;
}

double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw EmptySample("mean: empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) throw EmptySample("variance: need at least two values");
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return ss / static_cast<double>(xs.size() - 1);
}

double standard_error(const std::vector<double>& xs) {
    return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw DomainError("pearson: length mismatch");
    if (xs.size() < 2) throw EmptySample("pearson: need at least two pairs");
    const double mx = mean(xs), my = mean(ys);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double a = xs[k] - mx, b = ys[k] - my;
        sxy += a * b;
        sxx += a * a;
        syy += b * b;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace pdw
