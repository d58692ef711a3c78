#pragma once

// Scalar projections of PosDef samples and the classical tests applied to
// them.

#include "pdw/matcore.hpp"

#include <functional>
#include <string>
#include <vector>

namespace pdw {

struct Functional {
    enum class Kind { Trace, LogDet, LambdaMax, LambdaMin, Entry, LinearForm };

    Kind kind = Kind::Trace;
    int i = 0;
    int j = 0;
    Vec v;  // unit vector for LinearForm

    static Functional of(Kind k, int i = 0, int j = 0) {
        Functional f;
        f.kind = k;
        f.i = i;
        f.j = j;
        return f;
    }
    static Functional trace() { return of(Kind::Trace); }
    static Functional log_det() { return of(Kind::LogDet); }
    static Functional lambda_max() { return of(Kind::LambdaMax); }
    static Functional lambda_min() { return of(Kind::LambdaMin); }
    static Functional entry(int i, int j) { return of(Kind::Entry, i, j); }
    // Normalises v.
    static Functional linear_form(const Vec& v);

    std::string name() const;
    // Throws DomainError when indices or v do not fit x.
    double operator()(const PosDef& x) const;
};

// Trace, LogDet, LambdaMax.
std::vector<Functional> standard_functionals();

std::vector<double> project(const std::vector<PosDef>& xs, const Functional& f);

struct KsResult {
    double distance = 0.0;
    double p_value = 1.0;
};

// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

// Effective-size-corrected asymptotic p-value of a KS distance.
double ks_p_value(double distance, double effective_n);

// Smallest distance whose p-value is at most p for the given effective size.
double ks_critical_distance(double p, double effective_n);

// Throw EmptySample on empty input.
KsResult ks_two_sample(std::vector<double> xs, std::vector<double> ys);
KsResult ks_one_sample(std::vector<double> xs, const std::function<double(double)>& cdf);

double mean(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs);
double standard_error(const std::vector<double>& xs);
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace pdw
