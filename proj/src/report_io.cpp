#include "pdw/report_io.hpp"

#include <cmath>
#include <iomanip>

namespace pdw {

const char* version() { return PDW_VERSION; }

namespace {

const char* kind_name(SubTest::Kind k) {
    switch (k) {
    case SubTest::Kind::PValue: return "p_value_above";
    case SubTest::Kind::UpperBound: return "at_most";
    case SubTest::Kind::LowerBound: return "above";
    }
    return "?";
}

}  // namespace

Json to_json(const SubTest& t) {
    Json j;
    j["name"] = t.name;
    j["rule"] = kind_name(t.kind);
    j["value"] = t.value;
    j["limit"] = t.limit;
    if (t.distance >= 0.0) {
        j["ks_distance"] = t.distance;
        j["ks_critical"] = t.critical;
    }
    j["gating"] = t.gating;
    j["passed"] = t.passed;
    return j;
}

Json to_json(const TestReport& r) {
    Json j;
    j["name"] = r.name;
    j["statistic"] = r.statistic;
    j["threshold"] = r.threshold;
    j["n1"] = r.n1;
    j["n2"] = r.n2;
    j["passed"] = r.passed;
    j["seed"] = r.seed;
    j["details"] = r.details;
    Json subs = Json::array();
    for (const auto& t : r.subtests) subs.push_back(to_json(t));
    j["subtests"] = subs;
    return j;
}

Json to_json(const ModelParams& p) {
    Json j;
    j["d"] = p.d;
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    return j;
}

Json to_json(const LyapunovReport& r) {
    Json j;
    j["law"] = to_string(r.law);
    j["params"] = to_json(r.params);
    j["method"] = r.method;
    j["mu_hat"] = r.mu_hat;
    j["std_err"] = r.std_err;
    j["mu_closed"] = r.mu_closed;
    j["n_steps"] = r.n_steps;
    j["n_replicas"] = r.n_replicas;
    j["seed"] = r.seed;
    if (r.method != "cholesky") j["sum_rule_gap"] = r.sum_rule_gap;
    return j;
}

Json matrix_to_json(const Mat& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(row);
    }
    return rows;
}

void write_csv_header(std::ostream& os, const ParamEcho& echo) {
    for (const auto& [k, v] : echo) os << "# " << k << "=" << v << "\n";
}

Json header_json(const ParamEcho& echo) {
    Json params;
    for (const auto& [k, v] : echo) params[k] = v;
    return params;
}

void write_trace_csv(std::ostream& os, const WalkTrace& tr) {
    os << "step,functional_name,value\n";
    os << std::setprecision(17);
    auto emit = [&](std::size_t step, const char* name, double v) {
        os << step << "," << name << "," << v << "\n";
    };
    for (std::size_t k = 0; k < tr.r.size(); ++k) {
        emit(k, "trace_R", trace(tr.r[k]));
        emit(k, "logdet_R", log_det(tr.r[k]));
        emit(k, "trace_A", trace(tr.a[k]));
        emit(k, "logdet_A", log_det(tr.a[k]));
        if (k >= 1) {
            emit(k, "trace_S", trace(tr.s[k - 1]));
            emit(k, "logdet_S", log_det(tr.s[k - 1]));
            emit(k, "lambda_max_S", lambda_max(tr.s[k - 1]));
        }
    }
}

Json trace_to_json(const WalkTrace& tr) {
    Json j;
    Json r = Json::array(), a = Json::array(), s = Json::array();
    for (const auto& x : tr.r) r.push_back(matrix_to_json(x.matrix()));
    for (const auto& x : tr.a) a.push_back(matrix_to_json(x.matrix()));
    for (const auto& x : tr.s) s.push_back(matrix_to_json(x.matrix()));
    j["R"] = r;
    j["A"] = a;
    j["S"] = s;
    return j;
}

}  // namespace pdw
