#include "pdw/lyapunov.hpp"

#include "pdw/error.hpp"
#include "pdw/matdist.hpp"
#include "pdw/parallel.hpp"

#include <cmath>
#include <numeric>

namespace pdw {

std::vector<double> closed_form_mu(Law law, const ModelParams& p) {
    const int d = p.d;
    std::vector<double> mu(d);
    for (int k = 1; k <= d; ++k) {
        switch (law) {
        case Law::Wishart:
            require_shape(d, p.alpha, "alpha");
            mu[k - 1] = digamma(p.alpha - 0.5 * (k - 1));
            break;
        case Law::InvWishart:
            require_shape(d, p.beta, "beta");
            mu[k - 1] = -digamma(p.beta - 0.5 * (d - k));
            break;
        case Law::BetaII:
            require_sampling(p);
            mu[k - 1] = digamma(p.alpha - 0.5 * (k - 1)) - digamma(p.beta - 0.5 * (d - k));
            break;
        case Law::BetaI: throw DomainError("closed-form Lyapunov exponents cover wishart, invwishart and beta2 only");
        }
    }
    return mu;
}

namespace {

void require_runs(int n_steps, int n_replicas) {
    if (n_steps < 1) throw DomainError("lyapunov: n_steps must be at least 1");
    if (n_replicas < 1) throw DomainError("lyapunov: n_replicas must be at least 1");
}

// Kahan-Babuska summation.
struct CompensatedSum {
    double sum = 0.0, c = 0.0;
    void add(double v) {
        const double t = sum + v;
        c += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + c; }
};

struct ReplicaOut {
    std::vector<double> mu;
    std::vector<double> step_var;  // per-step variance (Cholesky method)
    double sum_rule_gap = 0.0;
};

void summarize(LyapunovReport& rep, const std::vector<ReplicaOut>& reps) {
    const int d = rep.params.d;
    const double r = static_cast<double>(reps.size());
    rep.mu_hat.assign(d, 0.0);
    rep.std_err.assign(d, 0.0);
    for (int k = 0; k < d; ++k) {
        CompensatedSum s;
        for (const auto& x : reps) s.add(x.mu[k]);
        const double mean = s.value() / r;
        rep.mu_hat[k] = mean;
        if (reps.size() > 1) {
            double ss = 0.0;
            for (const auto& x : reps) ss += (x.mu[k] - mean) * (x.mu[k] - mean);
            rep.std_err[k] = std::sqrt(ss / (r - 1.0) / r);
        } else if (!reps.front().step_var.empty()) {
            rep.std_err[k] = std::sqrt(reps.front().step_var[k] / rep.n_steps);
        }
    }
    for (const auto& x : reps) rep.sum_rule_gap = std::max(rep.sum_rule_gap, x.sum_rule_gap);
}

Exec per_replica() {
    Exec e = default_exec();
    e.chunk = 1;
    return e;
}

std::vector<std::vector<int>> subsets(int d, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(k);
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[i] == d - k + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

double spectral_norm(const Mat& m) {
    if (m.size() == 1) return std::abs(m(0, 0));
    Eigen::SelfAdjointEigenSolver<Mat> es(m.transpose() * m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw EigenFailure("lyapunov: eigensolver failed during rescaling");
    return std::sqrt(es.eigenvalues().maxCoeff());
}

}  // namespace

Mat compound_matrix(const Mat& a, int k) {
    const int d = static_cast<int>(a.rows());
    if (k < 1 || k > d || a.cols() != d) throw DomainError("compound_matrix: order out of range");
    if (k == 1) return a;
    const auto sets = subsets(d, k);
    const int m = static_cast<int>(sets.size());
    Mat c(m, m);
    Mat sub(k, k);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            for (int p = 0; p < k; ++p)
                for (int q = 0; q < k; ++q) sub(p, q) = a(sets[i][p], sets[j][q]);
            c(i, j) = k == 2 ? sub(0, 0) * sub(1, 1) - sub(0, 1) * sub(1, 0) : sub.determinant();
        }
    }
    return c;
}

LyapunovReport empirical_mu_cholesky(Law law, const ModelParams& p, int n_steps, int n_replicas,
                                     std::uint64_t seed) {
    require_runs(n_steps, n_replicas);
    LyapunovReport rep;
    rep.law = law;
    rep.params = p;
    rep.method = "cholesky";
    rep.mu_closed = closed_form_mu(law, p);
    rep.n_steps = n_steps;
    rep.n_replicas = n_replicas;
    rep.seed = seed;
    const int d = p.d;
    auto reps = parallel_generate<ReplicaOut>(
        n_replicas, seed, stream_group(1),
        [&](std::size_t, RngStream& rng) {
            ReplicaOut out;
            std::vector<CompensatedSum> sum(d);
            std::vector<double> sq(d, 0.0);
            for (int t = 0; t < n_steps; ++t) {
                const UpperTri u = cholesky(sample_law(law, p, rng));
                for (int k = 0; k < d; ++k) {
                    const double v = 2.0 * std::log(u(k, k));
                    sum[k].add(v);
                    sq[k] += v * v;
                }
            }
            out.mu.resize(d);
            out.step_var.resize(d);
            for (int k = 0; k < d; ++k) {
                out.mu[k] = sum[k].value() / n_steps;
                out.step_var[k] =
                    n_steps > 1 ? std::max(0.0, (sq[k] - n_steps * out.mu[k] * out.mu[k]) / (n_steps - 1)) : 0.0;
            }
            return out;
        },
        per_replica());
    summarize(rep, reps);
    return rep;
}

LyapunovReport empirical_mu_eigen(Law law, const ModelParams& p, SplitKind kind, int n_steps, int n_replicas,
                                  std::uint64_t seed) {
    require_runs(n_steps, n_replicas);
    if (n_steps < 8) throw DomainError("lyapunov: the eigenvalue method needs at least 8 steps");
    LyapunovReport rep;
    rep.law = law;
    rep.params = p;
    rep.method = std::string("eigen-") + to_string(kind);
    rep.mu_closed = closed_form_mu(law, p);
    rep.n_steps = n_steps;
    rep.n_replicas = n_replicas;
    rep.seed = seed;
    const int d = p.d;
    const int start = n_steps / 8;
    const int span = n_steps - start;
    auto reps = parallel_generate<ReplicaOut>(
        n_replicas, seed, stream_group(2),
        [&](std::size_t, RngStream& rng) {
            // prods[k-1] holds a rescaled C_k(G(t)); logs[k-1] the removed scale.
            std::vector<Mat> prods;
            for (int k = 1; k <= d; ++k) prods.push_back(compound_matrix(Mat::Identity(d, d), k));
            std::vector<CompensatedSum> logs(d);
            std::vector<double> at_start(d, 0.0);
            CompensatedSum logdet, logdet_start;
            auto top_log = [&](int k) { return logs[k].value() + std::log(spectral_norm(prods[k])); };
            for (int t = 1; t <= n_steps; ++t) {
                const PosDef x = sample_law(law, p, rng);
                const Mat w = split_factor(kind, x);
                for (int k = 0; k < d; ++k) prods[k] = compound_matrix(w, k + 1) * prods[k];
                double ld = 0.0;
                for (int k = 0; k < d; ++k) ld += 2.0 * std::log(x.chol()(k, k));
                logdet.add(ld);
                if (t % 16 == 0) {
                    for (int k = 0; k < d; ++k) {
                        const double nrm = spectral_norm(prods[k]);
                        if (!(nrm > 0.0) || !std::isfinite(nrm)) throw StepOverflow("lyapunov: rescaling failed");
                        prods[k] /= nrm;
                        logs[k].add(std::log(nrm));
                    }
                }
                if (t == start) {
                    for (int k = 0; k < d; ++k) at_start[k] = top_log(k);
                    logdet_start = logdet;
                }
            }
            ReplicaOut out;
            out.mu.resize(d);
            // Sum of the top k log eigenvalues of R = G^T G is 2 log sigma_1(C_k(G)).
            double prev = 0.0, total = 0.0;
            for (int k = 0; k < d; ++k) {
                const double cum = 2.0 * (top_log(k) - at_start[k]) / span;
                out.mu[k] = cum - prev;
                prev = cum;
                total += out.mu[k];
            }
            const double rate = (logdet.value() - logdet_start.value()) / span;
            out.sum_rule_gap = std::abs(total - rate);
            return out;
        },
        per_replica());
    summarize(rep, reps);
    return rep;
}

}  // namespace pdw
