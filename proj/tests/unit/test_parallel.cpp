#include "pdw/checks.hpp"
#include "pdw/lyapunov.hpp"
#include "pdw/matdist.hpp"
#include "pdw/parallel.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace pdw;

namespace {

std::vector<Mat> batch(const Exec& exec) {
    return parallel_generate<Mat>(
        1000, 91, stream_group(3),
        [](std::size_t, RngStream& rng) { return sample_beta2({3, 2.5, 4.0}, rng).matrix(); }, exec);
}

bool identical(const std::vector<Mat>& a, const std::vector<Mat>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i].array() == b[i].array()).all()) return false;
    return true;
}

struct ThreadGuard {
    int saved = thread_count();
    ~ThreadGuard() { set_thread_count(saved); }
};

}  // namespace

TEST_SUITE("parallel") {

TEST_CASE("serial and OpenMP batches are bit-identical") {
    ThreadGuard g;
    const auto serial = batch({ExecPolicy::Serial, 256});
    for (int threads : {1, 2, 4}) {
        set_thread_count(threads);
        CHECK(identical(serial, batch({ExecPolicy::OpenMP, 256})));
    }
}

TEST_CASE("chunk size is part of the stream layout") {
    const auto a = batch({ExecPolicy::Serial, 256});
    const auto b = batch({ExecPolicy::Serial, 100});
    CHECK_FALSE(identical(a, b));
    // The first chunk shares stream 0 in both layouts.
    CHECK((a[0].array() == b[0].array()).all());
}

TEST_CASE("exceptions propagate out of parallel regions") {
    auto fail = [](std::size_t i, RngStream&) -> double {
        if (i == 517) throw std::runtime_error("boom");
        return 0.0;
    };
    CHECK_THROWS_AS(parallel_generate<double>(1000, 1, 0, fail), std::runtime_error);
    CHECK_THROWS_AS(parallel_map<double>(100,
                                         [](std::size_t i) -> double {
                                             if (i == 50) throw std::runtime_error("boom");
                                             return 1.0;
                                         }),
                    std::runtime_error);
    const auto sq = parallel_map<double>(10, [](std::size_t i) { return static_cast<double>(i * i); });
    CHECK(sq[9] == 81.0);
}

TEST_CASE("reports do not depend on the thread count") {
    ThreadGuard g;
    set_thread_count(1);
    const auto a = check_construction_equivalence({2, 2.5, 6.0}, 3, 2000, 92, 200);
    const auto la = empirical_mu_eigen(Law::BetaII, {2, 4.0, 8.0}, SplitKind::SquareRoot, 200, 20, 93);
    set_thread_count(3);
    const auto b = check_construction_equivalence({2, 2.5, 6.0}, 3, 2000, 92, 200);
    const auto lb = empirical_mu_eigen(Law::BetaII, {2, 4.0, 8.0}, SplitKind::SquareRoot, 200, 20, 93);
    CHECK(a.statistic == b.statistic);
    CHECK(la.mu_hat == lb.mu_hat);
    CHECK(la.std_err == lb.std_err);
}

}  // TEST_SUITE
