#pragma once

#include <cstdint>
#include <random>

namespace pdw {

// Reproducible random stream keyed by (seed, stream_id). Distinct keys give
// statistically independent sequences; the same key reproduces bit-identical
// output on the same standard library.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    // Uniform on (0, 1).
    double uniform();
    double normal(double mean, double sd);
    // Gamma(shape) with unit scale.
    double gamma(double shape);

    std::mt19937_64& engine() { return eng_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 eng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace pdw
