#include "pdw/rng.hpp"

#include "pdw/error.hpp"

namespace pdw {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), eng_(make_engine(seed, stream_id)) {}

double RngStream::uniform() {
    // 53 random bits, shifted off zero.
    const std::uint64_t bits = eng_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RngStream::normal(double mean, double sd) { return mean + sd * normal_(eng_); }

double RngStream::gamma(double shape) {
    if (!(shape > 0.0)) throw DomainError("gamma variate: shape must be positive");
    std::gamma_distribution<double> g(shape, 1.0);
    return g(eng_);
}

}  // namespace pdw
