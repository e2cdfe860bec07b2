#pragma once

#include <cstdint>
#include <limits>

namespace uptail {

/// Counter-based generator: the n-th output is a pure function of
/// (seed, stream, n). Streams are cheap to create, so every Monte Carlo
/// sample gets its own stream and results do not depend on how samples are
/// distributed over workers.
class CounterRng {
public:
    using result_type = std::uint64_t;

    CounterRng(std::uint64_t seed, std::uint64_t stream);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace uptail
