#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

namespace acplan {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Stateless draw keyed on (seed, counter): the same key always yields the
/// same value, so draws can be replayed or computed out of order.
constexpr std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t counter) noexcept {
    return mix64(mix64(seed) ^ mix64(counter + 0x632be59bd9b4e019ull));
}

/// Uniform double in [0, 1) from the top 53 bits of counter_draw.
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t counter) noexcept {
    return static_cast<double>(counter_draw(seed, counter) >> 11) * 0x1.0p-53;
}

/// Counter-based generator. Satisfies UniformRandomBitGenerator; results are
/// identical on every platform because no std distribution is involved.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : seed_(mix64(seed) ^ mix64(stream ^ 0xd1b54a32d192ed03ull)) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept { return counter_draw(seed_, counter_++); }

    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n); n must be positive.
    std::size_t below(std::size_t n) noexcept {
        auto wide = static_cast<unsigned __int128>((*this)()) * n;
        return static_cast<std::size_t>(wide >> 64);
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
};

}  // namespace acplan
