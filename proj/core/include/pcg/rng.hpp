#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <utility>

namespace pcg {

// Counter-based, splittable generator. Every draw is a pure function of
// (key, counter), so a stream can be re-derived anywhere from the run seed:
// Rng(seed).split("train").split(epoch) always yields the same sequence.
// Satisfies UniformRandomBitGenerator, but the distribution helpers below
// are used instead of <random> distributions, whose output is
// implementation-defined.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept;

    Rng split(std::uint64_t stream) const noexcept;
    Rng split(std::string_view tag) const noexcept;

    // [0, 1) with 53 random bits.
    double uniform() noexcept;
    double uniform(double lo, double hi) noexcept;
    // Uniform integer in [0, n); n must be > 0.
    std::uint64_t below(std::uint64_t n) noexcept;
    double normal() noexcept;
    bool bernoulli(double p) noexcept { return uniform() < p; }

    template <typename T>
    void shuffle(std::span<T> items) noexcept {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    std::uint64_t key() const noexcept { return key_; }

private:
    Rng(std::uint64_t key, int) noexcept : key_(key) {}

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace pcg
