#ifndef HIDS_RNG_HPP
#define HIDS_RNG_HPP

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace hids {

// All stochastic components draw randomness through this interface so that
// (a) runs are byte-reproducible under a fixed seed and (b) tests can
// substitute a scripted stream and hand-simulate an algorithm exactly.
class RandomStream {
public:
    virtual ~RandomStream() = default;

    // Uniform draw from {0, 1, ..., n-1}. n must be >= 1.
    virtual std::uint32_t below(std::uint32_t n) = 0;

    // Uniform draw from [0, 1).
    virtual double real01() = 0;
};

// Mersenne Twister backed stream. mt19937_64 output is fully specified by
// the standard, and the uniform reductions below avoid the
// implementation-defined std::uniform_*_distribution, so identical seeds
// give identical streams on every platform.
class Mt64Stream final : public RandomStream {
public:
    explicit Mt64Stream(std::uint64_t seed) : engine_(seed) {}

    std::uint32_t below(std::uint32_t n) override {
        // Lemire's unbiased multiply-shift reduction.
        std::uint64_t x = engine_();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - static_cast<std::uint64_t>(n)) % n;
            while (low < threshold) {
                x = engine_();
                m = static_cast<__uint128_t>(x) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 64);
    }

    double real01() override {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

// Derives an independent sub-seed for a named phase (init / train / lvq ...)
// so separate phases of one run never share a stream position.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag);

// Fisher-Yates shuffle of {0..n-1} driven by a RandomStream.
std::vector<std::uint32_t> shuffled_indices(std::uint32_t n, RandomStream& rng);

}  // namespace hids

#endif
