#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <utility>

namespace tccm {

// Purpose tags for independent random streams. A stream is seeded with
// `seed ^ tag`, so enabling one feature never shifts another feature's draws.
enum class Stream : std::uint64_t {
    Init = 0x9e3779b97f4a7c15ULL,
    Shuffle = 0xbf58476d1ce4e5b9ULL,
    Time = 0x94d049bb133111ebULL,
    Noise = 0x2545f4914f6cdd1dULL,
    Split = 0x5851f42d4c957f2dULL,
    Contamination = 0x14057b7ef767814fULL,
    Synthetic = 0xd6e8feb86659fd93ULL,
    MonteCarlo = 0xa0761d6478bd642fULL,
};

// Seeded generator with distribution transforms written out explicitly, so the
// stream of values is identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, Stream purpose) : engine_(seed ^ static_cast<std::uint64_t>(purpose)) {}

    std::uint64_t next() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n), rejection sampling for no modulo bias.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    // Standard normal via Box–Muller; the second variate of each pair is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    // Fisher–Yates.
    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace tccm
