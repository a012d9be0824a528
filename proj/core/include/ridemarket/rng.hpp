#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ridemarket {

/// Small, fully portable PRNG (splitmix64). Every stochastic phase of the
/// simulator draws from an engine of this type so that results are identical
/// across platforms, standard libraries, and thread counts.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Lemire's multiply-shift with rejection,
    /// unbiased and implementation-independent. n must be > 0.
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n == 0)
            throw std::invalid_argument("uniform_int needs a nonempty range");
        std::uint64_t x = next();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                x = next();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    std::uint64_t state_;
};

/// Fisher-Yates shuffle driven by SplitMix64::uniform_int. std::shuffle is
/// avoided because its draw pattern is implementation-defined.
template <typename T>
void shuffle(std::vector<T>& v, SplitMix64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng.uniform_int(i));
        std::swap(v[i - 1], v[j]);
    }
}

/// What a substream is consumed for. Part of the stream identity.
enum class StreamPurpose : std::uint64_t {
    od_setup = 1,      // traveler origin/destination draw, once at setup
    driver_setup = 2,  // initial driver positions, once at setup
    demand = 3,        // request times, per day
    choice = 4,        // participation sampling, per day per population
    wom = 5,           // word-of-mouth pairing, per day per population
    marketing = 6,     // awareness reach draws, per day per population
};

/// Derivation of named random substreams from one master seed.
///
/// The engine for a given (purpose, day, sub) triple is a pure function of
/// those values and the master seed — not of how many draws happened
/// elsewhere. Pricing-game rollouts therefore consume exactly the streams the
/// committed real advance will consume (common random numbers), and parallel
/// rollouts cannot perturb each other.
class RngPlan {
public:
    RngPlan() : master_seed_(0) {}
    explicit RngPlan(std::uint64_t master_seed) : master_seed_(master_seed) {}

    std::uint64_t master_seed() const { return master_seed_; }

    /// `sub` distinguishes parallel uses of one purpose on one day
    /// (population index, platform index).
    SplitMix64 stream(StreamPurpose purpose, std::int64_t day = 0,
                      std::uint64_t sub = 0) const {
        std::uint64_t h = master_seed_;
        h = mix(h ^ (0x632BE59BD9B4E019ULL * (static_cast<std::uint64_t>(purpose) + 1)));
        h = mix(h ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(day) + 1)));
        h = mix(h ^ (0xD1B54A32D192ED03ULL * (sub + 1)));
        return SplitMix64(h);
    }

    bool operator==(const RngPlan&) const = default;

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t master_seed_;
};

} // namespace ridemarket
