#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace slr {

// Deterministic random source. std::mt19937_64 output is specified by the
// standard, but the std:: distributions are not, so the distributions here
// are hand-rolled to keep results reproducible across compilers.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 bits of precision.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n). Lemire multiply-shift; bias is < n / 2^64.
    uint64_t uniform_index(uint64_t n) {
        return static_cast<uint64_t>(
            (static_cast<__uint128_t>(engine_()) * n) >> 64);
    }

    // Box-Muller. Draws two uniforms per call; the sine branch is discarded
    // so the stream position does not depend on caller history.
    double normal(double mean = 0.0, double stddev = 1.0) {
        double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * M_PI * u2);
    }

    // Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(uniform_index(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Child generator whose seed depends on this generator's seed and a key.
    // Derived from the original seed, not the stream position, so substreams
    // (per signer, per epoch, ...) do not depend on draw order.
    Rng substream(uint64_t key) const {
        return Rng(mix(seed_of(engine_), key));
    }
    Rng substream(const std::string& key) const {
        return substream(fnv1a(key));
    }

    static uint64_t fnv1a(const std::string& s) {
        uint64_t h = 0xcbf29ce484222325ull;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
        return h;
    }

private:
    // mt19937_64 does not expose its seed; keep it alongside the engine.
    struct SeededEngine {
        explicit SeededEngine(uint64_t s) : seed(s), mt(s) {}
        uint64_t operator()() { return mt(); }
        uint64_t seed;
        std::mt19937_64 mt;
    };

    static uint64_t seed_of(const SeededEngine& e) { return e.seed; }

    // splitmix64 finalizer; good avalanche for combining seed and key.
    static uint64_t mix(uint64_t a, uint64_t b) {
        uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    SeededEngine engine_;
};

}  // namespace slr
