#pragma once

#include <cstdint>
#include <random>

namespace selprior {

// SplitMix64 finaliser; used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// A deterministic random stream.  Streams for distinct (seed, index) pairs
// are independent, so parallel replications keyed by replication index
// give results that do not depend on scheduling.  Normal draws use the
// inverse-CDF map, which keeps sequences identical across platforms.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : gen_(splitmix64(seed)) {}
    RngStream(std::uint64_t seed, std::uint64_t index)
        : gen_(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x51ed2701ULL))) {}

    // uniform on the open interval (0, 1)
    double uniform() {
        return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }
    double exponential(double rate);
    double inverse_gaussian(double mean, double shape);
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::mt19937_64 gen_;
};

} // namespace selprior
