#pragma once

#include <cstdint>
#include <random>

namespace soppp {

// Seedable random stream. Every sampling operation takes one of these
// explicitly, so runs are bit-reproducible. split(i) derives an
// independent child stream; children with distinct indices never share
// state with each other or with the parent.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix(seed)) {}

    Rng split(std::uint64_t index) const {
        return Rng(splitmix(seed_ ^ (0x9e3779b97f4a7c15ULL * (index + 1))));
    }

    // uniform in [0,1)
    double uniform() {
        return std::generate_canonical<double, 53>(gen_);
    }

    std::uint64_t next_u64() { return gen_(); }

    // uniform integer in [0, bound)
    std::uint64_t next_below(std::uint64_t bound) {
        std::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
        return dist(gen_);
    }

    std::mt19937_64& engine() { return gen_; }

private:
    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

} // namespace soppp
