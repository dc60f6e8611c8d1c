#pragma once

#include "l1l2/types.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <vector>

namespace l1l2 {

/// Independent random streams derived from one trial seed. Matrix, signal and noise
/// never share a generator, so changing how one is drawn leaves the others intact.
enum class Stream : std::uint64_t {
    kMatrix = 0x6d61747269780000ULL,
    kSignal = 0x7369676e616c0000ULL,
    kNoise = 0x6e6f697365000000ULL,
    kStart = 0x7374617274000000ULL,
};

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag)
{
    return splitmix64(base ^ splitmix64(tag));
}

inline std::uint64_t derive_seed(std::uint64_t base, Stream s)
{
    return derive_seed(base, static_cast<std::uint64_t>(s));
}

/// Seed of one campaign trial: hash(master_seed, sweep_value, trial).
inline std::uint64_t trial_seed(std::uint64_t master, double sweep_value, std::uint64_t trial)
{
    return derive_seed(derive_seed(master, std::bit_cast<std::uint64_t>(sweep_value)), trial);
}

/// Portable seeded generator. Boost distributions are used because their output is
/// specified by the library, not by the standard library vendor.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }

    double uniform01() { return uniform_(engine_); }

    Index uniform_index(Index lo, Index hi)
    {
        return boost::random::uniform_int_distribution<Index>(lo, hi)(engine_);
    }

    /// k distinct indices from [0, n), sorted ascending.
    std::vector<Index> sample_without_replacement(Index n, Index k)
    {
        std::vector<Index> perm(static_cast<std::size_t>(n));
        std::iota(perm.begin(), perm.end(), Index{0});
        for (Index i = 0; i < k; ++i)
            std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(uniform_index(i, n - 1))]);
        perm.resize(static_cast<std::size_t>(k));
        std::sort(perm.begin(), perm.end());
        return perm;
    }

    template <typename Scalar>
    Vec<Scalar> normal_vector(Index n)
    {
        Vec<Scalar> v(n);
        for (Index i = 0; i < n; ++i)
            v(i) = static_cast<Scalar>(normal());
        return v;
    }

private:
    boost::random::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_;
    boost::random::uniform_01<double> uniform_;
};

}  // namespace l1l2
