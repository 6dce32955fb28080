#pragma once

#include <cstdint>
#include <random>

namespace jitstar
{

/** \brief Seeded deterministic random number generator.

    All randomized components draw through this class so that a run is fully
    reproducible from its 64-bit seed. Distinct logical streams (for example
    one per planner in a paired benchmark trial) are derived with fork(),
    which mixes the parent seed with a stream id instead of sharing state. */
class Rng
{
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t seed() const
    {
        return seed_;
    }

    /** \brief Uniform double in [0, 1) with 53 random bits. */
    double uniform01();

    /** \brief Uniform double in [lo, hi). */
    double uniformReal(double lo, double hi);

    /** \brief Uniform integer in the closed range [lo, hi]. */
    int uniformInt(int lo, int hi);

    /** \brief Standard normal via Box-Muller. */
    double gaussian01();

    double gaussian(double mean, double stddev);

    /** \brief Derive an independent generator for the given stream id. */
    Rng fork(std::uint64_t streamId) const;

    /** \brief Stateless seed mixer (splitmix64 finalizer). */
    static std::uint64_t mix(std::uint64_t a, std::uint64_t b);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool hasSpare_{false};
    double spare_{0.0};
};

}  // namespace jitstar
