#include "jitstar/rng.hpp"

#include <cmath>

namespace jitstar
{

namespace
{
std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}
}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed))
{
}

double Rng::uniform01()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniformReal(double lo, double hi)
{
    return lo + (hi - lo) * uniform01();
}

int Rng::uniformInt(int lo, int hi)
{
    // Rejection-free modulo bias is negligible for the small ranges used here,
    // but stay exact anyway with a rejection loop.
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t draw;
    do
    {
        draw = engine_();
    } while (draw >= limit);
    return lo + static_cast<int>(draw % span);
}

double Rng::gaussian01()
{
    if (hasSpare_)
    {
        hasSpare_ = false;
        return spare_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0)
    {
        u1 = uniform01();
    }
    const double u2 = uniform01();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double twoPi = 6.283185307179586476925286766559;
    spare_ = mag * std::sin(twoPi * u2);
    hasSpare_ = true;
    return mag * std::cos(twoPi * u2);
}

double Rng::gaussian(double mean, double stddev)
{
    return mean + stddev * gaussian01();
}

Rng Rng::fork(std::uint64_t streamId) const
{
    return Rng(mix(seed_, streamId));
}

std::uint64_t Rng::mix(std::uint64_t a, std::uint64_t b)
{
    return splitmix64(a ^ splitmix64(b + 0x9e3779b97f4a7c15ull));
}

}  // namespace jitstar
