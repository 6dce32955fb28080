#include "jitstar/world.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "jitstar/rng.hpp"

namespace jitstar
{

HyperRect::HyperRect(State lower, State upper) : lower_(std::move(lower)), upper_(std::move(upper))
{
    if (lower_.dim() != upper_.dim())
    {
        throw DimensionError("HyperRect: lower and upper dimension mismatch");
    }
    if (lower_.dim() == 0)
    {
        throw ConfigurationError("HyperRect: dimension must be positive");
    }
    for (std::size_t i = 0; i < lower_.dim(); ++i)
    {
        if (lower_[i] > upper_[i])
        {
            throw ConfigurationError("HyperRect: lower bound exceeds upper bound");
        }
    }
}

bool HyperRect::contains(const State &x) const
{
    if (x.dim() != dim())
    {
        throw DimensionError("HyperRect::contains: dimension mismatch");
    }
    for (std::size_t i = 0; i < dim(); ++i)
    {
        if (x[i] < lower_[i] || x[i] > upper_[i])
        {
            return false;
        }
    }
    return true;
}

double HyperRect::measure() const
{
    double m = 1.0;
    for (std::size_t i = 0; i < dim(); ++i)
    {
        m *= upper_[i] - lower_[i];
    }
    return m;
}

bool HyperRect::intersects(const HyperRect &other) const
{
    if (other.dim() != dim())
    {
        throw DimensionError("HyperRect::intersects: dimension mismatch");
    }
    for (std::size_t i = 0; i < dim(); ++i)
    {
        if (upper_[i] < other.lower_[i] || other.upper_[i] < lower_[i])
        {
            return false;
        }
    }
    return true;
}

ObstacleWorld::ObstacleWorld(HyperRect bounds, std::vector<HyperRect> obstacles, double checkResolution)
  : bounds_(std::move(bounds)), obstacles_(std::move(obstacles)), checkResolution_(checkResolution)
{
    if (!(checkResolution_ > 0.0))
    {
        throw ConfigurationError("ObstacleWorld: checkResolution must be positive");
    }
    for (const auto &obstacle : obstacles_)
    {
        if (obstacle.dim() != bounds_.dim())
        {
            throw DimensionError("ObstacleWorld: obstacle dimension mismatch");
        }
        if (!obstacle.intersects(bounds_))
        {
            throw ConfigurationError("ObstacleWorld: obstacle does not intersect the bounds");
        }
    }
}

bool ObstacleWorld::isStateValid(const State &x) const
{
    if (x.dim() != dim())
    {
        throw DimensionError("isStateValid: dimension mismatch");
    }
    if (!bounds_.contains(x))
    {
        return false;
    }
    for (const auto &obstacle : obstacles_)
    {
        if (obstacle.contains(x))
        {
            return false;
        }
    }
    return true;
}

bool ObstacleWorld::isEdgeValid(const State &a, const State &b) const
{
    if (a.dim() != dim() || b.dim() != dim())
    {
        throw DimensionError("isEdgeValid: dimension mismatch");
    }
    // Probe from the lexicographically smaller endpoint so that the probe
    // points, and therefore the result, are bit-identical under swapping.
    const State *from = &a;
    const State *to = &b;
    if (std::lexicographical_compare(b.coords().begin(), b.coords().end(), a.coords().begin(),
                                     a.coords().end()))
    {
        std::swap(from, to);
    }
    const double length = distance(*from, *to);
    const auto probes = static_cast<std::size_t>(std::ceil(length / checkResolution_)) + 1;
    if (probes == 1)
    {
        return isStateValid(*from);
    }
    for (std::size_t i = 0; i < probes; ++i)
    {
        const double t = static_cast<double>(i) / static_cast<double>(probes - 1);
        if (!isStateValid(interpolate(*from, *to, t)))
        {
            return false;
        }
    }
    return true;
}

double defaultCheckResolution(const HyperRect &bounds)
{
    return 0.01 * distance(bounds.lower(), bounds.upper());
}

namespace
{

State axisState(std::size_t n, double first, double rest)
{
    std::vector<double> coords(n, rest);
    coords[0] = first;
    return State(std::move(coords));
}

HyperRect unitCube(std::size_t n)
{
    return HyperRect(State::zeros(n), State(std::vector<double>(n, 1.0)));
}

}  // namespace

Scenario makeNarrowPassage(std::size_t n, double gapWidth, std::uint64_t seed)
{
    if (n < 2)
    {
        throw ConfigurationError("makeNarrowPassage: dimension must be at least 2");
    }
    if (!(gapWidth > 0.0) || gapWidth >= 1.0)
    {
        throw ConfigurationError("makeNarrowPassage: gapWidth must lie in (0, domain extent)");
    }
    HyperRect bounds = unitCube(n);
    const double resolution = defaultCheckResolution(bounds);
    if (gapWidth <= resolution)
    {
        throw ConfigurationError("makeNarrowPassage: gapWidth too small to admit validity probes");
    }

    // Transverse gap center per axis. Redraw until the gap misses the domain
    // centerline in at least one axis; otherwise the straight start-goal
    // segment would slip through and the passage would not constrain it.
    Rng rng(seed);
    const double half = gapWidth / 2.0;
    std::vector<double> center(n, 0.0);
    bool blocked = false;
    for (int attempt = 0; attempt < 1000 && !blocked; ++attempt)
    {
        for (std::size_t j = 1; j < n; ++j)
        {
            center[j] = rng.uniformReal(half, 1.0 - half);
            if (std::abs(center[j] - 0.5) >= half)
            {
                blocked = true;
            }
        }
    }
    if (!blocked)
    {
        throw ConfigurationError("makeNarrowPassage: could not place a gap off the centerline");
    }

    // Exact partition of wall-minus-gap into 2(n-1) boxes: for axis j the two
    // slabs outside the gap interval, with all earlier axes confined to their
    // gap intervals and all later axes spanning the full domain.
    std::vector<HyperRect> obstacles;
    for (std::size_t j = 1; j < n; ++j)
    {
        std::vector<double> lo(n, 0.0);
        std::vector<double> hi(n, 1.0);
        lo[0] = 0.45;
        hi[0] = 0.55;
        for (std::size_t k = 1; k < j; ++k)
        {
            lo[k] = center[k] - half;
            hi[k] = center[k] + half;
        }
        auto below = lo;
        auto belowHi = hi;
        belowHi[j] = center[j] - half;
        obstacles.emplace_back(State(below), State(belowHi));

        auto aboveLo = lo;
        auto above = hi;
        aboveLo[j] = center[j] + half;
        obstacles.emplace_back(State(aboveLo), State(above));
    }

    ObstacleWorld world(std::move(bounds), std::move(obstacles), resolution);
    State start = axisState(n, 0.05, 0.5);
    State goal = axisState(n, 0.95, 0.5);
    return Scenario{std::move(world), std::move(start), std::move(goal)};
}

Scenario makeRandomRectangles(std::size_t n, std::size_t count, std::uint64_t seed)
{
    if (n < 2)
    {
        throw ConfigurationError("makeRandomRectangles: dimension must be at least 2");
    }
    HyperRect bounds = unitCube(n);
    const double resolution = defaultCheckResolution(bounds);
    State start = axisState(n, 0.05, 0.5);
    State goal = axisState(n, 0.95, 0.5);

    Rng rng(seed);
    std::vector<HyperRect> obstacles;
    obstacles.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
    {
        bool placed = false;
        for (int attempt = 0; attempt < 1000 && !placed; ++attempt)
        {
            std::vector<double> side(n);
            for (std::size_t k = 0; k < n; ++k)
            {
                side[k] = rng.uniformReal(0.02, 0.15);
            }
            std::vector<double> lo(n);
            std::vector<double> hi(n);
            for (std::size_t k = 0; k < n; ++k)
            {
                lo[k] = rng.uniformReal(0.0, 1.0 - side[k]);
                hi[k] = lo[k] + side[k];
            }
            HyperRect box{State(lo), State(hi)};
            if (!box.contains(start) && !box.contains(goal))
            {
                obstacles.push_back(std::move(box));
                placed = true;
            }
        }
        if (!placed)
        {
            throw ConfigurationError("makeRandomRectangles: could not place obstacles clear of start/goal");
        }
    }

    ObstacleWorld world(std::move(bounds), std::move(obstacles), resolution);
    return Scenario{std::move(world), std::move(start), std::move(goal)};
}

}  // namespace jitstar
