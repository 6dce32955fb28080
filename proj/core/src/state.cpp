#include "jitstar/state.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <utility>

namespace jitstar
{

namespace
{
void checkFinite(const std::vector<double> &coords)
{
    for (double c : coords)
    {
        if (!std::isfinite(c))
        {
            throw RangeError("State coordinates must be finite");
        }
    }
}

// FNV-1a over the coordinate bit patterns.
std::size_t hashCoords(const std::vector<double> &coords)
{
    std::uint64_t h = 1469598103934665603ull;
    for (double c : coords)
    {
        std::uint64_t bits;
        std::memcpy(&bits, &c, sizeof(bits));
        for (int i = 0; i < 8; ++i)
        {
            h ^= (bits >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    }
    return static_cast<std::size_t>(h);
}
}  // namespace

State::State(std::vector<double> coords) : coords_(std::move(coords))
{
    checkFinite(coords_);
    hash_ = hashCoords(coords_);
}

State::State(std::initializer_list<double> coords) : coords_(coords)
{
    checkFinite(coords_);
    hash_ = hashCoords(coords_);
}

State State::zeros(std::size_t dim)
{
    return State(std::vector<double>(dim, 0.0));
}

std::size_t EdgeHash::operator()(const Edge &e) const
{
    const StateHash hash;
    const std::size_t hs = hash(e.source);
    const std::size_t ht = hash(e.target);
    return hs ^ (ht + 0x9e3779b97f4a7c15ull + (hs << 6) + (hs >> 2));
}

double distance(const State &a, const State &b)
{
    if (a.dim() != b.dim())
    {
        throw DimensionError("distance: dimension mismatch");
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i)
    {
        const double d = a[i] - b[i];
        sq += d * d;
    }
    return std::sqrt(sq);
}

State interpolate(const State &a, const State &b, double t)
{
    if (a.dim() != b.dim())
    {
        throw DimensionError("interpolate: dimension mismatch");
    }
    if (t < 0.0 || t > 1.0)
    {
        throw RangeError("interpolate: t must lie in [0, 1]");
    }
    std::vector<double> coords(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i)
    {
        coords[i] = a[i] + t * (b[i] - a[i]);
    }
    return State(std::move(coords));
}

double pathCost(const std::vector<State> &waypoints)
{
    if (waypoints.size() < 2)
    {
        throw Exception("pathCost: a path needs at least two waypoints");
    }
    double cost = 0.0;
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i)
    {
        cost += distance(waypoints[i], waypoints[i + 1]);
    }
    return cost;
}

Path::Path(std::vector<State> waypoints) : waypoints_(std::move(waypoints))
{
    totalCost_ = pathCost(waypoints_);
}

bool lexLess(const State &a, const State &b)
{
    return std::lexicographical_compare(a.coords().begin(), a.coords().end(), b.coords().begin(),
                                        b.coords().end());
}

}  // namespace jitstar
