#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jitstar/state.hpp"

namespace jitstar
{

/** \brief An axis-aligned closed hyperrectangle. */
class HyperRect
{
public:
    HyperRect(State lower, State upper);

    std::size_t dim() const
    {
        return lower_.dim();
    }

    const State &lower() const
    {
        return lower_;
    }

    const State &upper() const
    {
        return upper_;
    }

    /** \brief Closed containment: boundary points count as inside. */
    bool contains(const State &x) const;

    bool intersects(const HyperRect &other) const;

    /** \brief Lebesgue measure (product of extents). */
    double measure() const;

    bool operator==(const HyperRect &other) const
    {
        return lower_ == other.lower_ && upper_ == other.upper_;
    }

private:
    State lower_;
    State upper_;
};

/** \brief A bounded planning domain with closed hyperrectangular obstacles.

    Edge validity probes the straight segment at a spacing no coarser than
    checkResolution, endpoints included. Obstacles are closed sets, so a probe
    exactly on an obstacle boundary collides. */
class ObstacleWorld
{
public:
    ObstacleWorld(HyperRect bounds, std::vector<HyperRect> obstacles, double checkResolution);

    std::size_t dim() const
    {
        return bounds_.dim();
    }

    const HyperRect &bounds() const
    {
        return bounds_;
    }

    const std::vector<HyperRect> &obstacles() const
    {
        return obstacles_;
    }

    double checkResolution() const
    {
        return checkResolution_;
    }

    bool isStateValid(const State &x) const;

    /** \brief Full collision check of segment ab with
        ceil(distance/checkResolution) + 1 evenly spaced probes. */
    bool isEdgeValid(const State &a, const State &b) const;

private:
    HyperRect bounds_;
    std::vector<HyperRect> obstacles_;
    double checkResolution_;
};

/** \brief A complete planning problem: world plus start and goal states. */
struct Scenario
{
    ObstacleWorld world;
    State start;
    State goal;
};

/** \brief Default probe spacing: 0.01 of the domain diagonal. */
double defaultCheckResolution(const HyperRect &bounds);

/** \brief Unit-hypercube domain split by a 0.1-thick wall at the midpoint of
    axis 0, pierced by a single gap of width gapWidth whose transverse
    placement is drawn from the seed. The gap never straddles the domain
    centerline, so the straight start-goal segment is always blocked. */
Scenario makeNarrowPassage(std::size_t n, double gapWidth, std::uint64_t seed);

/** \brief Unit-hypercube domain with count random boxes, side lengths uniform
    in [0.02, 0.15] per axis; boxes covering start or goal are redrawn. */
Scenario makeRandomRectangles(std::size_t n, std::size_t count, std::uint64_t seed);

/** \brief Serialize with 17 significant digits so parsing returns the exact
    same doubles and a dump-load-dump cycle is byte identical. */
std::string scenarioToJson(const Scenario &scenario);

Scenario scenarioFromJson(const std::string &text);

void scenarioToFile(const Scenario &scenario, const std::string &path);

Scenario scenarioFromFile(const std::string &path);

}  // namespace jitstar
