#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "jitstar/rng.hpp"
#include "jitstar/state.hpp"
#include "jitstar/world.hpp"

namespace jitstar
{

/** \brief The set of states that could improve a solution of cost cBest:
    all x with ||x - focusA|| + ||x - focusB|| <= cBest. */
struct InformedSet
{
    State focusA;
    State focusB;
    double cBest;

    double cMin() const
    {
        return distance(focusA, focusB);
    }
};

/** \brief The lens-shaped sampling region around a candidate edge: the
    intersection of the two balls of radius c centered at the edge endpoints,
    clipped to the informed set. */
struct PriorityRegion
{
    State source;
    State target;
    double c;
    InformedSet informed;
};

/** \brief Bookkeeping for one sampling era: valid and invalid draws, plus
    edges that passed the sparse reverse check but failed the full forward
    check and therefore mark bottleneck regions. */
struct SampleLedger
{
    std::vector<State> freeSamples;
    std::vector<State> obstacleSamples;
    std::vector<Edge> failedEdges;
};

/** \brief Uniform sample over the world bounds (validity is not checked). */
State sampleUniform(const ObstacleWorld &w, Rng &rng);

/** \brief Uniform sample over the prolate hyperspheroid with the given foci
    and transverse diameter cBest. Throws RangeError when cBest < cMin. */
State sampleInformed(const InformedSet &s, Rng &rng);

/** \brief Lebesgue measure of the unit n-ball, pi^(n/2) / Gamma(n/2 + 1). */
double unitBallMeasure(std::size_t n);

/** \brief Lebesgue measure of the hyperspheroid sampled by sampleInformed;
    infinity when cBest is infinite, zero when the set is empty. */
double informedMeasure(const InformedSet &s);

/** \brief Gauss hypergeometric function 2F1(a, b; c; z) by power series to
    relative tolerance 1e-12; terminates exactly when a or b is a non-positive
    integer. Requires |z| < 1 and c not a non-positive integer. */
double gauss2F1(double a, double b, double c, double z);

/** \brief Measure of the two-ball lens: the intersection of two n-balls of
    radius c whose centers are c apart. Evaluates, with r = c and h = c/2,

        2 zeta_n r^n (1/2 - ((r-h)/r) K_n 2F1(1/2, (1-n)/2; 3/2; ((r-h)/r)^2))

    where K_n = Gamma(1 + n/2) / (sqrt(pi) Gamma((n+1)/2)). The second series
    parameter is (1-n)/2; this reproduces the exact 2-D lens area and 3-D
    spherical-cap volume, which 1 - n/2 does not. */
double priorityRegionMeasure(std::size_t n, double c);

/** \brief Rejection-sample the priority region from the bounding ball of
    radius (sqrt(3)/2) c centered at the edge midpoint. Returns an empty
    optional when maxTries draws all miss (degenerate or tiny regions). */
std::optional<State> samplePriorityRegion(const PriorityRegion &r, Rng &rng, int maxTries);

/** \brief Draw batchSize candidates (informed when cBest is finite, uniform
    otherwise) and partition them into free and obstacle samples. A candidate
    counts as free only if it passes both world validity and the
    selfCollisionOK predicate (pass an empty function to skip the latter). */
SampleLedger biasSample(const ObstacleWorld &w, const InformedSet &s, int batchSize,
                        const std::function<bool(const State &)> &selfCollisionOK, Rng &rng);

/** \brief For every failed edge in the ledger, draw up to perEdge valid
    states from its priority region and return them; clears failedEdges. */
std::vector<State> justSample(SampleLedger &ledger, const ObstacleWorld &w, const InformedSet &s, int perEdge,
                              Rng &rng);

}  // namespace jitstar
