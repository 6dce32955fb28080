#pragma once

#include "jitstar/kinematics.hpp"
#include "jitstar/state.hpp"

#include <Eigen/Core>

#include <vector>

namespace jitstar
{

/** \brief Straight link between consecutive joint-frame origins.
    Zero-length segments are allowed and treated as points. */
struct LinkSegment
{
    Eigen::Vector3d p1;
    Eigen::Vector3d p2;
};

/** \brief Danger-field constants: per-pair risk is kappa / distance, and a
    configuration is accepted while each field stays below lambdaTol. */
struct ScdfConfig
{
    double kappa{0.001};
    double lambdaTol{0.018};
};

/** \brief Closed-form squared distance between two segments.
    dSq is evaluated directly at the returned parameters, which solve the
    interior critical-point system when it lies in [0,1]^2 and otherwise the
    best of the corner and clamped-edge candidates. */
struct SegmentDistance
{
    double dSq;
    double u1;
    double u2;
};

SegmentDistance segmentDistanceSquared(const LinkSegment &p, const LinkSegment &q);

/** \brief Link segments of a chain at configuration q, one per link,
    spanning consecutive joint-frame origins. */
std::vector<LinkSegment> linkSegments(const KinematicChain &chain, const State &q);

/** \brief Summed cross-arm risk Σ_i Σ_j kappa/√(dSq_ij) over all pairs.
    A touching pair yields an infinite-risk sentinel. */
double scdfBetweenArms(const std::vector<LinkSegment> &armA, const std::vector<LinkSegment> &armB,
                       const ScdfConfig &cfg);

/** \brief Summed within-arm risk over the link pairs (i, i+2); adjacent
    links share a joint and are excluded. Fewer than three links → 0. */
double scdfWithinArm(const std::vector<LinkSegment> &links, const ScdfConfig &cfg);

/** \brief Acceptance predicate for sampled configurations: true iff every
    within-arm field and the cross-arm field stay below lambdaTol.
    q concatenates the chains' joint vectors in order. */
bool isSelfCollisionFree(const std::vector<KinematicChain> &chains, const State &q, const ScdfConfig &cfg);

}  // namespace jitstar
