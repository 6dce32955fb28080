#include "jitstar/self_collision.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace jitstar
{

namespace
{

double clamp01(double v)
{
    return std::min(1.0, std::max(0.0, v));
}

double evalSq(const LinkSegment &p, const LinkSegment &q, double u1, double u2)
{
    const Eigen::Vector3d a = p.p1 + u1 * (p.p2 - p.p1);
    const Eigen::Vector3d b = q.p1 + u2 * (q.p2 - q.p1);
    return (a - b).squaredNorm();
}

double pairRisk(const LinkSegment &p, const LinkSegment &q, const ScdfConfig &cfg)
{
    const double dSq = segmentDistanceSquared(p, q).dSq;
    if (dSq <= 0.0)
        return std::numeric_limits<double>::infinity();
    return cfg.kappa / std::sqrt(dSq);
}

}  // namespace

SegmentDistance segmentDistanceSquared(const LinkSegment &p, const LinkSegment &q)
{
    const Eigen::Vector3d d1 = p.p2 - p.p1;
    const Eigen::Vector3d d2 = q.p2 - q.p1;
    const Eigen::Vector3d r = p.p1 - q.p1;

    const double alpha = d1.dot(d1);
    const double beta = d2.dot(d2);
    const double gamma = -2.0 * d1.dot(d2);
    const double delta = 2.0 * d1.dot(r);
    const double eps = -2.0 * d2.dot(r);

    const double det = 4.0 * alpha * beta - gamma * gamma;
    if (std::abs(det) > 1e-12 * std::max(1.0, alpha * beta))
    {
        const double u1 = (-2.0 * beta * delta + gamma * eps) / det;
        const double u2 = (gamma * delta - 2.0 * alpha * eps) / det;
        if (u1 >= 0.0 && u1 <= 1.0 && u2 >= 0.0 && u2 <= 1.0)
            return {evalSq(p, q, u1, u2), u1, u2};
    }

    // Clamped boundary search: four corners plus the minimizer of each edge.
    double cand[8][2] = {{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0},
                         {0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {0.0, 1.0}};
    cand[4][1] = beta > 0.0 ? clamp01(-eps / (2.0 * beta)) : 0.0;
    cand[5][1] = beta > 0.0 ? clamp01(-(eps + gamma) / (2.0 * beta)) : 0.0;
    cand[6][0] = alpha > 0.0 ? clamp01(-delta / (2.0 * alpha)) : 0.0;
    cand[7][0] = alpha > 0.0 ? clamp01(-(delta + gamma) / (2.0 * alpha)) : 0.0;

    SegmentDistance best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
    for (const auto &c : cand)
    {
        const double dSq = evalSq(p, q, c[0], c[1]);
        if (dSq < best.dSq)
            best = {dSq, c[0], c[1]};
    }
    return best;
}

std::vector<LinkSegment> linkSegments(const KinematicChain &chain, const State &q)
{
    const std::vector<Eigen::Isometry3d> frames = chain.jointFrames(q);
    std::vector<LinkSegment> segments;
    segments.reserve(frames.size() - 1);
    for (std::size_t i = 1; i < frames.size(); ++i)
        segments.push_back({frames[i - 1].translation(), frames[i].translation()});
    return segments;
}

double scdfBetweenArms(const std::vector<LinkSegment> &armA, const std::vector<LinkSegment> &armB,
                       const ScdfConfig &cfg)
{
    double risk = 0.0;
    for (const auto &a : armA)
        for (const auto &b : armB)
            risk += pairRisk(a, b, cfg);
    return risk;
}

double scdfWithinArm(const std::vector<LinkSegment> &links, const ScdfConfig &cfg)
{
    double risk = 0.0;
    for (std::size_t i = 0; i + 2 < links.size(); ++i)
        risk += pairRisk(links[i], links[i + 2], cfg);
    return risk;
}

bool isSelfCollisionFree(const std::vector<KinematicChain> &chains, const State &q, const ScdfConfig &cfg)
{
    if (chains.empty() || chains.size() > 2)
        throw ConfigurationError("isSelfCollisionFree: expected one or two chains");

    std::size_t total = 0;
    for (const auto &chain : chains)
        total += chain.jointCount();
    if (q.dim() != total)
        throw DimensionError("isSelfCollisionFree: configuration does not partition across the chains");

    std::vector<std::vector<LinkSegment>> arms;
    arms.reserve(chains.size());
    std::size_t offset = 0;
    for (const auto &chain : chains)
    {
        std::vector<double> part(chain.jointCount());
        for (std::size_t j = 0; j < part.size(); ++j)
            part[j] = q[offset + j];
        offset += part.size();
        arms.push_back(linkSegments(chain, State(part)));
    }

    // Summed fields compared against the tolerance, with a per-pair early
    // exit; every term is positive so the outcome is unchanged.
    for (const auto &arm : arms)
    {
        double risk = 0.0;
        for (std::size_t i = 0; i + 2 < arm.size(); ++i)
        {
            risk += pairRisk(arm[i], arm[i + 2], cfg);
            if (risk >= cfg.lambdaTol)
                return false;
        }
    }
    if (arms.size() == 2)
    {
        double risk = 0.0;
        for (const auto &a : arms[0])
            for (const auto &b : arms[1])
            {
                risk += pairRisk(a, b, cfg);
                if (risk >= cfg.lambdaTol)
                    return false;
            }
    }
    return true;
}

}  // namespace jitstar
