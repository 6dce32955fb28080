#include "jitstar/motion_performance.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace jitstar
{

namespace
{

Eigen::VectorXd toVector(const State &q)
{
    Eigen::VectorXd v(q.dim());
    for (std::size_t i = 0; i < q.dim(); ++i)
        v(static_cast<Eigen::Index>(i)) = q[i];
    return v;
}

State toState(const Eigen::VectorXd &v)
{
    std::vector<double> coords(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        coords[static_cast<std::size_t>(i)] = v(i);
    return State(coords);
}

double minSigma(const KinematicChain &chain, const State &q)
{
    return minSingularValue(chain.taskJacobian(q));
}

// Rows of the task Jacobian that move the end-effector position.
Eigen::Index positionRows(const KinematicChain &chain)
{
    return std::min<Eigen::Index>(static_cast<Eigen::Index>(chain.taskDim()), 3);
}

Eigen::VectorXd eePositionPart(const KinematicChain &chain, const State &q, Eigen::Index rows)
{
    const Eigen::Vector3d p = chain.eePosition(q);
    return p.head(rows);
}

// Damped-least-squares pullback of the end-effector position onto target.
// Returns the corrected configuration; the caller judges the residual drift.
State pullBack(const KinematicChain &chain, const State &q0, const Eigen::VectorXd &target, double tol)
{
    constexpr double kDamping = 1e-3;
    constexpr int kMaxIters = 25;
    const Eigen::Index rows = target.size();

    State q = q0;
    for (int it = 0; it < kMaxIters; ++it)
    {
        const Eigen::VectorXd err = target - eePositionPart(chain, q, rows);
        if (err.norm() <= 0.5 * tol)
            break;
        const Eigen::MatrixXd jp = chain.taskJacobian(q).topRows(rows);
        Eigen::MatrixXd gram = jp * jp.transpose();
        gram.diagonal().array() += kDamping * kDamping;
        const Eigen::VectorXd dq = jp.transpose() * gram.ldlt().solve(err);
        q = toState(toVector(q) + dq);
    }
    return q;
}

}  // namespace

double dTanh(double sigmaMin, const ManipConfig &cfg)
{
    const double denom = sigmaMin + cfg.epsDivide;
    return std::tanh(cfg.etaShape / denom) / denom;
}

bool nearSingularity(double sigmaMin, const ManipConfig &cfg)
{
    return sigmaMin <= cfg.epsGate;
}

State refineGoal(const KinematicChain &chain, const State &xGoal, const ManipConfig &cfg, Rng &rng)
{
    if (xGoal.dim() != chain.jointCount())
        throw DimensionError("refineGoal: goal dimension does not match the chain");

    double bestSigma = minSigma(chain, xGoal);
    if (!nearSingularity(bestSigma, cfg))
        return xGoal;

    const Eigen::MatrixXd nullBasis = nullSpaceBasis(chain.taskJacobian(xGoal));
    if (nullBasis.rows() == 0)
        return xGoal;

    const Eigen::Index rows = positionRows(chain);
    const Eigen::VectorXd target = eePositionPart(chain, xGoal, rows);
    const Eigen::VectorXd q0 = toVector(xGoal);

    State best = xGoal;
    for (int k = 0; k < cfg.perturbCount; ++k)
    {
        Eigen::VectorXd lambda(nullBasis.rows());
        for (Eigen::Index i = 0; i < lambda.size(); ++i)
            lambda(i) = rng.gaussian(0.0, cfg.perturbScale);

        State cand = pullBack(chain, toState(q0 + nullBasis.transpose() * lambda), target, cfg.eeDriftTol);

        const double drift = (target - eePositionPart(chain, cand, rows)).norm();
        if (drift > cfg.eeDriftTol || !chain.withinLimits(cand))
            continue;

        const double sigma = minSigma(chain, cand);
        if (sigma > bestSigma)
        {
            bestSigma = sigma;
            best = cand;
        }
    }
    return best;
}

Path refineInterpolatedPath(const KinematicChain &chain, const Path &path, const ManipConfig &cfg, Rng &rng)
{
    constexpr double kFdStep = 1e-5;
    constexpr int kMaxHalvings = 8;

    std::vector<State> waypoints = path.waypoints();
    const Eigen::Index rows = positionRows(chain);

    for (std::size_t i = 1; i + 1 < waypoints.size(); ++i)
    {
        const State &q = waypoints[i];
        if (q.dim() != chain.jointCount())
            throw DimensionError("refineInterpolatedPath: waypoint dimension does not match the chain");

        const Eigen::MatrixXd jac = chain.taskJacobian(q);
        const double sigma0 = minSingularValue(jac);
        const Eigen::MatrixXd project =
            Eigen::MatrixXd::Identity(jac.cols(), jac.cols()) - pseudoInverse(jac) * jac;

        const Eigen::VectorXd qv = toVector(q);
        Eigen::VectorXd grad(qv.size());
        for (Eigen::Index j = 0; j < qv.size(); ++j)
        {
            Eigen::VectorXd lo = qv, hi = qv;
            lo(j) -= kFdStep;
            hi(j) += kFdStep;
            grad(j) = (minSigma(chain, toState(hi)) - minSigma(chain, toState(lo))) / (2.0 * kFdStep);
        }

        Eigen::VectorXd dir = project * grad;
        const double dirNorm = dir.norm();
        if (dirNorm <= 1e-12)
            continue;
        dir /= dirNorm;

        const Eigen::VectorXd target = eePositionPart(chain, q, rows);
        double step = std::abs(rng.gaussian(cfg.gaussMean, cfg.gaussStd));
        for (int h = 0; h <= kMaxHalvings; ++h, step *= 0.5)
        {
            const State cand = toState(qv + step * dir);
            if (!chain.withinLimits(cand))
                continue;
            if ((target - eePositionPart(chain, cand, rows)).norm() > cfg.eeDriftTol)
                continue;
            if (minSigma(chain, cand) < sigma0)
                continue;
            waypoints[i] = cand;
            break;
        }
    }
    return Path(waypoints);
}

}  // namespace jitstar
