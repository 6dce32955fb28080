#pragma once

#include "jitstar/kinematics.hpp"
#include "jitstar/rng.hpp"
#include "jitstar/state.hpp"

namespace jitstar
{

/** \brief Parameters of the manipulability heuristic and refinements. */
struct ManipConfig
{
    double etaShape{0.2};      ///< emphasis on manipulability in dTanh
    double epsDivide{1e-6};    ///< divide-by-zero guard in dTanh
    double epsGate{0.05};      ///< singularity gate: sigma <= epsGate is singular
    int perturbCount{30};      ///< candidates drawn by refineGoal
    double perturbScale{0.1};  ///< std of null-space perturbation coordinates (rad)
    double gaussMean{0.5};     ///< mean of the interpolated-step scale draw
    double gaussStd{0.4};      ///< std of the interpolated-step scale draw
    double eeDriftTol{1e-4};   ///< max allowed end-effector position drift (m)
};

/** \brief Smooth singularity penalty tanh(eta/(s+eps)) / (s+eps), strictly
    decreasing in s and vanishing as s grows. */
double dTanh(double sigmaMin, const ManipConfig &cfg);

/** \brief True iff sigmaMin <= epsGate; the boundary counts as singular. */
bool nearSingularity(double sigmaMin, const ManipConfig &cfg);

/** \brief Null-space goal refinement.

    If the goal is near-singular, draws perturbCount null-space candidates
    xGoal + N^T lambda, pulls each back onto the original end-effector
    position with a damped-least-squares iteration, discards candidates that
    drift more than eeDriftTol or leave the joint limits, and returns the
    survivor with the largest minimum singular value. Falls back to xGoal, so
    the result is never worse than the input. */
State refineGoal(const KinematicChain &chain, const State &xGoal, const ManipConfig &cfg, Rng &rng);

/** \brief Per-state null-space manipulability ascent over the interior
    waypoints of a joint-space path.

    Each interior state is offered one step along the null-space-projected
    finite-difference gradient of sigma_min, scaled by the magnitude of a
    Gaussian(gaussMean, gaussStd^2) draw and halved until the step keeps
    sigma_min non-decreasing and the end-effector within eeDriftTol (at most
    eight halvings, otherwise the state is kept). Endpoints are never
    modified. */
Path refineInterpolatedPath(const KinematicChain &chain, const Path &path, const ManipConfig &cfg, Rng &rng);

}  // namespace jitstar
