#pragma once

#include "jitstar/kinematics.hpp"
#include "jitstar/motion_performance.hpp"
#include "jitstar/rng.hpp"
#include "jitstar/self_collision.hpp"
#include "jitstar/state.hpp"
#include "jitstar/world.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace jitstar
{

/** \brief Kinematic context for joint-space planning: the chains whose
    concatenated joint vectors form the planning space, plus the constants of
    the manipulability term and the self-collision field. */
struct MotionContext
{
    std::vector<KinematicChain> chains;
    ManipConfig manip{};
    ScdfConfig scdf{};
};

struct PlannerConfig
{
    int batchSize{100};         ///< samples added per batch
    int tau{5};                 ///< ancestor step threshold of the edge expansion
    int surrogates{3};          ///< evenly spaced probes per blocked ancestor edge
    int perEdge{10};            ///< priority-region samples per failed edge
    double alpha{0.7};          ///< length-vs-manipulability weight; forced to 1 without a chain
    double etaRewire{1.001};    ///< rewiring radius inflation, > 1
    double maxTime{1.0};        ///< seconds; may be infinite if maxIterations bounds the run
    std::uint64_t maxIterations{0};  ///< 0 = no iteration bound
    bool useJustEdge{true};
    bool useJustSample{true};
    bool useMotionPerformance{false};
};

struct PlanResult
{
    std::optional<Path> path;
    /// (elapsed seconds, cost) per strictly improving solution, in order.
    std::vector<std::pair<double, double>> trace;
    std::uint64_t iterations{0};
    std::size_t sampleCount{0};
};

using SolutionCallback = std::function<void(const Path &, double)>;

/** \brief Anytime bidirectional lazy planner.

    A reverse tree grown from the goal under a sparse validity filter labels
    states with cost-to-goal estimates that guide a fully validated forward
    tree from the start. Committed vertices reuse their ancestor chain for
    shortcut edges, fully checked on the spot; edges that pass the sparse
    filter but fail the full check mark bottlenecks that receive focused
    lens-shaped sampling. When neither queue can improve the current solution
    the planner prunes, draws a fresh batch, and restarts the reverse search.

    One instance is single-threaded; independent instances may run
    concurrently. The callback fires on the caller's thread each time a
    strictly cheaper path is found. */
class Planner
{
public:
    Planner(ObstacleWorld world, PlannerConfig cfg, std::optional<MotionContext> motion = std::nullopt);

    PlanResult solve(const State &start, const State &goal, Rng &rng,
                     const SolutionCallback &onSolution = {});

    const PlannerConfig &config() const
    {
        return cfg_;
    }

private:
    ObstacleWorld world_;
    PlannerConfig cfg_;
    std::optional<MotionContext> motion_;
};

/** \brief One-shot convenience wrapper around Planner. */
PlanResult plan(const ObstacleWorld &world, const State &start, const State &goal, const PlannerConfig &cfg,
                Rng &rng, const SolutionCallback &onSolution = {},
                const std::optional<MotionContext> &motion = std::nullopt);

}  // namespace jitstar
