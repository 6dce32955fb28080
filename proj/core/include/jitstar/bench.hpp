#pragma once

#include "jitstar/planner.hpp"
#include "jitstar/state.hpp"
#include "jitstar/world.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jitstar
{

/** \brief One planner run on one world. */
struct RunRecord
{
    std::string scenario;
    int dim{0};
    std::string planner;
    std::uint64_t seed{0};
    std::optional<double> tInit;
    std::optional<double> cInit;
    std::optional<double> cFinal;
    bool success{false};
    std::vector<std::pair<double, double>> trace;
};

/** \brief Cost quantiles and success rate at one grid time. Non-finite
    quantiles mean too few runs had a solution by then. */
struct QuantileBand
{
    double t;
    double q25;
    double q50;
    double q75;
    double successRate;
};

/** \brief Per-planner aggregate; medians use the lower-median convention and
    cover successful runs only. */
struct PlannerSummary
{
    std::string planner;
    std::size_t trials{0};
    std::size_t successes{0};
    double successRate{0.0};
    std::optional<double> tInitMedian;
    std::optional<double> cInitMedian;
    std::optional<double> cFinalMedian;
    std::vector<QuantileBand> bands;
};

struct Summary
{
    double maxTime{0.0};
    std::vector<PlannerSummary> planners;
};

/** \brief Named planner configuration for paired comparisons. */
struct PlannerSpec
{
    std::string name;
    PlannerConfig config;
    std::optional<MotionContext> motion;
};

/** \brief Produces the world and problem of one trial from its seed.
    Must be deterministic so that all planners of a trial see the same
    problem. */
using ScenarioFactory = std::function<Scenario(std::uint64_t seed)>;

/** \brief Fig. 3-style time budgets for the built-in scenario families,
    keyed by (name, dimension); empty for unknown combinations. */
std::optional<double> defaultMaxTime(const std::string &scenarioName, std::size_t dim);

/** \brief Paired-seed benchmark: trial t builds the world from baseSeed+t
    once per planner (deterministically identical) and runs each planner with
    its own derived RNG stream and the shared time budget. Success requires a
    path whose terminal waypoint lies within 0.01 of the goal and that
    revalidates against the world; cFinal is recomputed by the harness.
    Records come back ordered by (trial, planner) regardless of threads. */
std::vector<RunRecord> runBenchmark(const std::string &scenarioName, const ScenarioFactory &factory,
                                    std::size_t dim, const std::vector<PlannerSpec> &planners, int trials,
                                    double maxTime, std::uint64_t baseSeed, int threads = 1);

/** \brief Aggregates records per planner: success rates, lower medians of
    t_init/c_init/c_final over successes, and cost quantiles on a uniform
    100-bin time grid with last-observation-carried-forward costs. */
Summary summarize(const std::vector<RunRecord> &records, double maxTime);

/** \brief Writes results.csv and results.json under dir. The CSV holds one
    row per record (floats at 9 significant digits, absent values empty); the
    JSON mirrors the full records including traces plus the summary. */
void writeResults(const std::vector<RunRecord> &records, const Summary &summary, const std::string &dir);

/** \brief Parses a results.csv written by writeResults (traces are not part
    of the CSV and come back empty). */
std::vector<RunRecord> readResultsCsv(const std::string &path);

/** \brief Writes an SVG with one series per planner: median cost over time
    with the 25-75% band, and the success rate over time below. */
void emitPlot(const Summary &summary, const std::string &path);

/** \brief Worker cap for runBenchmark: the JIT_THREADS environment variable
    when set to a positive integer, otherwise 1. */
int harnessThreads();

}  // namespace jitstar
