#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "jitstar/bench.hpp"
#include "jitstar/kinematics.hpp"
#include "jitstar/motion_performance.hpp"
#include "jitstar/planner.hpp"
#include "jitstar/self_collision.hpp"
#include "jitstar/world.hpp"

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNoSolution = 2;

struct ScenarioArgs
{
    std::string scenario{"np"};
    std::size_t dim{2};
    double gapWidth{0.0};  // 0 = 0.1 in R^2, 0.3 otherwise
    int rectCount{30};
};

struct PlannerArgs
{
    std::string planner{"jit"};
    double alpha{0.7};
    int tau{5};
    int batch{100};
    int perEdge{10};
};

bool isBuiltinScenario(const std::string &name)
{
    return name == "np" || name == "rr";
}

std::string scenarioLabel(const ScenarioArgs &a)
{
    if (isBuiltinScenario(a.scenario))
        return a.scenario;
    return std::filesystem::path(a.scenario).stem().string();
}

double resolveGapWidth(const ScenarioArgs &a)
{
    if (a.gapWidth > 0.0)
        return a.gapWidth;
    return a.dim == 2 ? 0.1 : 0.3;
}

/** Deterministic per-seed problem builder. File scenarios are loaded once and
    repeat the same world every trial. */
jitstar::ScenarioFactory makeFactory(ScenarioArgs &a)
{
    if (a.scenario == "np")
    {
        const std::size_t n = a.dim;
        const double gap = resolveGapWidth(a);
        return [n, gap](std::uint64_t seed) { return jitstar::makeNarrowPassage(n, gap, seed); };
    }
    if (a.scenario == "rr")
    {
        const std::size_t n = a.dim;
        const std::size_t count = static_cast<std::size_t>(a.rectCount);
        return [n, count](std::uint64_t seed) { return jitstar::makeRandomRectangles(n, count, seed); };
    }
    const jitstar::Scenario sc = jitstar::scenarioFromFile(a.scenario);
    if (a.dim != 2 && a.dim != sc.world.dim())
        throw jitstar::ConfigurationError("--dim does not match the scenario file");
    a.dim = sc.world.dim();
    return [sc](std::uint64_t) { return sc; };
}

double resolveMaxTime(const ScenarioArgs &a, double requested)
{
    if (requested > 0.0)
        return requested;
    const auto def = jitstar::defaultMaxTime(a.scenario, a.dim);
    if (!def)
        throw jitstar::ConfigurationError(
            "no default time budget for this scenario and dimension; pass --max-time");
    return *def;
}

jitstar::PlannerSpec makeSpec(const std::string &name, const PlannerArgs &a)
{
    if (name != "jit" && name != "ablation")
        throw jitstar::ConfigurationError("unknown planner '" + name + "' (expected jit or ablation)");
    jitstar::PlannerSpec spec;
    spec.name = name;
    spec.config.alpha = a.alpha;
    spec.config.tau = a.tau;
    spec.config.batchSize = a.batch;
    spec.config.perEdge = a.perEdge;
    const bool on = name == "jit";
    spec.config.useJustEdge = on;
    spec.config.useJustSample = on;
    return spec;
}

/** Matches the stream assignment of the benchmark harness, so a plan

    invocation reproduces the corresponding bench record bit for bit. */
std::uint64_t plannerStream(const std::string &name)
{
    return name == "jit" ? 1 : 2;
}

nlohmann::ordered_json stateToJson(const jitstar::State &s)
{
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < s.dim(); ++i)
        arr.push_back(s[i]);
    return arr;
}

jitstar::State stateFromJsonFile(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw jitstar::ConfigurationError("cannot open " + path);
    nlohmann::json j;
    try
    {
        in >> j;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw jitstar::ParseError(path + ": " + e.what());
    }
    if (j.is_object() && j.contains("q"))
        j = j["q"];
    if (!j.is_array() || j.empty())
        throw jitstar::ParseError(path + ": expected a joint-value array or {\"q\": [...]}");
    std::vector<double> q;
    for (const auto &v : j)
    {
        if (!v.is_number())
            throw jitstar::ParseError(path + ": joint values must be numbers");
        q.push_back(v.get<double>());
    }
    return jitstar::State(std::move(q));
}

void writePlanJson(const std::string &path, const std::string &scenario, const ScenarioArgs &sa,
                   const std::string &planner, std::uint64_t seed, double maxTime,
                   const jitstar::PlanResult &res)
{
    nlohmann::ordered_json j;
    j["scenario"] = scenario;
    j["dim"] = sa.dim;
    j["planner"] = planner;
    j["seed"] = seed;
    j["max_time"] = maxTime;
    j["success"] = res.path.has_value();
    j["iterations"] = res.iterations;
    j["samples"] = res.sampleCount;
    nlohmann::ordered_json trace = nlohmann::ordered_json::array();
    for (const auto &pt : res.trace)
        trace.push_back({pt.first, pt.second});
    j["trace"] = std::move(trace);
    if (res.path)
    {
        j["cost"] = res.path->totalCost();
        nlohmann::ordered_json wp = nlohmann::ordered_json::array();
        for (const jitstar::State &s : res.path->waypoints())
            wp.push_back(stateToJson(s));
        j["waypoints"] = std::move(wp);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw jitstar::ConfigurationError("cannot open " + path);
    out << j.dump(2) << "\n";
    if (!out)
        throw jitstar::ConfigurationError("failed writing " + path);
}

int runPlan(ScenarioArgs &sa, const PlannerArgs &pa, double maxTime, std::uint64_t seed,
            const std::string &outPath)
{
    const jitstar::ScenarioFactory factory = makeFactory(sa);
    const double budget = resolveMaxTime(sa, maxTime);
    const jitstar::Scenario sc = factory(seed);
    const jitstar::PlannerSpec spec = makeSpec(pa.planner, pa);

    jitstar::PlannerConfig cfg = spec.config;
    cfg.maxTime = budget;
    jitstar::Rng rng(jitstar::Rng::mix(seed, plannerStream(spec.name)));

    std::printf("scenario %s dim=%zu seed=%llu obstacles=%zu planner=%s budget=%.3gs\n",
                scenarioLabel(sa).c_str(), sc.world.dim(), static_cast<unsigned long long>(seed),
                sc.world.obstacles().size(), spec.name.c_str(), budget);

    const jitstar::PlanResult res = jitstar::plan(sc.world, sc.start, sc.goal, cfg, rng);

    if (!outPath.empty())
        writePlanJson(outPath, scenarioLabel(sa), sa, spec.name, seed, budget, res);

    if (!res.path)
    {
        std::printf("no solution within %.3g s (iterations=%llu samples=%zu)\n", budget,
                    static_cast<unsigned long long>(res.iterations), res.sampleCount);
        return kExitNoSolution;
    }
    std::printf("solution cost=%.9g (lower bound %.9g) waypoints=%zu\n", res.path->totalCost(),
                jitstar::distance(sc.start, sc.goal), res.path->waypoints().size());
    std::printf("t_init=%.6g c_init=%.9g improvements=%zu iterations=%llu samples=%zu\n",
                res.trace.front().first, res.trace.front().second, res.trace.size(),
                static_cast<unsigned long long>(res.iterations), res.sampleCount);
    return kExitOk;
}

int runBench(ScenarioArgs &sa, const PlannerArgs &pa, std::vector<std::string> plannerNames,
             double maxTime, int trials, std::uint64_t baseSeed, const std::string &outDir, bool plot)
{
    const jitstar::ScenarioFactory factory = makeFactory(sa);
    const double budget = resolveMaxTime(sa, maxTime);
    if (plannerNames.empty())
        plannerNames = {"jit", "ablation"};

    std::vector<jitstar::PlannerSpec> specs;
    for (const std::string &name : plannerNames)
        specs.push_back(makeSpec(name, pa));

    const int threads = jitstar::harnessThreads();
    std::printf("bench %s dim=%zu trials=%d budget=%.3gs base-seed=%llu threads=%d\n",
                scenarioLabel(sa).c_str(), sa.dim, trials, budget,
                static_cast<unsigned long long>(baseSeed), threads);

    const std::vector<jitstar::RunRecord> records =
        jitstar::runBenchmark(scenarioLabel(sa), factory, sa.dim, specs, trials, budget, baseSeed, threads);
    const jitstar::Summary summary = jitstar::summarize(records, budget);

    jitstar::writeResults(records, summary, outDir);
    if (plot)
        jitstar::emitPlot(summary, outDir + "/results.svg");

    std::printf("%-10s %9s %12s %12s %12s\n", "planner", "success", "t_init_med", "c_init_med",
                "c_final_med");
    bool allUsable = true;
    for (const jitstar::PlannerSummary &ps : summary.planners)
    {
        const auto fmt = [](const std::optional<double> &v) {
            char buf[32];
            if (v)
                std::snprintf(buf, sizeof(buf), "%12.6g", *v);
            else
                std::snprintf(buf, sizeof(buf), "%12s", "-");
            return std::string(buf);
        };
        std::printf("%-10s %5zu/%-3zu %s %s %s\n", ps.planner.c_str(), ps.successes, ps.trials,
                    fmt(ps.tInitMedian).c_str(), fmt(ps.cInitMedian).c_str(),
                    fmt(ps.cFinalMedian).c_str());
        if (ps.successes == 0)
            allUsable = false;
    }
    std::printf("results written to %s\n", outDir.c_str());
    return allUsable ? kExitOk : kExitNoSolution;
}

double pathMinSigma(const jitstar::KinematicChain &chain, const jitstar::Path &path)
{
    double sMin = std::numeric_limits<double>::infinity();
    for (const jitstar::State &q : path.waypoints())
        sMin = std::min(sMin, jitstar::minSingularValue(chain.taskJacobian(q)));
    return sMin;
}

int runKinDemo(const std::string &chainPath, const std::string &goalPath, const std::string &startPath,
               double maxTime, std::uint64_t seed, double alpha, const std::string &outPath)
{
    const jitstar::KinematicChain chain = jitstar::chainFromFile(chainPath);
    const jitstar::State goalRaw = stateFromJsonFile(goalPath);
    if (goalRaw.dim() != chain.jointCount())
        throw jitstar::ConfigurationError("goal dimension does not match the chain joint count");

    const std::size_t n = chain.jointCount();
    std::vector<double> lo(n, -M_PI);
    std::vector<double> hi(n, M_PI);
    if (!chain.jointLower().empty())
    {
        lo = chain.jointLower();
        hi = chain.jointUpper();
    }
    const jitstar::HyperRect bounds{jitstar::State(lo), jitstar::State(hi)};
    const jitstar::ObstacleWorld world{bounds, {}, jitstar::defaultCheckResolution(bounds)};

    jitstar::State start = startPath.empty()
                               ? jitstar::interpolate(jitstar::State(lo), jitstar::State(hi), 0.5)
                               : stateFromJsonFile(startPath);
    if (start.dim() != n)
        throw jitstar::ConfigurationError("start dimension does not match the chain joint count");

    const jitstar::ManipConfig manip{};
    jitstar::Rng root(seed);
    jitstar::Rng rngRefine = root.fork(1);
    jitstar::Rng rngPlan = root.fork(2);

    const double sigmaBefore = jitstar::minSingularValue(chain.taskJacobian(goalRaw));
    const jitstar::State goal = jitstar::refineGoal(chain, goalRaw, manip, rngRefine);
    const double sigmaAfter = jitstar::minSingularValue(chain.taskJacobian(goal));
    const double drift = (chain.eePosition(goal) - chain.eePosition(goalRaw)).norm();
    std::printf("chain: %zu joints, task dim %d\n", n, chain.taskDim());
    std::printf("goal sigma_min %.6g -> %.6g (ee drift %.3g)\n", sigmaBefore, sigmaAfter, drift);

    jitstar::MotionContext motion;
    motion.chains = {chain};
    motion.manip = manip;

    jitstar::PlannerConfig cfg;
    cfg.alpha = alpha;
    cfg.useMotionPerformance = true;
    cfg.maxTime = maxTime;

    const jitstar::PlanResult res = jitstar::plan(world, start, goal, cfg, rngPlan, {}, motion);

    if (!outPath.empty())
    {
        ScenarioArgs sa;
        sa.scenario = chainPath;
        sa.dim = n;
        writePlanJson(outPath, "kin-demo", sa, "jit", seed, maxTime, res);
    }
    if (!res.path)
    {
        std::printf("no solution within %.3g s (iterations=%llu samples=%zu)\n", maxTime,
                    static_cast<unsigned long long>(res.iterations), res.sampleCount);
        return kExitNoSolution;
    }
    std::printf("solution cost=%.9g waypoints=%zu min sigma along path=%.6g\n", res.path->totalCost(),
                res.path->waypoints().size(), pathMinSigma(chain, *res.path));
    std::printf("t_init=%.6g improvements=%zu iterations=%llu samples=%zu\n", res.trace.front().first,
                res.trace.size(), static_cast<unsigned long long>(res.iterations), res.sampleCount);
    return kExitOk;
}

void addScenarioOptions(CLI::App *cmd, ScenarioArgs &sa)
{
    cmd->add_option("--scenario", sa.scenario, "np, rr, or a scenario JSON file")->capture_default_str();
    cmd->add_option("--dim", sa.dim, "planning dimension for np/rr")->capture_default_str();
    cmd->add_option("--gap-width", sa.gapWidth, "np gap width (default 0.1 in R^2, 0.3 otherwise)");
    cmd->add_option("--count", sa.rectCount, "rr obstacle count")->capture_default_str();
}

void addPlannerOptions(CLI::App *cmd, PlannerArgs &pa)
{
    cmd->add_option("--alpha", pa.alpha, "length-vs-manipulability weight")->capture_default_str();
    cmd->add_option("--tau", pa.tau, "ancestor step threshold")->capture_default_str();
    cmd->add_option("--batch", pa.batch, "samples per batch")->capture_default_str();
    cmd->add_option("--per-edge", pa.perEdge, "focused samples per failed edge")->capture_default_str();
}

}  // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Anytime sampling-based motion planner and benchmark harness"};
    app.require_subcommand(1);

    ScenarioArgs planScenario;
    PlannerArgs planPlanner;
    double planMaxTime = 0.0;
    std::uint64_t planSeed = 1;
    std::string planOut;
    CLI::App *planCmd = app.add_subcommand("plan", "Solve one scenario and report the solution");
    addScenarioOptions(planCmd, planScenario);
    planCmd->add_option("--planner", planPlanner.planner, "jit or ablation")->capture_default_str();
    planCmd->add_option("--max-time", planMaxTime, "time budget in seconds (default per scenario)");
    planCmd->add_option("--seed", planSeed, "world and RNG seed")->capture_default_str();
    addPlannerOptions(planCmd, planPlanner);
    planCmd->add_option("--out", planOut, "write the solution, trace, and settings as JSON");

    ScenarioArgs benchScenario;
    PlannerArgs benchPlanner;
    std::vector<std::string> benchPlanners;
    double benchMaxTime = 0.0;
    int benchTrials = 100;
    std::uint64_t benchBaseSeed = 1;
    std::string benchOut;
    bool benchPlot = false;
    CLI::App *benchCmd = app.add_subcommand("bench", "Paired-seed planner comparison over many trials");
    addScenarioOptions(benchCmd, benchScenario);
    benchCmd->add_option("--planner", benchPlanners, "planners to compare (default jit and ablation)");
    benchCmd->add_option("--max-time", benchMaxTime, "per-run time budget in seconds");
    benchCmd->add_option("--trials", benchTrials, "paired trials")->capture_default_str();
    benchCmd->add_option("--base-seed", benchBaseSeed, "world seed of trial t is base-seed + t")
        ->capture_default_str();
    benchCmd->add_option("--out", benchOut, "output directory for results.csv/json")->required();
    benchCmd->add_flag("--plot", benchPlot, "also write results.svg");
    addPlannerOptions(benchCmd, benchPlanner);

    std::string kinChain;
    std::string kinGoal;
    std::string kinStart;
    double kinMaxTime = 2.0;
    std::uint64_t kinSeed = 1;
    double kinAlpha = 0.7;
    std::string kinOut;
    CLI::App *kinCmd = app.add_subcommand("kin", "Kinematic chain utilities");
    kinCmd->require_subcommand(1);
    CLI::App *demoCmd =
        kinCmd->add_subcommand("demo", "Refine a goal configuration and plan to it in joint space");
    demoCmd->add_option("--chain", kinChain, "chain description JSON")->required();
    demoCmd->add_option("--goal", kinGoal, "goal joint values JSON")->required();
    demoCmd->add_option("--start", kinStart, "start joint values JSON (default joint-range midpoint)");
    demoCmd->add_option("--max-time", kinMaxTime, "time budget in seconds")->capture_default_str();
    demoCmd->add_option("--seed", kinSeed, "RNG seed")->capture_default_str();
    demoCmd->add_option("--alpha", kinAlpha, "length-vs-manipulability weight")->capture_default_str();
    demoCmd->add_option("--out", kinOut, "write the solution, trace, and settings as JSON");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try
    {
        if (planCmd->parsed())
            return runPlan(planScenario, planPlanner, planMaxTime, planSeed, planOut);
        if (benchCmd->parsed())
            return runBench(benchScenario, benchPlanner, benchPlanners, benchMaxTime, benchTrials,
                            benchBaseSeed, benchOut, benchPlot);
        if (demoCmd->parsed())
            return runKinDemo(kinChain, kinGoal, kinStart, kinMaxTime, kinSeed, kinAlpha, kinOut);
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
    return kExitConfig;
}
