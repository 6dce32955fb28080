#include "jitstar/bench.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace jitstar
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr const char *kCsvHeader = "scenario,dim,planner,seed,t_init,c_init,c_final,success";

std::string formatDouble9(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

bool revalidate(const ObstacleWorld &w, const Path &p)
{
    const std::vector<State> &wp = p.waypoints();
    if (wp.empty() || !w.isStateValid(wp.front()))
        return false;
    for (std::size_t i = 0; i + 1 < wp.size(); ++i)
        if (!w.isEdgeValid(wp[i], wp[i + 1]))
            return false;
    return true;
}

double lowerQuantile(const std::vector<double> &sorted, double p)
{
    const std::size_t idx = static_cast<std::size_t>(
        std::floor(static_cast<double>(sorted.size() - 1) * p));
    return sorted[idx];
}

std::optional<double> lowerMedian(std::vector<double> values)
{
    if (values.empty())
        return std::nullopt;
    std::sort(values.begin(), values.end());
    return lowerQuantile(values, 0.5);
}

RunRecord runOne(const std::string &scenarioName, const ScenarioFactory &factory, std::size_t dim,
                 const PlannerSpec &spec, std::size_t plannerIndex, double maxTime, std::uint64_t worldSeed)
{
    const Scenario sc = factory(worldSeed);
    PlannerConfig cfg = spec.config;
    cfg.maxTime = maxTime;
    Rng rng(Rng::mix(worldSeed, static_cast<std::uint64_t>(plannerIndex) + 1));
    const PlanResult res = plan(sc.world, sc.start, sc.goal, cfg, rng, {}, spec.motion);

    RunRecord rec;
    rec.scenario = scenarioName;
    rec.dim = static_cast<int>(dim);
    rec.planner = spec.name;
    rec.seed = worldSeed;
    rec.trace = res.trace;
    if (res.path)
    {
        const Path &path = *res.path;
        const bool atGoal = distance(path.waypoints().back(), sc.goal) <= 0.01;
        if (atGoal && revalidate(sc.world, path))
        {
            rec.success = true;
            rec.tInit = res.trace.front().first;
            rec.cInit = res.trace.front().second;
            rec.cFinal = path.totalCost();
        }
    }
    return rec;
}

}  // namespace

std::optional<double> defaultMaxTime(const std::string &scenarioName, std::size_t dim)
{
    if (scenarioName == "np")
    {
        if (dim == 4)
            return 0.3;
        if (dim == 8)
            return 2.3;
        if (dim == 16)
            return 2.5;
    }
    else if (scenarioName == "rr")
    {
        if (dim == 4)
            return 1.6;
        if (dim == 8)
            return 2.0;
        if (dim == 16)
            return 4.0;
    }
    return std::nullopt;
}

int harnessThreads()
{
    const char *env = std::getenv("JIT_THREADS");
    if (env == nullptr)
        return 1;
    const long v = std::strtol(env, nullptr, 10);
    return v > 0 ? static_cast<int>(v) : 1;
}

std::vector<RunRecord> runBenchmark(const std::string &scenarioName, const ScenarioFactory &factory,
                                    std::size_t dim, const std::vector<PlannerSpec> &planners, int trials,
                                    double maxTime, std::uint64_t baseSeed, int threads)
{
    if (trials < 1)
        throw RangeError("runBenchmark: trials must be at least 1");
    if (planners.empty())
        throw ConfigurationError("runBenchmark: no planners given");
    if (!(maxTime > 0.0))
        throw ConfigurationError("runBenchmark: maxTime must be positive");

    const std::size_t perTrial = planners.size();
    const std::size_t total = static_cast<std::size_t>(trials) * perTrial;
    std::vector<RunRecord> records(total);

    const auto work = [&](std::size_t idx) {
        const std::size_t t = idx / perTrial;
        const std::size_t p = idx % perTrial;
        records[idx] = runOne(scenarioName, factory, dim, planners[p], p, maxTime, baseSeed + t);
    };

    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(total)));
    if (workers == 1)
    {
        for (std::size_t i = 0; i < total; ++i)
            work(i);
    }
    else
    {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int k = 0; k < workers; ++k)
            pool.emplace_back([&]() {
                for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1))
                    work(i);
            });
        for (std::thread &th : pool)
            th.join();
    }
    return records;
}

Summary summarize(const std::vector<RunRecord> &records, double maxTime)
{
    if (records.empty())
        throw ConfigurationError("summarize: no records");

    std::vector<std::string> names;
    for (const RunRecord &r : records)
        if (std::find(names.begin(), names.end(), r.planner) == names.end())
            names.push_back(r.planner);

    Summary summary;
    summary.maxTime = maxTime;
    for (const std::string &name : names)
    {
        std::vector<const RunRecord *> group;
        for (const RunRecord &r : records)
            if (r.planner == name)
                group.push_back(&r);

        PlannerSummary ps;
        ps.planner = name;
        ps.trials = group.size();
        std::vector<double> tInit, cInit, cFinal;
        for (const RunRecord *r : group)
            if (r->success)
            {
                ++ps.successes;
                tInit.push_back(*r->tInit);
                cInit.push_back(*r->cInit);
                cFinal.push_back(*r->cFinal);
            }
        ps.successRate = static_cast<double>(ps.successes) / static_cast<double>(ps.trials);
        ps.tInitMedian = lowerMedian(std::move(tInit));
        ps.cInitMedian = lowerMedian(std::move(cInit));
        ps.cFinalMedian = lowerMedian(std::move(cFinal));

        ps.bands.reserve(100);
        for (int k = 0; k < 100; ++k)
        {
            const double t = maxTime * static_cast<double>(k + 1) / 100.0;
            std::vector<double> costs;
            costs.reserve(group.size());
            std::size_t solved = 0;
            for (const RunRecord *r : group)
            {
                double c = kInf;
                for (const auto &pt : r->trace)
                {
                    if (pt.first > t)
                        break;
                    c = pt.second;
                }
                if (std::isfinite(c))
                    ++solved;
                costs.push_back(c);
            }
            std::sort(costs.begin(), costs.end());
            ps.bands.push_back({t, lowerQuantile(costs, 0.25), lowerQuantile(costs, 0.5),
                                lowerQuantile(costs, 0.75),
                                static_cast<double>(solved) / static_cast<double>(group.size())});
        }
        summary.planners.push_back(std::move(ps));
    }
    return summary;
}

void writeResults(const std::vector<RunRecord> &records, const Summary &summary, const std::string &dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);

    const std::string csvPath = dir + "/results.csv";
    {
        std::ofstream out(csvPath, std::ios::binary);
        if (!out)
            throw ConfigurationError("writeResults: cannot open " + csvPath);
        out << kCsvHeader << "\n";
        for (const RunRecord &r : records)
        {
            out << r.scenario << ',' << r.dim << ',' << r.planner << ',' << r.seed << ',';
            out << (r.tInit ? formatDouble9(*r.tInit) : "") << ',';
            out << (r.cInit ? formatDouble9(*r.cInit) : "") << ',';
            out << (r.cFinal ? formatDouble9(*r.cFinal) : "") << ',';
            out << (r.success ? '1' : '0') << "\n";
        }
        if (!out)
            throw ConfigurationError("writeResults: failed writing " + csvPath);
    }

    const std::string jsonPath = dir + "/results.json";
    nlohmann::ordered_json j;
    j["records"] = nlohmann::ordered_json::array();
    for (const RunRecord &r : records)
    {
        nlohmann::ordered_json rec;
        rec["scenario"] = r.scenario;
        rec["dim"] = r.dim;
        rec["planner"] = r.planner;
        rec["seed"] = r.seed;
        rec["t_init"] = r.tInit ? nlohmann::ordered_json(*r.tInit) : nlohmann::ordered_json(nullptr);
        rec["c_init"] = r.cInit ? nlohmann::ordered_json(*r.cInit) : nlohmann::ordered_json(nullptr);
        rec["c_final"] = r.cFinal ? nlohmann::ordered_json(*r.cFinal) : nlohmann::ordered_json(nullptr);
        rec["success"] = r.success;
        nlohmann::ordered_json trace = nlohmann::ordered_json::array();
        for (const auto &pt : r.trace)
            trace.push_back({pt.first, pt.second});
        rec["trace"] = std::move(trace);
        j["records"].push_back(std::move(rec));
    }
    nlohmann::ordered_json js;
    js["max_time"] = summary.maxTime;
    js["planners"] = nlohmann::ordered_json::array();
    for (const PlannerSummary &ps : summary.planners)
    {
        nlohmann::ordered_json p;
        p["planner"] = ps.planner;
        p["trials"] = ps.trials;
        p["successes"] = ps.successes;
        p["success_rate"] = ps.successRate;
        p["t_init_median"] =
            ps.tInitMedian ? nlohmann::ordered_json(*ps.tInitMedian) : nlohmann::ordered_json(nullptr);
        p["c_init_median"] =
            ps.cInitMedian ? nlohmann::ordered_json(*ps.cInitMedian) : nlohmann::ordered_json(nullptr);
        p["c_final_median"] =
            ps.cFinalMedian ? nlohmann::ordered_json(*ps.cFinalMedian) : nlohmann::ordered_json(nullptr);
        nlohmann::ordered_json bands = nlohmann::ordered_json::array();
        for (const QuantileBand &b : ps.bands)
        {
            nlohmann::ordered_json row;
            row["t"] = b.t;
            row["q25"] = std::isfinite(b.q25) ? nlohmann::ordered_json(b.q25) : nlohmann::ordered_json(nullptr);
            row["q50"] = std::isfinite(b.q50) ? nlohmann::ordered_json(b.q50) : nlohmann::ordered_json(nullptr);
            row["q75"] = std::isfinite(b.q75) ? nlohmann::ordered_json(b.q75) : nlohmann::ordered_json(nullptr);
            row["success_rate"] = b.successRate;
            bands.push_back(std::move(row));
        }
        p["bands"] = std::move(bands);
        js["planners"].push_back(std::move(p));
    }
    j["summary"] = std::move(js);

    std::ofstream out(jsonPath, std::ios::binary);
    if (!out)
        throw ConfigurationError("writeResults: cannot open " + jsonPath);
    out << j.dump(2) << "\n";
    if (!out)
        throw ConfigurationError("writeResults: failed writing " + jsonPath);
}

std::vector<RunRecord> readResultsCsv(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigurationError("readResultsCsv: cannot open " + path);

    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw ParseError("readResultsCsv: unexpected header in " + path);

    std::vector<RunRecord> records;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::string::size_type pos = 0;
        while (true)
        {
            const auto comma = line.find(',', pos);
            fields.push_back(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
            if (comma == std::string::npos)
                break;
            pos = comma + 1;
        }
        if (fields.size() != 8)
            throw ParseError("readResultsCsv: malformed row in " + path);

        RunRecord r;
        r.scenario = fields[0];
        try
        {
            r.dim = std::stoi(fields[1]);
            r.planner = fields[2];
            r.seed = std::stoull(fields[3]);
            if (!fields[4].empty())
                r.tInit = std::stod(fields[4]);
            if (!fields[5].empty())
                r.cInit = std::stod(fields[5]);
            if (!fields[6].empty())
                r.cFinal = std::stod(fields[6]);
        }
        catch (const std::exception &)
        {
            throw ParseError("readResultsCsv: malformed number in " + path);
        }
        if (fields[7] != "0" && fields[7] != "1")
            throw ParseError("readResultsCsv: malformed success flag in " + path);
        r.success = fields[7] == "1";
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace jitstar
