#include "jitstar/sampling.hpp"

#include <cmath>
#include <limits>

namespace jitstar
{

namespace
{

constexpr double kPi = 3.141592653589793238462643383279502884;

/** \brief Uniform direction-and-radius sample of the unit n-ball. */
std::vector<double> unitBallSample(std::size_t n, Rng &rng)
{
    std::vector<double> v(n);
    double normSq = 0.0;
    do
    {
        normSq = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            v[i] = rng.gaussian01();
            normSq += v[i] * v[i];
        }
    } while (normSq == 0.0);
    const double scale = std::pow(rng.uniform01(), 1.0 / static_cast<double>(n)) / std::sqrt(normSq);
    for (auto &c : v)
    {
        c *= scale;
    }
    return v;
}

}  // namespace

State sampleUniform(const ObstacleWorld &w, Rng &rng)
{
    const HyperRect &bounds = w.bounds();
    std::vector<double> coords(w.dim());
    for (std::size_t i = 0; i < w.dim(); ++i)
    {
        coords[i] = rng.uniformReal(bounds.lower()[i], bounds.upper()[i]);
    }
    return State(std::move(coords));
}

State sampleInformed(const InformedSet &s, Rng &rng)
{
    const std::size_t n = s.focusA.dim();
    if (s.focusB.dim() != n)
    {
        throw DimensionError("sampleInformed: focus dimension mismatch");
    }
    const double cMin = s.cMin();
    if (!(s.cBest >= cMin) || !std::isfinite(s.cBest))
    {
        throw RangeError("sampleInformed: cBest below focal distance (empty informed set)");
    }

    const double rTransverse = s.cBest / 2.0;
    const double rConjugate = std::sqrt(std::max(0.0, s.cBest * s.cBest - cMin * cMin)) / 2.0;

    std::vector<double> u = unitBallSample(n, rng);
    u[0] *= rTransverse;
    for (std::size_t i = 1; i < n; ++i)
    {
        u[i] *= rConjugate;
    }

    // Rotate the first axis onto the focal axis with a Householder
    // reflection; reflections preserve the uniform measure.
    if (cMin > 0.0)
    {
        std::vector<double> axis(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            axis[i] = (s.focusB[i] - s.focusA[i]) / cMin;
        }
        std::vector<double> v(axis);
        v[0] -= 1.0;  // v = a - e1; H = I - 2 v v^T / (v^T v) maps e1 to a.
        double vv = 0.0;
        for (double c : v)
        {
            vv += c * c;
        }
        if (vv > 1e-24)
        {
            double vu = 0.0;
            for (std::size_t i = 0; i < n; ++i)
            {
                vu += v[i] * u[i];
            }
            const double f = 2.0 * vu / vv;
            for (std::size_t i = 0; i < n; ++i)
            {
                u[i] -= f * v[i];
            }
        }
    }

    std::vector<double> coords(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        coords[i] = 0.5 * (s.focusA[i] + s.focusB[i]) + u[i];
    }
    return State(std::move(coords));
}

double unitBallMeasure(std::size_t n)
{
    if (n == 0)
    {
        throw RangeError("unitBallMeasure: dimension must be positive");
    }
    const double half = static_cast<double>(n) / 2.0;
    return std::exp(half * std::log(kPi) - std::lgamma(half + 1.0));
}

double informedMeasure(const InformedSet &s)
{
    if (!std::isfinite(s.cBest))
    {
        return std::numeric_limits<double>::infinity();
    }
    const double cMin = s.cMin();
    if (s.cBest < cMin)
    {
        return 0.0;
    }
    const std::size_t n = s.focusA.dim();
    const double rTransverse = s.cBest / 2.0;
    const double rConjugate = std::sqrt(std::max(0.0, s.cBest * s.cBest - cMin * cMin)) / 2.0;
    return unitBallMeasure(n) * rTransverse * std::pow(rConjugate, static_cast<double>(n - 1));
}

double gauss2F1(double a, double b, double c, double z)
{
    if (c <= 0.0 && c == std::floor(c))
    {
        throw RangeError("gauss2F1: c must not be a non-positive integer");
    }
    if (!(std::abs(z) < 1.0))
    {
        throw RangeError("gauss2F1: |z| must be below 1");
    }
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < 100000; ++k)
    {
        const double kk = static_cast<double>(k);
        term *= (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0)) * z;
        sum += term;
        if (term == 0.0 || std::abs(term) <= 1e-12 * std::abs(sum))
        {
            return sum;
        }
    }
    throw NumericalError("gauss2F1: series did not converge within 1e5 terms");
}

double priorityRegionMeasure(std::size_t n, double c)
{
    if (n < 2)
    {
        throw RangeError("priorityRegionMeasure: dimension must be at least 2");
    }
    if (!(c > 0.0))
    {
        throw RangeError("priorityRegionMeasure: c must be positive");
    }
    const double nd = static_cast<double>(n);
    // Two equal caps of height h = c/2 cut from balls of radius r = c; the
    // cap-fraction ratio (r - h)/r is exactly 1/2.
    const double ratio = 0.5;
    const double kn = std::exp(std::lgamma(1.0 + nd / 2.0) - 0.5 * std::log(kPi) - std::lgamma((nd + 1.0) / 2.0));
    const double f = gauss2F1(0.5, (1.0 - nd) / 2.0, 1.5, ratio * ratio);
    return 2.0 * unitBallMeasure(n) * std::pow(c, nd) * (0.5 - ratio * kn * f);
}

std::optional<State> samplePriorityRegion(const PriorityRegion &r, Rng &rng, int maxTries)
{
    if (!(r.c > 0.0))
    {
        throw RangeError("samplePriorityRegion: c must be positive");
    }
    const std::size_t n = r.source.dim();
    const State mid = interpolate(r.source, r.target, 0.5);
    const double radius = std::sqrt(3.0) / 2.0 * r.c;
    for (int attempt = 0; attempt < maxTries; ++attempt)
    {
        const std::vector<double> u = unitBallSample(n, rng);
        std::vector<double> coords(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            coords[i] = mid[i] + radius * u[i];
        }
        State x(std::move(coords));
        if (distance(x, r.source) < r.c && distance(x, r.target) < r.c &&
            distance(x, r.informed.focusA) + distance(x, r.informed.focusB) <= r.informed.cBest)
        {
            return x;
        }
    }
    return std::nullopt;
}

SampleLedger biasSample(const ObstacleWorld &w, const InformedSet &s, int batchSize,
                        const std::function<bool(const State &)> &selfCollisionOK, Rng &rng)
{
    if (batchSize < 1)
    {
        throw RangeError("biasSample: batchSize must be at least 1");
    }
    SampleLedger ledger;
    const bool informed = std::isfinite(s.cBest);
    for (int i = 0; i < batchSize; ++i)
    {
        State x = informed ? sampleInformed(s, rng) : sampleUniform(w, rng);
        const bool free = w.isStateValid(x) && (!selfCollisionOK || selfCollisionOK(x));
        (free ? ledger.freeSamples : ledger.obstacleSamples).push_back(std::move(x));
    }
    return ledger;
}

std::vector<State> justSample(SampleLedger &ledger, const ObstacleWorld &w, const InformedSet &s, int perEdge,
                              Rng &rng)
{
    constexpr int kTriesPerDraw = 100;
    std::vector<State> result;
    for (const Edge &edge : ledger.failedEdges)
    {
        const double c = distance(edge.source, edge.target);
        if (!(c > 0.0))
        {
            continue;
        }
        const PriorityRegion region{edge.source, edge.target, c, s};
        int added = 0;
        // Bound the number of draws so a fully blocked region cannot stall
        // the planner; exhausted regions simply contribute fewer samples.
        for (int attempt = 0; attempt < perEdge * 20 && added < perEdge; ++attempt)
        {
            auto x = samplePriorityRegion(region, rng, kTriesPerDraw);
            if (!x)
            {
                break;
            }
            if (w.isStateValid(*x))
            {
                result.push_back(std::move(*x));
                ++added;
            }
        }
    }
    ledger.failedEdges.clear();
    return result;
}

}  // namespace jitstar
