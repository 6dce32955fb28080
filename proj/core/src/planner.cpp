#include "jitstar/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "jitstar/sampling.hpp"
#include "jitstar/search.hpp"

namespace jitstar
{

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

/** Once a reverse era reaches the start, it keeps labeling until the queue
    frontier exceeds the established route's key by this factor, covering the
    detours the forward search is likely to ask about, then suspends. */
constexpr double kReverseBand = 1.2;

/** Set of undirected edges stored as lexicographically ordered pairs. */
class EdgeSet
{
public:
    bool contains(const State &a, const State &b) const
    {
        const bool flip = lexLess(b, a);
        const auto it = map_.find(flip ? b : a);
        return it != map_.end() && it->second.count(flip ? a : b) > 0;
    }

    void insert(const State &a, const State &b)
    {
        const bool flip = lexLess(b, a);
        map_[flip ? b : a].insert(flip ? a : b);
    }

private:
    std::unordered_map<State, std::unordered_set<State, StateHash>, StateHash> map_;
};

/** One solve() invocation. Owns every piece of per-run state so the public
    Planner stays reusable. */
class Engine
{
public:
    Engine(const ObstacleWorld &w, const PlannerConfig &cfg, const std::optional<MotionContext> &motion,
           const State &start, const State &goal, Rng &rng, const SolutionCallback &cb)
      : w_(w)
      , cfg_(cfg)
      , motion_(motion)
      , rng_(rng)
      , cb_(cb)
      , start_(start)
      , goal_(goal)
      , heur_{start, goal, w.checkResolution(),
              motion && cfg.useMotionPerformance ? cfg.alpha : 1.0, {}}
      , forward_(start)
      , reverse_(goal)
      , cMin_(distance(start, goal))
    {
        if (motion_ && cfg_.useMotionPerformance)
            heur_.dTanhOf = [this](const State &x) { return dTanhValue(x); };
        if (motion_)
            selfOk_ = [this](const State &x) {
                return isSelfCollisionFree(motion_->chains, x, motion_->scdf);
            };
    }

    PlanResult run()
    {
        t0_ = std::chrono::steady_clock::now();

        addSample(start_);
        addSample(goal_);
        effort_[start_] = 0.0;

        if (start_ == goal_)
        {
            emitPath(Path({start_, goal_}));
            return finish();
        }

        const SampleLedger led = biasSample(w_, informed(), cfg_.batchSize, selfOk_, rng_);
        for (const State &s : led.freeSamples)
            addSample(s);
        restartReverseSearch();
        rebuildForwardQueue();

        while (!terminate())
        {
            ++iterations_;
            // The reverse era suspends once the corridor band around the
            // established route is labeled; draining the rest of its queue
            // here would starve the batch boundary forever. A dirty era is
            // already invalid, so spending pops on it would be waste.
            const bool rCan = !dirtyReverse_ && reverseEraAlive();
            const bool fCan = couldImproveSolution(qF_, cBest_, heur_);
            if (!rCan && !fCan)
            {
                batchBoundary();
                continue;
            }
            if (rCan)
                reverseStep();
            if (couldImproveSolution(qF_, cBest_, heur_) && forwardReady())
                forwardStep();
        }
        return finish();
    }

private:
    PlanResult finish() const
    {
        return {best_, trace_, iterations_, samples_.size()};
    }

    double elapsed() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

    bool terminate() const
    {
        if (elapsed() >= cfg_.maxTime)
            return true;
        if (cfg_.maxIterations > 0 && iterations_ >= cfg_.maxIterations)
            return true;
        // A solution at the heuristic lower bound cannot be improved.
        return best_ && cBest_ <= cMin_ + 1e-12 * std::max(1.0, cMin_);
    }

    InformedSet informed() const
    {
        return {start_, goal_, cBest_};
    }

    double radius() const
    {
        const double mInf = std::isfinite(cBest_)
                                ? std::min(informedMeasure(informed()), w_.bounds().measure())
                                : w_.bounds().measure();
        return rggRadius(samples_.size(), w_.dim(), mInf, maxPriorityMeasure_, cfg_.etaRewire);
    }

    void addSample(const State &s)
    {
        if (sampleSet_.insert(s).second)
            samples_.push_back(s);
    }

    /** Adds a targeted sample unless the neighborhood is already covered.
        Lens and surrogate draws concentrate in tiny regions; admitting them
        unchecked drives the local graph degree quadratic while the connection
        radius needs only one stepping stone per half radius. */
    bool addSampleSpaced(const State &s)
    {
        const double d2Min = 0.25 * radius() * radius();
        const std::size_t n = s.dim();
        for (const State &t : samples_)
        {
            double d2 = 0.0;
            for (std::size_t i = 0; i < n; ++i)
            {
                const double d = t[i] - s[i];
                d2 += d * d;
                if (d2 >= d2Min)
                    break;
            }
            if (d2 < d2Min)
                return false;
        }
        addSample(s);
        return true;
    }

    /** Indices into samples_ of v's connection candidates. Cached per vertex
        and extended append-only as samples arrive; entries admitted under an
        earlier, larger radius are kept, which can only add candidates. The
        cache is dropped whenever samples_ is compacted. */
    const std::vector<std::uint32_t> &neighborIdx(const State &v)
    {
        auto &entry = nbCache_[v];
        const std::size_t total = samples_.size();
        if (entry.scanned >= total)
            return entry.idx;
        const double r2 = radius() * radius();
        const std::size_t n = v.dim();
        for (std::size_t si = entry.scanned; si < total; ++si)
        {
            const State &s = samples_[si];
            if (s == v)
                continue;
            double d2 = 0.0;
            for (std::size_t i = 0; i < n; ++i)
            {
                const double d = s[i] - v[i];
                d2 += d * d;
            }
            if (d2 <= r2)
                entry.idx.push_back(static_cast<std::uint32_t>(si));
        }
        entry.scanned = total;
        return entry.idx;
    }

    double dTanhValue(const State &x)
    {
        const auto it = dCache_.find(x);
        if (it != dCache_.end())
            return it->second;
        double sigma = kInf;
        std::size_t offset = 0;
        for (const KinematicChain &chain : motion_->chains)
        {
            std::vector<double> part(chain.jointCount());
            for (std::size_t j = 0; j < part.size(); ++j)
                part[j] = x[offset + j];
            offset += part.size();
            sigma = std::min(sigma, minSingularValue(chain.taskJacobian(State(part))));
        }
        const double v = dTanh(sigma, motion_->manip);
        dCache_.emplace(x, v);
        return v;
    }

    double hReverse(const State &x) const
    {
        return reverse_.contains(x) ? reverse_.label(x) : heur_.hHat(x);
    }

    bool knownInvalid(const State &a, const State &b) const
    {
        return invalid_.contains(a, b);
    }

    // True while the current reverse era still has in-scope work: it is either
    // growing toward the start or filling out the corridor band around the
    // established route.
    bool reverseEraAlive() const
    {
        if (!couldImproveSolution(qR_, cBest_, heur_))
            return false;
        if (!reverse_.contains(start_))
            return true;
        return qR_.top().key.key1 <= bandR_;
    }

    // The forward search only consumes an edge once the reverse search has
    // labeled its target; popping earlier would order the queue on fallback
    // heuristics.
    bool forwardReady()
    {
        if (qF_.empty())
            return false;
        if (reverse_.contains(qF_.top().edge.target))
            return true;
        // A pending restart is paid only here, the first time the forward
        // search would consult guidance the stale tree cannot give; runs of
        // consecutive edge failures collapse into one rebuild.
        if (dirtyReverse_)
        {
            restartReverseSearch();
            return false;
        }
        // While the era is still labeling, hold the entry; the label may yet
        // arrive.
        if (reverseEraAlive())
            return false;
        // The era labeled every target with a competitive through-cost and
        // left this one out, so the entry only looked attractive under its
        // fallback key. Discard it; if the region becomes relevant a later era
        // re-derives the edge from the tree.
        qF_.pop();
        return false;
    }

    // Entries that cannot beat the incumbent are dropped at push time; they
    // would only sit in the queue until couldImproveSolution rejects them.
    bool underBound(const QueueKey &k) const
    {
        if (!std::isfinite(cBest_))
            return true;
        return k.key1 < heur_.alpha * cBest_ + (1.0 - heur_.alpha) * heur_.dTanh(goal_);
    }

    void pushReverse(const Edge &e)
    {
        const QueueKey k = reverseKey(e, heur_);
        if (underBound(k))
            qR_.push(e, k);
    }

    void pushForward(const Edge &e, double gSource, double effortSource)
    {
        const QueueKey k = forwardKey(e, heur_, gSource, effortSource, hReverse(e.target));
        if (underBound(k))
            qF_.push(e, k);
    }

    bool knownValid(const State &a, const State &b) const
    {
        return valid_.contains(a, b);
    }

    // Full edge check memoized across both searches and all eras.
    bool cachedEdgeValid(const State &a, const State &b)
    {
        if (invalid_.contains(a, b))
            return false;
        if (valid_.contains(a, b))
            return true;
        const bool ok = w_.isEdgeValid(a, b);
        (ok ? valid_ : invalid_).insert(a, b);
        return ok;
    }

    std::function<bool(const State &, const State &)> validator()
    {
        return [this](const State &a, const State &b) { return cachedEdgeValid(a, b); };
    }

    void reverseStep()
    {
        if (qR_.empty())
            return;
        const Edge e = qR_.pop().edge;
        const double ls = reverse_.label(e.source);
        if (!std::isfinite(ls))
            return;
        const double c = heur_.cHat(e.source, e.target);
        if (ls + c >= reverse_.label(e.target))
            return;
        if (knownInvalid(e.source, e.target))
            return;
        if (!knownValid(e.source, e.target) && !lazyCheck(e, w_))
        {
            invalid_.insert(e.source, e.target);
            return;
        }
        reverse_.setEdge(e.target, e.source, ls + c);
        // Labeling the start fixes this era's scope: keep popping until the
        // frontier exceeds the best known route by the band factor, so a
        // corridor of plausible detours gets labels, then suspend.
        if (e.target == start_)
            bandR_ = kReverseBand * (heur_.alpha * reverse_.label(start_) +
                                     (1.0 - heur_.alpha) * heur_.dTanh(start_));
        expandReverse(e.target);
    }

    void expandReverse(const State &v)
    {
        // Expanding once per search era keeps the queue finite; later label
        // improvements still commit but do not re-push the neighborhood.
        if (!justDoneR_.insert(v).second)
            return;
        const double lv = reverse_.label(v);
        for (const std::uint32_t si : neighborIdx(v))
        {
            const State &nb = samples_[si];
            if (knownInvalid(v, nb))
                continue;
            if (lv + heur_.cHat(v, nb) >= reverse_.label(nb))
                continue;
            pushReverse(Edge{v, nb});
        }
        if (!cfg_.useJustEdge || v == reverse_.root())
            return;
        const JustEdgeResult je = justEdge(v, reverse_, w_, cfg_.tau, cfg_.surrogates, {}, validator());
        for (const State &a : je.ancestors)
        {
            if (je.surrogate && a == *je.surrogate)
            {
                if (addSampleSpaced(a))
                    pushReverse(Edge{v, a});
            }
            else if (reverse_.label(a) + heur_.cHat(a, v) < lv)
            {
                pushReverse(Edge{a, v});
            }
        }
    }

    void forwardStep()
    {
        if (qF_.empty())
            return;
        const Edge e = qF_.pop().edge;
        const double gs = forward_.label(e.source);
        if (!std::isfinite(gs))
            return;
        const double c = heur_.cHat(e.source, e.target);
        if (gs + c >= forward_.label(e.target))
            return;
        if (knownInvalid(e.source, e.target))
            return;

        if (!knownValid(e.source, e.target) && !w_.isEdgeValid(e.source, e.target))
        {
            invalid_.insert(e.source, e.target);
            ledger_.failedEdges.push_back(e);
            if (cfg_.useJustSample)
            {
                for (const Edge &fe : ledger_.failedEdges)
                    maxPriorityMeasure_ = std::max(
                        maxPriorityMeasure_,
                        priorityRegionMeasure(w_.dim(), heur_.cHat(fe.source, fe.target)));
                for (const State &s : justSample(ledger_, w_, informed(), cfg_.perEdge, rng_))
                    addSampleSpaced(s);
            }
            else
            {
                ledger_.failedEdges.clear();
            }
            // The next reverse era folds the lens samples in and reroutes
            // around the blacklisted edge; without that redirect the forward
            // search keeps buying full checks in the same blocked channel.
            dirtyReverse_ = true;
            return;
        }

        valid_.insert(e.source, e.target);
        forward_.setEdge(e.target, e.source, gs + c);
        effort_[e.target] = effort_.at(e.source) + heur_.eBar(e.source, e.target);
        if (e.target == goal_)
            emitFromTree();
        expandForward(e.target, true);
    }

    void expandForward(const State &v, bool fresh)
    {
        const double gv = forward_.label(v);
        const double ev = effort_.at(v);
        for (const std::uint32_t si : neighborIdx(v))
        {
            const State &nb = samples_[si];
            if (knownInvalid(v, nb))
                continue;
            if (gv + heur_.cHat(v, nb) >= forward_.label(nb))
                continue;
            pushForward(Edge{v, nb}, gv, ev);
        }
        if (!fresh || !cfg_.useJustEdge || v == forward_.root() || !justDoneF_.insert(v).second)
            return;
        const JustEdgeResult je = justEdge(v, forward_, w_, cfg_.tau, cfg_.surrogates, {}, validator());
        for (const State &a : je.ancestors)
        {
            if (je.surrogate && a == *je.surrogate)
            {
                if (addSampleSpaced(a))
                    pushForward(Edge{v, a}, gv, ev);
            }
            else
            {
                const double ga = forward_.label(a);
                if (ga + heur_.cHat(a, v) < gv)
                    pushForward(Edge{a, v}, ga, effort_.at(a));
            }
        }
    }

    void emitFromTree()
    {
        std::vector<State> wp;
        for (std::optional<State> cur = goal_; cur; cur = forward_.parent(*cur))
            wp.push_back(*cur);
        std::reverse(wp.begin(), wp.end());
        if (wp.size() < 2 || !(wp.front() == start_))
            return;
        emitPath(Path(std::move(wp)));
    }

    void emitPath(const Path &p)
    {
        const double c = p.totalCost();
        if (c >= cBest_)
            return;
        cBest_ = c;
        best_ = p;
        const double el = elapsed();
        trace_.emplace_back(el, c);
        if (cb_)
            cb_(p, el);
    }

    void restartReverseSearch()
    {
        dirtyReverse_ = false;
        bandR_ = kInf;
        reverse_ = SearchTree(goal_);
        qR_.clear();
        justDoneR_.clear();
        expandReverse(goal_);
        // The direct route is always worth one try regardless of the
        // connection radius; in an empty world it establishes immediately.
        if (!knownInvalid(goal_, start_))
            pushReverse(Edge{goal_, start_});
    }

    void rebuildForwardQueue()
    {
        qF_.clear();
        for (const State &v : forward_.vertices())
            expandForward(v, false);
        if (!knownInvalid(start_, goal_))
            pushForward(Edge{start_, goal_}, 0.0, 0.0);
    }

    void batchBoundary()
    {
        if (best_)
        {
            std::vector<State> prot = best_->waypoints();
            prot.push_back(start_);
            prot.push_back(goal_);
            prune(samples_, forward_, cBest_, heur_, prot);
            nbCache_.clear();
            sampleSet_.clear();
            sampleSet_.insert(samples_.begin(), samples_.end());
            std::unordered_map<State, double, StateHash> kept;
            for (const State &v : forward_.vertices())
            {
                const auto it = effort_.find(v);
                if (it != effort_.end())
                    kept.emplace(it->first, it->second);
            }
            effort_ = std::move(kept);
        }
        const SampleLedger led = biasSample(w_, informed(), cfg_.batchSize, selfOk_, rng_);
        for (const State &s : led.freeSamples)
            addSample(s);
        restartReverseSearch();
        rebuildForwardQueue();
    }

    const ObstacleWorld &w_;
    const PlannerConfig &cfg_;
    const std::optional<MotionContext> &motion_;
    Rng &rng_;
    const SolutionCallback &cb_;
    State start_;
    State goal_;
    HeuristicSet heur_;
    SearchTree forward_;
    SearchTree reverse_;
    EdgeQueue qF_;
    EdgeQueue qR_;
    struct NeighborCache
    {
        std::size_t scanned{0};
        std::vector<std::uint32_t> idx;
    };

    std::vector<State> samples_;
    std::unordered_map<State, NeighborCache, StateHash> nbCache_;
    std::unordered_set<State, StateHash> sampleSet_;
    std::unordered_map<State, double, StateHash> effort_;
    EdgeSet invalid_;
    EdgeSet valid_;
    std::unordered_set<State, StateHash> justDoneF_;
    std::unordered_set<State, StateHash> justDoneR_;
    bool dirtyReverse_{false};
    double bandR_{kInf};
    std::unordered_map<State, double, StateHash> dCache_;
    std::function<bool(const State &)> selfOk_;
    SampleLedger ledger_;
    double cMin_{0.0};
    double cBest_{kInf};
    std::optional<Path> best_;
    double maxPriorityMeasure_{0.0};
    std::vector<std::pair<double, double>> trace_;
    std::uint64_t iterations_{0};
    std::chrono::steady_clock::time_point t0_;
};

}  // namespace

Planner::Planner(ObstacleWorld world, PlannerConfig cfg, std::optional<MotionContext> motion)
  : world_(std::move(world)), cfg_(cfg), motion_(std::move(motion))
{
    if (cfg_.batchSize < 1)
        throw ConfigurationError("Planner: batchSize must be at least 1");
    if (cfg_.tau < 0)
        throw ConfigurationError("Planner: tau must be non-negative");
    if (cfg_.surrogates < 0)
        throw ConfigurationError("Planner: surrogates must be non-negative");
    if (cfg_.perEdge < 1)
        throw ConfigurationError("Planner: perEdge must be at least 1");
    if (!(cfg_.alpha >= 0.0 && cfg_.alpha <= 1.0))
        throw ConfigurationError("Planner: alpha must lie in [0, 1]");
    if (cfg_.etaRewire <= 1.0)
        throw ConfigurationError("Planner: etaRewire must exceed 1");
    if (!(cfg_.maxTime > 0.0) && cfg_.maxIterations == 0)
        throw ConfigurationError("Planner: either maxTime or maxIterations must bound the run");
    if (cfg_.useMotionPerformance && !motion_)
        throw ConfigurationError("Planner: motion-performance mode needs a kinematic context");
    if (motion_)
    {
        if (motion_->chains.empty() || motion_->chains.size() > 2)
            throw ConfigurationError("Planner: kinematic context needs one or two chains");
        std::size_t joints = 0;
        for (const KinematicChain &chain : motion_->chains)
            joints += chain.jointCount();
        if (joints != world_.dim())
            throw ConfigurationError("Planner: chain joints do not add up to the planning dimension");
    }
}

PlanResult Planner::solve(const State &start, const State &goal, Rng &rng, const SolutionCallback &onSolution)
{
    if (start.dim() != world_.dim() || goal.dim() != world_.dim())
        throw ConfigurationError("Planner::solve: start/goal dimension does not match the world");
    if (!world_.isStateValid(start) || !world_.isStateValid(goal))
        throw ConfigurationError("Planner::solve: start or goal is invalid");
    if (motion_)
    {
        if (!isSelfCollisionFree(motion_->chains, start, motion_->scdf) ||
            !isSelfCollisionFree(motion_->chains, goal, motion_->scdf))
            throw ConfigurationError("Planner::solve: start or goal is in self-collision");
    }
    Engine engine(world_, cfg_, motion_, start, goal, rng, onSolution);
    return engine.run();
}

PlanResult plan(const ObstacleWorld &world, const State &start, const State &goal, const PlannerConfig &cfg,
                Rng &rng, const SolutionCallback &onSolution, const std::optional<MotionContext> &motion)
{
    Planner planner(world, cfg, motion);
    return planner.solve(start, goal, rng, onSolution);
}

}  // namespace jitstar
