#include "jitstar/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>
#include <utility>

#include "jitstar/sampling.hpp"

namespace jitstar
{

QueueKey reverseKey(const Edge &e, const HeuristicSet &h)
{
    const double key1 = h.alpha * (h.hHat(e.source) + h.cHat(e.source, e.target) + h.gHat(e.target)) +
                        (1.0 - h.alpha) * h.dTanh(e.target);
    const double key2 = h.eBar(h.goal, e.source) + h.eBar(e.source, e.target) + h.dBar(e.target);
    return {key1, key2};
}

QueueKey forwardKey(const Edge &e, const HeuristicSet &h, double gSource, double effortSource,
                    double hReverseTarget)
{
    const double key1 = h.alpha * (gSource + h.cHat(e.source, e.target) + hReverseTarget) +
                        (1.0 - h.alpha) * h.dTanh(e.target);
    const double key2 = effortSource + h.eBar(e.source, e.target);
    return {key1, key2};
}

bool EdgeQueue::later(const Slot &a, const Slot &b)
{
    if (a.key.key1 != b.key.key1)
        return a.key.key1 > b.key.key1;
    if (a.key.key2 != b.key.key2)
        return a.key.key2 > b.key.key2;
    return a.seq > b.seq;
}

void EdgeQueue::push(Edge e, QueueKey k)
{
    // Reclaim hollowed-out pool slots once they dominate the live ones.
    if (pool_.size() >= 1024 && pool_.size() > 4 * heap_.size())
    {
        std::vector<Entry> live;
        live.reserve(heap_.size());
        for (Slot &s : heap_)
        {
            live.push_back(std::move(pool_[s.idx]));
            s.idx = static_cast<std::uint32_t>(live.size() - 1);
        }
        pool_ = std::move(live);
    }
    const std::uint64_t seq = nextSeq_++;
    pool_.push_back({std::move(e), k, seq});
    heap_.push_back({k, seq, static_cast<std::uint32_t>(pool_.size() - 1)});
    siftUp(heap_.size() - 1);
}

EdgeQueue::Entry EdgeQueue::pop()
{
    if (heap_.empty())
        throw Exception("EdgeQueue::pop on an empty queue");
    // The pool slot is hollowed out but stays in place; slots are reclaimed
    // in bulk by clear().
    Entry out = std::move(pool_[heap_.front().idx]);
    heap_.front() = heap_.back();
    heap_.pop_back();
    if (!heap_.empty())
        siftDown(0);
    return out;
}

const EdgeQueue::Entry &EdgeQueue::top() const
{
    if (heap_.empty())
        throw Exception("EdgeQueue::top on an empty queue");
    return pool_[heap_.front().idx];
}

void EdgeQueue::clear()
{
    heap_.clear();
    pool_.clear();
}

void EdgeQueue::siftUp(std::size_t i)
{
    while (i > 0)
    {
        const std::size_t up = (i - 1) / 2;
        if (!later(heap_[up], heap_[i]))
            break;
        std::swap(heap_[up], heap_[i]);
        i = up;
    }
}

void EdgeQueue::siftDown(std::size_t i)
{
    const std::size_t n = heap_.size();
    while (true)
    {
        std::size_t best = i;
        const std::size_t l = 2 * i + 1, r = 2 * i + 2;
        if (l < n && later(heap_[best], heap_[l]))
            best = l;
        if (r < n && later(heap_[best], heap_[r]))
            best = r;
        if (best == i)
            return;
        std::swap(heap_[i], heap_[best]);
        i = best;
    }
}

SearchTree::SearchTree(State root) : root_(std::move(root))
{
    map_.emplace(root_, VertexData{std::nullopt, 0.0, {}});
    order_.push_back(root_);
}

bool SearchTree::contains(const State &x) const
{
    return map_.count(x) > 0;
}

double SearchTree::label(const State &x) const
{
    const auto it = map_.find(x);
    return it == map_.end() ? std::numeric_limits<double>::infinity() : it->second.label;
}

std::optional<State> SearchTree::parent(const State &x) const
{
    const auto it = map_.find(x);
    return it == map_.end() ? std::nullopt : it->second.parent;
}

void SearchTree::detachFromParent(const State &child, const State &parent)
{
    auto &siblings = map_.at(parent).children;
    const auto it = std::find(siblings.begin(), siblings.end(), child);
    if (it != siblings.end())
        siblings.erase(it);
}

void SearchTree::setEdge(const State &child, const State &parent, double label)
{
    if (child == root_)
        throw Exception("SearchTree::setEdge: the root cannot be re-parented");
    const auto pIt = map_.find(parent);
    if (pIt == map_.end())
        throw Exception("SearchTree::setEdge: parent is not in the tree");

    const auto cIt = map_.find(child);
    if (cIt == map_.end())
    {
        map_.emplace(child, VertexData{parent, label, {}});
        order_.push_back(child);
    }
    else
    {
        if (cIt->second.parent)
            detachFromParent(child, *cIt->second.parent);
        cIt->second.parent = parent;
        cIt->second.label = label;
    }
    map_.at(parent).children.push_back(child);
}

std::vector<State> SearchTree::removeSubtree(const State &v)
{
    if (v == root_)
        throw Exception("SearchTree::removeSubtree: the root cannot be removed");
    const auto it = map_.find(v);
    if (it == map_.end())
        return {};
    if (it->second.parent)
        detachFromParent(v, *it->second.parent);

    std::vector<State> removed;
    std::vector<State> stack{v};
    while (!stack.empty())
    {
        const State x = std::move(stack.back());
        stack.pop_back();
        const auto xIt = map_.find(x);
        if (xIt == map_.end())
            continue;
        for (const State &c : xIt->second.children)
            stack.push_back(c);
        map_.erase(xIt);
        removed.push_back(x);
    }
    return removed;
}

std::vector<State> SearchTree::vertices() const
{
    std::vector<State> out;
    out.reserve(map_.size());
    std::unordered_set<State, StateHash> seen;
    for (const State &x : order_)
        if (map_.count(x) > 0 && seen.insert(x).second)
            out.push_back(x);
    return out;
}

JustEdgeResult justEdge(const State &x, const SearchTree &tree, const ObstacleWorld &w, int tau, int m,
                        std::vector<State> baseline,
                        const std::function<bool(const State &, const State &)> &edgeValid)
{
    if (!tree.contains(x))
        throw Exception("justEdge: x is not in the tree");

    const auto valid = [&](const State &a, const State &b) {
        return edgeValid ? edgeValid(a, b) : w.isEdgeValid(a, b);
    };

    JustEdgeResult result;
    result.neighbors = std::move(baseline);

    State xPrev = x;
    std::optional<State> xTmp = tree.parent(x);
    for (int cStep = 0; xTmp && cStep <= tau; ++cStep)
    {
        if (valid(x, *xTmp))
        {
            result.ancestors.push_back(*xTmp);
            xPrev = *xTmp;
            xTmp = tree.parent(*xTmp);
        }
        else
        {
            // Blocked ancestor: probe m evenly spaced surrogates between the
            // last visible ancestor and the blocked one, keep the first that
            // connects to x, and stop the walk either way.
            for (int k = 1; k <= m; ++k)
            {
                const State s = interpolate(xPrev, *xTmp, static_cast<double>(k) / (m + 1));
                if (valid(x, s))
                {
                    result.ancestors.push_back(s);
                    result.surrogate = s;
                    break;
                }
            }
            xTmp.reset();
        }
    }

    std::unordered_set<State, StateHash> seen(result.neighbors.begin(), result.neighbors.end());
    seen.insert(x);
    for (const State &a : result.ancestors)
        if (seen.insert(a).second)
            result.neighbors.push_back(a);
    return result;
}

double rggRadius(std::size_t q, std::size_t n, double measureInformed, double measurePriority, double eta)
{
    if (q < 2)
        throw RangeError("rggRadius: needs at least two samples");
    if (n == 0)
        throw RangeError("rggRadius: dimension must be positive");
    if (eta <= 1.0)
        throw RangeError("rggRadius: eta must exceed 1");
    const double nd = static_cast<double>(n);
    const double measure = std::max(measureInformed, measurePriority);
    const double base = 2.0 * (1.0 + 1.0 / nd) * (measure / unitBallMeasure(n)) *
                        (std::log(static_cast<double>(q)) / static_cast<double>(q));
    return eta * std::pow(base, 1.0 / nd);
}

bool lazyCheck(const Edge &e, const ObstacleWorld &w)
{
    return w.isStateValid(e.source) && w.isStateValid(e.target) &&
           w.isStateValid(interpolate(e.source, e.target, 0.5));
}

bool couldImproveSolution(const EdgeQueue &q, double cBest, const HeuristicSet &h)
{
    if (q.empty())
        return false;
    if (!std::isfinite(cBest))
        return true;
    const double bestKey = h.alpha * cBest + (1.0 - h.alpha) * h.dTanh(h.goal);
    return q.top().key.key1 < bestKey;
}

std::size_t prune(std::vector<State> &samples, SearchTree &forwardTree, double cBest, const HeuristicSet &h,
                  const std::vector<State> &protectedStates)
{
    if (!std::isfinite(cBest))
        return 0;

    const std::unordered_set<State, StateHash> keepAlways(protectedStates.begin(), protectedStates.end());
    const auto failing = [&](const State &x) {
        return h.gHat(x) + h.hHat(x) > cBest && keepAlways.count(x) == 0;
    };

    // Subtrees rooted at a failing vertex come out of the tree; descendants
    // that still satisfy the bound survive below as plain samples.
    for (const State &v : forwardTree.vertices())
        if (!(v == forwardTree.root()) && forwardTree.contains(v) && failing(v))
            forwardTree.removeSubtree(v);

    const std::size_t before = samples.size();
    samples.erase(std::remove_if(samples.begin(), samples.end(), failing), samples.end());
    return before - samples.size();
}

}  // namespace jitstar
