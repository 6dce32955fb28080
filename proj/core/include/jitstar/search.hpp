#pragma once

#include "jitstar/state.hpp"
#include "jitstar/world.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

namespace jitstar
{

/** \brief Heuristic bundle shared by both searches.

    hHat/gHat/cHat are Euclidean and therefore admissible; eBar estimates the
    number of collision probes a segment costs at the world's check
    resolution. dTanhOf is the motion-performance term and defaults to zero
    when no callback is attached. */
struct HeuristicSet
{
    State start;
    State goal;
    double checkResolution;
    double alpha{1.0};
    std::function<double(const State &)> dTanhOf;

    double hHat(const State &x) const
    {
        return distance(x, goal);
    }
    double gHat(const State &x) const
    {
        return distance(start, x);
    }
    double cHat(const State &a, const State &b) const
    {
        return distance(a, b);
    }
    double eBar(const State &a, const State &b) const
    {
        return std::ceil(distance(a, b) / checkResolution);
    }
    double dBar(const State &x) const
    {
        return eBar(start, x);
    }
    double dTanh(const State &x) const
    {
        return dTanhOf ? dTanhOf(x) : 0.0;
    }
};

/** \brief Lexicographic two-level queue key. */
struct QueueKey
{
    double key1;
    double key2;

    bool operator<(const QueueKey &other) const
    {
        if (key1 != other.key1)
            return key1 < other.key1;
        return key2 < other.key2;
    }
};

/** \brief Reverse-search key of edge (x_s, x_t):
    key1 = alpha (hHat(x_s) + cHat + gHat(x_t)) + (1-alpha) dTanh(x_t),
    key2 = eBar(goal, x_s) + eBar(x_s, x_t) + dBar(x_t).
    Both parts use static heuristics only, so entries never go stale. */
QueueKey reverseKey(const Edge &e, const HeuristicSet &h);

/** \brief Forward-search key of edge (x_s, x_t):
    key1 = alpha (g(x_s) + cHat + hReverseTarget) + (1-alpha) dTanh(x_t),
    key2 = effortSource + eBar(x_s, x_t),
    where hReverseTarget is the reverse-tree cost-to-goal label of x_t when
    available and hHat(x_t) otherwise. */
QueueKey forwardKey(const Edge &e, const HeuristicSet &h, double gSource, double effortSource,
                    double hReverseTarget);

/** \brief Min-priority queue of edges ordered by (key1, key2, insertion).

    The heap holds fixed-size slots (key, sequence, pool index) so sifts never
    copy edge states; the edges themselves live in a side pool until popped. */
class EdgeQueue
{
public:
    struct Entry
    {
        Edge edge;
        QueueKey key;
        std::uint64_t seq;
    };

    void push(Edge e, QueueKey k);
    Entry pop();
    const Entry &top() const;
    bool empty() const
    {
        return heap_.empty();
    }
    std::size_t size() const
    {
        return heap_.size();
    }
    void clear();

private:
    struct Slot
    {
        QueueKey key;
        std::uint64_t seq;
        std::uint32_t idx;
    };

    static bool later(const Slot &a, const Slot &b);
    void siftUp(std::size_t i);
    void siftDown(std::size_t i);

    std::vector<Slot> heap_;
    std::vector<Entry> pool_;
    std::uint64_t nextSeq_{0};
};

/** \brief Rooted tree over states with cost labels.

    The label is the cost-to-come in a forward tree and the cost-to-goal in a
    reverse tree; the root's label is 0. vertices() iterates in first
    insertion order, which keeps every consumer deterministic. */
class SearchTree
{
public:
    explicit SearchTree(State root);

    const State &root() const
    {
        return root_;
    }
    bool contains(const State &x) const;
    /** \brief Cost label of x, +infinity when x is not in the tree. */
    double label(const State &x) const;
    /** \brief Parent of x; empty for the root or states outside the tree. */
    std::optional<State> parent(const State &x) const;
    /** \brief Attach or re-parent child under parent with the given label.
        The parent must already be in the tree and the child cannot be the
        root. */
    void setEdge(const State &child, const State &parent, double label);
    /** \brief Remove v and its descendants; returns them in removal order.
        The root cannot be removed. */
    std::vector<State> removeSubtree(const State &v);
    std::vector<State> vertices() const;
    std::size_t size() const
    {
        return map_.size();
    }

private:
    struct VertexData
    {
        std::optional<State> parent;
        double label;
        std::vector<State> children;
    };

    void detachFromParent(const State &child, const State &parent);

    State root_;
    std::unordered_map<State, VertexData, StateHash> map_;
    std::vector<State> order_;
};

/** \brief Result of the just-in-time ancestor expansion around a committed
    vertex. neighbors is the full set handed to the caller (baseline r-disc
    neighbors followed by the ancestors, deduplicated); ancestors holds the
    tree walk plus at most one sampled surrogate, which is also reported
    separately because it is a brand-new state. */
struct JustEdgeResult
{
    std::vector<State> neighbors;
    std::vector<State> ancestors;
    std::optional<State> surrogate;
};

/** \brief Walks up to tau+1 ancestors of x, keeping those with a fully
    collision-free straight connection to x. At the first blocked ancestor,
    m evenly spaced surrogate states on the segment between the last visible
    ancestor and the blocked one are probed and the first one visible from x
    is kept; the walk then stops. Called on the root it returns the baseline
    untouched. An edgeValid override replaces the world's full edge check,
    letting callers memoize repeated probes. */
JustEdgeResult justEdge(const State &x, const SearchTree &tree, const ObstacleWorld &w, int tau, int m,
                        std::vector<State> baseline,
                        const std::function<bool(const State &, const State &)> &edgeValid = {});

/** \brief Rewiring radius for a q-sample graph in dimension n:
    eta (2 (1 + 1/n) (max(measureInformed, measurePriority) / zeta_n)
        (log q / q))^(1/n). Requires q >= 2 and eta > 1. */
double rggRadius(std::size_t q, std::size_t n, double measureInformed, double measurePriority, double eta);

/** \brief Sparse validity filter: probes only the endpoints and midpoint.
    May pass edges a full check rejects, never the other way around. */
bool lazyCheck(const Edge &e, const ObstacleWorld &w);

/** \brief True iff the queue's best entry could still beat the current
    solution: key1 < alpha cBest + (1-alpha) dTanh(goal). An infinite cBest
    makes any nonempty queue improving. */
bool couldImproveSolution(const EdgeQueue &q, double cBest, const HeuristicSet &h);

/** \brief Removes samples and forward-tree subtrees whose heuristic bound
    gHat + hHat exceeds cBest. Protected states (the solution path and the
    problem endpoints) are kept; demoted subtree vertices that still satisfy
    the bound stay in the sample set. Returns the number of samples removed.
    An infinite cBest is a no-op. */
std::size_t prune(std::vector<State> &samples, SearchTree &forwardTree, double cBest, const HeuristicSet &h,
                  const std::vector<State> &protectedStates);

}  // namespace jitstar
