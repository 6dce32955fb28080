#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace jitstar
{

/** \brief Base class for all library errors. */
class Exception : public std::runtime_error
{
public:
    explicit Exception(const std::string &message) : std::runtime_error(message)
    {
    }
};

/** \brief Two states (or a state and a world) disagree on dimension. */
class DimensionError : public Exception
{
public:
    using Exception::Exception;
};

/** \brief A scalar argument lies outside its allowed range. */
class RangeError : public Exception
{
public:
    using Exception::Exception;
};

/** \brief A problem, world, or CLI configuration is invalid. */
class ConfigurationError : public Exception
{
public:
    using Exception::Exception;
};

/** \brief Serialized input could not be parsed or failed validation. */
class ParseError : public ConfigurationError
{
public:
    using ConfigurationError::ConfigurationError;
};

/** \brief An iterative numerical procedure failed to converge. */
class NumericalError : public Exception
{
public:
    using Exception::Exception;
};

/** \brief A point in R^n.

    States are plain values compared by exact coordinate equality. All
    coordinates are required to be finite. */
class State
{
public:
    State() = default;

    explicit State(std::vector<double> coords);

    State(std::initializer_list<double> coords);

    /** \brief The origin of R^dim. */
    static State zeros(std::size_t dim);

    std::size_t dim() const
    {
        return coords_.size();
    }

    double operator[](std::size_t i) const
    {
        return coords_[i];
    }

    const std::vector<double> &coords() const
    {
        return coords_;
    }

    bool operator==(const State &other) const
    {
        return hash_ == other.hash_ && coords_ == other.coords_;
    }

    bool operator!=(const State &other) const
    {
        return !(*this == other);
    }

    std::size_t hash() const
    {
        return hash_;
    }

private:
    std::vector<double> coords_;
    // Coordinates never change after construction, so the hash is computed
    // once up front; container lookups on State are hot paths.
    std::size_t hash_{0};
};

/** \brief Hash over the exact bit patterns of the coordinates, consistent
    with State's exact equality. */
struct StateHash
{
    std::size_t operator()(const State &s) const
    {
        return s.hash();
    }
};

/** \brief Strict lexicographic order over coordinates; a total order used to
    canonicalize direction-independent constructs such as undirected edges. */
bool lexLess(const State &a, const State &b);

/** \brief A directed candidate connection between two states. */
struct Edge
{
    State source;
    State target;

    bool operator==(const Edge &other) const
    {
        return source == other.source && target == other.target;
    }
};

struct EdgeHash
{
    std::size_t operator()(const Edge &e) const;
};

/** \brief Euclidean distance. Throws DimensionError on mismatched dims. */
double distance(const State &a, const State &b);

/** \brief Linear interpolation a + t(b - a) for t in [0, 1]. */
State interpolate(const State &a, const State &b, double t);

/** \brief Sum of consecutive segment lengths; requires >= 2 waypoints. */
double pathCost(const std::vector<State> &waypoints);

/** \brief A waypoint sequence with its cached Euclidean length. */
class Path
{
public:
    explicit Path(std::vector<State> waypoints);

    const std::vector<State> &waypoints() const
    {
        return waypoints_;
    }

    double totalCost() const
    {
        return totalCost_;
    }

private:
    std::vector<State> waypoints_;
    double totalCost_;
};

inline double pathCost(const Path &p)
{
    return p.totalCost();
}

}  // namespace jitstar
