#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "jitstar/world.hpp"

namespace jitstar
{

namespace
{

// The writer is hand-rolled so every double is printed with 17 significant
// digits; parsing such text recovers the exact bit pattern, which makes a
// dump-load-dump cycle byte identical.
std::string formatDouble(double v)
{
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

std::string formatArray(const State &s)
{
    std::string out = "[";
    for (std::size_t i = 0; i < s.dim(); ++i)
    {
        if (i > 0)
        {
            out += ", ";
        }
        out += formatDouble(s[i]);
    }
    out += "]";
    return out;
}

State parseStateArray(const nlohmann::json &node, std::size_t expectedDim, const char *what)
{
    if (!node.is_array() || node.size() != expectedDim)
    {
        throw ParseError(std::string("scenario: '") + what + "' must be an array of length dim");
    }
    std::vector<double> coords;
    coords.reserve(node.size());
    for (const auto &value : node)
    {
        if (!value.is_number())
        {
            throw ParseError(std::string("scenario: '") + what + "' must contain numbers");
        }
        coords.push_back(value.get<double>());
    }
    return State(std::move(coords));
}

}  // namespace

std::string scenarioToJson(const Scenario &scenario)
{
    const ObstacleWorld &world = scenario.world;
    std::ostringstream out;
    out << "{\n";
    out << "  \"dim\": " << world.dim() << ",\n";
    out << "  \"bounds\": {\n";
    out << "    \"lower\": " << formatArray(world.bounds().lower()) << ",\n";
    out << "    \"upper\": " << formatArray(world.bounds().upper()) << "\n";
    out << "  },\n";
    out << "  \"obstacles\": [";
    for (std::size_t i = 0; i < world.obstacles().size(); ++i)
    {
        const auto &obstacle = world.obstacles()[i];
        out << (i == 0 ? "\n" : ",\n");
        out << "    {\"lower\": " << formatArray(obstacle.lower()) << ", \"upper\": " << formatArray(obstacle.upper())
            << "}";
    }
    out << (world.obstacles().empty() ? "],\n" : "\n  ],\n");
    out << "  \"start\": " << formatArray(scenario.start) << ",\n";
    out << "  \"goal\": " << formatArray(scenario.goal) << ",\n";
    out << "  \"check_resolution\": " << formatDouble(world.checkResolution()) << "\n";
    out << "}\n";
    return out.str();
}

Scenario scenarioFromJson(const std::string &text)
{
    nlohmann::json doc;
    try
    {
        doc = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ParseError(std::string("scenario: invalid JSON: ") + e.what());
    }
    if (!doc.is_object())
    {
        throw ParseError("scenario: top level must be an object");
    }
    for (const char *key : {"dim", "bounds", "obstacles", "start", "goal", "check_resolution"})
    {
        if (!doc.contains(key))
        {
            throw ParseError(std::string("scenario: missing key '") + key + "'");
        }
    }
    if (!doc["dim"].is_number_unsigned() || doc["dim"].get<std::size_t>() == 0)
    {
        throw ParseError("scenario: 'dim' must be a positive integer");
    }
    const auto dim = doc["dim"].get<std::size_t>();

    const auto &boundsNode = doc["bounds"];
    if (!boundsNode.is_object() || !boundsNode.contains("lower") || !boundsNode.contains("upper"))
    {
        throw ParseError("scenario: 'bounds' must hold 'lower' and 'upper'");
    }
    HyperRect bounds{parseStateArray(boundsNode["lower"], dim, "bounds.lower"),
                     parseStateArray(boundsNode["upper"], dim, "bounds.upper")};

    const auto &obstaclesNode = doc["obstacles"];
    if (!obstaclesNode.is_array())
    {
        throw ParseError("scenario: 'obstacles' must be an array");
    }
    std::vector<HyperRect> obstacles;
    obstacles.reserve(obstaclesNode.size());
    for (const auto &node : obstaclesNode)
    {
        if (!node.is_object() || !node.contains("lower") || !node.contains("upper"))
        {
            throw ParseError("scenario: each obstacle must hold 'lower' and 'upper'");
        }
        obstacles.emplace_back(parseStateArray(node["lower"], dim, "obstacle.lower"),
                               parseStateArray(node["upper"], dim, "obstacle.upper"));
    }

    State start = parseStateArray(doc["start"], dim, "start");
    State goal = parseStateArray(doc["goal"], dim, "goal");

    if (!doc["check_resolution"].is_number())
    {
        throw ParseError("scenario: 'check_resolution' must be a number");
    }
    const double resolution = doc["check_resolution"].get<double>();

    ObstacleWorld world(std::move(bounds), std::move(obstacles), resolution);
    return Scenario{std::move(world), std::move(start), std::move(goal)};
}

void scenarioToFile(const Scenario &scenario, const std::string &path)
{
    std::ofstream out(path);
    if (!out)
    {
        throw ConfigurationError("scenario: cannot open '" + path + "' for writing");
    }
    out << scenarioToJson(scenario);
    if (!out)
    {
        throw ConfigurationError("scenario: failed writing '" + path + "'");
    }
}

Scenario scenarioFromFile(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigurationError("scenario: cannot open '" + path + "' for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return scenarioFromJson(buffer.str());
}

}  // namespace jitstar
