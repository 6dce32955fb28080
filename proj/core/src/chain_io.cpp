#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "jitstar/kinematics.hpp"

namespace jitstar
{

namespace
{

std::string formatDouble(double v)
{
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

std::string formatArray(const std::vector<double> &values)
{
    std::string out = "[";
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (i > 0)
        {
            out += ", ";
        }
        out += formatDouble(values[i]);
    }
    out += "]";
    return out;
}

double requireNumber(const nlohmann::json &node, const char *key)
{
    if (!node.contains(key) || !node[key].is_number())
    {
        throw ParseError(std::string("chain: link field '") + key + "' must be a number");
    }
    return node[key].get<double>();
}

std::vector<double> parseDoubleArray(const nlohmann::json &node, std::size_t expected, const char *what)
{
    if (!node.is_array() || node.size() != expected)
    {
        throw ParseError(std::string("chain: '") + what + "' has the wrong length");
    }
    std::vector<double> values;
    values.reserve(node.size());
    for (const auto &value : node)
    {
        if (!value.is_number())
        {
            throw ParseError(std::string("chain: '") + what + "' must contain numbers");
        }
        values.push_back(value.get<double>());
    }
    return values;
}

}  // namespace

std::string chainToJson(const KinematicChain &chain)
{
    std::ostringstream out;
    out << "{\n";
    out << "  \"convention\": \"standard-dh\",\n";
    out << "  \"task_dim\": " << chain.taskDim() << ",\n";
    std::vector<double> base;
    base.reserve(16);
    const Eigen::Matrix4d matrix = chain.baseTransform().matrix();
    for (int r = 0; r < 4; ++r)
    {
        for (int c = 0; c < 4; ++c)
        {
            base.push_back(matrix(r, c));
        }
    }
    out << "  \"base\": " << formatArray(base) << ",\n";
    out << "  \"links\": [";
    for (std::size_t i = 0; i < chain.links().size(); ++i)
    {
        const DhLink &link = chain.links()[i];
        out << (i == 0 ? "\n" : ",\n");
        out << "    {\"a\": " << formatDouble(link.a) << ", \"alpha\": " << formatDouble(link.alpha)
            << ", \"d\": " << formatDouble(link.d) << ", \"theta_offset\": " << formatDouble(link.thetaOffset)
            << ", \"type\": \"" << (link.type == JointType::Revolute ? "revolute" : "prismatic") << "\"}";
    }
    out << "\n  ]";
    if (!chain.jointLower().empty())
    {
        out << ",\n  \"joint_limits\": {\n";
        out << "    \"lower\": " << formatArray(chain.jointLower()) << ",\n";
        out << "    \"upper\": " << formatArray(chain.jointUpper()) << "\n";
        out << "  }";
    }
    out << "\n}\n";
    return out.str();
}

KinematicChain chainFromJson(const std::string &text)
{
    nlohmann::json doc;
    try
    {
        doc = nlohmann::json::parse(text);
    }
    catch (const nlohmann::json::exception &e)
    {
        throw ParseError(std::string("chain: invalid JSON: ") + e.what());
    }
    if (!doc.is_object())
    {
        throw ParseError("chain: top level must be an object");
    }
    if (!doc.contains("convention") || doc["convention"] != "standard-dh")
    {
        throw ParseError("chain: 'convention' must be \"standard-dh\"");
    }
    if (!doc.contains("task_dim") || !doc["task_dim"].is_number_integer())
    {
        throw ParseError("chain: 'task_dim' must be an integer");
    }
    const int taskDim = doc["task_dim"].get<int>();

    Eigen::Isometry3d base = Eigen::Isometry3d::Identity();
    if (doc.contains("base"))
    {
        const auto values = parseDoubleArray(doc["base"], 16, "base");
        Eigen::Matrix4d matrix;
        for (int r = 0; r < 4; ++r)
        {
            for (int c = 0; c < 4; ++c)
            {
                matrix(r, c) = values[static_cast<std::size_t>(4 * r + c)];
            }
        }
        if ((matrix.row(3) - Eigen::RowVector4d(0.0, 0.0, 0.0, 1.0)).norm() > 1e-12)
        {
            throw ParseError("chain: 'base' must be a homogeneous transform (last row 0 0 0 1)");
        }
        base = Eigen::Isometry3d(matrix);
    }

    if (!doc.contains("links") || !doc["links"].is_array() || doc["links"].empty())
    {
        throw ParseError("chain: 'links' must be a nonempty array");
    }
    std::vector<DhLink> links;
    links.reserve(doc["links"].size());
    for (const auto &node : doc["links"])
    {
        if (!node.is_object())
        {
            throw ParseError("chain: each link must be an object");
        }
        DhLink link;
        link.a = requireNumber(node, "a");
        link.alpha = requireNumber(node, "alpha");
        link.d = requireNumber(node, "d");
        link.thetaOffset = requireNumber(node, "theta_offset");
        if (!node.contains("type") || !node["type"].is_string())
        {
            throw ParseError("chain: link 'type' must be a string");
        }
        const std::string type = node["type"].get<std::string>();
        if (type == "revolute")
        {
            link.type = JointType::Revolute;
        }
        else if (type == "prismatic")
        {
            link.type = JointType::Prismatic;
        }
        else
        {
            throw ParseError("chain: link 'type' must be \"revolute\" or \"prismatic\"");
        }
        links.push_back(link);
    }

    std::vector<double> lower;
    std::vector<double> upper;
    if (doc.contains("joint_limits"))
    {
        const auto &limits = doc["joint_limits"];
        if (!limits.is_object() || !limits.contains("lower") || !limits.contains("upper"))
        {
            throw ParseError("chain: 'joint_limits' must hold 'lower' and 'upper'");
        }
        lower = parseDoubleArray(limits["lower"], links.size(), "joint_limits.lower");
        upper = parseDoubleArray(limits["upper"], links.size(), "joint_limits.upper");
    }

    return KinematicChain(std::move(links), base, taskDim, std::move(lower), std::move(upper));
}

void chainToFile(const KinematicChain &chain, const std::string &path)
{
    std::ofstream out(path);
    if (!out)
    {
        throw ConfigurationError("chain: cannot open '" + path + "' for writing");
    }
    out << chainToJson(chain);
    if (!out)
    {
        throw ConfigurationError("chain: failed writing '" + path + "'");
    }
}

KinematicChain chainFromFile(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigurationError("chain: cannot open '" + path + "' for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return chainFromJson(buffer.str());
}

}  // namespace jitstar
