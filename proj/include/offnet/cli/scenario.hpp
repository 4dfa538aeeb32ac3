#pragma once

#include "offnet/dynamics.hpp"
#include "offnet/errors.hpp"
#include "offnet/model.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace offnet::cli {

inline constexpr int kSchemaVersion = 1;

class UnreadableFile : public Error {
public:
    using Error::Error;
};

class SchemaError : public Error {
public:
    using Error::Error;
};

class OutputError : public Error {
public:
    using Error::Error;
};

struct SweepAxis {
    std::string parameter;  ///< D0, alpha, beta, pa[i], pd[i] or gamma[i] (0-based i)
    double from = 0.0;
    double to = 0.0;
    std::size_t samples = 2;

    double value(std::size_t k) const;
};

struct Scenario {
    int schema_version = kSchemaVersion;
    std::string name;
    std::string regime;
    GameParameters params;
    double free_ps = 0.0;
    std::optional<Price4> p0;
    std::size_t max_steps = 0;  ///< 0: regime default
    double tol = 0.0;           ///< 0: regime default
    double step_size = 0.0;     ///< 0: 0.01 / alpha
    std::size_t grid_resolution = 401;
    std::optional<SweepAxis> sweep;
    std::string output;
    nlohmann::json source;  ///< the document as read, echoed into the manifest
};

/// Regimes a scenario may name.
const std::vector<std::string> &known_regimes();

/// Parses a schema-v1 document. Throws SchemaError on structural problems and
/// InvalidParameters when the market parameters fail validation.
Scenario parse_scenario(const nlohmann::json &doc);

/// Reads and parses a scenario file. Throws UnreadableFile if it cannot be read
/// or is not well-formed JSON.
Scenario load_scenario(const std::filesystem::path &path);

/// Copy of params with one named parameter replaced.
GameParameters with_parameter(const GameParameters &params, const std::string &name, double value);

} // namespace offnet::cli
