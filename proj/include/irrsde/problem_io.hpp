#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "irrsde/model.hpp"

namespace irrsde {

/// Malformed or inconsistent configuration.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File could not be read or written.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/**
 * Problem document:
 *
 *   {"drift": {"breakpoints": [...], "pieces": [[c0, c1, ...], ...]},
 *    "diffusion": {"pieces": [[...]]},
 *    "x0": r, "T": r}
 *
 * Unknown keys are ignored. Throws ConfigError.
 */
SdeProblem parse_problem(const nlohmann::json& doc);

nlohmann::json problem_to_json(const SdeProblem& problem);

/// Reads and parses a JSON file. Throws IoError or ConfigError.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace irrsde
