#pragma once

// Command-line front end. run_cli() holds all logic so tests can drive it
// without spawning processes; tools/aedec.cpp only forwards main().

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "aed/simulation.hpp"

namespace aed {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitVerifyFailed = 2, kExitCapacity = 3 };

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Everything needed to regenerate a set of simulate rows.
struct RunManifest {
    CodeSpec code = rm_code(0, 0);
    DecoderConfig decoder;
    std::vector<double> ebn0_db;
    RunOptions options;
};

nlohmann::json manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);

}  // namespace aed
