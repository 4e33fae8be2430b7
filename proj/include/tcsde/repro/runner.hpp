#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tcsde/repro/config.hpp"

namespace tcsde::repro {

struct RunResult {
    std::filesystem::path dir;
    std::vector<std::filesystem::path> files;  // manifest order, manifest excluded
    std::filesystem::path manifest;
    std::vector<std::string> summary;          // one line per produced output
    bool ok = true;
};

// Executes the config and writes every requested artifact plus manifest.tsv
// into config.out_dir. Invalid configs raise UsageError; module errors are
// rethrown with the stage that raised them.
RunResult run(const ExperimentConfig& config);

// Registered example with its own defaults and every figure-related output.
RunResult reproduce(const std::string& example_id, const std::string& out_dir,
                    std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace tcsde::repro
