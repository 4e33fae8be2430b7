#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tcsde::repro {

struct SuiteResult {
    std::string name;
    bool pass = false;
    std::vector<std::pair<std::string, double>> stats;
    std::string table;  // CSV

    double stat(const std::string& key) const;
    // `suite = <name>`, `pass = ...`, the stats as key = value, then the table.
    std::string to_text() const;
};

const std::vector<std::string>& suite_names();

// Pinned seeds and sizes per suite; `scale` < 1 shrinks the path counts
// (unit tests only, the CLI always uses 1).
SuiteResult verify_suite(const std::string& name, double scale = 1.0);

SuiteResult verify_slln(std::size_t n_paths = 400, std::uint64_t seed = 101);
SuiteResult verify_moments(std::size_t n_paths = 10000, std::uint64_t seed = 202);
SuiteResult verify_martingale(std::size_t n_paths = 10000, std::size_t jump_paths = 2000,
                              std::uint64_t seed = 303);
SuiteResult verify_duality(std::size_t n_paths = 20, std::uint64_t seed = 404);
SuiteResult verify_ito(std::size_t n_paths = 200, std::uint64_t seed = 505);

}  // namespace tcsde::repro
