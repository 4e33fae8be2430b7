#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tcsde/sde_engine.hpp"
#include "tcsde/stability.hpp"
#include "tcsde/subordinator.hpp"

namespace tcsde::repro {

inline constexpr const char* tool_name = "tcsde";
inline constexpr const char* tool_version = "0.1.0";

std::string sha256_hex(const std::string& data);
std::string sha256_file(const std::filesystem::path& path);

// `# tool=tcsde 0.1.0 config_sha256=<hex> seed=<n>`
std::string provenance_line(const std::string& config_sha256, std::uint64_t seed);

// 17 significant digits; NaN as "nan".
std::string format_double(double v);

void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// The writers return the file content; every one starts with the provenance
// comment line.
std::string trajectory_csv(const TrajectoryBundle& path, const std::string& provenance, bool with_increments);
std::string clock_real_csv(const ClockPath& clock, const std::string& provenance);  // t,E_t
std::string clock_op_csv(const ClockPath& clock, const std::string& provenance);    // tau,D_tau
// t,E_t,real_ratio,op_ratio
std::string ratio_csv(const TrajectoryBundle& path, const std::string& provenance);
// path_index,real_estimate,op_estimate
std::string estimates_csv(const EnsembleReport& report, const std::string& provenance);

// `path<TAB>sha256` per file, paths relative to the manifest's directory.
std::string manifest_tsv(const std::filesystem::path& dir, const std::vector<std::filesystem::path>& files);

}  // namespace tcsde::repro
