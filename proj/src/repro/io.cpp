#include "tcsde/repro/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>

#include <openssl/evp.h>

#include "tcsde/errors.hpp"

namespace tcsde::repro {

std::string sha256_hex(const std::string& data) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) {
        throw std::runtime_error("SHA-256 computation failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

std::string provenance_line(const std::string& config_sha256, std::uint64_t seed) {
    return std::string("# tool=") + tool_name + " " + tool_version + " config_sha256=" + config_sha256 +
           " seed=" + std::to_string(seed);
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path.string());
    out << content;
    if (!out) throw UsageError("write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string trajectory_csv(const TrajectoryBundle& path, const std::string& provenance, bool with_increments) {
    const bool inc = with_increments && path.increments.has_value();
    std::string out = provenance + "\n";
    out += inc ? "t,E_t,X_t,dB,dE,n_small,n_large\n" : "t,E_t,X_t\n";
    for (std::size_t j = 0; j < path.x_values.size(); ++j) {
        out += format_double(path.times()[j]) + "," + format_double(path.e_values()[j]) + "," +
               format_double(path.x_values[j]);
        if (inc) {
            // increments of the step that ends at this grid point
            if (j == 0) {
                out += ",0,0,0,0";
            } else {
                const auto& d = *path.increments;
                out += "," + format_double(d.dB[j - 1]) + "," + format_double(d.dE[j - 1]) + "," +
                       std::to_string(d.n_small[j - 1]) + "," + std::to_string(d.n_large[j - 1]);
            }
        }
        out += "\n";
    }
    return out;
}

std::string clock_real_csv(const ClockPath& clock, const std::string& provenance) {
    std::string out = provenance + "\nt,E_t\n";
    for (std::size_t j = 0; j < clock.size(); ++j) {
        out += format_double(clock.real_grid[j]) + "," + format_double(clock.e_values[j]) + "\n";
    }
    return out;
}

std::string clock_op_csv(const ClockPath& clock, const std::string& provenance) {
    std::string out = provenance + "\ntau,D_tau\n";
    for (std::size_t k = 0; k < clock.d_values.size(); ++k) {
        out += format_double(clock.op_step * static_cast<double>(k)) + "," + format_double(clock.d_values[k]) + "\n";
    }
    return out;
}

std::string ratio_csv(const TrajectoryBundle& path, const std::string& provenance) {
    const auto real = lyapunov_series(path, ClockKind::real);
    const auto op = lyapunov_series(path, ClockKind::operational);
    std::string out = provenance + "\nt,E_t,real_ratio,op_ratio\n";
    for (std::size_t j = 0; j < path.x_values.size(); ++j) {
        out += format_double(path.times()[j]) + "," + format_double(path.e_values()[j]) + "," +
               format_double(real.ratios[j]) + "," + format_double(op.ratios[j]) + "\n";
    }
    return out;
}

std::string estimates_csv(const EnsembleReport& report, const std::string& provenance) {
    std::string out = provenance + "\npath_index,real_estimate,op_estimate\n";
    for (const auto& p : report.paths) {
        out += std::to_string(p.path_index) + "," + format_double(p.real_estimate) + "," +
               format_double(p.op_estimate) + "\n";
    }
    return out;
}

std::string manifest_tsv(const std::filesystem::path& dir, const std::vector<std::filesystem::path>& files) {
    std::string out;
    for (const auto& f : files) {
        out += std::filesystem::relative(f, dir).generic_string() + "\t" + sha256_file(f) + "\n";
    }
    return out;
}

}  // namespace tcsde::repro
