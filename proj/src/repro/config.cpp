#include "tcsde/repro/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "tcsde/errors.hpp"
#include "tcsde/repro/io.hpp"

namespace tcsde::repro {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw UsageError("config key " + key + ": not a number: '" + v + "'");
    return out;
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) {
        throw UsageError("config key " + key + ": not a nonnegative integer: '" + v + "'");
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw UsageError("config key " + key + ": expected true or false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream in(v);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_double(key, trim(item)));
    if (out.empty()) throw UsageError("config key " + key + ": empty list");
    return out;
}

std::string list_text(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
    return out;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

struct Field {
    const char* key;
    std::function<void(ExperimentConfig&, const std::string&)> parse;
    std::function<std::string(const ExperimentConfig&)> emit;
};

#define DOUBLE_FIELD(KEY, MEMBER)                                                                   \
    Field {                                                                                         \
        KEY, [](ExperimentConfig& c, const std::string& v) { c.MEMBER = parse_double(KEY, v); },     \
            [](const ExperimentConfig& c) { return format_double(c.MEMBER); }                       \
    }
#define SIZE_FIELD(KEY, MEMBER)                                                                     \
    Field {                                                                                         \
        KEY, [](ExperimentConfig& c, const std::string& v) { c.MEMBER = parse_uint(KEY, v); },       \
            [](const ExperimentConfig& c) { return std::to_string(c.MEMBER); }                      \
    }
#define BOOL_FIELD(KEY, MEMBER)                                                                     \
    Field {                                                                                         \
        KEY, [](ExperimentConfig& c, const std::string& v) { c.MEMBER = parse_bool(KEY, v); },       \
            [](const ExperimentConfig& c) { return bool_text(c.MEMBER); }                           \
    }
#define STRING_FIELD(KEY, MEMBER)                                                                   \
    Field {                                                                                         \
        KEY, [](ExperimentConfig& c, const std::string& v) { c.MEMBER = v; },                        \
            [](const ExperimentConfig& c) { return c.MEMBER; }                                      \
    }
#define LIST_FIELD(KEY, MEMBER)                                                                     \
    Field {                                                                                         \
        KEY, [](ExperimentConfig& c, const std::string& v) { c.MEMBER = parse_list(KEY, v); },       \
            [](const ExperimentConfig& c) { return list_text(c.MEMBER); }                           \
    }

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        STRING_FIELD("example", example),
        LIST_FIELD("clock.indices", clock_indices),
        LIST_FIELD("clock.weights", clock_weights),
        DOUBLE_FIELD("clock.op_step", op_step),
        DOUBLE_FIELD("sim.T", T),
        DOUBLE_FIELD("sim.dt", dt),
        SIZE_FIELD("sim.n_paths", n_paths),
        SIZE_FIELD("sim.seed", seed),
        BOOL_FIELD("sim.keep_increments", keep_increments),
        STRING_FIELD("noise.measure", measure),
        STRING_FIELD("noise.file", measure_file),
        DOUBLE_FIELD("noise.c", truncation),
        DOUBLE_FIELD("sde.x0", x0),
        DOUBLE_FIELD("sde.f", sde_f),
        DOUBLE_FIELD("sde.k", sde_k),
        DOUBLE_FIELD("sde.g", sde_g),
        DOUBLE_FIELD("sde.h", sde_h),
        DOUBLE_FIELD("sde.h_power", sde_h_power),
        DOUBLE_FIELD("sde.H", sde_H),
        DOUBLE_FIELD("sde.H_power", sde_H_power),
        BOOL_FIELD("outputs.trajectories", out_trajectories),
        BOOL_FIELD("outputs.lyapunov", out_lyapunov),
        BOOL_FIELD("outputs.criteria", out_criteria),
        BOOL_FIELD("outputs.martingale", out_martingale),
        BOOL_FIELD("outputs.slln", out_slln),
        STRING_FIELD("output.dir", out_dir),
        DOUBLE_FIELD("stability.margin", margin),
        DOUBLE_FIELD("stability.tail_fraction", tail_fraction),
        STRING_FIELD("criteria.theorem", theorem),
        BOOL_FIELD("criteria.stated_constants", use_stated_constants),
        STRING_FIELD("plot.clock", plot_clock),
        DOUBLE_FIELD("martingale.lambda", martingale_lambda),
        DOUBLE_FIELD("martingale.kappa", martingale_kappa),
        DOUBLE_FIELD("martingale.T", martingale_T),
        SIZE_FIELD("martingale.n_paths", martingale_paths),
        LIST_FIELD("slln.times", slln_times),
        SIZE_FIELD("slln.n_paths", slln_paths),
    };
    return table;
}

constexpr const char* declared_prefix = "criteria.declared.";

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw UsageError("config line " + std::to_string(lineno) + ": expected `key = value`");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.rfind(declared_prefix, 0) == 0) {
            const std::string name = key.substr(std::string(declared_prefix).size());
            if (name.empty()) throw UsageError("config key " + key + ": missing constant name");
            config.declared[name] = parse_double(key, value);
            continue;
        }
        const auto& table = fields();
        const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return key == f.key; });
        if (it == table.end()) throw UsageError("unknown config key: " + key);
        it->parse(config, value);
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string to_text(const ExperimentConfig& config) {
    std::string out;
    for (const auto& f : fields()) out += std::string(f.key) + " = " + f.emit(config) + "\n";
    for (const auto& [name, value] : config.declared) {
        out += std::string(declared_prefix) + name + " = " + format_double(value) + "\n";
    }
    return out;
}

std::string config_hash(const ExperimentConfig& config) {
    ExperimentConfig c = config;
    c.out_dir = "out";
    return sha256_hex(to_text(c));
}

void validate(const ExperimentConfig& c) {
    auto fail = [](const std::string& key, const std::string& why) { throw UsageError("config key " + key + ": " + why); };
    if (c.n_paths == 0) fail("sim.n_paths", "must be at least 1");
    if (!(c.T > 0.0)) fail("sim.T", "must be positive");
    if (!(c.dt > 0.0)) fail("sim.dt", "must be positive");
    if (!(c.op_step > 0.0)) fail("clock.op_step", "must be positive");
    if (c.clock_indices.size() != c.clock_weights.size()) fail("clock.weights", "needs one weight per index");
    for (const double a : c.clock_indices) {
        if (!(a > 0.0 && a < 1.0)) fail("clock.indices", "every index must lie in (0, 1)");
    }
    for (const double w : c.clock_weights) {
        if (!(w > 0.0)) fail("clock.weights", "weights must be positive");
    }
    static const std::vector<std::string> measures{"default", "none", "uniform", "standard_normal", "tabulated"};
    if (std::find(measures.begin(), measures.end(), c.measure) == measures.end()) {
        fail("noise.measure", "unknown measure '" + c.measure + "'");
    }
    if (c.measure == "tabulated" && c.measure_file.empty()) fail("noise.file", "required for a tabulated measure");
    if (!(c.truncation > 0.0)) fail("noise.c", "must be positive");
    if (c.x0 == 0.0) fail("sde.x0", "must be nonzero");
    if (!(c.tail_fraction > 0.0 && c.tail_fraction <= 1.0)) fail("stability.tail_fraction", "must lie in (0, 1]");
    if (!(c.margin >= 0.0)) fail("stability.margin", "must be nonnegative");
    static const std::vector<std::string> theorems{"auto", "general", "linear", "combined"};
    if (std::find(theorems.begin(), theorems.end(), c.theorem) == theorems.end()) {
        fail("criteria.theorem", "expected auto, general, linear or combined");
    }
    if (c.plot_clock != "auto" && c.plot_clock != "real" && c.plot_clock != "operational") {
        fail("plot.clock", "expected auto, real or operational");
    }
    if (c.out_martingale && (c.martingale_paths == 0 || !(c.martingale_lambda > 0.0) || !(c.martingale_kappa > 0.0) ||
                             !(c.martingale_T > 0.0))) {
        fail("martingale.*", "lambda, kappa, T and n_paths must be positive");
    }
    if (c.out_slln && c.slln_paths == 0) fail("slln.n_paths", "must be at least 1");
    if (c.out_dir.empty()) fail("output.dir", "must not be empty");
}

}  // namespace tcsde::repro
