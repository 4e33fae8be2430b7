#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tcsde/criteria.hpp"

namespace tcsde::repro {

// Flat `key = value` experiment description. Every key has a default; see
// docs/config.md for the schema.
struct ExperimentConfig {
    std::string example = "example0";  // registered id, or "inline"

    std::vector<double> clock_indices{0.8};
    std::vector<double> clock_weights{1.0};
    double op_step = 1e-3;

    double T = 100.0;
    double dt = 1e-3;
    std::size_t n_paths = 200;
    std::uint64_t seed = 20240501;
    bool keep_increments = false;

    std::string measure = "default";  // default | none | uniform | standard_normal | tabulated
    std::string measure_file;
    double truncation = 1.0;

    // inline SDE: f = a x, k = b x, g = s x, h(y) = h |y|^hp, H(y) = H |y|^Hp
    double x0 = 1.0;
    double sde_f = 0.0;
    double sde_k = 0.0;
    double sde_g = 0.0;
    double sde_h = 0.0;
    double sde_h_power = 2.0;
    double sde_H = 0.0;
    double sde_H_power = 2.0;

    bool out_trajectories = true;
    bool out_lyapunov = true;
    bool out_criteria = true;
    bool out_martingale = false;
    bool out_slln = false;
    std::string out_dir = "out";

    double margin = 0.05;
    double tail_fraction = 0.2;

    std::string theorem = "auto";  // auto | general | linear | combined
    DeclaredConstants declared;    // criteria.declared.<name>
    bool use_stated_constants = true;

    std::string plot_clock = "auto";  // auto | real | operational

    double martingale_lambda = 1.0;
    double martingale_kappa = 2.0;
    double martingale_T = 10.0;
    std::size_t martingale_paths = 10000;

    std::vector<double> slln_times{1e2, 1e3, 1e4};
    std::size_t slln_paths = 400;

    bool operator==(const ExperimentConfig&) const = default;
};

// Throws UsageError naming the offending key or line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Canonical text: every key in a fixed order, doubles with 17 significant
// digits, so that parse_config(to_text(c)) == c.
std::string to_text(const ExperimentConfig& config);

// SHA-256 of the canonical text with output.dir reset, so that moving the
// output does not change the provenance of the data.
std::string config_hash(const ExperimentConfig& config);

// Throws UsageError for values outside their domain (n_paths = 0, ...).
void validate(const ExperimentConfig& config);

}  // namespace tcsde::repro
