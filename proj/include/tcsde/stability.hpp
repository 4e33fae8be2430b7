#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tcsde/levy_noise.hpp"
#include "tcsde/sde_engine.hpp"

namespace tcsde {

enum class ClockKind { real, operational };

const char* to_string(ClockKind clock);

// r(t) = log|X(t)| / t or log|X(t)| / E_t. valid[j] is false where the rate is
// not positive or X sat at the numeric floor; those ratios are NaN.
struct LyapunovSeries {
    ClockKind clock = ClockKind::real;
    std::vector<double> times;
    std::vector<double> ratios;
    std::vector<bool> valid;
};

LyapunovSeries lyapunov_series(const TrajectoryBundle& trajectory, ClockKind clock);

// From raw arrays; rates are t (real clock) or E_t (operational clock).
LyapunovSeries lyapunov_series(std::span<const double> times, std::span<const double> rates,
                               std::span<const double> x_values, ClockKind clock);

// Maximum of r over times >= t_last - tail_fraction * (t_last - t_first).
// Throws DiagnosticError with fewer than 50 valid tail points.
double estimate_limsup(const LyapunovSeries& series, double tail_fraction = 0.2);

enum class Verdict { exponentially_path_stable, path_stable, not_certified };

const char* to_string(Verdict verdict);

// NaN marks an absent estimate.
Verdict classify(double real_estimate, double op_estimate, double margin = 0.05);

struct PathEstimate {
    std::uint64_t path_index = 0;
    double real_estimate = 0.0;
    double op_estimate = 0.0;
    double terminal_real = 0.0;  // log|X_T| / T
    double terminal_op = 0.0;    // log|X_T| / E_T
    std::size_t floor_events = 0;
};

struct EnsembleOptions {
    SimulationOptions simulation;
    std::size_t n_paths = 200;
    std::uint64_t seed = 1;
    double margin = 0.05;
    double tail_fraction = 0.2;
};

struct EnsembleReport {
    std::vector<PathEstimate> paths;
    double median_real = 0.0;
    double median_op = 0.0;
    double fraction_terminal_op_negative = 0.0;
    std::size_t floor_events = 0;
    Verdict verdict = Verdict::not_certified;
    EnsembleOptions options;
    double T = 0.0;

    std::string to_text() const;  // key = value lines
};

// Simulates n_paths paths (path indices 0..n-1) in parallel and aggregates
// the per-path estimates by their medians.
EnsembleReport estimate_ensemble(const SdeModel& model, double T, const EnsembleOptions& options);

double median(std::vector<double> values);

struct MartingaleCheck {
    double empirical = 0.0;  // fraction of paths whose supremum exceeds kappa
    double bound = 0.0;      // exp(-lambda kappa)
    double std_error = 0.0;  // binomial standard error at p = bound
    std::size_t exceedances = 0;
    std::size_t n_paths = 0;
    bool pass = false;       // empirical <= bound + 3 std_error
};

struct MartingaleOptions {
    double dt = 1e-3;
    double op_step = 1e-3;
    std::uint64_t seed = 1;
};

// Monte Carlo check of the time-changed exponential martingale inequality:
// the probability that
//   sup_t { int g dB_E - lambda/2 int g^2 dE + int int h dN~ - 1/lambda int int (e^{lambda h} - 1 - lambda h) dnu dE }
// exceeds kappa, against exp(-lambda kappa). Empty g or h is zero.
MartingaleCheck martingale_inequality_check(const std::function<double(double)>& g,
                                            const std::function<double(double, double)>& h, double T,
                                            double lambda, double kappa, std::size_t n_paths,
                                            const SubordinatorSpec& clock, const LevyMeasure& measure,
                                            const MartingaleOptions& options = {});

}  // namespace tcsde
