#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tcsde/rng.hpp"

namespace tcsde {

struct StableComponent {
    double weight = 1.0;
    double index = 0.5;
};

// Law of a strictly increasing subordinator D with Laplace exponent
// psi(s) = sum_i c_i s^{beta_i}: a single stable index or a finite mixture.
// Components are kept sorted by index, so components().front() carries the
// smallest index (the one that governs the large-t moment growth of E_t).
class SubordinatorSpec {
public:
    static SubordinatorSpec stable(double alpha);
    static SubordinatorSpec mixture(std::vector<StableComponent> components);

    const std::vector<StableComponent>& components() const noexcept { return components_; }
    bool is_single() const noexcept { return components_.size() == 1; }
    double smallest_index() const noexcept { return components_.front().index; }

    double laplace_exponent(double s) const;
    std::complex<double> laplace_exponent(std::complex<double> s) const;

private:
    explicit SubordinatorSpec(std::vector<StableComponent> components);
    std::vector<StableComponent> components_;
};

// One draw of D(dt) for the stable subordinator with Laplace exponent
// (scale * s)^alpha, via Kanter's representation of the one-sided stable law.
double sample_stable_increment(double alpha, double scale, double dt, Rng& rng);

// D sampled on the operational grid k * op_step; values.front() == 0.
struct SubordinatorPath {
    double op_step = 0.0;
    std::vector<double> values;

    double horizon() const noexcept {
        return values.empty() ? 0.0 : op_step * static_cast<double>(values.size() - 1);
    }
};

// min(1e-3, horizon_op / 1e4)
double default_op_step(double horizon_op);

// Path of length ceil(horizon_op / op_step) + 1. Mixture components are
// superposed as independent stable subordinators, component i scaled by
// c_i^{1/beta_i}. Requires op_step <= horizon_op / 10.
SubordinatorPath simulate_subordinator_path(const SubordinatorSpec& spec, double horizon_op,
                                            double op_step, Rng& rng);

// Appends `steps` further increments, continuing the same random stream.
void extend_subordinator_path(const SubordinatorSpec& spec, SubordinatorPath& path,
                              std::size_t steps, Rng& rng);

// Keeps every factor-th grid value: the exact D path on the grid of step
// factor * op_step, which couples simulations across grid refinements.
SubordinatorPath subsample(const SubordinatorPath& path, std::size_t factor);

// Inverse subordinator on a real-time grid, E_t = op_step * e_steps.
struct ClockPath {
    double op_step = 0.0;
    std::vector<double> d_values;  // D on the operational grid
    std::vector<double> real_grid;
    std::vector<std::int64_t> e_steps;
    std::vector<double> e_values;

    std::size_t size() const noexcept { return real_grid.size(); }
};

// E_t = op_step * min{k >= 0 : D(k op_step) > t} for every t of the grid,
// with a moving cursor over both sorted grids. Throws HorizonError when some
// t is not below max(D).
ClockPath invert_subordinator(const SubordinatorPath& d, std::span<const double> real_grid);

// Test clock E_t = t on a uniform grid starting at 0 (op_step = grid step).
ClockPath identity_clock(std::span<const double> real_grid);

struct ClockOptions {
    double op_step = 1e-3;
    std::size_t chunk_steps = 8192;
    double max_horizon_op = 1e6;  // cap of the automatic extension
};

// Simulates D in chunks until it passes the end of the real grid (or the
// operational cap is hit, which raises HorizonError), then inverts.
ClockPath build_clock(const SubordinatorSpec& spec, std::span<const double> real_grid,
                      const ClockOptions& options, Rng& rng);

// E at a few increasing times without storing the D path. Consumes the
// random stream exactly like build_clock with the same op_step.
std::vector<double> sample_inverse_at(const SubordinatorSpec& spec, std::span<const double> times,
                                      double op_step, Rng& rng, double max_horizon_op = 1e9);

// Fixed-Talbot numerical inversion of a Laplace transform at t > 0.
double laplace_invert_talbot(const std::function<std::complex<double>(std::complex<double>)>& transform,
                             double t, int terms = 32);

// E[E_t^n]. Single stable index: n! t^{n alpha} / Gamma(1 + n alpha).
// Mixtures: numerical inversion of n! / (s psi(s)^n).
double inverse_moment(const SubordinatorSpec& spec, int n, double t);

struct MomentSlope {
    std::vector<double> times;
    std::vector<double> moments;
    double slope = 0.0;           // least squares slope of log moment vs log t
    double expected_slope = 0.0;  // n * smallest index
};

MomentSlope inverse_moment_slope(const SubordinatorSpec& spec, int n, double t_lo, double t_hi,
                                 std::size_t points = 9);

struct SllnRow {
    double t = 0.0;
    double mean = 0.0;    // mean of E_t / t
    double median = 0.0;  // median of E_t / t
};

struct SllnReport {
    std::vector<SllnRow> rows;
    std::size_t n_paths = 0;
    bool nonnegative = true;
    // Means and medians decrease strictly and the final mean is below the
    // first mean divided by decay_factor.
    bool decay_flag = false;
};

// Returns E at the requested times for one path index.
using InverseSampler =
    std::function<std::vector<double>(std::span<const double> times, std::uint64_t path_index)>;

SllnReport check_slln(std::span<const double> t_grid, std::size_t n_paths,
                      const InverseSampler& sampler, double decay_factor = 5.0);

// op_step <= 0 selects 1e-4 * t_grid.front(), i.e. a relative inversion bias of order 1e-4.
SllnReport check_slln(const SubordinatorSpec& spec, std::span<const double> t_grid,
                      std::size_t n_paths, std::uint64_t seed, double op_step = 0.0,
                      double decay_factor = 5.0);

}  // namespace tcsde
