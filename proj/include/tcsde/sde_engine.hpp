#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tcsde/levy_noise.hpp"
#include "tcsde/subordinator.hpp"

namespace tcsde {

// c(t, e, x) with e the operational time E_t. An empty function is the zero coefficient.
using Coefficient = std::function<double(double t, double e, double x)>;
using MarkFunction = std::function<double(double y)>;

// Multiplicative jumps: x -> x + h(y) x for |y| < c and x -> x + H(y) x for |y| >= c.
struct LinearJumps {
    MarkFunction h;
    MarkFunction H;
};

// Small jumps x -> x + h(t, e, x, y); no large jumps.
struct GeneralJumps {
    std::function<double(double t, double e, double x, double y)> h;
};

// Test clock E_t = t.
struct IdentityClock {};

using ClockSpec = std::variant<SubordinatorSpec, IdentityClock>;

struct SdeSpec {
    Coefficient f;  // dt
    Coefficient k;  // dE_t
    Coefficient g;  // dB_{E_t}
    std::variant<LinearJumps, GeneralJumps> jumps = LinearJumps{};
    double x0 = 1.0;
    double t0 = 0.0;
    ClockSpec clock = SubordinatorSpec::stable(0.8);
    LevyMeasure noise;
};

// Validated spec plus the cached compensator integral for linear small jumps.
class SdeModel {
public:
    explicit SdeModel(SdeSpec spec);

    const SdeSpec& spec() const noexcept { return spec_; }
    bool linear() const noexcept { return linear_; }

    double f(double t, double e, double x) const { return spec_.f ? spec_.f(t, e, x) : 0.0; }
    double k(double t, double e, double x) const { return spec_.k ? spec_.k(t, e, x) : 0.0; }
    double g(double t, double e, double x) const { return spec_.g ? spec_.g(t, e, x) : 0.0; }
    double small_jump(double t, double e, double x, double y) const;
    double large_jump(double x, double y) const;
    // integral over |y| < c of the small jump at state x
    double compensator(double t, double e, double x) const;
    // integral over |y| < c of h(y) (linear form only)
    double linear_compensator() const noexcept { return linear_comp_; }

private:
    SdeSpec spec_;
    bool linear_ = true;
    double linear_comp_ = 0.0;
};

inline constexpr double numeric_floor = 1e-300;

// One explicit Euler step over [t, t + dt] with operational increment dE and
// Brownian increment dB. Continuous part and compensator are evaluated at the
// left endpoint, then the small jumps and the large jumps are applied in
// order, each at the running pre-jump state. Throws BlowUpError on a
// non-finite result.
double step_euler(double x, double t, double e, double dt, double dE, double dB,
                  std::span<const double> small_marks, std::span<const double> large_marks,
                  const SdeModel& model);

struct FloorEvent {
    std::size_t step = 0;  // grid index where |X| fell below the floor
    double t = 0.0;
    double abs_x = 0.0;    // value before clamping
};

struct StepIncrements {
    std::vector<double> dB;
    std::vector<double> dE;
    std::vector<std::uint32_t> n_small;
    std::vector<std::uint32_t> n_large;
};

struct TrajectoryBundle {
    ClockPath clock;
    std::vector<double> x_values;
    std::vector<FloorEvent> floor_events;
    std::uint64_t seed = 0;
    std::uint64_t path_index = 0;
    // kept on request, for replay (increments CSV, Ito check)
    std::shared_ptr<const NoisePath> noise;
    std::size_t noise_factor = 1;  // clock op_step / noise op_step
    std::optional<StepIncrements> increments;

    const std::vector<double>& times() const noexcept { return clock.real_grid; }
    const std::vector<double>& e_values() const noexcept { return clock.e_values; }
};

struct SimulationOptions {
    double dt = 1e-3;
    double op_step = 1e-3;  // ignored by the identity clock (which uses dt)
    bool keep_increments = false;
    double max_horizon_op = 1e6;
};

// t0, t0 + dt, ..., T. Requires dt <= (T - t0) / 100.
std::vector<double> real_time_grid(double t0, double T, double dt);

// Integrates the model along a given clock and noise path. The noise grid may
// be finer than the clock grid by an integer factor; marks with operational
// time in (E_n, E_{n+1}] belong to step n.
TrajectoryBundle integrate_on_clock(const SdeModel& model, ClockPath clock,
                                    std::shared_ptr<const NoisePath> noise, bool keep_increments,
                                    std::uint64_t seed = 0, std::uint64_t path_index = 0);

// Clock first (clock stream of (seed, path_index)), then the noise up to E_T.
TrajectoryBundle simulate_path(const SdeModel& model, double T, const SimulationOptions& options,
                               std::uint64_t seed, std::uint64_t path_index);

// The same path at several grid refinements: one D path and one noise path on
// the finest operational grid, subsampled for the coarser levels. Every
// op_step must be an integer multiple of the smallest one.
struct RefinementLevel {
    double dt = 1e-3;
    double op_step = 1e-3;
};

std::vector<TrajectoryBundle> simulate_levels(const SdeModel& model, double T,
                                              std::span<const RefinementLevel> levels,
                                              std::uint64_t seed, std::uint64_t path_index,
                                              bool keep_increments = false);

// Solves the SDE without time change, dz = k dtau + g dB_tau + jumps, on the
// operational grid of the clock (coefficients evaluated at t = D(tau), e = tau)
// and returns t -> z(E_t). Requires f == 0 (PreconditionError otherwise).
TrajectoryBundle duality_compose(const SdeModel& model, const ClockPath& clock,
                                 std::shared_ptr<const NoisePath> noise);

struct ItoFunctional {
    std::function<double(double t, double e, double x)> F;
    std::function<double(double t, double e, double x)> F_t;
    std::function<double(double t, double e, double x)> F_e;
    std::function<double(double t, double e, double x)> F_x;
    std::function<double(double t, double e, double x)> F_xx;
};

struct ItoResidual {
    std::vector<double> times;
    std::vector<double> residual;
    double max_abs = 0.0;
};

// Compares F(t, E_t, X_t) - F(t0, E_t0, x0) with the discretized right-hand
// side of the time-changed Ito formula, step by step along the stored noise.
// The trajectory must have been simulated with keep_increments.
ItoResidual ito_consistency_check(const TrajectoryBundle& trajectory, const ItoFunctional& F,
                                  const SdeModel& model);

struct NonzeroReport {
    bool nonzero = true;
    std::vector<FloorEvent> events;
    std::string text;
};

NonzeroReport check_nonzero(const TrajectoryBundle& trajectory);

}  // namespace tcsde
