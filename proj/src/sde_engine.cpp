#include "tcsde/sde_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tcsde/errors.hpp"

namespace tcsde {
namespace {

std::size_t grid_factor(double coarse, double fine) {
    const double ratio = coarse / fine;
    const auto factor = static_cast<std::size_t>(std::llround(ratio));
    if (factor == 0 || std::abs(ratio - static_cast<double>(factor)) > 1e-9 * ratio) {
        std::ostringstream msg;
        msg << "operational step " << coarse << " is not an integer multiple of " << fine;
        throw DomainError(msg.str());
    }
    return factor;
}

// Walks the steps of a clock, handing out the Brownian increment and the
// marks of each step.
class StepNoise {
public:
    StepNoise(const ClockPath& clock, const NoisePath& noise, std::size_t factor)
        : clock_(clock), noise_(noise), factor_(factor) {
        const auto last = static_cast<std::size_t>(clock.e_steps.back()) * factor;
        if (last >= noise.brownian.size()) {
            throw HorizonError("noise path is shorter than the operational time reached by the clock");
        }
        skip_to(static_cast<std::size_t>(clock.e_steps.front()) * factor);
    }

    // Noise of the operational span between noise grid indices k0 and k1.
    double span(std::size_t k0, std::size_t k1, std::vector<double>& small, std::vector<double>& large) {
        collect(noise_.small_marks, small_cursor_, k1, small);
        collect(noise_.large_marks, large_cursor_, k1, large);
        return noise_.brownian[k1] - noise_.brownian[k0];
    }

    double step(std::size_t n, std::vector<double>& small, std::vector<double>& large) {
        return span(static_cast<std::size_t>(clock_.e_steps[n]) * factor_,
                    static_cast<std::size_t>(clock_.e_steps[n + 1]) * factor_, small, large);
    }

    void skip_to(std::size_t k) {
        const double edge = noise_.op_step * static_cast<double>(k);
        while (small_cursor_ < noise_.small_marks.size() && noise_.small_marks[small_cursor_].op_time <= edge) {
            ++small_cursor_;
        }
        while (large_cursor_ < noise_.large_marks.size() && noise_.large_marks[large_cursor_].op_time <= edge) {
            ++large_cursor_;
        }
    }

private:
    void collect(const std::vector<Mark>& marks, std::size_t& cursor, std::size_t k1, std::vector<double>& out) {
        out.clear();
        const double edge = noise_.op_step * static_cast<double>(k1);
        while (cursor < marks.size() && marks[cursor].op_time <= edge) out.push_back(marks[cursor++].y);
    }

    const ClockPath& clock_;
    const NoisePath& noise_;
    std::size_t factor_;
    std::size_t small_cursor_ = 0;
    std::size_t large_cursor_ = 0;
};

double apply_floor(double x, std::size_t step, double t, std::vector<FloorEvent>& events) {
    if (std::abs(x) >= numeric_floor) return x;
    events.push_back({step, t, std::abs(x)});
    return std::signbit(x) ? -numeric_floor : numeric_floor;
}

ClockPath make_clock(const SdeModel& model, std::span<const double> grid, double op_step,
                     double max_horizon_op, std::uint64_t seed, std::uint64_t path_index) {
    if (std::holds_alternative<IdentityClock>(model.spec().clock)) return identity_clock(grid);
    Rng rng = make_stream(seed, path_index, Stream::clock);
    ClockOptions options;
    options.op_step = op_step;
    options.max_horizon_op = max_horizon_op;
    return build_clock(std::get<SubordinatorSpec>(model.spec().clock), grid, options, rng);
}

}  // namespace

SdeModel::SdeModel(SdeSpec spec) : spec_(std::move(spec)) {
    if (!(spec_.x0 != 0.0) || !std::isfinite(spec_.x0)) throw DomainError("initial value x0 must be finite and nonzero");
    if (!(spec_.t0 >= 0.0) || !std::isfinite(spec_.t0)) throw DomainError("initial time t0 must be nonnegative");
    if (std::holds_alternative<IdentityClock>(spec_.clock) && spec_.t0 != 0.0) {
        throw DomainError("the identity clock requires t0 = 0");
    }
    linear_ = std::holds_alternative<LinearJumps>(spec_.jumps);
    if (linear_) {
        const auto& jumps = std::get<LinearJumps>(spec_.jumps);
        if (jumps.h && spec_.noise.small_mass() > 0.0) {
            linear_comp_ = nu_integral(spec_.noise, jumps.h, Region::small);
        }
    }
}

double SdeModel::small_jump(double t, double e, double x, double y) const {
    if (linear_) {
        const auto& h = std::get<LinearJumps>(spec_.jumps).h;
        return h ? h(y) * x : 0.0;
    }
    const auto& h = std::get<GeneralJumps>(spec_.jumps).h;
    return h ? h(t, e, x, y) : 0.0;
}

double SdeModel::large_jump(double x, double y) const {
    if (!linear_) return 0.0;
    const auto& H = std::get<LinearJumps>(spec_.jumps).H;
    return H ? H(y) * x : 0.0;
}

double SdeModel::compensator(double t, double e, double x) const {
    if (linear_) return linear_comp_ * x;
    const auto& h = std::get<GeneralJumps>(spec_.jumps).h;
    if (!h || spec_.noise.small_mass() <= 0.0) return 0.0;
    return nu_integral(spec_.noise, [&](double y) { return h(t, e, x, y); }, Region::small);
}

double step_euler(double x, double t, double e, double dt, double dE, double dB,
                  std::span<const double> small_marks, std::span<const double> large_marks,
                  const SdeModel& model) {
    if (!(dE >= 0.0)) throw DomainError("operational increment dE must be nonnegative");
    double y = x + model.f(t, e, x) * dt + model.k(t, e, x) * dE + model.g(t, e, x) * dB;
    if (dE > 0.0) y -= model.compensator(t, e, x) * dE;
    for (const double mark : small_marks) y += model.small_jump(t, e, y, mark);
    for (const double mark : large_marks) y += model.large_jump(y, mark);
    if (!std::isfinite(y)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "Euler step blew up on [" << t << ", " << t + dt << "] from x = " << x;
        throw BlowUpError(msg.str(), t + dt, x);
    }
    return y;
}

std::vector<double> real_time_grid(double t0, double T, double dt) {
    if (!(T > t0)) throw DomainError("horizon T must exceed t0");
    if (!(dt > 0.0)) throw DomainError("real step dt must be positive");
    const double span = T - t0;
    const auto n = static_cast<std::size_t>(std::llround(span / dt));
    if (n < 100) throw DomainError("real step dt must satisfy dt <= (T - t0) / 100");
    if (std::abs(static_cast<double>(n) * dt - span) > 1e-9 * span) {
        throw DomainError("T - t0 must be an integer multiple of dt");
    }
    std::vector<double> grid(n + 1);
    for (std::size_t j = 0; j <= n; ++j) grid[j] = t0 + dt * static_cast<double>(j);
    grid.back() = T;
    return grid;
}

TrajectoryBundle integrate_on_clock(const SdeModel& model, ClockPath clock,
                                    std::shared_ptr<const NoisePath> noise, bool keep_increments,
                                    std::uint64_t seed, std::uint64_t path_index) {
    if (!noise) throw DomainError("integrate_on_clock needs a noise path");
    TrajectoryBundle out;
    out.seed = seed;
    out.path_index = path_index;
    out.noise_factor = grid_factor(clock.op_step, noise->op_step);
    out.clock = std::move(clock);
    const ClockPath& c = out.clock;
    const std::size_t n_points = c.size();

    StepNoise walker(c, *noise, out.noise_factor);
    out.x_values.resize(n_points);
    if (keep_increments) {
        out.increments.emplace();
        out.increments->dB.reserve(n_points - 1);
        out.increments->dE.reserve(n_points - 1);
        out.increments->n_small.reserve(n_points - 1);
        out.increments->n_large.reserve(n_points - 1);
    }

    std::vector<double> small, large;
    double x = model.spec().x0;
    out.x_values[0] = x;
    for (std::size_t n = 0; n + 1 < n_points; ++n) {
        const double t = c.real_grid[n];
        const double dt = c.real_grid[n + 1] - t;
        const double dE = c.e_values[n + 1] - c.e_values[n];
        const double dB = walker.step(n, small, large);
        x = step_euler(x, t, c.e_values[n], dt, dE, dB, small, large, model);
        x = apply_floor(x, n + 1, c.real_grid[n + 1], out.floor_events);
        out.x_values[n + 1] = x;
        if (keep_increments) {
            out.increments->dB.push_back(dB);
            out.increments->dE.push_back(dE);
            out.increments->n_small.push_back(static_cast<std::uint32_t>(small.size()));
            out.increments->n_large.push_back(static_cast<std::uint32_t>(large.size()));
        }
    }
    if (keep_increments) out.noise = std::move(noise);
    return out;
}

TrajectoryBundle simulate_path(const SdeModel& model, double T, const SimulationOptions& options,
                               std::uint64_t seed, std::uint64_t path_index) {
    const auto grid = real_time_grid(model.spec().t0, T, options.dt);
    ClockPath clock = make_clock(model, grid, options.op_step, options.max_horizon_op, seed, path_index);
    auto noise = std::make_shared<const NoisePath>(simulate_noise(
        model.spec().noise, static_cast<std::size_t>(clock.e_steps.back()), clock.op_step, seed, path_index));
    return integrate_on_clock(model, std::move(clock), std::move(noise), options.keep_increments, seed,
                              path_index);
}

std::vector<TrajectoryBundle> simulate_levels(const SdeModel& model, double T,
                                              std::span<const RefinementLevel> levels,
                                              std::uint64_t seed, std::uint64_t path_index,
                                              bool keep_increments) {
    if (levels.empty()) throw DomainError("simulate_levels needs at least one level");
    const bool identity = std::holds_alternative<IdentityClock>(model.spec().clock);
    std::vector<double> op_steps;
    for (const auto& level : levels) op_steps.push_back(identity ? level.dt : level.op_step);
    const double finest = *std::min_element(op_steps.begin(), op_steps.end());
    std::vector<std::size_t> factors;
    std::size_t common = 1;
    for (const double op : op_steps) {
        factors.push_back(grid_factor(op, finest));
        common = std::lcm(common, factors.back());
    }

    std::vector<ClockPath> clocks;
    if (identity) {
        for (const auto& level : levels) clocks.push_back(identity_clock(real_time_grid(0.0, T, level.dt)));
    } else {
        const auto& sub = std::get<SubordinatorSpec>(model.spec().clock);
        Rng rng = make_stream(seed, path_index, Stream::clock);
        SubordinatorPath d{finest, {0.0}};
        const std::size_t chunk = common * ((8192 + common - 1) / common);
        while (d.values.back() <= T) {
            if (d.horizon() >= 1e6) throw HorizonError("operational horizon cap reached in simulate_levels");
            extend_subordinator_path(sub, d, chunk, rng);
        }
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const auto grid = real_time_grid(model.spec().t0, T, levels[i].dt);
            clocks.push_back(invert_subordinator(subsample(d, factors[i]), grid));
        }
    }

    std::size_t steps = 0;
    for (std::size_t i = 0; i < clocks.size(); ++i) {
        steps = std::max(steps, static_cast<std::size_t>(clocks[i].e_steps.back()) * factors[i]);
    }
    auto noise = std::make_shared<const NoisePath>(simulate_noise(model.spec().noise, steps, finest, seed, path_index));

    std::vector<TrajectoryBundle> out;
    for (auto& clock : clocks) {
        out.push_back(integrate_on_clock(model, std::move(clock), noise, keep_increments, seed, path_index));
    }
    return out;
}

TrajectoryBundle duality_compose(const SdeModel& model, const ClockPath& clock,
                                 std::shared_ptr<const NoisePath> noise) {
    if (model.spec().f) throw PreconditionError("duality requires no dt drift (f must be zero)");
    if (!noise) throw DomainError("duality_compose needs a noise path");
    const std::size_t factor = grid_factor(clock.op_step, noise->op_step);
    StepNoise walker(clock, *noise, factor);

    const auto k0 = static_cast<std::size_t>(clock.e_steps.front());
    const auto k1 = static_cast<std::size_t>(clock.e_steps.back());
    if (clock.d_values.size() <= k1) throw HorizonError("clock D path is shorter than E_T");
    std::vector<double> z(k1 + 1, model.spec().x0);
    std::vector<double> small, large;
    TrajectoryBundle out;
    for (std::size_t k = k0; k < k1; ++k) {
        const double dB = walker.span(k * factor, (k + 1) * factor, small, large);
        const double tau = clock.op_step * static_cast<double>(k);
        z[k + 1] = step_euler(z[k], clock.d_values[k], tau, 0.0, clock.op_step, dB, small, large, model);
        z[k + 1] = apply_floor(z[k + 1], k + 1, clock.op_step * static_cast<double>(k + 1), out.floor_events);
    }
    out.clock = clock;
    out.noise_factor = factor;
    out.x_values.reserve(clock.size());
    for (const auto k : clock.e_steps) out.x_values.push_back(z[static_cast<std::size_t>(k)]);
    return out;
}

ItoResidual ito_consistency_check(const TrajectoryBundle& trajectory, const ItoFunctional& F,
                                  const SdeModel& model) {
    if (!trajectory.noise) throw PreconditionError("Ito check needs a trajectory simulated with keep_increments");
    if (!F.F || !F.F_x || !F.F_xx) throw DomainError("Ito functional needs F, F_x and F_xx");
    const ClockPath& c = trajectory.clock;
    StepNoise walker(c, *trajectory.noise, trajectory.noise_factor);
    auto zero = [](double, double, double) { return 0.0; };
    const auto F_t = F.F_t ? F.F_t : std::function<double(double, double, double)>(zero);
    const auto F_e = F.F_e ? F.F_e : std::function<double(double, double, double)>(zero);

    ItoResidual out;
    out.times = c.real_grid;
    out.residual.assign(c.size(), 0.0);
    const double start = F.F(c.real_grid[0], c.e_values[0], trajectory.x_values[0]);
    double acc = 0.0;
    std::vector<double> small, large;
    for (std::size_t n = 0; n + 1 < c.size(); ++n) {
        const double t = c.real_grid[n];
        const double e = c.e_values[n];
        const double x = trajectory.x_values[n];
        const double dt = c.real_grid[n + 1] - t;
        const double dE = c.e_values[n + 1] - e;
        const double dB = walker.step(n, small, large);
        const double fx = F.F_x(t, e, x);
        const double f = model.f(t, e, x);
        const double k = model.k(t, e, x);
        const double g = model.g(t, e, x);
        const double comp = dE > 0.0 ? model.compensator(t, e, x) : 0.0;

        double rhs = (F_t(t, e, x) + fx * f) * dt +
                     (F_e(t, e, x) + fx * k + 0.5 * g * g * F.F_xx(t, e, x)) * dE + fx * g * dB -
                     fx * comp * dE;
        double running = x + f * dt + k * dE + g * dB - comp * dE;
        for (const double y : small) {
            const double jump = model.small_jump(t, e, running, y);
            rhs += F.F(t, e, running + jump) - F.F(t, e, running);
            running += jump;
        }
        for (const double y : large) {
            const double jump = model.large_jump(running, y);
            rhs += F.F(t, e, running + jump) - F.F(t, e, running);
            running += jump;
        }
        acc += rhs;
        const double r = F.F(c.real_grid[n + 1], c.e_values[n + 1], trajectory.x_values[n + 1]) - start - acc;
        out.residual[n + 1] = r;
        out.max_abs = std::max(out.max_abs, std::abs(r));
    }
    return out;
}

NonzeroReport check_nonzero(const TrajectoryBundle& trajectory) {
    NonzeroReport report;
    report.events = trajectory.floor_events;
    report.nonzero = report.events.empty();
    std::ostringstream text;
    text << "path " << trajectory.path_index << ": ";
    if (report.nonzero) {
        text << "no floor events";
    } else {
        text << report.events.size() << " floor event(s)";
        for (const auto& ev : report.events) {
            text << "\n  step " << ev.step << " t = " << ev.t << " |X| = " << ev.abs_x;
        }
    }
    report.text = text.str();
    return report;
}

}  // namespace tcsde
