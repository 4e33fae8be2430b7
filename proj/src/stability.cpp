#include "tcsde/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tcsde/errors.hpp"
#include "tcsde/parallel.hpp"

namespace tcsde {
namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t min_tail_points = 50;

}  // namespace

const char* to_string(ClockKind clock) { return clock == ClockKind::real ? "real" : "operational"; }

const char* to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::exponentially_path_stable: return "exponentially path stable";
        case Verdict::path_stable: return "path stable (rate E_t)";
        case Verdict::not_certified: return "not certified";
    }
    return "?";
}

LyapunovSeries lyapunov_series(std::span<const double> times, std::span<const double> rates,
                               std::span<const double> x_values, ClockKind clock) {
    if (times.size() != rates.size() || times.size() != x_values.size()) {
        throw DomainError("lyapunov_series: times, rates and values differ in length");
    }
    LyapunovSeries s;
    s.clock = clock;
    s.times.assign(times.begin(), times.end());
    s.ratios.resize(times.size());
    s.valid.resize(times.size());
    std::size_t usable = 0;
    for (std::size_t j = 0; j < times.size(); ++j) {
        const double a = std::abs(x_values[j]);
        const bool ok = rates[j] > 0.0 && a > numeric_floor && std::isfinite(a);
        s.valid[j] = ok;
        s.ratios[j] = ok ? std::log(a) / rates[j] : nan;
        usable += ok;
    }
    if (usable == 0) throw DiagnosticError(std::string("every point of the ") + to_string(clock) + "-clock series is masked");
    return s;
}

LyapunovSeries lyapunov_series(const TrajectoryBundle& trajectory, ClockKind clock) {
    const auto& rates = clock == ClockKind::real ? trajectory.times() : trajectory.e_values();
    return lyapunov_series(trajectory.times(), rates, trajectory.x_values, clock);
}

double estimate_limsup(const LyapunovSeries& series, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw DomainError("tail fraction must lie in (0, 1]");
    if (series.times.empty()) throw DiagnosticError("empty Lyapunov series");
    const double first = series.times.front();
    const double last = series.times.back();
    const double start = last - tail_fraction * (last - first);
    double best = -std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    for (std::size_t j = 0; j < series.times.size(); ++j) {
        if (series.times[j] < start || !series.valid[j]) continue;
        best = std::max(best, series.ratios[j]);
        ++count;
    }
    if (count < min_tail_points) {
        std::ostringstream msg;
        msg << "only " << count << " valid points in the last " << tail_fraction
            << " of the horizon; need at least " << min_tail_points;
        throw DiagnosticError(msg.str());
    }
    return best;
}

Verdict classify(double real_estimate, double op_estimate, double margin) {
    if (!std::isnan(real_estimate) && real_estimate < -margin) return Verdict::exponentially_path_stable;
    if (!std::isnan(op_estimate) && op_estimate < -margin) return Verdict::path_stable;
    return Verdict::not_certified;
}

double median(std::vector<double> values) {
    std::erase_if(values, [](double v) { return std::isnan(v); });
    if (values.empty()) return nan;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

EnsembleReport estimate_ensemble(const SdeModel& model, double T, const EnsembleOptions& options) {
    if (options.n_paths == 0) throw DomainError("ensemble needs at least one path");
    EnsembleReport report;
    report.options = options;
    report.T = T;
    report.paths.resize(options.n_paths);
    parallel_for(options.n_paths, [&](std::size_t i) {
        const auto path = simulate_path(model, T, options.simulation, options.seed, i);
        PathEstimate& est = report.paths[i];
        est.path_index = i;
        est.floor_events = path.floor_events.size();
        auto limsup = [&](ClockKind clock) {
            try {
                return estimate_limsup(lyapunov_series(path, clock), options.tail_fraction);
            } catch (const DiagnosticError&) {
                return nan;
            }
        };
        est.real_estimate = limsup(ClockKind::real);
        est.op_estimate = limsup(ClockKind::operational);
        const double log_x = std::log(std::abs(path.x_values.back()));
        est.terminal_real = log_x / path.times().back();
        est.terminal_op = log_x / path.e_values().back();
    });

    std::vector<double> real, op;
    std::size_t negative = 0;
    for (const auto& p : report.paths) {
        real.push_back(p.real_estimate);
        op.push_back(p.op_estimate);
        negative += p.terminal_op < 0.0;
        report.floor_events += p.floor_events;
    }
    report.median_real = median(std::move(real));
    report.median_op = median(std::move(op));
    report.fraction_terminal_op_negative = static_cast<double>(negative) / static_cast<double>(options.n_paths);
    report.verdict = classify(report.median_real, report.median_op, options.margin);
    return report;
}

std::string EnsembleReport::to_text() const {
    std::ostringstream out;
    out.precision(10);
    out << "n_paths = " << options.n_paths << "\n"
        << "seed = " << options.seed << "\n"
        << "T = " << T << "\n"
        << "dt = " << options.simulation.dt << "\n"
        << "op_step = " << options.simulation.op_step << "\n"
        << "tail_fraction = " << options.tail_fraction << "\n"
        << "margin = " << options.margin << "\n"
        << "median_real_estimate = " << median_real << "\n"
        << "median_op_estimate = " << median_op << "\n"
        << "fraction_terminal_op_negative = " << fraction_terminal_op_negative << "\n"
        << "floor_events = " << floor_events << "\n"
        << "verdict = " << to_string(verdict) << "\n";
    return out.str();
}

MartingaleCheck martingale_inequality_check(const std::function<double(double)>& g,
                                            const std::function<double(double, double)>& h, double T,
                                            double lambda, double kappa, std::size_t n_paths,
                                            const SubordinatorSpec& clock, const LevyMeasure& measure,
                                            const MartingaleOptions& options) {
    if (!(lambda > 0.0) || !(kappa > 0.0)) throw DomainError("lambda and kappa must be positive");
    if (n_paths == 0) throw DomainError("martingale check needs at least one path");
    const auto grid = real_time_grid(0.0, T, options.dt);
    const std::size_t n = grid.size();

    // deterministic integrands: tabulate g and the two nu-integrals once
    std::vector<double> g_val(n, 0.0), comp(n, 0.0), exp_comp(n, 0.0);
    const bool jumps = h && measure.small_mass() > 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (g) g_val[j] = g(grid[j]);
        if (jumps) {
            const double t = grid[j];
            comp[j] = nu_integral(measure, [&](double y) { return h(t, y); }, Region::small);
            exp_comp[j] = nu_integral(
                measure,
                [&](double y) {
                    const double v = lambda * h(t, y);
                    return std::expm1(v) - v;
                },
                Region::small);
        }
    }

    std::vector<char> exceeded(n_paths, 0);
    parallel_for(n_paths, [&](std::size_t i) {
        Rng rng = make_stream(options.seed, i, Stream::clock);
        ClockOptions co;
        co.op_step = options.op_step;
        const ClockPath c = build_clock(clock, grid, co, rng);
        const NoisePath noise = simulate_noise(jumps ? measure : LevyMeasure(),
                                               static_cast<std::size_t>(c.e_steps.back()), c.op_step,
                                               options.seed, i);
        std::size_t cursor = 0;
        while (cursor < noise.small_marks.size() && noise.small_marks[cursor].op_time <= c.e_values[0]) ++cursor;
        double m = 0.0;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const double dE = c.e_values[j + 1] - c.e_values[j];
            const double dB = noise.brownian[static_cast<std::size_t>(c.e_steps[j + 1])] -
                              noise.brownian[static_cast<std::size_t>(c.e_steps[j])];
            m += g_val[j] * dB - 0.5 * lambda * g_val[j] * g_val[j] * dE;
            if (jumps) {
                const double edge = c.e_values[j + 1];
                while (cursor < noise.small_marks.size() && noise.small_marks[cursor].op_time <= edge) {
                    m += h(grid[j], noise.small_marks[cursor++].y);
                }
                m -= (comp[j] + exp_comp[j] / lambda) * dE;
            }
            if (m > kappa) {
                exceeded[i] = 1;
                break;
            }
        }
    });

    MartingaleCheck out;
    out.n_paths = n_paths;
    for (const char e : exceeded) out.exceedances += static_cast<std::size_t>(e);
    out.empirical = static_cast<double>(out.exceedances) / static_cast<double>(n_paths);
    out.bound = std::exp(-lambda * kappa);
    out.std_error = std::sqrt(out.bound * (1.0 - out.bound) / static_cast<double>(n_paths));
    out.pass = out.empirical <= out.bound + 3.0 * out.std_error;
    return out;
}

}  // namespace tcsde
