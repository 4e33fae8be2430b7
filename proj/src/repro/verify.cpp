#include "tcsde/repro/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tcsde/errors.hpp"
#include "tcsde/parallel.hpp"
#include "tcsde/repro/io.hpp"
#include "tcsde/sde_engine.hpp"
#include "tcsde/stability.hpp"
#include "tcsde/subordinator.hpp"

namespace tcsde::repro {
namespace {

constexpr double alpha = 0.8;

std::string f(double v) { return format_double(v); }

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] < v[i - 1])) return false;
    }
    return true;
}

std::size_t scaled(std::size_t n, double scale) {
    return std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(static_cast<double>(n) * scale)));
}

}  // namespace

double SuiteResult::stat(const std::string& key) const {
    for (const auto& [k, v] : stats) {
        if (k == key) return v;
    }
    throw DomainError("suite " + name + " has no statistic " + key);
}

std::string SuiteResult::to_text() const {
    std::ostringstream out;
    out << "suite = " << name << "\n"
        << "pass = " << (pass ? "true" : "false") << "\n";
    for (const auto& [k, v] : stats) out << k << " = " << f(v) << "\n";
    out << table;
    return out.str();
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"slln", "martingale", "duality", "ito", "moments"};
    return names;
}

SuiteResult verify_suite(const std::string& name, double scale) {
    if (name == "slln") return verify_slln(scaled(400, scale));
    if (name == "moments") return verify_moments(scaled(10000, scale));
    if (name == "martingale") return verify_martingale(scaled(10000, scale), scaled(2000, scale));
    if (name == "duality") return verify_duality(scaled(20, scale));
    if (name == "ito") return verify_ito(scaled(200, scale));
    std::string list;
    for (const auto& n : suite_names()) list += (list.empty() ? "" : ", ") + n;
    throw UsageError("unknown verify suite '" + name + "'; available: " + list + ", all");
}

SuiteResult verify_slln(std::size_t n_paths, std::uint64_t seed) {
    const std::array<double, 3> times{1e2, 1e3, 1e4};
    const auto report = check_slln(SubordinatorSpec::stable(alpha), times, n_paths, seed, 1e-2);
    SuiteResult r;
    r.name = "slln";
    std::vector<double> medians;
    r.table = "t,mean,median\n";
    for (const auto& row : report.rows) {
        medians.push_back(row.median);
        r.table += f(row.t) + "," + f(row.mean) + "," + f(row.median) + "\n";
    }
    const double last = medians.back();
    r.pass = report.nonnegative && strictly_decreasing(medians) && last >= 0.10 && last <= 0.25;
    r.stats = {{"n_paths", static_cast<double>(n_paths)},
               {"median_final", last},
               {"decay_flag", report.decay_flag ? 1.0 : 0.0}};
    return r;
}

SuiteResult verify_moments(std::size_t n_paths, std::uint64_t seed) {
    const std::array<double, 2> times{10.0, 100.0};
    const auto spec = SubordinatorSpec::stable(alpha);
    std::vector<std::array<double, 2>> samples(n_paths);
    parallel_for(n_paths, [&](std::size_t i) {
        Rng rng = make_stream(seed, i, Stream::clock);
        const auto e = sample_inverse_at(spec, times, 1e-3, rng);
        samples[i] = {e[0], e[1]};
    });
    SuiteResult r;
    r.name = "moments";
    r.table = "t,empirical_mean,exact_mean,relative_error,std_error\n";
    r.pass = true;
    double worst = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
        double s = 0.0, s2 = 0.0;
        for (const auto& v : samples) {
            s += v[j];
            s2 += v[j] * v[j];
        }
        const double n = static_cast<double>(n_paths);
        const double m = s / n;
        const double se = std::sqrt(std::max(0.0, s2 / n - m * m) / n);
        const double exact = inverse_moment(spec, 1, times[j]);
        const double rel = std::abs(m - exact) / exact;
        worst = std::max(worst, rel);
        r.pass = r.pass && rel < 0.03;
        r.table += f(times[j]) + "," + f(m) + "," + f(exact) + "," + f(rel) + "," + f(se) + "\n";
    }
    r.stats = {{"n_paths", static_cast<double>(n_paths)}, {"max_relative_error", worst}};
    return r;
}

SuiteResult verify_martingale(std::size_t n_paths, std::size_t jump_paths, std::uint64_t seed) {
    const auto clock = SubordinatorSpec::stable(alpha);
    const double lambda = 1.0, kappa = 2.0, T = 10.0;
    MartingaleOptions opts;
    opts.seed = seed;
    const auto diffusion =
        martingale_inequality_check([](double) { return 1.0; }, {}, T, lambda, kappa, n_paths, clock, LevyMeasure{}, opts);
    const auto jumps = martingale_inequality_check([](double) { return 1.0; }, [](double, double y) { return y; }, T,
                                                   lambda, kappa, jump_paths, clock,
                                                   LevyMeasure::standard_normal(1.0), opts);
    SuiteResult r;
    r.name = "martingale";
    r.table = "case,n_paths,exceedances,empirical,bound,std_error,pass\n";
    for (const auto& [label, c] : {std::pair{"g=1 h=0", diffusion}, std::pair{"g=1 h=y normal", jumps}}) {
        r.table += std::string(label) + "," + std::to_string(c.n_paths) + "," + std::to_string(c.exceedances) + "," +
                   f(c.empirical) + "," + f(c.bound) + "," + f(c.std_error) + "," + (c.pass ? "true" : "false") + "\n";
    }
    r.pass = diffusion.pass && jumps.pass;
    r.stats = {{"empirical", diffusion.empirical},
               {"bound", diffusion.bound},
               {"std_error", diffusion.std_error},
               {"jump_empirical", jumps.empirical}};
    return r;
}

SuiteResult verify_duality(std::size_t n_paths, std::uint64_t seed) {
    SdeSpec spec;
    spec.k = [](double, double, double x) { return -x; };
    spec.clock = SubordinatorSpec::stable(alpha);
    const SdeModel model(spec);
    const std::array<RefinementLevel, 4> levels{{{1e-3, 1e-3}, {5e-4, 5e-4}, {2.5e-4, 2.5e-4}, {1.25e-4, 1.25e-4}}};
    const double T = 10.0;

    // per path and level: terminal relative error, sup error, sup gap to the composed solution
    std::vector<std::array<std::array<double, 3>, 4>> err(n_paths);
    parallel_for(n_paths, [&](std::size_t i) {
        const auto paths = simulate_levels(model, T, levels, seed, i, true);
        for (std::size_t l = 0; l < levels.size(); ++l) {
            const auto& p = paths[l];
            const double e0 = p.e_values().front();
            double sup = 0.0;
            for (std::size_t j = 0; j < p.x_values.size(); ++j) {
                const double exact = spec.x0 * std::exp(-(p.e_values()[j] - e0));
                sup = std::max(sup, std::abs(p.x_values[j] - exact));
            }
            const double exact_T = spec.x0 * std::exp(-(p.e_values().back() - e0));
            const auto composed = duality_compose(model, p.clock, p.noise);
            double gap = 0.0;
            for (std::size_t j = 0; j < p.x_values.size(); ++j) {
                gap = std::max(gap, std::abs(p.x_values[j] - composed.x_values[j]));
            }
            err[i][l] = {std::abs(p.x_values.back() - exact_T) / exact_T, sup, gap};
        }
    });

    SuiteResult r;
    r.name = "duality";
    r.table = "dt,op_step,mean_terminal_relative_error,mean_sup_error,mean_sup_gap_composed\n";
    std::vector<double> sups;
    double terminal0 = 0.0;
    for (std::size_t l = 0; l < levels.size(); ++l) {
        std::vector<double> term, sup, gap;
        for (const auto& e : err) {
            term.push_back(e[l][0]);
            sup.push_back(e[l][1]);
            gap.push_back(e[l][2]);
        }
        if (l == 0) terminal0 = mean_of(term);
        sups.push_back(mean_of(sup));
        r.table += f(levels[l].dt) + "," + f(levels[l].op_step) + "," + f(mean_of(term)) + "," + f(sups.back()) +
                   "," + f(mean_of(gap)) + "\n";
    }
    r.pass = terminal0 < 0.05 && strictly_decreasing(sups);
    r.stats = {{"n_paths", static_cast<double>(n_paths)},
               {"terminal_relative_error", terminal0},
               {"sup_error_coarse", sups.front()},
               {"sup_error_fine", sups.back()}};
    return r;
}

SuiteResult verify_ito(std::size_t n_paths, std::uint64_t seed) {
    SdeSpec spec;
    spec.k = [](double, double, double x) { return -0.5 * x; };
    spec.g = [](double, double, double x) { return 0.2 * x; };
    spec.clock = SubordinatorSpec::stable(alpha);
    const SdeModel model(spec);
    ItoFunctional F;
    F.F = [](double, double, double x) { return x * x; };
    F.F_x = [](double, double, double x) { return 2.0 * x; };
    F.F_xx = [](double, double, double) { return 2.0; };
    const std::array<RefinementLevel, 3> levels{{{1e-3, 1e-3}, {5e-4, 5e-4}, {2.5e-4, 2.5e-4}}};
    const double T = 1.0;

    std::vector<std::array<double, 3>> res(n_paths);
    parallel_for(n_paths, [&](std::size_t i) {
        const auto paths = simulate_levels(model, T, levels, seed, i, true);
        for (std::size_t l = 0; l < levels.size(); ++l) res[i][l] = ito_consistency_check(paths[l], F, model).max_abs;
    });

    SuiteResult r;
    r.name = "ito";
    r.table = "dt,op_step,mean_max_abs_residual\n";
    std::vector<double> means;
    for (std::size_t l = 0; l < levels.size(); ++l) {
        std::vector<double> v;
        for (const auto& e : res) v.push_back(e[l]);
        means.push_back(mean_of(v));
        r.table += f(levels[l].dt) + "," + f(levels[l].op_step) + "," + f(means.back()) + "\n";
    }
    r.pass = strictly_decreasing(means) && means.back() < 1e-2;
    r.stats = {{"n_paths", static_cast<double>(n_paths)}, {"final_residual", means.back()}};
    return r;
}

}  // namespace tcsde::repro
