#include "tcsde/subordinator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "tcsde/errors.hpp"
#include "tcsde/parallel.hpp"

namespace tcsde {
namespace {

void require_index(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        std::ostringstream msg;
        msg << "stable index must lie in (0, 1), got " << alpha;
        throw DomainError(msg.str());
    }
}

// Kanter's representation with the per-(alpha, scale, dt) constants hoisted:
// X = (A(U) / W)^{(1-alpha)/alpha},
// A(u) = sin(alpha u)^{alpha/(1-alpha)} sin((1-alpha) u) / sin(u)^{1/(1-alpha)},
// U ~ Uniform(0, pi), W ~ Exp(1).
class StableDraw {
public:
    StableDraw(double alpha, double scale, double dt)
        : alpha_(alpha),
          one_minus_(1.0 - alpha),
          exponent_((1.0 - alpha) / alpha),
          factor_(scale * std::pow(dt, 1.0 / alpha)) {}

    double operator()(Rng& rng) const {
        const double u = std::numbers::pi * uniform_open(rng);
        const double w = -std::log(uniform_open(rng));
        const double log_a =
            (alpha_ * std::log(std::sin(alpha_ * u)) - std::log(std::sin(u))) / one_minus_ +
            std::log(std::sin(one_minus_ * u));
        return factor_ * std::exp(exponent_ * (log_a - std::log(w)));
    }

private:
    double alpha_;
    double one_minus_;
    double exponent_;
    double factor_;
};

std::vector<StableDraw> component_draws(const SubordinatorSpec& spec, double op_step) {
    std::vector<StableDraw> draws;
    for (const auto& c : spec.components()) {
        draws.emplace_back(c.index, std::pow(c.weight, 1.0 / c.index), op_step);
    }
    return draws;
}

void require_step(double op_step) {
    if (!(op_step > 0.0) || !std::isfinite(op_step)) {
        throw DomainError("operational step must be positive and finite");
    }
}

void require_increasing_grid(std::span<const double> grid, const char* what) {
    if (grid.empty()) throw DomainError(std::string(what) + " is empty");
    if (!(grid.front() >= 0.0)) throw DomainError(std::string(what) + " must start at t >= 0");
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw DomainError(std::string(what) + " must be strictly increasing");
        }
    }
}

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (n % 2 == 1) return *mid;
    const double upper = *mid;
    const double lower = *std::max_element(v.begin(), mid);
    return 0.5 * (lower + upper);
}

}  // namespace

SubordinatorSpec::SubordinatorSpec(std::vector<StableComponent> components)
    : components_(std::move(components)) {}

SubordinatorSpec SubordinatorSpec::stable(double alpha) {
    require_index(alpha);
    return SubordinatorSpec({{1.0, alpha}});
}

SubordinatorSpec SubordinatorSpec::mixture(std::vector<StableComponent> components) {
    if (components.empty()) throw DomainError("subordinator mixture needs at least one component");
    double total = 0.0;
    for (const auto& c : components) {
        require_index(c.index);
        if (!(c.weight > 0.0) || !std::isfinite(c.weight)) {
            throw DomainError("mixture weights must be positive");
        }
        total += c.weight;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "mixture weights must sum to 1, got " << total;
        throw DomainError(msg.str());
    }
    std::sort(components.begin(), components.end(),
              [](const StableComponent& a, const StableComponent& b) { return a.index < b.index; });
    for (std::size_t i = 1; i < components.size(); ++i) {
        if (components[i].index == components[i - 1].index) {
            throw DomainError("mixture indices must be distinct");
        }
    }
    return SubordinatorSpec(std::move(components));
}

double SubordinatorSpec::laplace_exponent(double s) const {
    double psi = 0.0;
    for (const auto& c : components_) psi += c.weight * std::pow(s, c.index);
    return psi;
}

std::complex<double> SubordinatorSpec::laplace_exponent(std::complex<double> s) const {
    std::complex<double> psi = 0.0;
    for (const auto& c : components_) psi += c.weight * std::pow(s, c.index);
    return psi;
}

double sample_stable_increment(double alpha, double scale, double dt, Rng& rng) {
    require_index(alpha);
    if (!(scale > 0.0)) throw DomainError("stable scale must be positive");
    if (!(dt > 0.0)) throw DomainError("stable increment needs dt > 0");
    return StableDraw(alpha, scale, dt)(rng);
}

double default_op_step(double horizon_op) { return std::min(1e-3, horizon_op / 1e4); }

void extend_subordinator_path(const SubordinatorSpec& spec, SubordinatorPath& path,
                              std::size_t steps, Rng& rng) {
    require_step(path.op_step);
    if (path.values.empty()) path.values.push_back(0.0);
    const auto draws = component_draws(spec, path.op_step);
    path.values.reserve(path.values.size() + steps);
    double d = path.values.back();
    for (std::size_t s = 0; s < steps; ++s) {
        double increment = 0.0;
        for (const auto& draw : draws) increment += draw(rng);
        const double next = d + increment;
        if (!(next > d)) {
            std::ostringstream msg;
            msg << "subordinator path stalled at operational step " << path.values.size() - 1
                << " (D = " << d << "); increment lost to rounding";
            throw NumericError(msg.str());
        }
        path.values.push_back(next);
        d = next;
    }
}

SubordinatorPath simulate_subordinator_path(const SubordinatorSpec& spec, double horizon_op,
                                            double op_step, Rng& rng) {
    require_step(op_step);
    if (!(horizon_op > 0.0)) throw DomainError("operational horizon must be positive");
    if (op_step > horizon_op / 10.0 * (1.0 + 1e-12)) {
        throw DomainError("operational step must not exceed horizon / 10");
    }
    const auto steps = static_cast<std::size_t>(std::ceil(horizon_op / op_step - 1e-9));
    SubordinatorPath path{op_step, {0.0}};
    extend_subordinator_path(spec, path, steps, rng);
    return path;
}

SubordinatorPath subsample(const SubordinatorPath& path, std::size_t factor) {
    if (factor == 0) throw DomainError("subsampling factor must be positive");
    SubordinatorPath out{path.op_step * static_cast<double>(factor), {}};
    for (std::size_t k = 0; k < path.values.size(); k += factor) out.values.push_back(path.values[k]);
    return out;
}

ClockPath invert_subordinator(const SubordinatorPath& d, std::span<const double> real_grid) {
    require_step(d.op_step);
    if (d.values.size() < 2) throw DomainError("subordinator path needs at least two points");
    for (std::size_t k = 1; k < d.values.size(); ++k) {
        if (!(d.values[k] > d.values[k - 1])) {
            throw DomainError("subordinator path must be strictly increasing");
        }
    }
    require_increasing_grid(real_grid, "real grid");

    ClockPath clock;
    clock.op_step = d.op_step;
    clock.d_values = d.values;
    clock.real_grid.assign(real_grid.begin(), real_grid.end());
    clock.e_steps.reserve(real_grid.size());
    clock.e_values.reserve(real_grid.size());

    std::size_t k = 0;
    const std::size_t n = d.values.size();
    for (const double t : real_grid) {
        while (k < n && d.values[k] <= t) ++k;
        if (k == n) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "real time " << t << " is not below D(" << d.horizon() << ") = " << d.values.back()
                << "; simulate a longer operational horizon";
            throw HorizonError(msg.str());
        }
        clock.e_steps.push_back(static_cast<std::int64_t>(k));
        clock.e_values.push_back(d.op_step * static_cast<double>(k));
    }
    return clock;
}

ClockPath identity_clock(std::span<const double> real_grid) {
    require_increasing_grid(real_grid, "real grid");
    if (real_grid.front() != 0.0 || real_grid.size() < 2) {
        throw DomainError("identity clock needs a uniform grid starting at 0");
    }
    const double step = real_grid[1] - real_grid[0];
    ClockPath clock;
    clock.op_step = step;
    clock.real_grid.assign(real_grid.begin(), real_grid.end());
    for (std::size_t j = 0; j < real_grid.size(); ++j) {
        if (std::abs(real_grid[j] - step * static_cast<double>(j)) > 1e-9 * std::max(1.0, real_grid[j])) {
            throw DomainError("identity clock needs a uniform grid starting at 0");
        }
        clock.e_steps.push_back(static_cast<std::int64_t>(j));
    }
    clock.e_values = clock.real_grid;
    clock.d_values = clock.real_grid;
    return clock;
}

ClockPath build_clock(const SubordinatorSpec& spec, std::span<const double> real_grid,
                      const ClockOptions& options, Rng& rng) {
    require_step(options.op_step);
    require_increasing_grid(real_grid, "real grid");
    const double target = real_grid.back();
    const std::size_t chunk = std::max<std::size_t>(options.chunk_steps, 16);
    SubordinatorPath path{options.op_step, {0.0}};
    while (path.values.back() <= target) {
        if (path.horizon() >= options.max_horizon_op) {
            std::ostringstream msg;
            msg << "operational horizon cap " << options.max_horizon_op
                << " reached before D passed t = " << target;
            throw HorizonError(msg.str());
        }
        extend_subordinator_path(spec, path, chunk, rng);
    }
    return invert_subordinator(path, real_grid);
}

std::vector<double> sample_inverse_at(const SubordinatorSpec& spec, std::span<const double> times,
                                      double op_step, Rng& rng, double max_horizon_op) {
    require_step(op_step);
    require_increasing_grid(times, "time grid");
    const auto draws = component_draws(spec, op_step);
    const auto max_steps = static_cast<std::int64_t>(max_horizon_op / op_step);
    std::vector<double> out;
    out.reserve(times.size());
    double d = 0.0;
    std::int64_t k = 0;
    for (const double t : times) {
        while (d <= t) {
            if (k >= max_steps) throw HorizonError("operational horizon cap reached in sample_inverse_at");
            double increment = 0.0;
            for (const auto& draw : draws) increment += draw(rng);
            if (!(d + increment > d)) throw NumericError("subordinator path stalled");
            d += increment;
            ++k;
        }
        out.push_back(op_step * static_cast<double>(k));
    }
    return out;
}

double laplace_invert_talbot(const std::function<std::complex<double>(std::complex<double>)>& transform,
                             double t, int terms) {
    if (!(t > 0.0)) throw DomainError("Laplace inversion needs t > 0");
    const double m = terms;
    const double r = 2.0 * m / (5.0 * t);
    double sum = 0.5 * std::exp(r * t) * transform({r, 0.0}).real();
    for (int k = 1; k < terms; ++k) {
        const double theta = k * std::numbers::pi / m;
        const double cot = std::cos(theta) / std::sin(theta);
        const std::complex<double> s{r * theta * cot, r * theta};
        const std::complex<double> sigma{1.0, theta + (theta * cot - 1.0) * cot};
        sum += (std::exp(t * s) * transform(s) * sigma).real();
    }
    return r / m * sum;
}

double inverse_moment(const SubordinatorSpec& spec, int n, double t) {
    if (n < 0) throw DomainError("moment order must be nonnegative");
    if (n == 0) return 1.0;
    if (!(t > 0.0)) throw DomainError("inverse moment needs t > 0");
    if (spec.is_single()) {
        const double alpha = spec.smallest_index();
        return std::exp(std::lgamma(n + 1.0) + n * alpha * std::log(t) - std::lgamma(1.0 + n * alpha));
    }
    const double factorial = std::exp(std::lgamma(n + 1.0));
    auto transform = [&](std::complex<double> s) {
        return factorial / (s * std::pow(spec.laplace_exponent(s), n));
    };
    return laplace_invert_talbot(transform, t);
}

MomentSlope inverse_moment_slope(const SubordinatorSpec& spec, int n, double t_lo, double t_hi,
                                 std::size_t points) {
    if (!(t_lo > 0.0 && t_hi > t_lo) || points < 2) throw DomainError("bad slope range");
    MomentSlope out;
    out.expected_slope = n * spec.smallest_index();
    const double a = std::log(t_lo);
    const double b = std::log(t_hi);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        const double lt = a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1);
        const double t = std::exp(lt);
        const double m = inverse_moment(spec, n, t);
        out.times.push_back(t);
        out.moments.push_back(m);
        const double lm = std::log(m);
        sx += lt;
        sy += lm;
        sxx += lt * lt;
        sxy += lt * lm;
    }
    const double np = static_cast<double>(points);
    out.slope = (np * sxy - sx * sy) / (np * sxx - sx * sx);
    return out;
}

SllnReport check_slln(std::span<const double> t_grid, std::size_t n_paths,
                      const InverseSampler& sampler, double decay_factor) {
    require_increasing_grid(t_grid, "t grid");
    if (n_paths == 0) throw DomainError("check_slln needs at least one path");
    std::vector<std::vector<double>> samples(n_paths);
    parallel_for(n_paths, [&](std::size_t i) { samples[i] = sampler(t_grid, i); });

    SllnReport report;
    report.n_paths = n_paths;
    for (std::size_t j = 0; j < t_grid.size(); ++j) {
        std::vector<double> ratios(n_paths);
        for (std::size_t i = 0; i < n_paths; ++i) {
            if (samples[i].size() != t_grid.size()) throw DomainError("sampler returned wrong length");
            ratios[i] = samples[i][j] / t_grid[j];
            if (!(ratios[i] >= 0.0)) report.nonnegative = false;
        }
        const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / static_cast<double>(n_paths);
        report.rows.push_back({t_grid[j], mean, median_of(std::move(ratios))});
    }
    bool decreasing = true;
    for (std::size_t j = 1; j < report.rows.size(); ++j) {
        decreasing = decreasing && report.rows[j].mean < report.rows[j - 1].mean &&
                     report.rows[j].median < report.rows[j - 1].median;
    }
    report.decay_flag = decreasing && report.rows.size() > 1 &&
                        report.rows.back().mean < report.rows.front().mean / decay_factor;
    return report;
}

SllnReport check_slln(const SubordinatorSpec& spec, std::span<const double> t_grid,
                      std::size_t n_paths, std::uint64_t seed, double op_step, double decay_factor) {
    require_increasing_grid(t_grid, "t grid");
    if (!(t_grid.front() > 0.0)) throw DomainError("check_slln needs t > 0");
    const double step = op_step > 0.0 ? op_step : 1e-4 * t_grid.front();
    auto sampler = [&](std::span<const double> times, std::uint64_t path_index) {
        Rng rng = make_stream(seed, path_index, Stream::clock);
        return sample_inverse_at(spec, times, step, rng);
    };
    return check_slln(t_grid, n_paths, sampler, decay_factor);
}

}  // namespace tcsde
