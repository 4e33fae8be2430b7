#include "tcsde/levy_noise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>

#include "tcsde/errors.hpp"

namespace tcsde {
namespace {

constexpr double normal_cutoff = 40.0;  // N(0,1) density underflows beyond this
constexpr std::size_t cdf_points = 4096;

double normal_pdf(double y) { return std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi); }

void require_radius(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("truncation radius c must be positive");
}

}  // namespace

const char* to_string(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::none: return "none";
        case MeasureKind::uniform: return "uniform";
        case MeasureKind::standard_normal: return "standard_normal";
        case MeasureKind::tabulated: return "tabulated";
    }
    return "?";
}

const char* to_string(Region region) { return region == Region::small ? "small" : "large"; }

LevyMeasure::LevyMeasure() = default;

LevyMeasure LevyMeasure::uniform(double c) {
    require_radius(c);
    LevyMeasure m;
    m.kind_ = MeasureKind::uniform;
    m.c_ = c;
    m.small_mass_ = std::min(c, 1.0);
    m.large_mass_ = 1.0 - m.small_mass_;
    return m;
}

LevyMeasure LevyMeasure::standard_normal(double c) {
    require_radius(c);
    LevyMeasure m;
    m.kind_ = MeasureKind::standard_normal;
    m.c_ = c;
    m.small_mass_ = std::erf(c / std::numbers::sqrt2);
    m.large_mass_ = std::erfc(c / std::numbers::sqrt2);
    return m;
}

LevyMeasure LevyMeasure::tabulated(std::vector<double> y, std::vector<double> density, double c) {
    require_radius(c);
    if (y.size() != density.size()) throw DomainError("tabulated density: y and density lengths differ");
    if (y.size() < 2) throw DomainError("tabulated density needs at least two knots");
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!std::isfinite(y[i])) throw DomainError("tabulated density: non-finite y");
        if (i > 0 && !(y[i] > y[i - 1])) throw DomainError("tabulated density: y must be strictly increasing");
        if (!(density[i] >= 0.0) || !std::isfinite(density[i])) {
            std::ostringstream msg;
            msg << "tabulated density: negative or non-finite density at y = " << y[i];
            throw DomainError(msg.str());
        }
    }
    LevyMeasure m;
    m.kind_ = MeasureKind::tabulated;
    m.c_ = c;
    m.y_ = std::move(y);
    m.f_ = std::move(density);
    m.finish_tabulated();
    return m;
}

LevyMeasure LevyMeasure::load_tabulated_csv(const std::string& path, double c) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open density file " + path);
    std::string line;
    if (!std::getline(in, line)) throw UsageError(path + ": empty density file");
    line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
    if (line != "y,density") throw UsageError(path + ": expected header `y,density`");
    std::vector<double> y, f;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        double a = 0.0, b = 0.0;
        char comma = 0;
        if (!(row >> a >> comma >> b) || comma != ',') {
            throw UsageError(path + ":" + std::to_string(lineno) + ": malformed row");
        }
        y.push_back(a);
        f.push_back(b);
    }
    return tabulated(std::move(y), std::move(f), c);
}

LevyMeasure LevyMeasure::from_density(const std::function<double(double)>& density, double lo,
                                      double hi, double c, std::size_t knots) {
    require_radius(c);
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw DomainError("density support must be a finite interval lo < hi");
    }
    if (knots < 2) throw DomainError("need at least two knots");
    if (lo <= 0.0 && hi >= 0.0) {
        // mass outside (-eps, eps) for shrinking eps
        auto outer_mass = [&](double eps) {
            double total = 0.0;
            if (lo < -eps) total += adaptive_simpson(density, lo, -eps, 1e-8).value;
            if (hi > eps) total += adaptive_simpson(density, eps, hi, 1e-8).value;
            return total;
        };
        try {
            const double m5 = outer_mass(1e-5);
            const double m7 = outer_mass(1e-7);
            if (m7 - m5 > 1e-3 * std::max(1.0, m5)) {
                std::ostringstream msg;
                msg << "density has infinite activity near 0: mass outside (-eps, eps) grows from " << m5
                    << " to " << m7 << " as eps goes from 1e-5 to 1e-7; only finite measures are supported";
                throw DomainError(msg.str());
            }
        } catch (const QuadratureError& e) {
            throw DomainError(std::string("density is not integrable near 0 (infinite activity): ") + e.what());
        }
    }
    std::vector<double> y(knots), f(knots);
    for (std::size_t i = 0; i < knots; ++i) {
        y[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(knots - 1);
        f[i] = density(y[i]);
    }
    return tabulated(std::move(y), std::move(f), c);
}

double LevyMeasure::density(double y) const {
    switch (kind_) {
        case MeasureKind::none: return 0.0;
        case MeasureKind::uniform: return (y >= 0.0 && y <= 1.0) ? 1.0 : 0.0;
        case MeasureKind::standard_normal: return normal_pdf(y);
        case MeasureKind::tabulated: {
            if (y < y_.front() || y > y_.back()) return 0.0;
            const auto it = std::upper_bound(y_.begin(), y_.end(), y);
            if (it == y_.end()) return f_.back();
            const std::size_t i = static_cast<std::size_t>(it - y_.begin());
            const double w = (y - y_[i - 1]) / (y_[i] - y_[i - 1]);
            return f_[i - 1] + w * (f_[i] - f_[i - 1]);
        }
    }
    return 0.0;
}

std::vector<std::pair<double, double>> LevyMeasure::pieces(Region region) const {
    double lo = 0.0, hi = 0.0;
    switch (kind_) {
        case MeasureKind::none: return {};
        case MeasureKind::uniform: lo = 0.0; hi = 1.0; break;
        case MeasureKind::standard_normal: lo = -normal_cutoff; hi = normal_cutoff; break;
        case MeasureKind::tabulated: lo = y_.front(); hi = y_.back(); break;
    }
    std::vector<std::pair<double, double>> spans;
    if (region == Region::small) {
        spans.emplace_back(std::max(lo, -c_), std::min(hi, c_));
    } else {
        spans.emplace_back(lo, std::min(hi, -c_));
        spans.emplace_back(std::max(lo, c_), hi);
    }
    std::vector<std::pair<double, double>> out;
    for (const auto& [a, b] : spans) {
        if (!(b > a)) continue;
        if (kind_ != MeasureKind::tabulated) {
            out.emplace_back(a, b);
            continue;
        }
        double left = a;
        for (const double k : y_) {
            if (k > left && k < b) {
                out.emplace_back(left, k);
                left = k;
            }
        }
        out.emplace_back(left, b);
    }
    return out;
}

double LevyMeasure::tabulated_mass(double a, double b) const {
    double total = 0.0;
    for (std::size_t i = 1; i < y_.size(); ++i) {
        const double l = std::max(a, y_[i - 1]);
        const double r = std::min(b, y_[i]);
        if (r > l) total += 0.5 * (r - l) * (density(l) + density(r));
    }
    return total;
}

void LevyMeasure::finish_tabulated() {
    small_mass_ = tabulated_mass(-c_, c_);
    large_mass_ = tabulated_mass(y_.front(), -c_) + tabulated_mass(c_, y_.back());

    for (const Region region : {Region::small, Region::large}) {
        CdfTable& table = region == Region::small ? small_table_ : large_table_;
        table = {};
        const auto spans = pieces(region);
        double length = 0.0;
        for (const auto& [a, b] : spans) length += b - a;
        if (length <= 0.0 || mass(region) <= 0.0) continue;
        double acc = 0.0;
        for (const auto& [a, b] : spans) {
            const auto n = std::max<std::size_t>(
                1, static_cast<std::size_t>(std::llround(cdf_points * (b - a) / length)));
            double prev_y = a;
            double prev_f = density(a);
            if (table.y.empty() || table.y.back() != a) {
                table.y.push_back(a);
                table.cdf.push_back(acc);
            }
            for (std::size_t j = 1; j <= n; ++j) {
                const double yj = (j == n) ? b : a + (b - a) * static_cast<double>(j) / static_cast<double>(n);
                const double fj = density(yj);
                acc += 0.5 * (yj - prev_y) * (prev_f + fj);
                table.y.push_back(yj);
                table.cdf.push_back(acc);
                prev_y = yj;
                prev_f = fj;
            }
        }
        for (double& v : table.cdf) v /= acc;
        table.cdf.back() = 1.0;
    }
}

double LevyMeasure::sample_table(const CdfTable& table, Rng& rng) {
    const double u = uniform_open(rng);
    const auto it = std::upper_bound(table.cdf.begin(), table.cdf.end(), u);
    const std::size_t i = std::clamp<std::size_t>(static_cast<std::size_t>(it - table.cdf.begin()), 1,
                                                  table.cdf.size() - 1);
    const double span = table.cdf[i] - table.cdf[i - 1];
    const double w = span > 0.0 ? (u - table.cdf[i - 1]) / span : 0.5;
    return table.y[i - 1] + w * (table.y[i] - table.y[i - 1]);
}

double LevyMeasure::sample_mark(Region region, Rng& rng) const {
    if (mass(region) <= 0.0) throw DomainError(std::string("no mass in the ") + to_string(region) + " region");
    switch (kind_) {
        case MeasureKind::none: break;
        case MeasureKind::uniform: {
            const double edge = std::min(c_, 1.0);
            const double u = uniform_open(rng);
            return region == Region::small ? u * edge : edge + u * (1.0 - edge);
        }
        case MeasureKind::standard_normal: {
            const double u = uniform_open(rng);
            if (region == Region::small) {
                return std::numbers::sqrt2 * boost::math::erf_inv((2.0 * u - 1.0) * small_mass_);
            }
            const double v = uniform_open(rng);
            const double y = std::numbers::sqrt2 * boost::math::erfc_inv(u * large_mass_);
            return v < 0.5 ? -y : y;
        }
        case MeasureKind::tabulated:
            return sample_table(region == Region::small ? small_table_ : large_table_, rng);
    }
    throw DomainError("cannot sample from the zero measure");
}

std::string LevyMeasure::describe() const {
    std::ostringstream out;
    out << to_string(kind_);
    if (kind_ == MeasureKind::uniform) out << "[0,1]";
    if (kind_ == MeasureKind::tabulated) out << "(" << y_.size() << " knots)";
    out << " c=" << c_ << " small_mass=" << small_mass_ << " large_mass=" << large_mass_;
    return out.str();
}

std::vector<double> sample_jump_marks(const LevyMeasure& measure, Region region, double dE, Rng& rng) {
    if (!(dE >= 0.0)) throw DomainError("operational increment dE must be nonnegative");
    const double rate = measure.mass(region) * dE;
    if (rate <= 0.0) return {};
    std::poisson_distribution<long> count(rate);
    const long n = count(rng);
    std::vector<double> marks;
    marks.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) marks.push_back(measure.sample_mark(region, rng));
    return marks;
}

QuadratureResult nu_quadrature(const LevyMeasure& measure, const std::function<double(double)>& phi,
                               Region region, double abs_tol) {
    const auto spans = measure.pieces(region);
    QuadratureResult total;
    if (spans.empty()) return total;
    const double share = abs_tol / static_cast<double>(spans.size());
    const int panels = measure.kind() == MeasureKind::tabulated ? 2 : 8;
    auto integrand = [&](double y) {
        const double d = measure.density(y);
        return d == 0.0 ? 0.0 : phi(y) * d;
    };
    for (const auto& [a, b] : spans) {
        const auto r = adaptive_simpson(integrand, a, b, share, 48, panels);
        total.value += r.value;
        total.error += r.error;
        total.evaluations += r.evaluations;
    }
    return total;
}

double nu_integral(const LevyMeasure& measure, const std::function<double(double)>& phi, Region region,
                   double abs_tol) {
    return nu_quadrature(measure, phi, region, abs_tol).value;
}

double z_constant(const LevyMeasure& measure, const std::function<double(double)>& h) {
    auto phi = [&](double y) {
        const double v = std::abs(h(y));
        return std::max(v, v * v);
    };
    double z = 0.0;
    try {
        z = nu_integral(measure, phi, Region::small);
    } catch (const NumericError& e) {
        throw AssumptionViolation(std::string("jump moment integral Z_c does not exist: ") + e.what());
    }
    if (!std::isfinite(z)) throw AssumptionViolation("jump moment integral Z_c is infinite");
    return z;
}

NoisePath simulate_noise(const LevyMeasure& measure, std::size_t steps, double op_step,
                         std::uint64_t seed, std::uint64_t path_index) {
    if (!(op_step > 0.0)) throw DomainError("noise op_step must be positive");
    NoisePath noise;
    noise.op_step = op_step;
    noise.brownian.resize(steps + 1);
    {
        Rng rng = make_stream(seed, path_index, Stream::brownian);
        std::normal_distribution<double> normal(0.0, std::sqrt(op_step));
        double b = 0.0;
        noise.brownian[0] = 0.0;
        for (std::size_t k = 1; k <= steps; ++k) {
            b += normal(rng);
            noise.brownian[k] = b;
        }
    }
    const double horizon = op_step * static_cast<double>(steps);
    for (const Region region : {Region::small, Region::large}) {
        const double rate = measure.mass(region);
        if (rate <= 0.0) continue;
        Rng rng = make_stream(seed, path_index, region == Region::small ? Stream::small_marks : Stream::large_marks);
        auto& out = region == Region::small ? noise.small_marks : noise.large_marks;
        double tau = 0.0;
        while (true) {
            tau += -std::log(uniform_open(rng)) / rate;
            if (tau > horizon) break;
            out.push_back({tau, measure.sample_mark(region, rng)});
        }
    }
    return noise;
}

}  // namespace tcsde
