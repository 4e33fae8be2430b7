#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tcsde/quadrature.hpp"
#include "tcsde/rng.hpp"

namespace tcsde {

enum class Region { small, large };  // |y| < c and |y| >= c

enum class MeasureKind { none, uniform, standard_normal, tabulated };

const char* to_string(MeasureKind kind);
const char* to_string(Region region);

// Finite Levy measure nu on the real line, split at the truncation radius c.
// Immutable after construction.
class LevyMeasure {
public:
    LevyMeasure();  // the zero measure (no jumps)

    static LevyMeasure uniform(double c = 1.0);          // Lebesgue measure on [0, 1]
    static LevyMeasure standard_normal(double c = 1.0);  // N(0, 1) law
    // Density given at strictly increasing knots, linear in between, zero outside.
    static LevyMeasure tabulated(std::vector<double> y, std::vector<double> density, double c);
    // CSV with header `y,density`.
    static LevyMeasure load_tabulated_csv(const std::string& path, double c);
    // Tabulates an arbitrary density on [lo, hi] after checking that its mass
    // stays bounded as the window around the origin shrinks; infinite-activity
    // densities are rejected with DomainError instead of being truncated.
    static LevyMeasure from_density(const std::function<double(double)>& density, double lo,
                                    double hi, double c, std::size_t knots = 4097);

    MeasureKind kind() const noexcept { return kind_; }
    double truncation() const noexcept { return c_; }
    double small_mass() const noexcept { return small_mass_; }
    double large_mass() const noexcept { return large_mass_; }
    double mass(Region region) const noexcept {
        return region == Region::small ? small_mass_ : large_mass_;
    }
    double total_mass() const noexcept { return small_mass_ + large_mass_; }

    double density(double y) const;

    // Intervals covering the part of the support inside the region, cut at
    // the density's kinks so that each piece is smooth.
    std::vector<std::pair<double, double>> pieces(Region region) const;

    // One draw from nu restricted to the region and normalized.
    double sample_mark(Region region, Rng& rng) const;

    const std::vector<double>& knots() const noexcept { return y_; }
    const std::vector<double>& knot_density() const noexcept { return f_; }

    std::string describe() const;

private:
    struct CdfTable {
        std::vector<double> y;
        std::vector<double> cdf;  // normalized, cdf.back() == 1
    };

    void finish_tabulated();
    double tabulated_mass(double a, double b) const;
    static double sample_table(const CdfTable& table, Rng& rng);

    MeasureKind kind_ = MeasureKind::none;
    double c_ = 1.0;
    double small_mass_ = 0.0;
    double large_mass_ = 0.0;
    std::vector<double> y_;
    std::vector<double> f_;
    CdfTable small_table_;
    CdfTable large_table_;
};

// Marks of the Poisson random measure on the region during an operational
// time span dE: count ~ Poisson(mass * dE), marks iid from the normalized
// restriction of nu.
std::vector<double> sample_jump_marks(const LevyMeasure& measure, Region region, double dE, Rng& rng);

// Integral of phi over the region with respect to nu (adaptive Simpson,
// absolute tolerance shared among the pieces).
QuadratureResult nu_quadrature(const LevyMeasure& measure, const std::function<double(double)>& phi,
                               Region region, double abs_tol = 1e-8);
double nu_integral(const LevyMeasure& measure, const std::function<double(double)>& phi,
                   Region region, double abs_tol = 1e-8);

// Z_c = integral over |y| < c of max(|h|, h^2) dnu. Throws AssumptionViolation
// when the integral does not exist.
double z_constant(const LevyMeasure& measure, const std::function<double(double)>& h);

// Driving noise on the operational clock: Brownian motion on the grid
// k * op_step and the jump marks with their continuous operational times.
struct Mark {
    double op_time = 0.0;
    double y = 0.0;
};

struct NoisePath {
    double op_step = 0.0;
    std::vector<double> brownian;  // B(k op_step), brownian.front() == 0
    std::vector<Mark> small_marks;  // sorted by op_time
    std::vector<Mark> large_marks;

    double horizon() const noexcept {
        return brownian.empty() ? 0.0 : op_step * static_cast<double>(brownian.size() - 1);
    }
};

// Noise up to operational time steps * op_step, drawn from the brownian,
// small_marks and large_marks streams of (seed, path_index).
NoisePath simulate_noise(const LevyMeasure& measure, std::size_t steps, double op_step,
                         std::uint64_t seed, std::uint64_t path_index);

}  // namespace tcsde
