#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tcsde/levy_noise.hpp"
#include "tcsde/sde_engine.hpp"

namespace tcsde {

struct LyapunovFunction {
    std::function<double(double)> V;
    std::function<double(double)> V_x;
    std::function<double(double)> V_xx;
    double p = 2.0;   // c1 |x|^p <= V(x)
    double c1 = 1.0;
};

// V = |x|^p with its derivatives (p >= 2 keeps V_xx bounded at 0; smaller p is
// fine away from the origin).
LyapunovFunction power_lyapunov(double p);

// Sup/inf domain: log-spaced |x| in [lo, hi] on both signs, times t and
// operational times e taken from the probe sets.
struct CriteriaGrid {
    std::vector<double> x;  // sorted ascending, 0 excluded
    std::vector<double> t_probes{0.0, 1.0, 10.0};
    std::vector<double> e_probes{0.0, 1.0, 10.0};
    double lo = 1e-6;
    double hi = 1e3;

    static CriteriaGrid log_grid(double lo = 1e-6, double hi = 1e3, std::size_t per_sign = 400);
    std::string describe() const;
};

// A theorem constant. Upper-bound constants (c2, c3, K1, K2, xi, log_jump, M_c)
// may be declared larger than the grid value, lower-bound constants (c4, c5,
// gamma, delta) smaller; a declared value on the wrong side of the computed
// one is rejected and the computed value is used instead.
struct TheoremConstant {
    enum class Side { upper, lower };

    std::string name;
    Side side = Side::upper;
    double computed = 0.0;
    std::optional<double> declared;
    bool declared_valid = true;
    std::string where;  // grid location of the extremum, or "quadrature"
    bool at_boundary = false;

    double value() const { return declared && declared_valid ? *declared : computed; }
};

using DeclaredConstants = std::map<std::string, double>;

struct CriteriaReport {
    std::string theorem;  // general | linear | large_jump | combined
    std::vector<TheoremConstant> constants;
    bool drift_present = false;   // f != 0: bound is a real-clock exponent
    double bound = 0.0;           // from the effective constants
    double computed_bound = 0.0;  // from the grid values alone
    bool certified = false;
    std::string verdict;
    std::vector<std::string> hypothesis_failures;
    std::vector<std::string> warnings;
    std::string domain;
    double quadrature_tolerance = 1e-8;
    double quadrature_error = 0.0;
    std::size_t quadrature_evaluations = 0;

    const TheoremConstant& constant(const std::string& name) const;
    std::string to_text() const;
    std::string to_csv() const;  // name,value,where_attained
};

inline constexpr double verdict_slack = 1e-9;

// First theorem (small jumps, Lyapunov function V). Requires no large jumps.
CriteriaReport evaluate_theorem_general(const SdeModel& model, const LyapunovFunction& V,
                                        const CriteriaGrid& grid = CriteriaGrid::log_grid(),
                                        const DeclaredConstants& declared = {});

// Second theorem (linear small jumps h(y) x, no large jumps).
CriteriaReport evaluate_theorem_linear(const SdeModel& model,
                                       const CriteriaGrid& grid = CriteriaGrid::log_grid(),
                                       const DeclaredConstants& declared = {});

struct LargeJumpResult {
    double M = 0.0;            // integral over |y| >= c of log|1 + H(y)|
    std::optional<double> K;   // -M when M < 0
    QuadratureResult quadrature;
};

// Throws AssumptionViolation when 1 + H vanishes at a quadrature node.
LargeJumpResult evaluate_large_jump(const MarkFunction& H, const LevyMeasure& measure);

// Combined theorem for linear small and large jumps.
CriteriaReport evaluate_theorem_combined(const SdeModel& model,
                                         const CriteriaGrid& grid = CriteriaGrid::log_grid(),
                                         const DeclaredConstants& declared = {});

struct AssumptionCheck {
    std::string name;
    bool pass = true;
    double constant = 0.0;  // grid estimate of the assumption's constant
    std::string detail;
    std::string witness;
};

struct AssumptionReport {
    std::vector<AssumptionCheck> checks;

    bool all_pass() const;
    const AssumptionCheck& check(const std::string& name) const;
    std::string to_text() const;
};

// Lipschitz, growth, near-origin, jump-moment and (linear form) large-jump
// assumptions, checked by difference quotients and ratio bounds on the grid.
AssumptionReport check_standing_assumptions(const SdeModel& model,
                                            const CriteriaGrid& grid = CriteriaGrid::log_grid());

}  // namespace tcsde
