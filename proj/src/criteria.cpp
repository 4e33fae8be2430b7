#include "tcsde/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "tcsde/errors.hpp"

namespace tcsde {
namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double quad_tol = 1e-8;

using GridFunction = std::function<double(double t, double e, double x)>;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string location(double x, double t, double e) {
    return "x=" + fmt(x) + " t=" + fmt(t) + " e=" + fmt(e);
}

// Per grid x, the extremum of fn over the time probes.
struct Profile {
    std::vector<double> value;
    std::vector<double> t;
    std::vector<double> e;
};

struct Extremum {
    double value = 0.0;
    std::string where;
    bool at_boundary = false;
    bool unbounded = false;
    bool finite = true;
};

// sup of fn; `sign = -1` turns it into an inf.
Profile scan(const CriteriaGrid& grid, const GridFunction& fn, double sign) {
    Profile p;
    p.value.assign(grid.x.size(), -inf);
    p.t.assign(grid.x.size(), 0.0);
    p.e.assign(grid.x.size(), 0.0);
    for (std::size_t i = 0; i < grid.x.size(); ++i) {
        for (const double t : grid.t_probes) {
            for (const double e : grid.e_probes) {
                double v = sign * fn(t, e, grid.x[i]);
                if (std::isnan(v)) v = inf;
                if (v > p.value[i]) {
                    p.value[i] = v;
                    p.t[i] = t;
                    p.e[i] = e;
                }
            }
        }
    }
    return p;
}

double sup_where(const std::vector<double>& abs_x, const std::vector<double>& v, double lo, double hi) {
    double s = -inf;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (abs_x[i] >= lo && abs_x[i] <= hi) s = std::max(s, v[i]);
    }
    return s;
}

// Nested sups a <= b <= c over ranges growing by a decade each: the last
// decade still adds a non-negligible amount that is not decaying away.
bool grows(double a, double b, double c) {
    if (!std::isfinite(c)) return true;
    const double last = c - b;
    const double prev = b - a;
    return last > 1e-3 * std::max(1.0, std::abs(c)) && last >= 0.5 * prev;
}

bool grows_at_high(const std::vector<double>& abs_x, const std::vector<double>& v, double hi) {
    return grows(sup_where(abs_x, v, 0.0, hi / 100.0), sup_where(abs_x, v, 0.0, hi / 10.0),
                 sup_where(abs_x, v, 0.0, inf));
}

bool grows_at_low(const std::vector<double>& abs_x, const std::vector<double>& v, double lo) {
    return grows(sup_where(abs_x, v, lo * 100.0, inf), sup_where(abs_x, v, lo * 10.0, inf),
                 sup_where(abs_x, v, 0.0, inf));
}

Extremum extremum(const CriteriaGrid& grid, const GridFunction& fn, bool sup, bool check_high = true) {
    const double sign = sup ? 1.0 : -1.0;
    const Profile p = scan(grid, fn, sign);
    std::vector<double> abs_x(grid.x.size());
    for (std::size_t i = 0; i < grid.x.size(); ++i) abs_x[i] = std::abs(grid.x[i]);
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.value.size(); ++i) {
        if (p.value[i] > p.value[best]) best = i;
    }
    Extremum out;
    out.value = sign * p.value[best] + 0.0;
    out.finite = std::isfinite(p.value[best]);
    out.where = location(grid.x[best], p.t[best], p.e[best]);
    const double interior = sup_where(abs_x, p.value, grid.lo * (1.0 + 1e-9), grid.hi * (1.0 - 1e-9));
    out.at_boundary = p.value[best] > interior + 1e-12 * std::max(1.0, std::abs(interior));
    out.unbounded = !out.finite || (check_high && grows_at_high(abs_x, p.value, grid.hi)) ||
                    grows_at_low(abs_x, p.value, grid.lo);
    return out;
}

class ReportBuilder {
public:
    ReportBuilder(CriteriaReport& report, const DeclaredConstants& declared)
        : report_(report), declared_(declared) {}

    void add(const std::string& name, TheoremConstant::Side side, const Extremum& ex) {
        add(name, side, ex.value, ex.where, ex.at_boundary);
        if (ex.unbounded) {
            report_.hypothesis_failures.push_back(name + " is unbounded on the grid (extremum near " + ex.where + ")");
        }
    }

    void add(const std::string& name, TheoremConstant::Side side, double computed, const std::string& where,
             bool at_boundary = false) {
        TheoremConstant c;
        c.name = name;
        c.side = side;
        c.computed = computed;
        c.where = where;
        c.at_boundary = at_boundary;
        if (at_boundary) {
            report_.warnings.push_back(name + " attained at the grid boundary (" + where + "); treat as suspect");
        }
        if (auto it = declared_.find(name); it != declared_.end()) {
            c.declared = it->second;
            const double tol = 1e-9 * std::max(1.0, std::abs(computed));
            c.declared_valid = side == TheoremConstant::Side::upper ? it->second >= computed - tol
                                                                     : it->second <= computed + tol;
            if (!c.declared_valid) {
                report_.warnings.push_back("declared " + name + " = " + fmt(it->second) + " rejected: must be " +
                                           (side == TheoremConstant::Side::upper ? ">= " : "<= ") +
                                           "computed " + fmt(computed) + "; using the computed value");
            }
        }
        report_.constants.push_back(c);
    }

    void unknown_declarations() {
        for (const auto& [name, value] : declared_) {
            const bool known = std::any_of(report_.constants.begin(), report_.constants.end(),
                                           [&](const TheoremConstant& c) { return c.name == name; });
            if (!known) report_.warnings.push_back("declared constant " + name + " is not used by this theorem");
        }
    }

private:
    CriteriaReport& report_;
    const DeclaredConstants& declared_;
};

struct QuadTally {
    double error = 0.0;
    std::size_t evaluations = 0;

    double operator()(const QuadratureResult& r) {
        error = std::max(error, r.error);
        evaluations += r.evaluations;
        return r.value;
    }
};

void finish(CriteriaReport& report, const SdeModel& model) {
    if (report.drift_present && std::holds_alternative<IdentityClock>(model.spec().clock)) {
        report.hypothesis_failures.push_back("drift case needs E_t / t -> 0, which the identity clock violates");
    }
    report.certified = report.bound < -verdict_slack && report.hypothesis_failures.empty();
    if (!report.certified) {
        report.verdict = "not certified";
    } else {
        report.verdict = report.drift_present ? "exponentially path stable" : "path stable (rate E_t)";
    }
}

const LinearJumps& require_linear(const SdeModel& model, const char* theorem) {
    if (!model.linear()) throw PreconditionError(std::string(theorem) + " theorem needs the linear jump form h(y) x");
    return std::get<LinearJumps>(model.spec().jumps);
}

struct LinearConstants {
    Extremum K1, K2, xi, gamma;
    double delta_raw = 0.0;
    double log_jump = 0.0;
};

LinearConstants linear_constants(const SdeModel& model, const LinearJumps& jumps, const CriteriaGrid& grid,
                                 CriteriaReport& report, QuadTally& tally) {
    LinearConstants lc;
    lc.K1 = extremum(grid, [&](double t, double e, double x) { return model.f(t, e, x) / x; }, true);
    lc.K2 = extremum(grid, [&](double t, double e, double x) { return model.k(t, e, x) / x; }, true);
    auto g2 = [&](double t, double e, double x) {
        const double g = model.g(t, e, x);
        return g * g / (x * x);
    };
    lc.xi = extremum(grid, g2, true);
    lc.gamma = extremum(grid, g2, false);
    const LevyMeasure& nu = model.spec().noise;
    if (jumps.h && nu.small_mass() > 0.0) {
        lc.delta_raw = tally(nu_quadrature(nu, jumps.h, Region::small, quad_tol));
        lc.log_jump = tally(nu_quadrature(nu, [&](double y) { return std::log1p(std::abs(jumps.h(y))); },
                                          Region::small, quad_tol));
        try {
            z_constant(nu, jumps.h);
        } catch (const AssumptionViolation& e) {
            report.hypothesis_failures.push_back(e.what());
        }
    }
    if (lc.delta_raw < 0.0) {
        report.hypothesis_failures.push_back("condition (2) fails: integral of h over |y| < c is " +
                                             fmt(lc.delta_raw) + " < 0");
    }
    return lc;
}

void add_linear_constants(ReportBuilder& b, const LinearConstants& lc) {
    using S = TheoremConstant::Side;
    b.add("K1", S::upper, lc.K1);
    b.add("K2", S::upper, lc.K2);
    b.add("xi", S::upper, lc.xi);
    b.add("gamma", S::lower, lc.gamma);
    b.add("delta", S::lower, std::max(0.0, lc.delta_raw), "quadrature");
    b.add("log_jump", S::upper, lc.log_jump, "quadrature");
}

double linear_bound(const CriteriaReport& r, bool effective, double M) {
    auto v = [&](const char* name) {
        const auto& c = r.constant(name);
        return effective ? c.value() : c.computed;
    };
    if (r.drift_present) return v("K1");
    return -(v("gamma") - v("K2") - 0.5 * v("xi") - v("log_jump") + v("delta") - M);
}

}  // namespace

LyapunovFunction power_lyapunov(double p) {
    if (!(p > 0.0)) throw DomainError("Lyapunov exponent p must be positive");
    LyapunovFunction V;
    V.p = p;
    V.c1 = 1.0;
    V.V = [p](double x) { return std::pow(std::abs(x), p); };
    V.V_x = [p](double x) { return p * std::pow(std::abs(x), p - 1.0) * (x < 0.0 ? -1.0 : 1.0); };
    V.V_xx = [p](double x) { return p * (p - 1.0) * std::pow(std::abs(x), p - 2.0); };
    return V;
}

CriteriaGrid CriteriaGrid::log_grid(double lo, double hi, std::size_t per_sign) {
    if (!(lo > 0.0 && hi > lo) || per_sign < 2) throw DomainError("bad criteria grid");
    CriteriaGrid g;
    g.lo = lo;
    g.hi = hi;
    std::vector<double> pos(per_sign);
    const double ratio = std::log(hi / lo);
    for (std::size_t i = 0; i < per_sign; ++i) {
        pos[i] = lo * std::exp(ratio * static_cast<double>(i) / static_cast<double>(per_sign - 1));
    }
    pos.front() = lo;
    pos.back() = hi;
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) g.x.push_back(-*it);
    g.x.insert(g.x.end(), pos.begin(), pos.end());
    return g;
}

std::string CriteriaGrid::describe() const {
    std::ostringstream out;
    out << x.size() / 2 << " log-spaced |x| per sign in [" << lo << ", " << hi << "], t in {";
    for (std::size_t i = 0; i < t_probes.size(); ++i) out << (i ? ", " : "") << t_probes[i];
    out << "}, e in {";
    for (std::size_t i = 0; i < e_probes.size(); ++i) out << (i ? ", " : "") << e_probes[i];
    out << "}";
    return out.str();
}

const TheoremConstant& CriteriaReport::constant(const std::string& name) const {
    for (const auto& c : constants) {
        if (c.name == name) return c;
    }
    throw DomainError("report has no constant " + name);
}

std::string CriteriaReport::to_text() const {
    std::ostringstream out;
    out << "theorem = " << theorem << "\n";
    out << "domain = " << domain << "\n";
    out << "drift_present = " << (drift_present ? "true" : "false") << "\n";
    for (const auto& c : constants) {
        out << "constant." << c.name << " = " << fmt(c.value()) << "\n";
        out << "constant." << c.name << ".computed = " << fmt(c.computed) << "\n";
        if (c.declared) {
            out << "constant." << c.name << ".declared = " << fmt(*c.declared)
                << (c.declared_valid ? "" : " (rejected)") << "\n";
        }
        out << "constant." << c.name << ".where = " << c.where << "\n";
    }
    out << "bound = " << fmt(bound) << "\n";
    out << "computed_bound = " << fmt(computed_bound) << "\n";
    out << "certified = " << (certified ? "true" : "false") << "\n";
    out << "verdict = " << verdict << "\n";
    for (const auto& h : hypothesis_failures) out << "hypothesis_failure = " << h << "\n";
    for (const auto& w : warnings) out << "warning = " << w << "\n";
    out << "quadrature_tolerance = " << fmt(quadrature_tolerance) << "\n";
    out << "quadrature_error = " << fmt(quadrature_error) << "\n";
    out << "quadrature_evaluations = " << quadrature_evaluations << "\n";
    return out.str();
}

std::string CriteriaReport::to_csv() const {
    std::ostringstream out;
    out << "name,value,where_attained\n";
    for (const auto& c : constants) {
        std::string where = c.where;
        if (c.declared && c.declared_valid) where = "declared (computed " + fmt(c.computed) + " at " + c.where + ")";
        out << c.name << "," << fmt(c.value()) << ",\"" << where << "\"\n";
    }
    out << "bound," << fmt(bound) << ",\"\"\n";
    out << "computed_bound," << fmt(computed_bound) << ",\"\"\n";
    return out.str();
}

CriteriaReport evaluate_theorem_general(const SdeModel& model, const LyapunovFunction& V,
                                        const CriteriaGrid& grid, const DeclaredConstants& declared) {
    if (!V.V || !V.V_x || !V.V_xx) throw DomainError("Lyapunov function needs V, V_x and V_xx");
    const LevyMeasure& nu = model.spec().noise;
    if (model.linear()) {
        const auto& jumps = std::get<LinearJumps>(model.spec().jumps);
        if (jumps.H && nu.large_mass() > 0.0) {
            throw PreconditionError("general theorem covers small jumps only (H must vanish)");
        }
    }
    CriteriaReport report;
    report.theorem = "general";
    report.domain = grid.describe();
    report.drift_present = static_cast<bool>(model.spec().f);
    report.quadrature_tolerance = quad_tol;
    ReportBuilder b(report, declared);
    QuadTally tally;

    // condition (i) and V's derivatives
    for (const double x : grid.x) {
        const double v = V.V(x);
        if (!(v > 0.0) || v < V.c1 * std::pow(std::abs(x), V.p) * (1.0 - 1e-12)) {
            report.hypothesis_failures.push_back("condition (i) fails: V(" + fmt(x) + ") = " + fmt(v) + " < c1 |x|^p");
            break;
        }
    }
    for (const double ax : {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 5.0}) {
        for (const double x : {-ax, ax}) {
            const double h1 = 1e-5 * ax;
            const double h2 = 1e-4 * ax;
            const double d1 = (V.V(x + h1) - V.V(x - h1)) / (2.0 * h1);
            const double d2 = (V.V(x + h2) - 2.0 * V.V(x) + V.V(x - h2)) / (h2 * h2);
            const double e1 = std::abs(d1 - V.V_x(x)) / std::max(std::abs(V.V_x(x)), 1e-12);
            const double e2 = std::abs(d2 - V.V_xx(x)) / std::max(std::abs(V.V_xx(x)), 1e-12);
            if (e1 > 1e-4 || e2 > 1e-4) {
                report.hypothesis_failures.push_back("V, V_x, V_xx inconsistent at x = " + fmt(x));
            }
        }
    }

    const bool jumps = nu.small_mass() > 0.0;
    auto l2 = [&](double t, double e, double x) {
        const double v = V.V(x);
        const double vx = V.V_x(x);
        double jump = 0.0;
        if (jumps) {
            jump = tally(nu_quadrature(
                nu,
                [&](double y) {
                    const double h = model.small_jump(t, e, x, y);
                    return (V.V(x + h) - v - vx * h) / v;
                },
                Region::small, quad_tol));
        }
        const double g = model.g(t, e, x);
        return (vx * model.k(t, e, x) + 0.5 * g * g * V.V_xx(x)) / v + jump;
    };
    auto cond_v = [&](double t, double e, double x) {
        if (!jumps) return 0.0;
        const double v = V.V(x);
        return tally(nu_quadrature(
            nu,
            [&](double y) {
                const double r = V.V(x + model.small_jump(t, e, x, y)) / v;
                return std::log(r) - (r - 1.0);
            },
            Region::small, quad_tol));
    };

    using S = TheoremConstant::Side;
    const Extremum c2 = extremum(grid, [&](double t, double e, double x) {
        return V.V_x(x) * model.f(t, e, x) / V.V(x);
    }, true);
    Extremum c3, c5;
    try {
        c3 = extremum(grid, l2, true);
        c5 = extremum(grid, cond_v, true);
    } catch (const NumericError& err) {
        report.hypothesis_failures.push_back(std::string("jump integral failed: ") + err.what());
        c3.value = inf;
        c5.value = 0.0;
    }
    c5.value = -c5.value;
    const Extremum c4 = extremum(grid, [&](double t, double e, double x) {
        const double r = V.V_x(x) * model.g(t, e, x) / V.V(x);
        return r * r;
    }, false);

    b.add("c2", S::upper, c2);
    b.add("c3", S::upper, c3);
    b.add("c4", S::lower, c4);
    b.add("c5", S::lower, c5);
    b.unknown_declarations();

    auto bound_of = [&](bool effective) {
        auto v = [&](const char* n) {
            const auto& c = report.constant(n);
            return effective ? c.value() : c.computed;
        };
        if (report.drift_present) return v("c2") / V.p;
        return (v("c3") - 0.5 * v("c4") - v("c5")) / (2.0 * V.p);
    };
    report.bound = bound_of(true);
    report.computed_bound = bound_of(false);
    if (!(report.constant("c5").value() > 0.0) && !report.drift_present) {
        report.hypothesis_failures.push_back("condition (v) needs c5 > 0, got " + fmt(report.constant("c5").value()));
    }
    report.quadrature_error = tally.error;
    report.quadrature_evaluations = tally.evaluations;
    finish(report, model);
    return report;
}

CriteriaReport evaluate_theorem_linear(const SdeModel& model, const CriteriaGrid& grid,
                                       const DeclaredConstants& declared) {
    const auto& jumps = require_linear(model, "linear");
    if (jumps.H && model.spec().noise.large_mass() > 0.0) {
        throw PreconditionError("linear theorem covers small jumps only; use the combined theorem for H");
    }
    CriteriaReport report;
    report.theorem = "linear";
    report.domain = grid.describe();
    report.drift_present = static_cast<bool>(model.spec().f);
    report.quadrature_tolerance = quad_tol;
    ReportBuilder b(report, declared);
    QuadTally tally;
    const auto lc = linear_constants(model, jumps, grid, report, tally);
    add_linear_constants(b, lc);
    b.unknown_declarations();
    report.bound = linear_bound(report, true, 0.0);
    report.computed_bound = linear_bound(report, false, 0.0);
    if (!(report.constant("xi").value() > 0.0) && !report.drift_present) {
        report.hypothesis_failures.push_back("condition (1) needs xi > 0");
    }
    report.quadrature_error = tally.error;
    report.quadrature_evaluations = tally.evaluations;
    finish(report, model);
    return report;
}

LargeJumpResult evaluate_large_jump(const MarkFunction& H, const LevyMeasure& measure) {
    LargeJumpResult out;
    if (!H || measure.large_mass() <= 0.0) return out;
    auto integrand = [&](double y) {
        const double v = 1.0 + H(y);
        if (v == 0.0) {
            throw AssumptionViolation("H(y) = -1 at y = " + fmt(y) + " (large jump sends X to 0)");
        }
        return std::log(std::abs(v));
    };
    out.quadrature = nu_quadrature(measure, integrand, Region::large, quad_tol);
    out.M = out.quadrature.value;
    if (out.M < 0.0) out.K = -out.M;
    return out;
}

CriteriaReport evaluate_theorem_combined(const SdeModel& model, const CriteriaGrid& grid,
                                         const DeclaredConstants& declared) {
    const auto& jumps = require_linear(model, "combined");
    CriteriaReport report;
    report.theorem = "combined";
    report.domain = grid.describe();
    report.drift_present = static_cast<bool>(model.spec().f);
    report.quadrature_tolerance = quad_tol;
    ReportBuilder b(report, declared);
    QuadTally tally;
    const auto lc = linear_constants(model, jumps, grid, report, tally);
    add_linear_constants(b, lc);

    double M = 0.0;
    try {
        const auto lj = evaluate_large_jump(jumps.H, model.spec().noise);
        tally(lj.quadrature);
        M = lj.M;
        if (jumps.H && model.spec().noise.large_mass() > 0.0) {
            const double h2 = tally(nu_quadrature(
                model.spec().noise, [&](double y) { return jumps.H(y) * jumps.H(y); }, Region::large, quad_tol));
            if (!std::isfinite(h2)) report.hypothesis_failures.push_back("integral of H^2 over |y| >= c is infinite");
        }
    } catch (const AssumptionViolation& e) {
        report.hypothesis_failures.push_back(e.what());
        M = inf;
    } catch (const NumericError& e) {
        report.hypothesis_failures.push_back(std::string("M(c) quadrature failed: ") + e.what());
        M = inf;
    }
    b.add("M_c", TheoremConstant::Side::upper, M, "quadrature");
    b.unknown_declarations();
    report.bound = linear_bound(report, true, report.constant("M_c").value());
    report.computed_bound = linear_bound(report, false, M);
    if (!(report.constant("xi").value() > 0.0) && !report.drift_present) {
        report.hypothesis_failures.push_back("condition (1) needs xi > 0");
    }
    report.quadrature_error = tally.error;
    report.quadrature_evaluations = tally.evaluations;
    finish(report, model);
    return report;
}

bool AssumptionReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const AssumptionCheck& c) { return c.pass; });
}

const AssumptionCheck& AssumptionReport::check(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return c;
    }
    throw DomainError("no assumption check named " + name);
}

std::string AssumptionReport::to_text() const {
    std::ostringstream out;
    for (const auto& c : checks) {
        out << "assumption." << c.name << " = " << (c.pass ? "pass" : "fail") << "\n";
        out << "assumption." << c.name << ".constant = " << fmt(c.constant) << "\n";
        if (!c.detail.empty()) out << "assumption." << c.name << ".detail = " << c.detail << "\n";
        if (!c.witness.empty()) out << "assumption." << c.name << ".witness = " << c.witness << "\n";
    }
    return out.str();
}

AssumptionReport check_standing_assumptions(const SdeModel& model, const CriteriaGrid& grid) {
    AssumptionReport report;
    const LevyMeasure& nu = model.spec().noise;
    const bool small = nu.small_mass() > 0.0;
    const LinearJumps* lin = model.linear() ? &std::get<LinearJumps>(model.spec().jumps) : nullptr;
    double h2_lin = 0.0;  // integral of h^2 over |y| < c, linear form
    if (lin && lin->h && small) {
        h2_lin = nu_integral(nu, [&](double y) { return lin->h(y) * lin->h(y); }, Region::small);
    }
    auto jump_sq = [&](double t, double e, double x) {
        if (!small) return 0.0;
        if (lin) return h2_lin * x * x;
        return nu_integral(nu, [&](double y) {
            const double h = model.small_jump(t, e, x, y);
            return h * h;
        }, Region::small);
    };
    auto coef_dist2 = [&](double t, double e, double a, double b) {
        const double df = model.f(t, e, a) - model.f(t, e, b);
        const double dk = model.k(t, e, a) - model.k(t, e, b);
        const double dg = model.g(t, e, a) - model.g(t, e, b);
        return df * df + dk * dk + dg * dg;
    };

    // Lipschitz: adjacent-pair difference quotients, plus bisection hunting
    // for discontinuities in f, k, g.
    {
        AssumptionCheck c;
        c.name = "lipschitz";
        std::vector<double> q(grid.x.size() - 1, 0.0);
        std::vector<double> pair_x(grid.x.size() - 1);
        std::string disc;
        for (std::size_t i = 0; i + 1 < grid.x.size(); ++i) {
            const double a = grid.x[i];
            const double b = grid.x[i + 1];
            pair_x[i] = std::max(std::abs(a), std::abs(b));
            for (const double t : grid.t_probes) {
                for (const double e : grid.e_probes) {
                    double jump = 0.0;
                    if (small) {
                        if (lin) {
                            jump = h2_lin * (a - b) * (a - b);
                        } else {
                            jump = nu_integral(nu, [&](double y) {
                                const double d = model.small_jump(t, e, a, y) - model.small_jump(t, e, b, y);
                                return d * d;
                            }, Region::small);
                        }
                    }
                    const double qi = (coef_dist2(t, e, a, b) + jump) / ((b - a) * (b - a));
                    q[i] = std::max(q[i], std::isnan(qi) ? inf : qi);
                    if (!disc.empty()) continue;
                    double lo = a, hi = b;
                    const double q0 = std::sqrt(coef_dist2(t, e, a, b)) / (b - a);
                    double qn = q0;
                    for (int it = 0; it < 40; ++it) {
                        const double m = 0.5 * (lo + hi);
                        const double ql = std::sqrt(coef_dist2(t, e, lo, m)) / (m - lo);
                        const double qr = std::sqrt(coef_dist2(t, e, m, hi)) / (hi - m);
                        if (ql >= qr) {
                            hi = m;
                            qn = ql;
                        } else {
                            lo = m;
                            qn = qr;
                        }
                    }
                    if (qn > 1e6 * std::max(1.0, q0)) {
                        disc = "jump between x=" + fmt(lo) + " and x=" + fmt(hi) + " (t=" + fmt(t) + " e=" +
                               fmt(e) + "), difference quotient " + fmt(qn);
                    }
                }
            }
        }
        std::size_t best = 0;
        for (std::size_t i = 1; i < q.size(); ++i) {
            if (q[i] > q[best]) best = i;
        }
        c.constant = q[best];
        const bool unbounded = grows_at_high(pair_x, q, grid.hi) || grows_at_low(pair_x, q, grid.lo);
        if (!disc.empty()) {
            c.pass = false;
            c.detail = "discontinuity detected";
            c.witness = disc;
        } else if (unbounded || !std::isfinite(q[best])) {
            c.pass = false;
            c.detail = "difference quotients grow without bound on the grid";
            c.witness = "pair (" + fmt(grid.x[best]) + ", " + fmt(grid.x[best + 1]) + ")";
        } else {
            c.detail = "squared quotient bounded by " + fmt(q[best]);
        }
        report.checks.push_back(c);
    }

    // Growth: |f|^2 + |k|^2 + |g|^2 + int |h|^2 dnu <= K (1 + x^2)
    {
        AssumptionCheck c;
        c.name = "growth";
        const Extremum ex = extremum(grid, [&](double t, double e, double x) {
            const double f = model.f(t, e, x), k = model.k(t, e, x), g = model.g(t, e, x);
            return (f * f + k * k + g * g + jump_sq(t, e, x)) / (1.0 + x * x);
        }, true);
        c.constant = ex.value;
        c.pass = !ex.unbounded;
        c.detail = c.pass ? "ratio bounded by " + fmt(ex.value) : "ratio grows without bound on the grid";
        c.witness = ex.where;
        report.checks.push_back(c);
    }

    // Near the origin: (|k| + |g| + 2 int |h|(|x|+|h|)/|x+h| dnu) / |x| and
    // |f| / |x| stay bounded as x -> 0.
    {
        AssumptionCheck c;
        c.name = "near_origin";
        CriteriaGrid inner = grid;
        inner.x.clear();
        for (const double x : grid.x) {
            if (std::abs(x) <= 1.0) inner.x.push_back(x);
        }
        inner.hi = 1.0;
        auto ratio = [&](double t, double e, double x) {
            double jump = 0.0;
            if (small) {
                jump = nu_integral(nu, [&](double y) {
                    const double h = model.small_jump(t, e, x, y);
                    if (h == 0.0) return 0.0;
                    return std::abs(h) * (std::abs(x) + std::abs(h)) / std::abs(x + h);
                }, Region::small);
            }
            return (std::abs(model.k(t, e, x)) + std::abs(model.g(t, e, x)) + 2.0 * jump) / std::abs(x);
        };
        Extremum ex;
        try {
            ex = extremum(inner, ratio, true, false);
        } catch (const QuadratureError& err) {
            ex.value = inf;
            ex.finite = false;
            ex.unbounded = true;
            ex.where = err.what();
        }
        const Extremum fx = extremum(inner, [&](double t, double e, double x) {
            return std::abs(model.f(t, e, x)) / std::abs(x);
        }, true, false);
        const Extremum fx2 = extremum(inner, [&](double t, double e, double x) {
            return std::abs(model.f(t, e, x)) / (x * x);
        }, true, false);
        c.constant = std::max(ex.value, fx.value);
        const bool low_k = ex.unbounded || !ex.finite;
        const bool low_f = fx.unbounded || !fx.finite;
        c.pass = !low_k && !low_f;
        if (low_k) {
            c.detail = "(|k| + |g| + jump term) / |x| unbounded as x -> 0";
            c.witness = ex.where;
        } else if (low_f) {
            c.detail = "|f| / |x| unbounded as x -> 0";
            c.witness = fx.where;
        } else {
            c.detail = "bounded on 0 < |x| <= 1";
            if (fx2.unbounded) c.detail += "; |f| / x^2 is not bounded near 0 (quadratic-order form fails)";
        }
        report.checks.push_back(c);
    }

    // Jump moment Z_c (linear form).
    {
        AssumptionCheck c;
        c.name = "jump_moment";
        if (lin) {
            try {
                c.constant = lin->h ? z_constant(nu, lin->h) : 0.0;
                c.detail = "Z_c = " + fmt(c.constant);
            } catch (const AssumptionViolation& e) {
                c.pass = false;
                c.constant = inf;
                c.detail = e.what();
            }
        } else {
            c.detail = "not applicable to the general jump form";
        }
        report.checks.push_back(c);
    }

    if (lin && lin->H && nu.large_mass() > 0.0) {
        AssumptionCheck c;
        c.name = "large_jump";
        try {
            evaluate_large_jump(lin->H, nu);
            c.constant = nu_integral(nu, [&](double y) { return lin->H(y) * lin->H(y); }, Region::large);
            c.pass = std::isfinite(c.constant);
            c.detail = "integral of H^2 over |y| >= c = " + fmt(c.constant) + ", H != -1 at all nodes";
        } catch (const AssumptionViolation& e) {
            c.pass = false;
            c.detail = e.what();
        } catch (const NumericError& e) {
            c.pass = false;
            c.detail = e.what();
        }
        report.checks.push_back(c);
    }
    return report;
}

}  // namespace tcsde
