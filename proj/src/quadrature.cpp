#include "tcsde/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "tcsde/errors.hpp"

namespace tcsde {
namespace {

struct SimpsonState {
    const std::function<double(double)>& f;
    std::size_t evaluations = 0;
    double error = 0.0;
    bool converged = true;

    double eval(double x) {
        ++evaluations;
        const double y = f(x);
        if (!std::isfinite(y)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "integrand is not finite at y = " << x;
            throw QuadratureError(msg.str(), INFINITY);
        }
        return y;
    }

    double refine(double a, double b, double fa, double fm, double fb, double whole, double tol,
                  int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = eval(lm);
        const double frm = eval(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (std::abs(delta) <= 15.0 * tol) {
            error += std::abs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        if (depth <= 0 || m <= a || b <= m) {
            converged = false;
            error += std::abs(delta) / 15.0;
            return left + right + delta / 15.0;
        }
        return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
               refine(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, int max_depth, int initial_panels) {
    if (!(abs_tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
    if (a == b) return {};
    if (!(a < b)) throw DomainError("quadrature interval must satisfy a < b");
    if (initial_panels < 1) initial_panels = 1;

    SimpsonState state{f};
    const double width = (b - a) / initial_panels;
    const double panel_tol = abs_tol / initial_panels;
    double total = 0.0;
    double x0 = a;
    double f0 = state.eval(a);
    for (int i = 0; i < initial_panels; ++i) {
        const double x1 = (i + 1 == initial_panels) ? b : a + (i + 1) * width;
        const double xm = 0.5 * (x0 + x1);
        const double fm = state.eval(xm);
        const double f1 = state.eval(x1);
        const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += state.refine(x0, x1, f0, fm, f1, whole, panel_tol, max_depth);
        x0 = x1;
        f0 = f1;
    }
    if (!state.converged) {
        std::ostringstream msg;
        msg << "adaptive Simpson did not reach tolerance " << abs_tol << " on [" << a << ", " << b
            << "]; achieved error estimate " << state.error;
        throw QuadratureError(msg.str(), state.error);
    }
    return {total, state.error, state.evaluations};
}

}  // namespace tcsde
