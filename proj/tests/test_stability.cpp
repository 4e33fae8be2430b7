#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "tcsde/errors.hpp"
#include "tcsde/stability.hpp"

using namespace tcsde;

namespace {

constexpr double nan_v = std::numeric_limits<double>::quiet_NaN();

}  // namespace

TEST(Stability, SeriesMasksBadPoints) {
    const std::vector<double> t{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> rate{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> x{1.0, std::exp(-1.0), numeric_floor, std::exp(-6.0)};
    const auto s = lyapunov_series(t, rate, x, ClockKind::real);
    EXPECT_FALSE(s.valid[0]);
    EXPECT_TRUE(s.valid[1]);
    EXPECT_FALSE(s.valid[2]);
    EXPECT_TRUE(std::isnan(s.ratios[2]));
    EXPECT_NEAR(s.ratios[3], -2.0, 1e-14);
    const std::vector<double> all_bad{numeric_floor, numeric_floor, numeric_floor, numeric_floor};
    EXPECT_THROW(lyapunov_series(t, rate, all_bad, ClockKind::real), DiagnosticError);
}

TEST(Stability, LimsupOverTheTail) {
    std::vector<double> t, x;
    for (int i = 0; i <= 1000; ++i) {
        t.push_back(0.01 * i);
        // ratio -2 plus a bump that only exists early
        const double tt = t.back();
        x.push_back(std::exp(-2.0 * tt + (tt < 5.0 ? tt : 0.0)));
    }
    const auto s = lyapunov_series(t, t, x, ClockKind::real);
    EXPECT_NEAR(estimate_limsup(s, 0.2), -2.0, 1e-12);
    EXPECT_NEAR(estimate_limsup(s, 1.0), -1.0, 1e-12);
    const std::vector<double> few_t(t.begin(), t.begin() + 30);
    const std::vector<double> few_x(x.begin(), x.begin() + 30);
    EXPECT_THROW(estimate_limsup(lyapunov_series(few_t, few_t, few_x, ClockKind::real)), DiagnosticError);
}

TEST(Stability, ClassifyRules) {
    EXPECT_EQ(classify(-1.0, -2.0), Verdict::exponentially_path_stable);
    EXPECT_EQ(classify(-0.01, -0.5), Verdict::path_stable);
    EXPECT_EQ(classify(0.5, 0.5), Verdict::not_certified);
    EXPECT_EQ(classify(nan_v, -0.5), Verdict::path_stable);
    EXPECT_EQ(classify(nan_v, nan_v), Verdict::not_certified);
    EXPECT_EQ(classify(-0.04, -0.04), Verdict::not_certified);
    EXPECT_STREQ(to_string(Verdict::not_certified), "not certified");
}

TEST(Stability, MedianIgnoresNan) {
    EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
    EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
    EXPECT_EQ(median({nan_v, 1.0, 5.0}), 3.0);
    EXPECT_TRUE(std::isnan(median({})));
}

TEST(Stability, EnsembleOnDeterministicDecay) {
    SdeSpec s;
    s.f = [](double, double, double x) { return -x; };
    s.clock = IdentityClock{};
    const SdeModel m(s);
    EnsembleOptions o;
    o.simulation.dt = 0.01;
    o.n_paths = 4;
    const auto r = estimate_ensemble(m, 20.0, o);
    const double rate = std::log(0.99) / 0.01;
    EXPECT_NEAR(r.median_real, rate, 1e-9);
    EXPECT_NEAR(r.median_op, rate, 1e-9);
    EXPECT_EQ(r.verdict, Verdict::exponentially_path_stable);
    EXPECT_EQ(r.fraction_terminal_op_negative, 1.0);
    EXPECT_EQ(r.paths.size(), 4u);
    EXPECT_NE(r.to_text().find("verdict = exponentially path stable"), std::string::npos);
}

TEST(Stability, EnsembleIsReproducible) {
    SdeSpec s;
    s.k = [](double, double, double x) { return -x; };
    s.g = [](double, double, double x) { return x; };
    const SdeModel m(s);
    EnsembleOptions o;
    o.n_paths = 6;
    o.seed = 12;
    const auto a = estimate_ensemble(m, 5.0, o);
    const auto b = estimate_ensemble(m, 5.0, o);
    ASSERT_EQ(a.paths.size(), b.paths.size());
    for (std::size_t i = 0; i < a.paths.size(); ++i) {
        EXPECT_EQ(a.paths[i].op_estimate, b.paths[i].op_estimate);
    }
    // log|X| / E_t -> -(1 + 1/2) for dX = -X dE + X dB_E
    EXPECT_NEAR(a.median_op, -1.5, 1.0);
}

TEST(Stability, MartingaleBoundAndError) {
    const auto r = martingale_inequality_check([](double) { return 1.0; }, {}, 2.0, 1.0, 2.0, 400,
                                               SubordinatorSpec::stable(0.8), LevyMeasure{});
    EXPECT_NEAR(r.bound, std::exp(-2.0), 1e-15);
    EXPECT_NEAR(r.std_error, std::sqrt(r.bound * (1.0 - r.bound) / 400.0), 1e-15);
    EXPECT_EQ(r.n_paths, 400u);
    EXPECT_NEAR(r.empirical, static_cast<double>(r.exceedances) / 400.0, 1e-15);
    EXPECT_TRUE(r.pass);
    EXPECT_THROW(martingale_inequality_check({}, {}, 1.0, 1.0, 1.0, 0, SubordinatorSpec::stable(0.8), LevyMeasure{}),
                 DomainError);
}

TEST(Stability, MartingaleWithJumps) {
    const auto r = martingale_inequality_check([](double) { return 0.5; }, [](double, double y) { return y; }, 2.0,
                                               1.0, 1.5, 400, SubordinatorSpec::stable(0.8),
                                               LevyMeasure::standard_normal(1.0));
    EXPECT_TRUE(r.pass);
}
