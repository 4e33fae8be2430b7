#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "tcsde/criteria.hpp"
#include "tcsde/errors.hpp"

using namespace tcsde;

namespace {

double phi(double y) { return std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi); }

// composite Simpson with n (even) panels
double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

double normal_small(const std::function<double(double)>& f) {
    return simpson([&](double y) { return f(y) * phi(y); }, -1.0, 1.0);
}

double normal_large(const std::function<double(double)>& f) {
    return 2.0 * simpson([&](double y) { return f(y) * phi(y); }, 1.0, 40.0, 200000);
}

SdeModel example0_model() {
    SdeSpec s;
    s.k = [](double, double, double x) { return -std::sqrt(std::abs(x)) * x; };
    s.g = [](double, double, double x) { return x; };
    s.jumps = GeneralJumps{[](double, double, double x, double y) { return x * y * y; }};
    s.noise = LevyMeasure::standard_normal(1.0);
    return SdeModel(s);
}

SdeModel example34_model(double sigma) {
    SdeSpec s;
    s.k = [](double, double, double x) { return -x; };
    s.g = [sigma](double, double, double x) { return sigma * x; };
    auto h = [](double y) { return y * y; };
    s.jumps = LinearJumps{h, h};
    s.noise = LevyMeasure::standard_normal(1.0);
    s.x0 = -3.0;
    return SdeModel(s);
}

}  // namespace

TEST(Criteria, PowerLyapunovDerivatives) {
    const auto V = power_lyapunov(1.5);
    for (const double x : {-2.0, -0.3, 0.4, 3.0}) {
        const double h = 1e-5;
        EXPECT_NEAR(V.V_x(x), (V.V(x + h) - V.V(x - h)) / (2 * h), 1e-6);
        EXPECT_NEAR(V.V_xx(x), (V.V_x(x + h) - V.V_x(x - h)) / (2 * h), 1e-5);
    }
    EXPECT_THROW(power_lyapunov(0.0), DomainError);
}

TEST(Criteria, LogGrid) {
    const auto g = CriteriaGrid::log_grid(1e-3, 1e2, 50);
    ASSERT_EQ(g.x.size(), 100u);
    EXPECT_TRUE(std::is_sorted(g.x.begin(), g.x.end()));
    EXPECT_NEAR(g.x.front(), -1e2, 1e-9);
    EXPECT_NEAR(g.x.back(), 1e2, 1e-9);
    for (const double x : g.x) EXPECT_NE(x, 0.0);
    EXPECT_THROW(CriteriaGrid::log_grid(1.0, 0.5), DomainError);
}

TEST(Criteria, GeneralTheoremOnExample0) {
    const auto m = example0_model();
    const auto r = evaluate_theorem_general(m, power_lyapunov(1.5), CriteriaGrid::log_grid(),
                                            {{"c3", 1.0}, {"c4", 2.25}, {"c5", 0.018}});
    const double jump3 = normal_small([](double y) { return std::pow(1 + y * y, 1.5) - 1 - 1.5 * y * y; });
    const double c5 = -normal_small([](double y) { return 1.5 * std::log1p(y * y) - std::pow(1 + y * y, 1.5) + 1; });
    // sup of -1.5 |x|^{1/2} + 3/8 + jump integral sits at the smallest grid |x|
    EXPECT_NEAR(r.constant("c3").computed, 0.375 + jump3 - 1.5e-3, 1e-6);
    EXPECT_NEAR(r.constant("c4").computed, 2.25, 1e-9);
    EXPECT_NEAR(r.constant("c5").computed, c5, 1e-6);
    EXPECT_GE(r.constant("c5").computed, 0.018);
    EXPECT_DOUBLE_EQ(r.constant("c3").value(), 1.0);
    EXPECT_TRUE(r.constant("c5").declared_valid);
    EXPECT_NEAR(r.bound, (1.0 - 0.5 * 2.25 - 0.018) / 3.0, 1e-12);
    EXPECT_TRUE(r.certified);
    EXPECT_EQ(r.verdict, "path stable (rate E_t)");
}

TEST(Criteria, DeclaredConstantOnWrongSideIsRejected) {
    const auto m = example0_model();
    const auto r = evaluate_theorem_general(m, power_lyapunov(1.5), CriteriaGrid::log_grid(),
                                            {{"c3", 0.1}, {"c4", 3.0}});
    EXPECT_FALSE(r.constant("c3").declared_valid);
    EXPECT_FALSE(r.constant("c4").declared_valid);
    EXPECT_DOUBLE_EQ(r.constant("c4").value(), r.constant("c4").computed);
    EXPECT_GE(r.warnings.size(), 2u);
    EXPECT_DOUBLE_EQ(r.bound, r.computed_bound);
}

TEST(Criteria, GeneralTheoremRejectsLargeJumps) {
    const auto m = example34_model(1.0);
    EXPECT_THROW(evaluate_theorem_general(m, power_lyapunov(2.0)), PreconditionError);
    EXPECT_THROW(evaluate_theorem_linear(m), PreconditionError);
}

TEST(Criteria, LinearTheoremOnExample00) {
    SdeSpec s;
    s.k = [](double, double, double x) { return -std::sin(x) * x; };
    s.g = [](double, double e, double x) { return x / (e + 1.0); };
    s.jumps = LinearJumps{[](double y) { return 16.0 * y * y; }, {}};
    s.noise = LevyMeasure::uniform(1.0);
    const SdeModel m(s);
    const DeclaredConstants stated{{"gamma", 0.0}, {"xi", 1.0}, {"delta", 16.0 / 3.0}, {"K2", 1.0},
                                  {"log_jump", std::log(17.0)}};
    const auto r = evaluate_theorem_linear(m, CriteriaGrid::log_grid(), stated);
    EXPECT_NEAR(r.constant("delta").computed, 16.0 / 3.0, 1e-8);
    const double lj = simpson([](double y) { return std::log1p(16.0 * y * y); }, 0.0, 1.0);
    EXPECT_NEAR(r.constant("log_jump").computed, lj, 1e-7);
    EXPECT_NEAR(r.constant("xi").computed, 1.0, 1e-12);
    for (const auto& c : r.constants) EXPECT_TRUE(c.declared_valid) << c.name;
    EXPECT_NEAR(r.bound, -(0.0 - 1.0 - 0.5 - std::log(17.0) + 16.0 / 3.0), 1e-12);
    EXPECT_TRUE(r.certified);
}

TEST(Criteria, CombinedTheoremExamples3And4) {
    const double I = normal_small([](double y) { return std::log1p(y * y); });
    const double M = normal_large([](double y) { return std::log1p(y * y); });
    const double delta = normal_small([](double y) { return y * y; });
    for (const double sigma : {1.0, 2.0}) {
        const double gx = sigma * sigma;
        const auto r = evaluate_theorem_combined(example34_model(sigma), CriteriaGrid::log_grid(),
                                                 {{"K2", 1.0}, {"xi", gx}, {"gamma", gx}, {"delta", 0.2}});
        EXPECT_NEAR(r.constant("M_c").computed, M, 1e-6);
        EXPECT_NEAR(r.constant("log_jump").computed, I, 1e-7);
        EXPECT_NEAR(r.constant("delta").computed, delta, 1e-7);
        // declared delta = 0.2 exceeds the integral and is replaced
        EXPECT_FALSE(r.constant("delta").declared_valid);
        EXPECT_NEAR(r.constant("K2").computed, -1.0, 1e-12);
        const double expected = -(gx - 1.0 - 0.5 * gx - I + delta - M);
        EXPECT_NEAR(r.bound, expected, 1e-6);
    }
    const auto r3 = evaluate_theorem_combined(example34_model(1.0), CriteriaGrid::log_grid(),
                                              {{"K2", 1.0}, {"xi", 1.0}, {"gamma", 1.0}, {"delta", 0.2}});
    const auto r4 = evaluate_theorem_combined(example34_model(2.0), CriteriaGrid::log_grid(),
                                              {{"K2", 1.0}, {"xi", 4.0}, {"gamma", 4.0}, {"delta", 0.2}});
    EXPECT_GT(r3.bound, 0.0);
    EXPECT_EQ(r3.verdict, "not certified");
    EXPECT_LE(r4.bound, 0.0);
    EXPECT_EQ(r4.verdict, "path stable (rate E_t)");
}

TEST(Criteria, DriftMakesK1TheBound) {
    SdeSpec s;
    s.f = [](double, double, double x) { return -x; };
    s.g = [](double, double, double x) { return x; };
    auto h = [](double y) { return 2.0 * y * y; };
    s.jumps = LinearJumps{h, h};
    s.noise = LevyMeasure::standard_normal(1.0);
    const auto r = evaluate_theorem_combined(SdeModel(s));
    EXPECT_TRUE(r.drift_present);
    EXPECT_NEAR(r.bound, -1.0, 1e-12);
    EXPECT_EQ(r.verdict, "exponentially path stable");

    s.clock = IdentityClock{};
    const auto id = evaluate_theorem_combined(SdeModel(s));
    EXPECT_FALSE(id.certified);
    EXPECT_FALSE(id.hypothesis_failures.empty());
}

TEST(Criteria, LargeJumpIntegral) {
    const auto nu = LevyMeasure::standard_normal(1.0);
    const auto r = evaluate_large_jump([](double y) { return y * y; }, nu);
    EXPECT_NEAR(r.M, normal_large([](double y) { return std::log1p(y * y); }), 1e-6);
    EXPECT_FALSE(r.K.has_value());
    const auto shrink = evaluate_large_jump([](double) { return -0.5; }, nu);
    EXPECT_NEAR(shrink.M, std::log(0.5) * nu.large_mass(), 1e-8);
    ASSERT_TRUE(shrink.K.has_value());
    EXPECT_NEAR(*shrink.K, -shrink.M, 1e-15);
    EXPECT_THROW(evaluate_large_jump([](double) { return -1.0; }, nu), AssumptionViolation);
}

TEST(Criteria, UnboundedCoefficientIsAHypothesisFailure) {
    SdeSpec s;
    s.k = [](double, double, double x) { return -x * x * x; };
    s.g = [](double, double, double x) { return x * x; };
    const auto r = evaluate_theorem_linear(SdeModel(s));
    EXPECT_FALSE(r.hypothesis_failures.empty());
    EXPECT_FALSE(r.certified);
}

TEST(Criteria, StandingAssumptionsForLinearSpec) {
    SdeSpec s;
    s.k = [](double, double, double x) { return -x; };
    s.g = [](double, double, double x) { return x; };
    auto h = [](double y) { return y * y; };
    s.jumps = LinearJumps{h, h};
    s.noise = LevyMeasure::standard_normal(1.0);
    const auto r = check_standing_assumptions(SdeModel(s));
    EXPECT_TRUE(r.all_pass()) << r.to_text();
}

TEST(Criteria, StandingAssumptionsFlagSuperlinearCoefficients) {
    const auto r = check_standing_assumptions(example0_model());
    EXPECT_FALSE(r.check("growth").pass);
    EXPECT_FALSE(r.check("lipschitz").pass);
    EXPECT_TRUE(r.check("near_origin").pass) << r.to_text();
}

TEST(Criteria, LipschitzDetectsJump) {
    SdeSpec s;
    s.k = [](double, double, double x) { return x > 1.0 ? -2.0 * x : -x; };
    const auto r = check_standing_assumptions(SdeModel(s));
    EXPECT_FALSE(r.check("lipschitz").pass);
}

TEST(Criteria, ReportFormats) {
    const auto r = evaluate_theorem_combined(example34_model(2.0), CriteriaGrid::log_grid(), {{"K2", 1.0}});
    const auto text = r.to_text();
    EXPECT_NE(text.find("theorem = combined"), std::string::npos);
    EXPECT_NE(text.find("constant.M_c"), std::string::npos);
    const auto csv = r.to_csv();
    EXPECT_EQ(csv.rfind("name,value,where_attained\n", 0), 0u);
    EXPECT_NE(csv.find("\nbound,"), std::string::npos);
}
