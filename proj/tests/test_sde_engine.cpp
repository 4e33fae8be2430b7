#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "tcsde/errors.hpp"
#include "tcsde/sde_engine.hpp"

using namespace tcsde;

namespace {

SdeSpec linear_spec(double a, double b, double s) {
    SdeSpec spec;
    if (a != 0.0) spec.f = [a](double, double, double x) { return a * x; };
    if (b != 0.0) spec.k = [b](double, double, double x) { return b * x; };
    if (s != 0.0) spec.g = [s](double, double, double x) { return s * x; };
    return spec;
}

std::shared_ptr<const NoisePath> noise_for(const SdeModel& m, const ClockPath& c, std::uint64_t seed = 1) {
    return std::make_shared<const NoisePath>(
        simulate_noise(m.spec().noise, static_cast<std::size_t>(c.e_steps.back()), c.op_step, seed, 0));
}

}  // namespace

TEST(SdeEngine, ModelValidation) {
    SdeSpec s = linear_spec(0, -1, 0);
    s.x0 = 0.0;
    EXPECT_THROW(SdeModel{s}, DomainError);
    s.x0 = 1.0;
    s.t0 = -1.0;
    EXPECT_THROW(SdeModel{s}, DomainError);
    s.t0 = 1.0;
    s.clock = IdentityClock{};
    EXPECT_THROW(SdeModel{s}, DomainError);
}

TEST(SdeEngine, CompensatorsMatchHandIntegrals) {
    SdeSpec s = linear_spec(0, -1, 0);
    s.noise = LevyMeasure::uniform(1.0);
    s.jumps = LinearJumps{[](double y) { return y * y; }, {}};
    const SdeModel linear(s);
    EXPECT_NEAR(linear.linear_compensator(), 1.0 / 3.0, 1e-9);
    EXPECT_NEAR(linear.compensator(0, 0, 2.0), 2.0 / 3.0, 1e-9);

    s.jumps = GeneralJumps{[](double, double, double x, double y) { return x * x * y; }};
    const SdeModel general(s);
    EXPECT_FALSE(general.linear());
    EXPECT_NEAR(general.compensator(0, 0, 3.0), 9.0 * 0.5, 1e-8);
}

TEST(SdeEngine, EulerStepByHand) {
    SdeSpec s = linear_spec(2.0, -1.0, 0.5);
    s.noise = LevyMeasure::uniform(0.5);
    s.jumps = LinearJumps{[](double y) { return y; }, [](double y) { return -y; }};
    const SdeModel m(s);
    const std::vector<double> small{0.25};
    const std::vector<double> large{0.75};
    // continuous part: 1 + 2(.1) - (.2) + .5(.3) - (int_0^.5 y dy)(.2) = 1.125
    const double cont = 1.0 + 0.2 - 0.2 + 0.15 - 0.125 * 0.2;
    const double after_small = cont * 1.25;
    const double expected = after_small * (1.0 - 0.75);
    EXPECT_NEAR(step_euler(1.0, 0.0, 0.0, 0.1, 0.2, 0.3, small, large, m), expected, 1e-14);
    // no compensator when the clock is flat
    EXPECT_NEAR(step_euler(1.0, 0.0, 0.0, 0.1, 0.0, 0.0, {}, {}, m), 1.2, 1e-14);
    EXPECT_THROW(step_euler(1.0, 0.0, 0.0, 0.1, -0.1, 0.0, {}, {}, m), DomainError);
}

TEST(SdeEngine, BlowUpIsReported) {
    SdeSpec s;
    s.f = [](double, double, double x) { return 1e308 * x; };
    const SdeModel m(s);
    EXPECT_THROW(step_euler(1e10, 0.0, 0.0, 1.0, 0.0, 0.0, {}, {}, m), BlowUpError);
}

TEST(SdeEngine, RealTimeGrid) {
    const auto g = real_time_grid(0.0, 1.0, 0.01);
    ASSERT_EQ(g.size(), 101u);
    EXPECT_EQ(g.back(), 1.0);
    EXPECT_THROW(real_time_grid(0.0, 1.0, 0.1), DomainError);
    EXPECT_THROW(real_time_grid(0.0, 1.0, 0.003), DomainError);
    EXPECT_THROW(real_time_grid(1.0, 1.0, 0.001), DomainError);
}

TEST(SdeEngine, DeterministicEulerOnIdentityClock) {
    SdeSpec s = linear_spec(-1.0, 0.0, 0.0);
    s.clock = IdentityClock{};
    const SdeModel m(s);
    SimulationOptions o;
    o.dt = 0.01;
    const auto p = simulate_path(m, 2.0, o, 1, 0);
    ASSERT_EQ(p.x_values.size(), 201u);
    for (std::size_t n = 0; n < p.x_values.size(); ++n) {
        EXPECT_NEAR(p.x_values[n], std::pow(0.99, static_cast<double>(n)), 1e-13);
        EXPECT_NEAR(p.e_values()[n], p.times()[n], 1e-12);
    }
}

TEST(SdeEngine, FloorEventsAreClampedAndLogged) {
    SdeSpec s = linear_spec(0.0, -100.0, 0.0);
    s.clock = IdentityClock{};
    const SdeModel m(s);
    SimulationOptions o;
    o.dt = 0.01;
    const auto p = simulate_path(m, 1.0, o, 1, 0);
    ASSERT_FALSE(p.floor_events.empty());
    EXPECT_EQ(p.floor_events.front().step, 1u);
    EXPECT_EQ(p.x_values[1], numeric_floor);
    const auto r = check_nonzero(p);
    EXPECT_FALSE(r.nonzero);
    EXPECT_NE(r.text.find("floor event"), std::string::npos);
}

TEST(SdeEngine, SimulatePathIsDeterministic) {
    SdeSpec s = linear_spec(0.0, -1.0, 1.0);
    s.noise = LevyMeasure::standard_normal(1.0);
    s.jumps = LinearJumps{[](double y) { return y * y; }, [](double y) { return y * y; }};
    const SdeModel m(s);
    SimulationOptions o;
    o.keep_increments = true;
    const auto a = simulate_path(m, 1.0, o, 42, 3);
    const auto b = simulate_path(m, 1.0, o, 42, 3);
    const auto c = simulate_path(m, 1.0, o, 42, 4);
    EXPECT_EQ(a.x_values, b.x_values);
    EXPECT_NE(a.x_values, c.x_values);
    for (std::size_t i = 1; i < a.e_values().size(); ++i) EXPECT_GE(a.e_values()[i], a.e_values()[i - 1]);
    ASSERT_TRUE(a.increments.has_value());
    ASSERT_EQ(a.increments->dE.size(), a.x_values.size() - 1);
    double sum = 0.0;
    for (const double d : a.increments->dE) sum += d;
    EXPECT_NEAR(sum, a.e_values().back() - a.e_values().front(), 1e-12);
    EXPECT_TRUE(check_nonzero(a).nonzero);
}

TEST(SdeEngine, LevelsShareOneSubordinatorPath) {
    SdeSpec s = linear_spec(0.0, -1.0, 0.5);
    const SdeModel m(s);
    const std::vector<RefinementLevel> levels{{1e-3, 2e-3}, {5e-4, 1e-3}};
    const auto paths = simulate_levels(m, 1.0, levels, 8, 0);
    ASSERT_EQ(paths.size(), 2u);
    const auto& coarse = paths[0].clock;
    const auto& fine = paths[1].clock;
    for (std::size_t k = 0; k < coarse.d_values.size() && 2 * k < fine.d_values.size(); ++k) {
        EXPECT_EQ(coarse.d_values[k], fine.d_values[2 * k]);
    }
    EXPECT_NEAR(paths[0].x_values.back(), paths[1].x_values.back(), 0.1);
}

TEST(SdeEngine, DualityComposeMatchesClosedForm) {
    SdeSpec s = linear_spec(0.0, -1.0, 0.0);
    const SdeModel m(s);
    const std::vector<RefinementLevel> levels{{1e-3, 1e-3}};
    const auto p = simulate_levels(m, 5.0, levels, 3, 0, true)[0];
    const auto z = duality_compose(m, p.clock, p.noise);
    const double e0 = p.e_values().front();
    for (std::size_t j = 0; j < p.x_values.size(); j += 250) {
        const double exact = std::exp(-(p.e_values()[j] - e0));
        EXPECT_NEAR(z.x_values[j], exact, 5e-3 * exact + 1e-6);
    }
    SdeSpec with_drift = linear_spec(1.0, -1.0, 0.0);
    const SdeModel md(with_drift);
    EXPECT_THROW(duality_compose(md, p.clock, p.noise), PreconditionError);
}

TEST(SdeEngine, ItoResidualVanishesForIdentityFunctional) {
    SdeSpec s = linear_spec(0.0, -1.0, 0.7);
    s.noise = LevyMeasure::standard_normal(1.0);
    s.jumps = LinearJumps{[](double y) { return 0.5 * y * y; }, [](double y) { return 0.5 * y * y; }};
    const SdeModel m(s);
    SimulationOptions o;
    o.keep_increments = true;
    const auto p = simulate_path(m, 2.0, o, 5, 0);
    ItoFunctional F;
    F.F = [](double, double, double x) { return x; };
    F.F_x = [](double, double, double) { return 1.0; };
    F.F_xx = [](double, double, double) { return 0.0; };
    EXPECT_LT(ito_consistency_check(p, F, m).max_abs, 1e-10);

    o.keep_increments = false;
    const auto q = simulate_path(m, 2.0, o, 5, 0);
    EXPECT_THROW(ito_consistency_check(q, F, m), PreconditionError);
}

TEST(SdeEngine, ItoResidualShrinksForSquare) {
    SdeSpec s = linear_spec(0.0, -0.5, 0.2);
    const SdeModel m(s);
    ItoFunctional F;
    F.F = [](double, double, double x) { return x * x; };
    F.F_x = [](double, double, double x) { return 2.0 * x; };
    F.F_xx = [](double, double, double) { return 2.0; };
    const std::vector<RefinementLevel> levels{{1e-3, 1e-3}, {2.5e-4, 2.5e-4}};
    double coarse = 0.0, fine = 0.0;
    for (std::uint64_t i = 0; i < 30; ++i) {
        const auto p = simulate_levels(m, 1.0, levels, 77, i, true);
        coarse += ito_consistency_check(p[0], F, m).max_abs;
        fine += ito_consistency_check(p[1], F, m).max_abs;
    }
    EXPECT_LT(fine, coarse);
}
