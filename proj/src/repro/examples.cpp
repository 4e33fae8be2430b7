#include "tcsde/repro/examples.hpp"

#include <cmath>

#include "tcsde/errors.hpp"

namespace tcsde::repro {
namespace {

std::vector<ExampleDefinition> build_registry() {
    std::vector<ExampleDefinition> r;

    {
        ExampleDefinition d;
        d.id = "example0";
        d.summary = "dX = -|X|^{1/2} X dE + X dB_E + int X y^2 N~(dE, dy)";
        d.theorem = "general";
        d.plot_clock = "operational";
        d.x0 = 1.0;
        d.measure = "standard_normal";
        d.stated_constants = {{"c3", 1.0}, {"c4", 2.25}, {"c5", 0.018}};
        d.lyapunov_p = 1.5;
        d.coefficients = [] {
            SdeSpec s;
            s.k = [](double, double, double x) { return -std::sqrt(std::abs(x)) * x; };
            s.g = [](double, double, double x) { return x; };
            s.jumps = GeneralJumps{[](double, double, double x, double y) { return x * y * y; }};
            return s;
        };
        r.push_back(d);
    }
    {
        ExampleDefinition d;
        d.id = "example00";
        d.summary = "dX = -sin(X) X dE + X/(E+1) dB_E + int 16 X y^2 N~(dE, dy)";
        d.theorem = "linear";
        d.plot_clock = "operational";
        d.x0 = 1.0;
        d.measure = "uniform";
        d.stated_constants = {{"gamma", 0.0}, {"xi", 1.0}, {"delta", 16.0 / 3.0}, {"K2", 1.0},
                             {"log_jump", std::log(17.0)}};
        d.coefficients = [] {
            SdeSpec s;
            s.k = [](double, double, double x) { return -std::sin(x) * x; };
            s.g = [](double, double e, double x) { return x / (e + 1.0); };
            s.jumps = LinearJumps{[](double y) { return 16.0 * y * y; }, {}};
            return s;
        };
        r.push_back(d);
    }
    for (const double sign : {1.0, -1.0}) {
        ExampleDefinition d;
        const double scale = sign > 0.0 ? 1.0 : 2.0;
        d.id = sign > 0.0 ? "example1" : "example2";
        d.summary = sign > 0.0 ? "dX = X dt + X dB_E + int X y^2 N~ + int X y^2 N"
                               : "dX = -X dt + X dB_E + 2 int X y^2 N~ + 2 int X y^2 N";
        d.theorem = "combined";
        d.plot_clock = "real";
        d.T = 50.0;
        d.x0 = 0.1;
        d.measure = "standard_normal";
        d.coefficients = [sign, scale] {
            SdeSpec s;
            s.f = [sign](double, double, double x) { return sign * x; };
            s.g = [](double, double, double x) { return x; };
            auto h = [scale](double y) { return scale * y * y; };
            s.jumps = LinearJumps{h, h};
            return s;
        };
        r.push_back(d);
    }
    for (const double sigma : {1.0, 2.0}) {
        ExampleDefinition d;
        d.id = sigma == 1.0 ? "example3" : "example4";
        d.summary = sigma == 1.0 ? "dX = -X dE + X dB_E + int X y^2 N~ + int X y^2 N"
                                 : "dX = -X dE + 2 X dB_E + int X y^2 N~ + int X y^2 N";
        d.theorem = "combined";
        d.plot_clock = "operational";
        d.x0 = -3.0;
        d.measure = "standard_normal";
        const double gx = sigma * sigma;
        d.stated_constants = {{"K2", 1.0}, {"xi", gx}, {"gamma", gx}, {"delta", 0.2}};
        d.coefficients = [sigma] {
            SdeSpec s;
            s.k = [](double, double, double x) { return -x; };
            s.g = [sigma](double, double, double x) { return sigma * x; };
            auto h = [](double y) { return y * y; };
            s.jumps = LinearJumps{h, h};
            return s;
        };
        r.push_back(d);
    }
    return r;
}

}  // namespace

const std::vector<ExampleDefinition>& registered_examples() {
    static const std::vector<ExampleDefinition> registry = build_registry();
    return registry;
}

std::vector<std::string> example_ids() {
    std::vector<std::string> ids;
    for (const auto& d : registered_examples()) ids.push_back(d.id);
    return ids;
}

const ExampleDefinition& find_example(const std::string& id) {
    for (const auto& d : registered_examples()) {
        if (d.id == id) return d;
    }
    std::string list;
    for (const auto& i : example_ids()) list += (list.empty() ? "" : ", ") + i;
    throw UsageError("unknown example '" + id + "'; registered: " + list);
}

ExperimentConfig default_config(const std::string& example_id) {
    ExperimentConfig c;
    c.example = example_id;
    if (example_id != "inline") c.T = find_example(example_id).T;
    return c;
}

LevyMeasure make_measure(const std::string& name, const std::string& file, double c) {
    if (name == "none") return LevyMeasure{};
    if (name == "uniform") return LevyMeasure::uniform(c);
    if (name == "standard_normal") return LevyMeasure::standard_normal(c);
    if (name == "tabulated") return LevyMeasure::load_tabulated_csv(file, c);
    throw UsageError("config key noise.measure: unknown measure '" + name + "'");
}

SubordinatorSpec make_clock(const ExperimentConfig& config) {
    if (config.clock_indices.size() == 1 && config.clock_weights.front() == 1.0) {
        return SubordinatorSpec::stable(config.clock_indices.front());
    }
    std::vector<StableComponent> parts;
    for (std::size_t i = 0; i < config.clock_indices.size(); ++i) {
        parts.push_back({config.clock_weights.at(i), config.clock_indices[i]});
    }
    return SubordinatorSpec::mixture(parts);
}

namespace {

SdeSpec inline_spec(const ExperimentConfig& c) {
    SdeSpec s;
    auto linear = [](double a) -> Coefficient {
        if (a == 0.0) return {};
        return [a](double, double, double x) { return a * x; };
    };
    s.f = linear(c.sde_f);
    s.k = linear(c.sde_k);
    s.g = linear(c.sde_g);
    auto mark = [](double a, double p) -> MarkFunction {
        if (a == 0.0) return {};
        return [a, p](double y) { return a * std::pow(std::abs(y), p); };
    };
    s.jumps = LinearJumps{mark(c.sde_h, c.sde_h_power), mark(c.sde_H, c.sde_H_power)};
    s.x0 = c.x0;
    return s;
}

ClockKind parse_clock_kind(const std::string& s) {
    return s == "real" ? ClockKind::real : ClockKind::operational;
}

}  // namespace

ResolvedExperiment resolve(const ExperimentConfig& config) {
    validate(config);
    SdeSpec spec;
    std::string theorem;
    std::string plot;
    std::string measure = config.measure;
    std::optional<LyapunovFunction> lyapunov;
    DeclaredConstants declared;

    if (config.example == "inline") {
        spec = inline_spec(config);
        if (measure == "default") measure = "standard_normal";
        plot = spec.f ? "real" : "operational";
    } else {
        const auto& def = find_example(config.example);
        spec = def.coefficients();
        spec.x0 = def.x0;
        if (measure == "default") measure = def.measure;
        theorem = def.theorem;
        plot = def.plot_clock;
        if (def.lyapunov_p) lyapunov = power_lyapunov(*def.lyapunov_p);
        if (config.use_stated_constants) declared = def.stated_constants;
    }
    spec.noise = make_measure(measure, config.measure_file, config.truncation);
    spec.clock = make_clock(config);

    if (config.theorem != "auto") theorem = config.theorem;
    if (theorem.empty()) {
        const auto& jumps = std::get<LinearJumps>(spec.jumps);
        theorem = (jumps.H && spec.noise.large_mass() > 0.0) ? "combined" : "linear";
    }
    if (theorem == "general" && !lyapunov) lyapunov = power_lyapunov(2.0);
    if (config.plot_clock != "auto") plot = config.plot_clock;
    for (const auto& [name, value] : config.declared) declared[name] = value;

    return ResolvedExperiment{config.example, SdeModel(std::move(spec)), theorem, parse_clock_kind(plot),
                              lyapunov, declared};
}

CriteriaReport evaluate_criteria(const ResolvedExperiment& experiment, const CriteriaGrid& grid) {
    if (experiment.theorem == "general") {
        return evaluate_theorem_general(experiment.model, *experiment.lyapunov, grid, experiment.declared);
    }
    if (experiment.theorem == "linear") return evaluate_theorem_linear(experiment.model, grid, experiment.declared);
    return evaluate_theorem_combined(experiment.model, grid, experiment.declared);
}

}  // namespace tcsde::repro
