#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tcsde/criteria.hpp"
#include "tcsde/repro/config.hpp"
#include "tcsde/sde_engine.hpp"
#include "tcsde/stability.hpp"

namespace tcsde::repro {

struct ExampleDefinition {
    std::string id;
    std::string summary;
    std::string theorem;      // general | linear | combined
    std::string plot_clock;   // real | operational
    double T = 100.0;
    double x0 = 1.0;
    std::string measure;      // default measure name
    DeclaredConstants stated_constants;
    std::optional<double> lyapunov_p;  // general theorem only
    // Coefficients and jumps; x0, clock and noise are filled in by resolve().
    std::function<SdeSpec()> coefficients;
};

const std::vector<ExampleDefinition>& registered_examples();
std::vector<std::string> example_ids();

// Throws UsageError listing the registered ids.
const ExampleDefinition& find_example(const std::string& id);

// Defaults of the registered example (T, x0, plot clock); "inline" gives the
// plain defaults.
ExperimentConfig default_config(const std::string& example_id);

LevyMeasure make_measure(const std::string& name, const std::string& file, double c);
SubordinatorSpec make_clock(const ExperimentConfig& config);

// Everything a run needs, built from a validated config.
struct ResolvedExperiment {
    std::string id;
    SdeModel model;
    std::string theorem;     // general | linear | combined
    ClockKind plot_clock = ClockKind::operational;
    std::optional<LyapunovFunction> lyapunov;
    DeclaredConstants declared;
};

ResolvedExperiment resolve(const ExperimentConfig& config);

CriteriaReport evaluate_criteria(const ResolvedExperiment& experiment,
                                 const CriteriaGrid& grid = CriteriaGrid::log_grid());

}  // namespace tcsde::repro
