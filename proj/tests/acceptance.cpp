// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tcsde/criteria.hpp"
#include "tcsde/parallel.hpp"
#include "tcsde/repro/examples.hpp"
#include "tcsde/repro/io.hpp"
#include "tcsde/repro/runner.hpp"
#include "tcsde/repro/verify.hpp"
#include "tcsde/stability.hpp"
#include "tcsde/subordinator.hpp"

using namespace tcsde;
using namespace tcsde::repro;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

Outcome subordinator_law() {
    struct Case {
        std::string label;
        SubordinatorSpec spec;
    };
    const std::vector<Case> cases{{"alpha=0.5", SubordinatorSpec::stable(0.5)},
                                  {"alpha=0.8", SubordinatorSpec::stable(0.8)},
                                  {"mixture", SubordinatorSpec::mixture({{0.5, 0.3}, {0.5, 0.7}})}};
    const std::array<double, 3> s_values{0.5, 1.0, 2.0};
    const std::size_t n = 100000;
    Outcome out{true, ""};
    double worst = 0.0;
    for (const auto& c : cases) {
        std::vector<double> d1(n);
        parallel_for(n, [&](std::size_t i) {
            Rng rng = make_stream(1001, i, Stream::clock);
            double d = 0.0;
            for (const auto& comp : c.spec.components()) {
                d += sample_stable_increment(comp.index, std::pow(comp.weight, 1.0 / comp.index), 1.0, rng);
            }
            d1[i] = d;
        });
        for (const double s : s_values) {
            double sum = 0.0, sum2 = 0.0;
            for (const double d : d1) {
                const double v = std::exp(-s * d);
                sum += v;
                sum2 += v * v;
            }
            const double mean = sum / n;
            const double se = std::sqrt((sum2 / n - mean * mean) / n);
            const double exact = std::exp(-c.spec.laplace_exponent(s));
            const double z = std::abs(mean - exact) / se;
            worst = std::max(worst, z);
            if (z > 3.0) {
                out.pass = false;
                out.detail += c.label + " s=" + num(s) + " off by " + num(z) + " SE; ";
            }
        }
    }
    out.detail += "max deviation " + num(worst) + " SE over 9 checks, 1e5 paths";
    return out;
}

Outcome from_suite(const SuiteResult& r, const std::vector<std::string>& keys) {
    Outcome out{r.pass, ""};
    for (const auto& k : keys) out.detail += k + "=" + num(r.stat(k)) + " ";
    return out;
}

Outcome martingale_criterion() {
    const auto r = verify_martingale();
    const double emp = r.stat("empirical"), bound = r.stat("bound"), se = r.stat("std_error");
    return {emp <= bound + 3.0 * se, "empirical=" + num(emp) + " bound=" + num(bound) + " se=" + num(se) +
                                         " (jump row " + num(r.stat("jump_empirical")) + ")"};
}

EnsembleReport ensemble_for(const std::string& id, double T) {
    const auto experiment = resolve(default_config(id));
    EnsembleOptions o;
    o.n_paths = 200;
    o.seed = default_config(id).seed;
    return estimate_ensemble(experiment.model, T, o);
}

Outcome example0_criterion(const EnsembleReport& ensemble) {
    const auto experiment = resolve(default_config("example0"));
    const auto r = evaluate_criteria(experiment);
    const double c3 = r.constant("c3").value(), c4 = r.constant("c4").value(), c5 = r.constant("c5").value();
    const bool constants = std::abs(c3 - 1.0) <= 1e-6 && std::abs(c4 - 2.25) <= 1e-6 && c5 >= 0.018 &&
                           r.constant("c5").computed >= 0.018 && r.bound <= -0.045;
    const double frac = ensemble.fraction_terminal_op_negative;
    return {constants && frac >= 0.9, "c3=" + num(c3) + " c4=" + num(c4) + " c5=" + num(c5) + " (computed " +
                                          num(r.constant("c5").computed) + ") bound=" + num(r.bound) +
                                          " terminal op ratio < 0 for " + num(100 * frac) + "% of 200 paths"};
}

Outcome examples12_criterion() {
    const auto e2 = ensemble_for("example2", 50.0);
    const auto e1 = ensemble_for("example1", 50.0);
    const bool pass = e2.median_real >= -1.3 && e2.median_real <= -0.7 && e1.median_real >= 0.7 &&
                      e1.median_real <= 1.3 && e1.verdict == Verdict::not_certified &&
                      e2.verdict == Verdict::exponentially_path_stable;
    return {pass, "example2 median " + num(e2.median_real) + " (" + to_string(e2.verdict) + "), example1 median " +
                      num(e1.median_real) + " (" + to_string(e1.verdict) + ")"};
}

Outcome examples34_criterion() {
    const auto r3 = evaluate_criteria(resolve(default_config("example3")));
    const auto r4 = evaluate_criteria(resolve(default_config("example4")));
    return {r3.bound > 0.0 && r4.bound <= 0.0 && r3.verdict == "not certified" && r4.certified,
            "example3 bound " + num(r3.bound) + " (" + r3.verdict + "), example4 bound " + num(r4.bound) + " (" +
                r4.verdict + ")"};
}

Outcome nonzero_criterion(const std::map<std::string, EnsembleReport>& ensembles) {
    Outcome out{true, ""};
    for (const auto& [id, e] : ensembles) {
        out.pass = out.pass && e.floor_events == 0;
        out.detail += id + ":" + std::to_string(e.floor_events) + " ";
    }
    out.detail += "floor events over 200 paths at T=100";
    return out;
}

Outcome determinism_criterion() {
    const fs::path base = fs::temp_directory_path() / "tcsde_acceptance";
    fs::remove_all(base);
    ExperimentConfig c = default_config("example4");
    c.T = 5.0;
    c.n_paths = 8;
    c.keep_increments = true;
    c.out_martingale = true;
    c.martingale_paths = 100;
    c.martingale_T = 1.0;
    c.out_dir = (base / "a").string();
    const auto a = run(c);
    c.out_dir = (base / "b").string();
    const auto b = run(c);
    Outcome out{a.files.size() == b.files.size(), ""};
    std::size_t csv = 0;
    for (std::size_t i = 0; out.pass && i < a.files.size(); ++i) {
        if (a.files[i].extension() != ".csv") continue;
        ++csv;
        if (read_file(a.files[i]) != read_file(b.files[i])) {
            out.pass = false;
            out.detail += a.files[i].filename().string() + " differs; ";
        }
    }
    out.pass = out.pass && csv > 0;
    out.detail += std::to_string(csv) + " CSV files compared byte for byte";
    fs::remove_all(base);
    return out;
}

}  // namespace

int main() {
    std::map<std::string, EnsembleReport> long_runs;
    for (const auto& id : example_ids()) long_runs.emplace(id, ensemble_for(id, 100.0));

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"subordinator law", subordinator_law},
        {"inverse moments", [] { return from_suite(verify_moments(), {"max_relative_error"}); }},
        {"slln surrogate", [] { return from_suite(verify_slln(), {"median_final"}); }},
        {"duality", [] { return from_suite(verify_duality(), {"terminal_relative_error", "sup_error_coarse", "sup_error_fine"}); }},
        {"ito consistency", [] { return from_suite(verify_ito(), {"final_residual"}); }},
        {"martingale inequality", martingale_criterion},
        {"example0 constants and ensemble", [&] { return example0_criterion(long_runs.at("example0")); }},
        {"example1/example2 real-clock exponents", examples12_criterion},
        {"example3/example4 combined bounds", examples34_criterion},
        {"non-zero property", [&] { return nonzero_criterion(long_runs); }},
        {"determinism", determinism_criterion},
    };

    bool all = true;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        all = all && o.pass;
        std::printf("criterion %zu (%s): %s  %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
