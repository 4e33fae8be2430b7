#include "tcsde/repro/runner.hpp"

#include <sstream>
#include <stdexcept>

#include "tcsde/criteria.hpp"
#include "tcsde/errors.hpp"
#include "tcsde/repro/examples.hpp"
#include "tcsde/repro/io.hpp"
#include "tcsde/repro/svg.hpp"
#include "tcsde/stability.hpp"

namespace fs = std::filesystem;

namespace tcsde::repro {
namespace {

class Writer {
public:
    explicit Writer(RunResult& result) : result_(result) {}

    void put(const std::string& name, const std::string& content) {
        const fs::path p = result_.dir / name;
        write_file(p, content);
        result_.files.push_back(p);
    }

private:
    RunResult& result_;
};

template <class Fn>
auto stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string(name) + ": " + e.what());
    }
}

std::string slln_csv(const SllnReport& report, const std::string& provenance) {
    std::string out = provenance + "\nt,mean,median\n";
    for (const auto& row : report.rows) {
        out += format_double(row.t) + "," + format_double(row.mean) + "," + format_double(row.median) + "\n";
    }
    return out;
}

}  // namespace

RunResult run(const ExperimentConfig& config) {
    validate(config);
    const ResolvedExperiment experiment = stage("setup", [&] { return resolve(config); });
    const std::string provenance = provenance_line(config_hash(config), config.seed);

    RunResult result;
    result.dir = config.out_dir;
    std::error_code ec;
    fs::create_directories(result.dir, ec);
    if (ec || !fs::is_directory(result.dir)) throw UsageError("cannot create output directory " + config.out_dir);
    Writer out(result);

    out.put("config.txt", provenance + "\n" + to_text(config));

    SimulationOptions sim;
    sim.dt = config.dt;
    sim.op_step = config.op_step;
    sim.keep_increments = config.keep_increments;

    if (config.out_trajectories || config.out_lyapunov) {
        const TrajectoryBundle path =
            stage("simulation", [&] { return simulate_path(experiment.model, config.T, sim, config.seed, 0); });
        if (config.out_trajectories) {
            out.put("trajectory.csv", trajectory_csv(path, provenance, config.keep_increments));
            out.put("clock_real.csv", clock_real_csv(path.clock, provenance));
            out.put("clock_op.csv", clock_op_csv(path.clock, provenance));
            result.summary.push_back("trajectory: " + std::to_string(path.x_values.size()) + " grid points, " +
                                     check_nonzero(path).text);
        }
        if (config.out_lyapunov) {
            const std::string ratio = ratio_csv(path, provenance);
            out.put("ratio.csv", ratio);
            out.put("figure.svg", ratio_figure(ratio, experiment.plot_clock == ClockKind::operational));

            EnsembleOptions opts;
            opts.simulation = sim;
            opts.simulation.keep_increments = false;
            opts.n_paths = config.n_paths;
            opts.seed = config.seed;
            opts.margin = config.margin;
            opts.tail_fraction = config.tail_fraction;
            const EnsembleReport report =
                stage("stability", [&] { return estimate_ensemble(experiment.model, config.T, opts); });
            out.put("estimates.csv", estimates_csv(report, provenance));
            out.put("stability.txt", provenance + "\nexample = " + experiment.id + "\nfigure_clock = " +
                                         to_string(experiment.plot_clock) + "\n" + report.to_text());
            result.summary.push_back(std::string("stability: ") + to_string(report.verdict) +
                                     " (median real " + format_double(report.median_real) + ", median operational " +
                                     format_double(report.median_op) + ")");
        }
    }

    if (config.out_criteria) {
        const CriteriaReport report = stage("criteria", [&] { return evaluate_criteria(experiment); });
        const AssumptionReport assumptions =
            stage("criteria", [&] { return check_standing_assumptions(experiment.model); });
        out.put("criteria.txt", provenance + "\nexample = " + experiment.id + "\n" + report.to_text() + "\n" +
                                    assumptions.to_text());
        out.put("criteria.csv", provenance + "\n" + report.to_csv());
        result.summary.push_back("criteria (" + report.theorem + "): " + report.verdict + ", bound " +
                                 format_double(report.bound));
    }

    if (config.out_martingale) {
        MartingaleOptions mo;
        mo.dt = config.dt;
        mo.op_step = config.op_step;
        mo.seed = config.seed;
        std::function<double(double, double)> h;
        if (const auto* lin = std::get_if<LinearJumps>(&experiment.model.spec().jumps); lin && lin->h) {
            h = [hh = lin->h](double, double y) { return hh(y); };
        }
        const MartingaleCheck check = stage("martingale", [&] {
            return martingale_inequality_check([](double) { return 1.0; }, h, config.martingale_T,
                                               config.martingale_lambda, config.martingale_kappa,
                                               config.martingale_paths, make_clock(config),
                                               experiment.model.spec().noise, mo);
        });
        std::ostringstream text;
        text << provenance << "\n"
             << "g = 1\n"
             << "h = " << (h ? "small-jump coefficient of the model" : "0") << "\n"
             << "lambda = " << format_double(config.martingale_lambda) << "\n"
             << "kappa = " << format_double(config.martingale_kappa) << "\n"
             << "T = " << format_double(config.martingale_T) << "\n"
             << "n_paths = " << check.n_paths << "\n"
             << "exceedances = " << check.exceedances << "\n"
             << "empirical = " << format_double(check.empirical) << "\n"
             << "bound = " << format_double(check.bound) << "\n"
             << "std_error = " << format_double(check.std_error) << "\n"
             << "pass = " << (check.pass ? "true" : "false") << "\n";
        out.put("martingale.txt", text.str());
        result.summary.push_back("martingale: empirical " + format_double(check.empirical) + " vs bound " +
                                 format_double(check.bound) + (check.pass ? " (pass)" : " (FAIL)"));
        result.ok = result.ok && check.pass;
    }

    if (config.out_slln) {
        const SllnReport report = stage("slln", [&] {
            return check_slln(make_clock(config), config.slln_times, config.slln_paths, config.seed, 0.0);
        });
        out.put("slln.csv", slln_csv(report, provenance));
        result.summary.push_back(std::string("slln: decay ") + (report.decay_flag ? "observed" : "not established"));
    }

    result.manifest = result.dir / "manifest.tsv";
    write_file(result.manifest, manifest_tsv(result.dir, result.files));
    return result;
}

RunResult reproduce(const std::string& example_id, const std::string& out_dir, std::optional<std::uint64_t> seed) {
    find_example(example_id);
    ExperimentConfig config = default_config(example_id);
    config.out_dir = out_dir;
    if (seed) config.seed = *seed;
    return run(config);
}

}  // namespace tcsde::repro
