#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tcsde/errors.hpp"
#include "tcsde/repro/config.hpp"
#include "tcsde/repro/examples.hpp"
#include "tcsde/repro/io.hpp"
#include "tcsde/repro/runner.hpp"
#include "tcsde/repro/svg.hpp"
#include "tcsde/repro/verify.hpp"

using namespace tcsde;
using namespace tcsde::repro;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("tcsde_test_" + name);
    fs::remove_all(p);
    return p;
}

ExperimentConfig small_config(const fs::path& dir) {
    ExperimentConfig c;
    c.example = "example3";
    c.T = 2.0;
    c.dt = 1e-3;
    c.n_paths = 4;
    c.seed = 99;
    c.keep_increments = true;
    c.out_dir = dir.string();
    return c;
}

}  // namespace

TEST(ReproConfig, RoundTrip) {
    ExperimentConfig c;
    c.example = "inline";
    c.clock_indices = {0.3, 0.7};
    c.clock_weights = {0.5, 0.5};
    c.T = 12.5;
    c.dt = 1.0 / 3.0 * 1e-2;
    c.seed = 123456789012345ull;
    c.sde_g = 0.1;
    c.measure = "uniform";
    c.declared = {{"K2", 1.0}, {"delta", 0.2}};
    c.out_slln = true;
    c.slln_times = {10.0, 100.0};
    const auto back = parse_config(to_text(c));
    EXPECT_EQ(back, c);
    EXPECT_EQ(config_hash(back), config_hash(c));
}

TEST(ReproConfig, ErrorsNameTheKey) {
    try {
        parse_config("sim.T = 10\nsim.bogus = 3\n");
        FAIL();
    } catch (const UsageError& e) {
        EXPECT_NE(std::string(e.what()).find("sim.bogus"), std::string::npos);
    }
    try {
        parse_config("sim.dt = fast\n");
        FAIL();
    } catch (const UsageError& e) {
        EXPECT_NE(std::string(e.what()).find("sim.dt"), std::string::npos);
    }
    EXPECT_THROW(parse_config("just words\n"), UsageError);
    auto c = parse_config("# comment\n\nsim.n_paths = 0\n");
    try {
        validate(c);
        FAIL();
    } catch (const UsageError& e) {
        EXPECT_NE(std::string(e.what()).find("sim.n_paths"), std::string::npos);
    }
    c.n_paths = 1;
    c.clock_weights = {1.0, 2.0};
    EXPECT_THROW(validate(c), UsageError);
}

TEST(ReproConfig, HashIgnoresOutputDirectory) {
    ExperimentConfig a, b;
    b.out_dir = "elsewhere";
    EXPECT_EQ(config_hash(a), config_hash(b));
    b.seed = a.seed + 1;
    EXPECT_NE(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 64u);
}

TEST(ReproIo, Sha256KnownVector) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(ReproExamples, RegistryAndInitialValues) {
    const std::vector<std::string> ids{"example0", "example00", "example1", "example2", "example3", "example4"};
    EXPECT_EQ(example_ids(), ids);
    const std::vector<double> x0{1.0, 1.0, 0.1, 0.1, -3.0, -3.0};
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto e = resolve(default_config(ids[i]));
        EXPECT_EQ(e.model.spec().x0, x0[i]) << ids[i];
        const auto& clock = std::get<SubordinatorSpec>(e.model.spec().clock);
        EXPECT_TRUE(clock.is_single());
        EXPECT_EQ(clock.smallest_index(), 0.8);
    }
    try {
        find_example("example9");
        FAIL();
    } catch (const UsageError& e) {
        EXPECT_NE(std::string(e.what()).find("example00"), std::string::npos);
    }
    EXPECT_EQ(resolve(default_config("example2")).plot_clock, ClockKind::real);
    EXPECT_EQ(resolve(default_config("example0")).plot_clock, ClockKind::operational);
    EXPECT_EQ(resolve(default_config("example0")).model.spec().noise.kind(), MeasureKind::standard_normal);
    auto uni = default_config("example0");
    uni.measure = "uniform";
    EXPECT_EQ(resolve(uni).model.spec().noise.kind(), MeasureKind::uniform);
}

TEST(ReproExamples, InlineSpec) {
    auto c = parse_config("example = inline\nsde.k = -1\nsde.g = 1\nsde.h = 1\nsde.H = 1\nsde.x0 = 2\n");
    const auto e = resolve(c);
    EXPECT_EQ(e.theorem, "combined");
    EXPECT_EQ(e.model.spec().x0, 2.0);
    EXPECT_EQ(e.model.k(0, 0, 3.0), -3.0);
    const auto r = evaluate_criteria(e);
    EXPECT_EQ(r.theorem, "combined");
}

TEST(ReproSvg, TicksAndCsv) {
    const auto t = nice_ticks(0.0, 100.0);
    ASSERT_FALSE(t.empty());
    EXPECT_EQ(t.front(), 0.0);
    EXPECT_EQ(t.back(), 100.0);
    const auto table = parse_csv("# tool=x\na,b\n1,nan\n2,3\n");
    EXPECT_EQ(table.provenance, " tool=x");
    EXPECT_TRUE(std::isnan(table.column("b")[0]));
    EXPECT_THROW(table.column("c"), UsageError);
    EXPECT_THROW(parse_csv("a,b\n1\n"), UsageError);
}

TEST(ReproSvg, NanBreaksThePolyline) {
    LinePlot p;
    p.x = {0, 1, 2, 3, 4};
    p.y = {0, 1, std::nan(""), 1, 0};
    const auto svg = render_svg(p);
    std::size_t count = 0;
    for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) {
        ++count;
    }
    EXPECT_EQ(count, 2u);
    EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
}

TEST(ReproRun, DeterministicArtifactsWithManifest) {
    const auto a_dir = scratch("run_a");
    const auto b_dir = scratch("run_b");
    const auto a = run(small_config(a_dir));
    const auto b = run(small_config(b_dir));
    ASSERT_EQ(a.files.size(), b.files.size());
    // only config.txt records the output directory
    for (std::size_t i = 0; i < a.files.size(); ++i) {
        if (a.files[i].filename() == "config.txt") continue;
        EXPECT_EQ(read_file(a.files[i]), read_file(b.files[i])) << a.files[i];
    }
    const std::string manifest = read_file(a.manifest);
    std::istringstream lines(manifest);
    std::string line;
    std::size_t n = 0;
    while (std::getline(lines, line)) {
        const auto tab = line.find('\t');
        ASSERT_NE(tab, std::string::npos);
        EXPECT_EQ(sha256_file(a_dir / line.substr(0, tab)), line.substr(tab + 1));
        ++n;
    }
    EXPECT_EQ(n, a.files.size());

    const auto cfg = small_config(a_dir);
    const std::string prov = provenance_line(config_hash(cfg), cfg.seed);
    for (const auto& f : a.files) {
        const auto text = read_file(f);
        if (f.extension() == ".svg") {
            EXPECT_NE(text.find(prov.substr(1)), std::string::npos) << f;
        } else {
            EXPECT_EQ(text.rfind(prov + "\n", 0), 0u) << f;
        }
    }
    // the figure is a pure function of ratio.csv
    EXPECT_EQ(ratio_figure(read_file(a_dir / "ratio.csv"), true), read_file(a_dir / "figure.svg"));
    EXPECT_NE(read_file(a_dir / "trajectory.csv").find("t,E_t,X_t,dB,dE,n_small,n_large"), std::string::npos);

    // rerunning from the stored config regenerates the data
    const auto c_dir = scratch("run_c");
    std::string stored = read_file(a_dir / "config.txt");
    auto reloaded = parse_config(stored);
    reloaded.out_dir = c_dir.string();
    const auto c = run(reloaded);
    EXPECT_EQ(read_file(c_dir / "trajectory.csv"), read_file(a_dir / "trajectory.csv"));
    for (const auto& d : {a_dir, b_dir, c_dir}) fs::remove_all(d);
}

TEST(ReproRun, OptionalOutputs) {
    const auto dir = scratch("run_opt");
    auto c = small_config(dir);
    c.out_trajectories = false;
    c.out_lyapunov = false;
    c.out_criteria = false;
    c.out_martingale = true;
    c.martingale_paths = 50;
    c.martingale_T = 1.0;
    c.out_slln = true;
    c.slln_times = {1.0, 10.0};
    c.slln_paths = 20;
    const auto r = run(c);
    EXPECT_TRUE(fs::exists(dir / "martingale.txt"));
    EXPECT_TRUE(fs::exists(dir / "slln.csv"));
    EXPECT_FALSE(fs::exists(dir / "trajectory.csv"));
    EXPECT_EQ(r.files.size(), 3u);  // config, martingale, slln
    fs::remove_all(dir);
}

TEST(ReproRun, UsageErrors) {
    ExperimentConfig c;
    c.n_paths = 0;
    EXPECT_THROW(run(c), UsageError);
    EXPECT_THROW(reproduce("example7", "unused"), UsageError);
}

TEST(ReproVerify, SuitesAtReducedSize) {
    EXPECT_THROW(verify_suite("nope"), UsageError);
    const auto d = verify_duality(4);
    EXPECT_TRUE(d.pass) << d.to_text();
    const auto i = verify_ito(40);
    EXPECT_TRUE(i.pass) << i.to_text();
    EXPECT_NE(i.to_text().find("suite = ito\npass = true\n"), std::string::npos);
}
