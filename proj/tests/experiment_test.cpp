#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qsmooth/experiment.hpp"

using namespace qsmooth;
namespace fs = std::filesystem;

namespace {

const fs::path kTmp = "experiment_test_tmp";

fs::path fresh_dir(const std::string &name) {
    fs::path dir = kTmp / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string write_temp(const std::string &name, const std::string &content) {
    fs::create_directories(kTmp);
    fs::path path = kTmp / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path.string();
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Lines with comments stripped; the first remaining line is the header.
std::vector<std::string> data_lines(const std::string &content) {
    std::vector<std::string> lines;
    std::stringstream ss(content);
    std::string line;
    while (std::getline(ss, line)) {
        if (!line.empty() && line[0] != '#') {
            lines.push_back(line);
        }
    }
    return lines;
}

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        fields.push_back(field);
    }
    return fields;
}

} // namespace

TEST_CASE("config files parse keys, comments, and lists") {
    std::string path = write_temp("good.cfg",
                                  "# full sweep\n"
                                  "experiment = graph_clique\n"
                                  "p_plus = 0.25\n"
                                  "p_minus = 0.0  # one-sided\n"
                                  "counting_qubits = 3, 5, 4\n"
                                  "mc_samples = 100,1000\n"
                                  "instance_count = 12\n"
                                  "mc_trials = 2\n"
                                  "seed = 77\n"
                                  "delta = 0.02\n"
                                  "max_r_add = 5\n"
                                  "max_r_del = 1\n"
                                  "output_dir = some/dir\n");
    ExperimentConfig config = parse_config_file(path);
    CHECK(config.experiment == ExperimentKind::graph_clique);
    CHECK(config.p_plus == 0.25);
    CHECK(config.p_minus == 0.0);
    CHECK(config.counting_qubits == std::vector<int>{3, 5, 4});
    CHECK(config.mc_samples == std::vector<uint64_t>{100, 1000});
    CHECK(config.instance_count == 12);
    CHECK(config.mc_trials == 2);
    CHECK(config.seed == 77);
    CHECK(config.delta == 0.02);
    CHECK(config.max_r_add == 5);
    CHECK(config.max_r_del == 1);
    CHECK(config.output_dir == "some/dir");
}

TEST_CASE("config errors carry the offending location") {
    std::string unknown = write_temp("unknown.cfg", "not_a_key = 3\n");
    CHECK_THROWS_WITH_AS(parse_config_file(unknown),
                         doctest::Contains("unknown config key 'not_a_key'"),
                         std::invalid_argument);
    std::string noequals = write_temp("noeq.cfg", "experiment graph_clique\n");
    CHECK_THROWS_WITH_AS(parse_config_file(noequals), doctest::Contains("line 1"),
                         std::invalid_argument);
    std::string badint = write_temp("badint.cfg", "seed = twelve\n");
    CHECK_THROWS_AS(parse_config_file(badint), std::invalid_argument);
    std::string badexp = write_temp("badexp.cfg", "experiment = resnet\n");
    CHECK_THROWS_WITH_AS(parse_config_file(badexp), doctest::Contains("resnet"),
                         std::invalid_argument);
    CHECK_THROWS_AS(parse_config_file("no_such_file.cfg"), std::invalid_argument);

    ExperimentConfig config;
    CHECK_THROWS_AS(apply_config_entry(config, "delta", "0.1x"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_entry(config, "mc_samples", "100,-5"),
                    std::invalid_argument);
}

TEST_CASE("experiment names round-trip") {
    for (ExperimentKind kind :
         {ExperimentKind::window_image, ExperimentKind::graph_clique,
          ExperimentKind::sentiment, ExperimentKind::truth_table}) {
        CHECK(parse_experiment_kind(experiment_name(kind)) == kind);
    }
    CHECK_THROWS_AS(parse_experiment_kind("mnist"), std::invalid_argument);
}

TEST_CASE("window image defaults") {
    ExperimentConfig config;
    config.experiment = ExperimentKind::window_image;
    InstanceSet set = build_instances(config);
    CHECK(set.probs.p_plus == 0.3);
    CHECK(set.probs.p_minus == 0.3);
    CHECK(set.code_bits == 16);
    CHECK(set.max_r_add == 4);
    CHECK(set.max_r_del == 4);
    CHECK(set.instances.size() == 20);
    for (size_t i = 0; i < set.instances.size(); ++i) {
        CHECK(set.instances[i].id == static_cast<int>(i));
        CHECK(set.instances[i].x.n == 16);
        CHECK(set.instances[i].oracle.bits() == 16);
    }
    // The shared classifier is not constant.
    uint64_t ones = set.instances[0].oracle.count_ones();
    CHECK(ones > 0);
    CHECK(ones < set.instances[0].oracle.size());

    InstanceSet again = build_instances(config);
    for (size_t i = 0; i < set.instances.size(); ++i) {
        CHECK(set.instances[i].x == again.instances[i].x);
    }
}

TEST_CASE("graph clique defaults split dense and sparse halves") {
    ExperimentConfig config;
    config.experiment = ExperimentKind::graph_clique;
    InstanceSet set = build_instances(config);
    CHECK(set.probs.p_plus == 0.3);
    CHECK(set.probs.p_minus == 0.0);
    CHECK(set.code_bits == 15);
    CHECK(set.max_r_add == 8);
    CHECK(set.max_r_del == 2);
    REQUIRE(set.instances.size() == 170);
    double dense = 0.0, sparse = 0.0;
    for (int i = 0; i < 85; ++i) {
        dense += set.instances[i].x.ones();
        sparse += set.instances[85 + i].x.ones();
    }
    CHECK(dense / 85.0 > 8.0);
    CHECK(sparse / 85.0 < 6.5);

    InstanceSet again = build_instances(config);
    for (size_t i = 0; i < set.instances.size(); ++i) {
        CHECK(set.instances[i].x == again.instances[i].x);
    }
}

TEST_CASE("graph files override sampling") {
    std::string path = write_temp("graphs.txt",
                                  "111111111111111\n"
                                  "000000000000000\n"
                                  "101010101010101\n");
    ExperimentConfig config;
    config.experiment = ExperimentKind::graph_clique;
    config.graph_file = path;
    InstanceSet set = build_instances(config);
    REQUIRE(set.instances.size() == 3);
    CHECK(set.instances[0].x.ones() == 15);
    CHECK(set.instances[1].x.ones() == 0);
    // The complete graph contains a 4-clique, the empty one does not.
    CHECK(set.instances[0].oracle.value(set.instances[0].x));
    CHECK_FALSE(set.instances[1].oracle.value(set.instances[1].x));

    config.instance_count = 2;
    CHECK(build_instances(config).instances.size() == 2);
    config.instance_count = 7;
    CHECK_THROWS_WITH_AS(build_instances(config), doctest::Contains("holds 3"),
                         std::invalid_argument);

    std::string bad = write_temp("badgraph.txt", "10101\n");
    config.instance_count = -1;
    config.graph_file = bad;
    CHECK_THROWS_WITH_AS(build_instances(config), doctest::Contains("15 edge bits"),
                         std::invalid_argument);
}

TEST_CASE("sentiment instances start from the full review") {
    ExperimentConfig config;
    config.experiment = ExperimentKind::sentiment;
    config.instance_count = 6;
    InstanceSet set = build_instances(config);
    CHECK(set.probs.p_plus == 0.2);
    CHECK(set.probs.p_minus == 0.0);
    CHECK(set.code_bits == 8);
    CHECK(set.max_r_add == 6);
    CHECK(set.max_r_del == 0);
    REQUIRE(set.instances.size() == 6);
    bool tables_differ = false;
    for (const ExperimentInstance &inst : set.instances) {
        CHECK(inst.x == BitString::zeros(8));
        CHECK(inst.oracle.bits() == 8);
        if (inst.oracle.words() != set.instances[0].oracle.words()) {
            tables_differ = true;
        }
    }
    // Reviews are drawn per instance, so at least one classifier differs.
    CHECK(tables_differ);
}

TEST_CASE("truth table experiments need a table file") {
    ExperimentConfig config;
    config.experiment = ExperimentKind::truth_table;
    CHECK_THROWS_WITH_AS(build_instances(config), doctest::Contains("oracle_file"),
                         std::invalid_argument);

    config.oracle_file = write_temp("table.txt", "n=3\n00010110\n");
    config.instance_count = 5;
    InstanceSet set = build_instances(config);
    CHECK(set.code_bits == 3);
    CHECK(set.max_r_add == 3);
    CHECK(set.max_r_del == 3);
    REQUIRE(set.instances.size() == 5);
    for (const ExperimentInstance &inst : set.instances) {
        CHECK(inst.oracle.value(BitString::parse("110")));
        CHECK_FALSE(inst.oracle.value(BitString::parse("000")));
    }

    config.input_bits = "101";
    InstanceSet fixed = build_instances(config);
    REQUIRE(fixed.instances.size() == 1);
    CHECK(fixed.instances[0].x == BitString::parse("101"));

    config.input_bits = "10";
    CHECK_THROWS_WITH_AS(build_instances(config), doctest::Contains("bits"),
                         std::invalid_argument);
}

TEST_CASE("instance and radius validation") {
    ExperimentConfig config;
    config.experiment = ExperimentKind::window_image;
    config.instance_count = 0;
    CHECK_THROWS_WITH_AS(build_instances(config), doctest::Contains("empty instance set"),
                         std::invalid_argument);
    config.instance_count = 2;
    config.max_r_add = 17;
    CHECK_THROWS_WITH_AS(build_instances(config), doctest::Contains("exceeds"),
                         std::invalid_argument);
    config.max_r_add = -1;
    config.p_plus = 1.5;
    CHECK_THROWS_AS(build_instances(config), std::invalid_argument);
}

TEST_CASE("runner validation rejects empty budget lists") {
    ExperimentConfig config;
    config.experiment = ExperimentKind::sentiment;
    config.instance_count = 1;
    config.counting_qubits.clear();
    CHECK_THROWS_WITH_AS(run_single(config), doctest::Contains("counting_qubits"),
                         std::invalid_argument);
    config.counting_qubits = {3};
    config.mc_samples.clear();
    CHECK_THROWS_WITH_AS(run_single(config), doctest::Contains("mc_samples"),
                         std::invalid_argument);
    config.mc_samples = {100};
    config.mc_trials = 0;
    CHECK_THROWS_WITH_AS(run_single(config), doctest::Contains("mc_trials"),
                         std::invalid_argument);
    config.mc_trials = 1;
    config.delta = 1.0;
    CHECK_THROWS_WITH_AS(run_single(config), doctest::Contains("delta"),
                         std::invalid_argument);
}

TEST_CASE("log-log slope fit") {
    std::vector<double> xs = {100, 1000, 10000, 100000};
    std::vector<double> ys;
    for (double x : xs) {
        ys.push_back(3.7 * std::pow(x, -0.5));
    }
    CHECK(fit_loglog_slope(xs, ys) == doctest::Approx(-0.5).epsilon(1e-12));

    std::vector<double> with_zero = {100, 1000, 10000, 100000};
    std::vector<double> ys_zero = {1.0, 0.0, 0.1, 0.01};
    CHECK(std::isfinite(fit_loglog_slope(with_zero, ys_zero)));
    CHECK_THROWS_AS(fit_loglog_slope({1, 2}, {1}), std::invalid_argument);
    CHECK_THROWS_AS(fit_loglog_slope({1, 2}, {0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(fit_loglog_slope({10, 10}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("heatmap runner writes deterministic, consistent outputs") {
    ExperimentConfig config;
    config.experiment = ExperimentKind::window_image;
    config.instance_count = 3;
    config.counting_qubits = {3, 4};
    config.mc_samples = {50};
    config.max_r_add = 2;
    config.max_r_del = 2;
    config.seed = 9;
    config.output_dir = fresh_dir("heatmap_a").string();

    HeatmapSummary summary = run_heatmap(config);
    CHECK(summary.max_r_add == 2);
    CHECK(summary.max_r_del == 2);
    REQUIRE(summary.series.size() == 3);
    CHECK(summary.rows.size() == 3 * 3);
    for (const HeatmapSeries &series : summary.series) {
        REQUIRE(series.fractions.size() == 9);
        for (double f : series.fractions) {
            CHECK(f >= 0.0);
            CHECK(f <= 1.0);
        }
    }

    std::string results = read_file(config.output_dir + "/results.csv");
    std::vector<std::string> lines = data_lines(results);
    REQUIRE(!lines.empty());
    CHECK(lines[0] ==
          "instance_id,method,budget,g_exact,g_point,g_lower,oracle_calls,"
          "certified_max_radius");
    CHECK(lines.size() == 1 + 9);

    // The origin cell of the exact series records the fraction of instances
    // whose exact probability clears one half.
    int above_half = 0;
    for (size_t i = 1; i < lines.size(); ++i) {
        std::vector<std::string> fields = split_csv(lines[i]);
        REQUIRE(fields.size() == 8);
        if (fields[1] == "exact" && std::stod(fields[3]) > 0.5) {
            ++above_half;
        }
    }
    CHECK(summary.series[0].fractions[0] == doctest::Approx(above_half / 3.0).epsilon(1e-12));

    std::string cells = read_file(config.output_dir + "/heatmap_cells.csv");
    std::vector<std::string> cell_lines = data_lines(cells);
    CHECK(cell_lines[0] == "method,budget,r_add,r_del,certified_fraction");
    CHECK(cell_lines.size() == 1 + 3 * 9);
    CHECK(fs::exists(config.output_dir + "/heatmap_exact.svg"));
    CHECK(fs::exists(config.output_dir + "/heatmap_qae3.svg"));
    CHECK(fs::exists(config.output_dir + "/heatmap_qae4.svg"));

    ExperimentConfig rerun = config;
    rerun.output_dir = fresh_dir("heatmap_b").string();
    run_heatmap(rerun);
    CHECK(read_file(rerun.output_dir + "/results.csv") == results);
    CHECK(read_file(rerun.output_dir + "/heatmap_cells.csv") == cells);
}

TEST_CASE("certified ratio runner handles one-sided noise") {
    ExperimentConfig config;
    config.experiment = ExperimentKind::graph_clique;
    config.instance_count = 4;
    config.counting_qubits = {3};
    config.max_r_add = 5;
    config.seed = 4;
    config.output_dir = fresh_dir("ratio").string();

    RatioSummary summary = run_certified_ratio(config);
    CHECK(summary.one_sided);
    CHECK(summary.max_radius == 5);
    REQUIRE(summary.series.size() == 2);
    for (const RatioSeries &series : summary.series) {
        REQUIRE(series.fractions.size() == 6);
        for (size_t r = 1; r < series.fractions.size(); ++r) {
            CHECK(series.fractions[r] <= series.fractions[r - 1]);
        }
    }
    CHECK(summary.rows.size() == 4 * 2);

    std::string curve = read_file(config.output_dir + "/ratio_curve.csv");
    std::vector<std::string> lines = data_lines(curve);
    CHECK(lines[0] == "method,budget,radius,certified_fraction");
    CHECK(lines.size() == 1 + 2 * 6);
    CHECK(fs::exists(config.output_dir + "/certified_ratio.svg"));
    CHECK(fs::exists(config.output_dir + "/results.csv"));
}

TEST_CASE("convergence runner fits slopes and records trial zero") {
    ExperimentConfig config;
    config.experiment = ExperimentKind::sentiment;
    config.instance_count = 2;
    config.counting_qubits = {3, 4};
    config.mc_samples = {100, 1000};
    config.mc_trials = 2;
    config.seed = 3;
    config.output_dir = fresh_dir("conv").string();

    ConvergenceSummary summary = run_convergence(config);
    CHECK(summary.rows.size() == 2 * (2 + 2));
    REQUIRE(summary.points.size() == 4);
    CHECK(summary.points[0].method == EvalMethod::monte_carlo);
    CHECK(summary.points[0].budget == 100);
    CHECK(summary.points[2].method == EvalMethod::qae);
    CHECK(summary.points[2].budget == uint64_t{79} * 8);
    CHECK(summary.points[3].budget == uint64_t{79} * 16);
    CHECK(std::isfinite(summary.mc_slope));
    CHECK(std::isfinite(summary.qae_slope));
    CHECK(summary.exponent == doctest::Approx(summary.qae_slope / summary.mc_slope));
    for (const ResultRow &row : summary.rows) {
        CHECK(row.certified_max_radius == -1);
    }

    std::string conv = read_file(config.output_dir + "/convergence.csv");
    std::vector<std::string> lines = data_lines(conv);
    CHECK(lines[0] == "method,oracle_calls,mean_abs_error");
    CHECK(lines.size() == 1 + 4);
    CHECK(conv.find("# fit: monte_carlo slope=") != std::string::npos);
    CHECK(conv.find("# fit: qae slope=") != std::string::npos);
    CHECK(conv.find("# fit: classical_to_quantum_exponent=") != std::string::npos);
    CHECK(fs::exists(config.output_dir + "/convergence.svg"));
}

TEST_CASE("single run report is deterministic and complete") {
    ExperimentConfig config;
    config.experiment = ExperimentKind::truth_table;
    config.oracle_file = write_temp("single_table.txt", "n=4\n0001011101111111\n");
    config.input_bits = "1100";
    config.counting_qubits = {4};
    config.mc_samples = {200};
    config.seed = 21;

    std::string report = run_single(config);
    CHECK(report == run_single(config));
    CHECK(report.find("experiment: truth_table") != std::string::npos);
    CHECK(report.find("input: 1100") != std::string::npos);
    CHECK(report.find("exact: g=") != std::string::npos);
    CHECK(report.find("monte_carlo[samples=200]") != std::string::npos);
    CHECK(report.find("qae[t=4]") != std::string::npos);
    CHECK(report.find("certificate grid") != std::string::npos);
}
