// Acceptance gate: one pass/fail line per criterion, exit code equals the
// number of failures. Tolerances are pinned here, not configurable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "qsmooth/certify.hpp"
#include "qsmooth/experiment.hpp"
#include "qsmooth/oracle.hpp"
#include "qsmooth/prng.hpp"
#include "qsmooth/qae.hpp"
#include "qsmooth/statevec.hpp"
#include "test_support.hpp"

using namespace qsmooth;
namespace fs = std::filesystem;

namespace {

const fs::path kTmp = "acceptance_tmp";

struct Outcome {
    bool pass = false;
    std::string note;
};

TruthTable random_table(int n, std::mt19937_64 &rng, double density) {
    return compile_truth_table(n, [&](const BitString &) { return uniform01(rng) < density; });
}

BitString random_bits(int n, std::mt19937_64 &rng) {
    uint32_t mask = (1u << n) - 1u;
    return BitString(n, static_cast<uint32_t>(rng()) & mask);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// ---- criterion 1: loader amplitudes reproduce the smoothing measure ----

Outcome check_loader_probabilities() {
    double worst = 0.0;
    for (int n = 1; n <= 8; ++n) {
        for (uint32_t xv = 0; xv < (1u << n); ++xv) {
            BitString x(n, xv);
            for (int pi = 0; pi <= 10; ++pi) {
                for (int pj = 0; pj <= 10; ++pj) {
                    FlipProbabilities probs(pi / 10.0, pj / 10.0);
                    StateVector s = load_superposition(x, probs);
                    for (uint32_t z = 0; z < (1u << n); ++z) {
                        double want = transition_probability(BitString(n, z), x, probs);
                        worst = std::max(worst, std::abs(std::norm(s.amplitude(z)) - want));
                    }
                }
            }
        }
    }
    Outcome out;
    out.pass = worst <= 1e-10;
    out.note = "max |amplitude^2 - measure| = " + fmt(worst) + " over n <= 8, 11x11 grid";
    return out;
}

// ---- criterion 2: amplitude identity and iterate eigenphase ----

Outcome check_amplitude_identity() {
    int done = 0;
    uint64_t draw = 0;
    double worst_phase = 0.0;
    while (done < 100) {
        std::mt19937_64 rng = make_rng(9000, draw++);
        int n = 1 + static_cast<int>(uniform01(rng) * 4.0);
        n = std::min(n, 4);
        BitString x = random_bits(n, rng);
        FlipProbabilities probs(0.05 + 0.9 * uniform01(rng), 0.05 + 0.9 * uniform01(rng));
        TruthTable oracle = random_table(n, rng, 0.5);

        double a = analytic_amplitude(x, probs, oracle);
        double summed = exact_smooth(x, probs, oracle).value;
        if (a != summed) {
            return {false, "amplitude " + fmt(a) + " != summed value " + fmt(summed)};
        }
        if (a < 1e-9 || a > 1.0 - 1e-9) {
            continue;
        }

        // Orthonormal accepted/rejected components of the loaded state.
        StateVector psi = load_superposition(x, probs);
        size_t dim = psi.size();
        std::vector<cplx> good(dim), bad(dim);
        for (uint32_t z = 0; z < dim; ++z) {
            (oracle.value(z) ? good[z] : bad[z]) = psi.amplitude(z);
        }
        double gn = std::sqrt(a), bn = std::sqrt(1.0 - a);
        for (uint32_t z = 0; z < dim; ++z) {
            good[z] /= gn;
            bad[z] /= bn;
        }

        // 2x2 restriction of the iterate to span(good, bad).
        GroverOperator grover = build_grover(x, probs, oracle);
        cplx m[2][2];
        const std::vector<cplx> *basis[2] = {&good, &bad};
        for (int col = 0; col < 2; ++col) {
            StateVector s(x.n);
            s.amplitude(0) = cplx(0.0, 0.0);
            for (uint32_t z = 0; z < dim; ++z) {
                s.amplitude(z) = (*basis[col])[z];
            }
            grover.apply(s);
            for (int row = 0; row < 2; ++row) {
                cplx overlap(0.0, 0.0);
                for (uint32_t z = 0; z < dim; ++z) {
                    overlap += std::conj((*basis[row])[z]) * s.amplitude(z);
                }
                m[row][col] = overlap;
            }
        }
        cplx tr = m[0][0] + m[1][1];
        cplx det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        cplx disc = std::sqrt(tr * tr - 4.0 * det);
        cplx lam = 0.5 * (tr + disc);
        double phase = std::abs(std::arg(lam));
        double want = 2.0 * std::asin(std::sqrt(a));
        worst_phase = std::max(worst_phase, std::abs(phase - want));
        ++done;
    }
    Outcome out;
    out.pass = worst_phase <= 1e-9;
    out.note = "identity exact on 100 instances; max eigenphase error " + fmt(worst_phase);
    return out;
}

// ---- criterion 3: counting distribution fidelity and per-run error bound ----

Outcome check_counting_distribution() {
    double worst_tv = 0.0;
    for (int t = 1; t <= 6; ++t) {
        for (uint64_t k = 0; k < 3; ++k) {
            std::mt19937_64 rng = make_rng(9100, (static_cast<uint64_t>(t) << 8) | k);
            int n = 1 + static_cast<int>(uniform01(rng) * 4.0);
            n = std::min(n, 4);
            BitString x = random_bits(n, rng);
            FlipProbabilities probs(0.05 + 0.9 * uniform01(rng),
                                    0.05 + 0.9 * uniform01(rng));
            TruthTable oracle = random_table(n, rng, 0.5);
            double a = analytic_amplitude(x, probs, oracle);
            GroverOperator grover = build_grover(x, probs, oracle);
            std::vector<double> dist = counting_distribution(grover, t);
            worst_tv = std::max(worst_tv,
                                qtest::total_variation(dist, qtest::closed_form_counting(a, t)));
        }
    }
    if (worst_tv > 1e-8) {
        return {false, "max total variation " + fmt(worst_tv) + " exceeds 1e-8"};
    }

    // Single-draw deviation |estimate - a| within the resolution bound at
    // the guaranteed rate.
    std::mt19937_64 rng = make_rng(9200, 0);
    BitString x(3, 0b101u);
    FlipProbabilities probs(0.3, 0.2);
    TruthTable oracle = random_table(3, rng, 0.5);
    double a = analytic_amplitude(x, probs, oracle);
    GroverOperator grover = build_grover(x, probs, oracle);
    const int t = 5;
    const double big_t = 32.0;
    const double bound =
        2.0 * M_PI * std::sqrt(a * (1.0 - a)) / big_t + M_PI * M_PI / (big_t * big_t);
    const int draws = 10000;
    int within = 0;
    for (int d = 0; d < draws; ++d) {
        GridPoint p = fold_and_grid(run_phase_estimation(grover, t, rng), t);
        if (std::abs(p.value - a) <= bound) {
            ++within;
        }
    }
    double freq = static_cast<double>(within) / draws;
    double target = 8.0 / (M_PI * M_PI);
    double sigma = std::sqrt(target * (1.0 - target) / draws);
    Outcome out;
    out.pass = freq >= target - 3.0 * sigma;
    out.note = "max TV " + fmt(worst_tv) + "; bound hit rate " + fmt(freq) + " vs floor " +
               fmt(target - 3.0 * sigma);
    return out;
}

// ---- criterion 4: median-boosted interval coverage ----

Outcome check_interval_coverage() {
    const int instances = 20;
    const int runs = 1000;
    const double delta = 0.01;
    const double floor_frac =
        1.0 - delta - 3.0 * std::sqrt(delta * (1.0 - delta) / runs);
    double worst_frac = 1.0;
    for (int i = 0; i < instances; ++i) {
        std::mt19937_64 rng = make_rng(9300, static_cast<uint64_t>(i));
        int n = 2 + static_cast<int>(uniform01(rng) * 3.0);
        n = std::min(n, 4);
        BitString x = random_bits(n, rng);
        FlipProbabilities probs(0.05 + 0.9 * uniform01(rng), 0.05 + 0.9 * uniform01(rng));
        TruthTable oracle = random_table(n, rng, 0.5);
        double a = analytic_amplitude(x, probs, oracle);
        int covered = 0;
        for (int r = 0; r < runs; ++r) {
            QaeConfig config;
            config.counting_qubits = 5;
            config.delta = delta;
            config.seed = derive_seed(9301, (static_cast<uint64_t>(i) << 32) |
                                                static_cast<uint64_t>(r));
            AmplitudeEstimate est = estimate(x, probs, oracle, config);
            if (est.lower <= a && a <= est.upper) {
                ++covered;
            }
        }
        worst_frac = std::min(worst_frac, static_cast<double>(covered) / runs);
    }
    Outcome out;
    out.pass = worst_frac >= floor_frac;
    out.note = "worst per-instance coverage " + fmt(worst_frac) + " vs floor " +
               fmt(floor_frac) + " (79 repeats)";
    return out;
}

// ---- criterion 5: certification equals point-level enumeration ----

Outcome check_certification_soundness() {
    const std::vector<double> p_lowers = {0.0, 0.3, 0.5, 0.7, 0.9, 0.99, 1.0};
    std::vector<FlipProbabilities> grid;
    for (int i = 0; i <= 4; ++i) {
        for (int j = 0; j <= 4; ++j) {
            grid.emplace_back(i / 4.0, j / 4.0);
        }
    }
    grid.emplace_back(0.3, 0.2);
    grid.emplace_back(0.3, 0.0);
    grid.emplace_back(0.0, 0.4);

    long checked = 0;
    for (int n = 1; n <= 8; ++n) {
        std::mt19937_64 rng = make_rng(9400, static_cast<uint64_t>(n));
        std::vector<BitString> xs = {BitString::zeros(n), BitString(n, (1u << n) - 1u),
                                     random_bits(n, rng)};
        for (const FlipProbabilities &probs : grid) {
            for (const BitString &x : xs) {
                const int zeros = x.zero_count();
                const int ones = x.ones();
                // Reference worst cases per realizable difference pair, with
                // the differing positions taken from the top end.
                std::vector<std::vector<std::vector<double>>> ref(
                    zeros + 1, std::vector<std::vector<double>>(
                                   ones + 1, std::vector<double>(p_lowers.size())));
                for (int adds = 0; adds <= zeros; ++adds) {
                    for (int dels = 0; dels <= ones; ++dels) {
                        BitString xt = x;
                        int need_add = adds, need_del = dels;
                        for (int j = n - 1; j >= 0 && (need_add > 0 || need_del > 0); --j) {
                            if (!x.bit(j) && need_add > 0) {
                                xt.set_bit(j, true);
                                --need_add;
                            } else if (x.bit(j) && need_del > 0) {
                                xt.set_bit(j, false);
                                --need_del;
                            }
                        }
                        for (size_t pi = 0; pi < p_lowers.size(); ++pi) {
                            ref[adds][dels][pi] =
                                qtest::brute_force_worst_case(p_lowers[pi], x, xt, probs);
                        }
                    }
                }
                for (int ra = 0; ra <= n; ++ra) {
                    for (int rd = 0; ra + rd <= n; ++rd) {
                        for (size_t pi = 0; pi < p_lowers.size(); ++pi) {
                            double ref_worst = 1.0;
                            for (int adds = 0; adds <= std::min(ra, zeros); ++adds) {
                                for (int dels = 0; dels <= std::min(rd, ones); ++dels) {
                                    ref_worst = std::min(ref_worst, ref[adds][dels][pi]);
                                }
                            }
                            bool want = ref_worst > 0.5;
                            bool got = certify_ball(p_lowers[pi], x, probs,
                                                    PerturbationBall(ra, rd));
                            ++checked;
                            if (got != want) {
                                std::ostringstream msg;
                                msg << "disagreement at n=" << n << " x=" << x.str()
                                    << " p+=" << probs.p_plus << " p-=" << probs.p_minus
                                    << " ball=(" << ra << "," << rd
                                    << ") p_lower=" << p_lowers[pi];
                                return {false, msg.str()};
                            }
                        }
                    }
                }
            }
        }
    }
    return {true, "zero disagreements across " + std::to_string(checked) + " decisions"};
}

// ---- criterion 6: error convergence slopes ----

Outcome check_convergence_slopes() {
    ExperimentConfig config;
    config.experiment = ExperimentKind::window_image;
    config.seed = 1;
    config.output_dir = (kTmp / "convergence").string();
    fs::remove_all(config.output_dir);
    ConvergenceSummary summary = run_convergence(config);
    bool mc_ok = std::abs(summary.mc_slope + 0.5) <= 0.07;
    bool qae_ok = std::abs(summary.qae_slope + 1.0) <= 0.12;
    bool exp_ok = summary.exponent >= 1.7 && summary.exponent <= 2.1;
    Outcome out;
    out.pass = mc_ok && qae_ok && exp_ok;
    out.note = "mc slope " + fmt(summary.mc_slope) + " (want -0.5 +- 0.07), qae slope " +
               fmt(summary.qae_slope) + " (want -1.0 +- 0.12), exponent " +
               fmt(summary.exponent) + " (want [1.7, 2.1])";
    return out;
}

// ---- criterion 7: clique-graph certification structure ----

Outcome check_graph_structure() {
    ExperimentConfig config;
    config.experiment = ExperimentKind::graph_clique;
    config.seed = 1;
    InstanceSet set = build_instances(config);
    if (set.instances.size() != 170) {
        return {false, "expected 170 graphs, built " + std::to_string(set.instances.size())};
    }
    const std::vector<int> qubit_list = {3, 4, 5, 6, 7, 8};
    const int max_ra = 8, max_rd = 2;
    const double delta = 0.01;

    std::vector<CertificateGrid> exact_grids;
    std::vector<bool> has_clique;
    // grids[ti][i] for counting size qubit_list[ti].
    std::vector<std::vector<CertificateGrid>> qae_grids(qubit_list.size());
    for (const ExperimentInstance &inst : set.instances) {
        SmoothEvaluation exact = exact_smooth(inst.x, set.probs, inst.oracle);
        exact_grids.push_back(certificate_grid(exact, inst.x, set.probs, max_ra, max_rd));
        has_clique.push_back(inst.oracle.value(inst.x));
        for (size_t ti = 0; ti < qubit_list.size(); ++ti) {
            QaeConfig qcfg;
            qcfg.counting_qubits = qubit_list[ti];
            qcfg.delta = delta;
            qcfg.seed = derive_seed(config.seed,
                                    (uint64_t{3} << 48) |
                                        (static_cast<uint64_t>(inst.id) << 32) |
                                        (static_cast<uint64_t>(ti) << 16));
            AmplitudeEstimate est = estimate(inst.x, set.probs, inst.oracle, qcfg);
            SmoothEvaluation eval;
            eval.value = est.point;
            eval.lower = est.lower;
            eval.confidence = est.confidence;
            eval.oracle_calls = est.oracle_calls;
            eval.method = EvalMethod::qae;
            qae_grids[ti].push_back(certificate_grid(eval, inst.x, set.probs, max_ra, max_rd));
        }
    }

    // (a) no deletion radius is ever certified, by any method.
    for (size_t i = 0; i < exact_grids.size(); ++i) {
        for (int ra = 0; ra <= max_ra; ++ra) {
            for (int rd = 1; rd <= max_rd; ++rd) {
                if (exact_grids[i].certified(ra, rd)) {
                    return {false, "exact method certified a deletion radius"};
                }
                for (size_t ti = 0; ti < qubit_list.size(); ++ti) {
                    if (qae_grids[ti][i].certified(ra, rd)) {
                        return {false, "counting method certified a deletion radius"};
                    }
                }
            }
        }
    }

    // (b) some clique-containing graph is exactly certified past radius 6.
    bool deep = false;
    for (size_t i = 0; i < exact_grids.size(); ++i) {
        if (has_clique[i] && max_certified_total_radius(exact_grids[i]) > 6) {
            deep = true;
            break;
        }
    }
    if (!deep) {
        return {false, "no clique-containing graph certified past radius 6 exactly"};
    }

    // (c) the 8-qubit certified set nests inside the exact one per instance,
    // at the confidence the bound promises.
    int nested = 0;
    for (size_t i = 0; i < exact_grids.size(); ++i) {
        bool subset = true;
        for (int ra = 0; ra <= max_ra && subset; ++ra) {
            for (int rd = 0; rd <= max_rd; ++rd) {
                if (qae_grids.back()[i].certified(ra, rd) &&
                    !exact_grids[i].certified(ra, rd)) {
                    subset = false;
                    break;
                }
            }
        }
        if (subset) {
            ++nested;
        }
    }
    const double n170 = static_cast<double>(exact_grids.size());
    double nest_frac = nested / n170;
    double nest_floor = 1.0 - delta - 3.0 * std::sqrt(delta * (1.0 - delta) / n170);
    if (nest_frac < nest_floor) {
        return {false, "nesting fraction " + fmt(nest_frac) + " below " + fmt(nest_floor)};
    }

    // (d) certified-ratio curves fall with radius and rise with counting
    // qubits, up to the confidence allowance.
    auto fraction = [&](const std::vector<CertificateGrid> &grids, int r) {
        int count = 0;
        for (const CertificateGrid &grid : grids) {
            if (grid.certified(r, 0)) {
                ++count;
            }
        }
        return count / n170;
    };
    const double allowance = delta + 3.0 * std::sqrt(delta * (1.0 - delta) / n170);
    for (size_t ti = 0; ti < qubit_list.size(); ++ti) {
        for (int r = 1; r <= max_ra; ++r) {
            if (fraction(qae_grids[ti], r) > fraction(qae_grids[ti], r - 1)) {
                return {false, "certified ratio increased with radius"};
            }
        }
        if (ti > 0) {
            for (int r = 0; r <= max_ra; ++r) {
                if (fraction(qae_grids[ti], r) < fraction(qae_grids[ti - 1], r) - allowance) {
                    return {false, "certified ratio dropped with more counting qubits at radius " +
                                       std::to_string(r)};
                }
            }
        }
    }
    for (int r = 1; r <= max_ra; ++r) {
        if (fraction(exact_grids, r) > fraction(exact_grids, r - 1)) {
            return {false, "exact certified ratio increased with radius"};
        }
    }
    return {true, "deletion-free, depth " + std::string("> 6") + " reached, nesting " +
                      fmt(nest_frac) + ", curves monotone"};
}

// ---- criterion 8: CLI determinism and exit codes ----

int run_cli(const std::string &args) {
    std::string cmd = std::string(QSMOOTH_CLI_PATH) + " " + args;
    int rc = std::system(cmd.c_str());
    if (rc == -1) {
        return -1;
    }
    if (WIFEXITED(rc)) {
        return WEXITSTATUS(rc);
    }
    return -2;
}

std::string slurp(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome check_cli_determinism() {
    fs::path dir_a = kTmp / "cli_a";
    fs::path dir_b = kTmp / "cli_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    fs::create_directories(dir_a);
    fs::create_directories(dir_b);
    std::string common = "heatmap --experiment sentiment --instances 2 "
                         "--counting-qubits 3,4 --max-r-add 3 --seed 5 --out ";
    std::string quiet = " > /dev/null 2>&1";
    if (run_cli(common + dir_a.string() + quiet) != 0) {
        return {false, "first experiment run did not exit 0"};
    }
    if (run_cli(common + dir_b.string() + quiet) != 0) {
        return {false, "second experiment run did not exit 0"};
    }
    for (const char *name : {"results.csv", "heatmap_cells.csv"}) {
        std::string a = slurp(dir_a / name);
        std::string b = slurp(dir_b / name);
        if (a.empty() || a != b) {
            return {false, std::string(name) + " differs between identical runs"};
        }
    }
    if (run_cli("heatmap --no-such-flag" + quiet) != 2) {
        return {false, "unknown flag did not exit 2"};
    }
    if (run_cli("single --experiment sentiment --counting-qubits 19" + quiet) != 3) {
        return {false, "oversized register did not exit 3"};
    }
    return {true, "byte-identical CSVs; exit codes 0/2/3 observed"};
}

} // namespace

int main() {
    fs::create_directories(kTmp);
    struct Criterion {
        int id;
        const char *label;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "loader amplitudes match the smoothing measure", check_loader_probabilities},
        {2, "amplitude identity and iterate eigenphase", check_amplitude_identity},
        {3, "counting distribution fidelity and error bound", check_counting_distribution},
        {4, "median-boosted interval coverage", check_interval_coverage},
        {5, "certification equals point-level enumeration", check_certification_soundness},
        {6, "error convergence slopes", check_convergence_slopes},
        {7, "clique-graph certification structure", check_graph_structure},
        {8, "deterministic command line runs", check_cli_determinism},
    };
    int failures = 0;
    for (const Criterion &criterion : criteria) {
        auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception &e) {
            outcome.pass = false;
            outcome.note = std::string("exception: ") + e.what();
        }
        double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %d: %s (%.1fs) %s - %s\n", criterion.id,
                    outcome.pass ? "pass" : "FAIL", seconds, criterion.label,
                    outcome.note.c_str());
        std::fflush(stdout);
        if (!outcome.pass) {
            ++failures;
        }
    }
    return failures;
}
