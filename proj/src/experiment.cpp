#include "qsmooth/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qsmooth/prng.hpp"
#include "qsmooth/scheme.hpp"
#include "qsmooth/svg.hpp"

namespace qsmooth {

namespace {

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

enum class StreamKind : uint64_t { instance = 1, monte_carlo = 2, qae = 3 };

uint64_t stream_id(StreamKind kind, int instance, int budget_index, int trial) {
    return (static_cast<uint64_t>(kind) << 48) |
           (static_cast<uint64_t>(instance & 0xffff) << 32) |
           (static_cast<uint64_t>(budget_index & 0xffff) << 16) |
           static_cast<uint64_t>(trial & 0xffff);
}

std::string trim(const std::string &s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

int64_t parse_int(const std::string &value, const std::string &key) {
    size_t used = 0;
    int64_t out = 0;
    try {
        out = std::stoll(value, &used);
    } catch (const std::exception &) {
        throw std::invalid_argument("key '" + key + "': '" + value + "' is not an integer");
    }
    if (used != value.size()) {
        throw std::invalid_argument("key '" + key + "': trailing characters in '" + value + "'");
    }
    return out;
}

double parse_real(const std::string &value, const std::string &key) {
    size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(value, &used);
    } catch (const std::exception &) {
        throw std::invalid_argument("key '" + key + "': '" + value + "' is not a number");
    }
    if (used != value.size()) {
        throw std::invalid_argument("key '" + key + "': trailing characters in '" + value + "'");
    }
    return out;
}

std::vector<std::string> split_commas(const std::string &value) {
    std::vector<std::string> parts;
    std::string cur;
    std::stringstream ss(value);
    while (std::getline(ss, cur, ',')) {
        parts.push_back(trim(cur));
    }
    return parts;
}

struct ExperimentDefaults {
    double p_plus;
    double p_minus;
    int instance_count;
    int max_r_add;
    int max_r_del;
};

ExperimentDefaults defaults_for(ExperimentKind kind, int code_bits) {
    switch (kind) {
    case ExperimentKind::window_image:
        return {0.3, 0.3, 20, 4, 4};
    case ExperimentKind::graph_clique:
        return {0.3, 0.0, 170, 8, 2};
    case ExperimentKind::sentiment:
        return {0.2, 0.0, 20, 6, 0};
    case ExperimentKind::truth_table:
        return {0.3, 0.3, 20, std::min(code_bits, 4), std::min(code_bits, 4)};
    }
    throw std::invalid_argument("unknown experiment kind");
}

// 4x4 perturbable window in a 16x16 image, rows 6..9, cols 6..9.
constexpr int kImageSide = 16;

std::vector<int> window_positions() {
    std::vector<int> out;
    for (int r = 6; r <= 9; ++r) {
        for (int c = 6; c <= 9; ++c) {
            out.push_back(r * kImageSide + c);
        }
    }
    return out;
}

WindowClassifier window_classifier() {
    return WindowClassifier{{3, -2, 4, -1, 2, -3, 1, -2, 2, 1, -4, 2, -1, 3, -2, 1}, 1};
}

// Token ids 0..7 are the removable stop-words; 8..19 carry the sentiment.
SentimentLexicon sentiment_lexicon() {
    return SentimentLexicon{
        {1, -1, 1, -1, 1, -1, 1, -1, 3, -3, 4, -4, 2, -2, 5, -5, 3, -2, 4, -3}};
}

constexpr int kRemovableTokens = 8;
constexpr int kReviewSentimentSlots = 4;

void check_prob(double p, const std::string &name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument(name + " must lie in [0,1], got " + std::to_string(p));
    }
}

std::vector<BitString> load_graph_lines(const std::string &path, int edge_bits) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open graph file '" + path + "'");
    }
    std::vector<BitString> graphs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty()) {
            continue;
        }
        if (static_cast<int>(t.size()) != edge_bits) {
            throw std::invalid_argument("graph file '" + path + "' line " +
                                        std::to_string(line_no) + ": expected " +
                                        std::to_string(edge_bits) + " edge bits, found " +
                                        std::to_string(t.size()));
        }
        graphs.push_back(BitString::parse(t));
    }
    return graphs;
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    out << content;
    if (!out) {
        throw std::runtime_error("failed while writing '" + path + "'");
    }
}

std::string csv_preamble(const InstanceSet &set, const ExperimentConfig &config) {
    std::string out;
    out += "# " + set.description + "\n";
    out += "# p_plus=" + fmt_g(set.probs.p_plus) + " p_minus=" + fmt_g(set.probs.p_minus) +
           " delta=" + fmt_g(config.delta) + " seed=" + std::to_string(config.seed) +
           " instances=" + std::to_string(set.instances.size()) + "\n";
    out += "# budget column: counting qubits (qae), sample count (monte_carlo), 0 (exact); "
           "certified_max_radius: largest certified r_add+r_del within the swept extent, "
           "-1 when none\n";
    return out;
}

std::string results_csv(const InstanceSet &set, const ExperimentConfig &config,
                        const std::vector<ResultRow> &rows) {
    std::string out = csv_preamble(set, config);
    out += "instance_id,method,budget,g_exact,g_point,g_lower,oracle_calls,"
           "certified_max_radius\n";
    for (const ResultRow &row : rows) {
        out += std::to_string(row.instance_id);
        out += ",";
        out += method_name(row.method);
        out += "," + std::to_string(row.budget);
        out += "," + fmt_g(row.g_exact);
        out += "," + fmt_g(row.g_point);
        out += "," + fmt_g(row.g_lower);
        out += "," + std::to_string(row.oracle_calls);
        out += "," + std::to_string(row.certified_max_radius);
        out += "\n";
    }
    return out;
}

std::string series_label(EvalMethod method, int budget) {
    if (method == EvalMethod::qae) {
        return "qae t=" + std::to_string(budget);
    }
    return method_name(method);
}

std::string series_file_tag(EvalMethod method, int budget) {
    if (method == EvalMethod::qae) {
        return "qae" + std::to_string(budget);
    }
    return method_name(method);
}

SmoothEvaluation qae_evaluation(const AmplitudeEstimate &est) {
    SmoothEvaluation eval;
    eval.value = est.point;
    eval.lower = est.lower;
    eval.confidence = est.confidence;
    eval.oracle_calls = est.oracle_calls;
    eval.method = EvalMethod::qae;
    return eval;
}

struct PreparedConfig {
    ExperimentConfig config;
    InstanceSet set;
};

PreparedConfig prepare(const ExperimentConfig &raw) {
    PreparedConfig out;
    out.config = raw;
    if (!(out.config.delta > 0.0 && out.config.delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0,1), got " +
                                    std::to_string(out.config.delta));
    }
    if (out.config.counting_qubits.empty()) {
        throw std::invalid_argument("counting_qubits list is empty");
    }
    if (out.config.mc_samples.empty()) {
        throw std::invalid_argument("mc_samples list is empty");
    }
    for (int t : out.config.counting_qubits) {
        if (t < 1) {
            throw std::invalid_argument("counting_qubits entries must be positive, got " +
                                        std::to_string(t));
        }
    }
    for (uint64_t s : out.config.mc_samples) {
        if (s == 0) {
            throw std::invalid_argument("mc_samples entries must be positive");
        }
    }
    if (out.config.mc_trials < 1) {
        throw std::invalid_argument("mc_trials must be positive, got " +
                                    std::to_string(out.config.mc_trials));
    }
    std::sort(out.config.counting_qubits.begin(), out.config.counting_qubits.end());
    out.config.counting_qubits.erase(std::unique(out.config.counting_qubits.begin(),
                                                 out.config.counting_qubits.end()),
                                     out.config.counting_qubits.end());
    std::sort(out.config.mc_samples.begin(), out.config.mc_samples.end());
    out.config.mc_samples.erase(
        std::unique(out.config.mc_samples.begin(), out.config.mc_samples.end()),
        out.config.mc_samples.end());
    out.set = build_instances(out.config);
    return out;
}

std::string output_path(const ExperimentConfig &config, const std::string &name) {
    std::filesystem::path dir(config.output_dir.empty() ? "." : config.output_dir);
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

} // namespace

ExperimentKind parse_experiment_kind(const std::string &name) {
    if (name == "window_image") {
        return ExperimentKind::window_image;
    }
    if (name == "graph_clique") {
        return ExperimentKind::graph_clique;
    }
    if (name == "sentiment") {
        return ExperimentKind::sentiment;
    }
    if (name == "truth_table") {
        return ExperimentKind::truth_table;
    }
    throw std::invalid_argument("unknown experiment '" + name +
                                "'; expected one of window_image, graph_clique, sentiment, "
                                "truth_table");
}

const char *experiment_name(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::window_image:
        return "window_image";
    case ExperimentKind::graph_clique:
        return "graph_clique";
    case ExperimentKind::sentiment:
        return "sentiment";
    case ExperimentKind::truth_table:
        return "truth_table";
    }
    throw std::invalid_argument("unknown experiment kind");
}

void apply_config_entry(ExperimentConfig &config, const std::string &key,
                        const std::string &value) {
    if (key == "experiment") {
        config.experiment = parse_experiment_kind(value);
    } else if (key == "p_plus") {
        config.p_plus = parse_real(value, key);
    } else if (key == "p_minus") {
        config.p_minus = parse_real(value, key);
    } else if (key == "counting_qubits") {
        config.counting_qubits.clear();
        for (const std::string &part : split_commas(value)) {
            config.counting_qubits.push_back(static_cast<int>(parse_int(part, key)));
        }
    } else if (key == "delta") {
        config.delta = parse_real(value, key);
    } else if (key == "mc_samples") {
        config.mc_samples.clear();
        for (const std::string &part : split_commas(value)) {
            int64_t v = parse_int(part, key);
            if (v < 0) {
                throw std::invalid_argument("key 'mc_samples': negative entry " + part);
            }
            config.mc_samples.push_back(static_cast<uint64_t>(v));
        }
    } else if (key == "instance_count") {
        config.instance_count = static_cast<int>(parse_int(value, key));
    } else if (key == "mc_trials") {
        config.mc_trials = static_cast<int>(parse_int(value, key));
    } else if (key == "seed") {
        config.seed = static_cast<uint64_t>(parse_int(value, key));
    } else if (key == "output_dir") {
        config.output_dir = value;
    } else if (key == "oracle_file") {
        config.oracle_file = value;
    } else if (key == "graph_file") {
        config.graph_file = value;
    } else if (key == "input") {
        config.input_bits = value;
    } else if (key == "max_r_add") {
        config.max_r_add = static_cast<int>(parse_int(value, key));
    } else if (key == "max_r_del") {
        config.max_r_del = static_cast<int>(parse_int(value, key));
    } else {
        throw std::invalid_argument(
            "unknown config key '" + key +
            "'; valid keys: experiment, p_plus, p_minus, counting_qubits, delta, mc_samples, "
            "instance_count, mc_trials, seed, output_dir, oracle_file, graph_file, input, "
            "max_r_add, max_r_del");
    }
}

ExperimentConfig parse_config_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open config file '" + path + "'");
    }
    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = line;
        size_t hash = stripped.find('#');
        if (hash != std::string::npos) {
            stripped = stripped.substr(0, hash);
        }
        stripped = trim(stripped);
        if (stripped.empty()) {
            continue;
        }
        size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("config file '" + path + "' line " +
                                        std::to_string(line_no) +
                                        ": expected 'key = value', found '" + stripped + "'");
        }
        std::string key = trim(stripped.substr(0, eq));
        std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw std::invalid_argument("config file '" + path + "' line " +
                                        std::to_string(line_no) + ": empty key or value");
        }
        try {
            apply_config_entry(config, key, value);
        } catch (const std::invalid_argument &e) {
            throw std::invalid_argument("config file '" + path + "' line " +
                                        std::to_string(line_no) + ": " + e.what());
        }
    }
    return config;
}

InstanceSet build_instances(const ExperimentConfig &config) {
    InstanceSet set;

    // Resolve the oracle side first; truth_table defaults depend on its width.
    TruthTable shared_table;
    PerturbationScheme scheme;
    int code_bits = 0;
    switch (config.experiment) {
    case ExperimentKind::window_image: {
        scheme = make_pixel_complement_scheme(kImageSide * kImageSide, window_positions());
        code_bits = scheme.code_bits();
        WindowClassifier cls = window_classifier();
        std::vector<int> window = window_positions();
        DomainPoint base(kImageSide * kImageSide, 0);
        WrappedClassifier wrapped =
            wrap_classifier(scheme, base, [&cls, &window](const DomainPoint &image) {
                std::vector<int> pixels;
                pixels.reserve(window.size());
                for (int pos : window) {
                    pixels.push_back(image[pos]);
                }
                return cls.predict(pixels) ? 1 : 0;
            });
        shared_table = wrapped.table;
        set.description =
            "window_image: 16x16 binary image, 4x4 perturbable window (16 code bits), fixed "
            "linear threshold classifier standing in for a trained model";
        break;
    }
    case ExperimentKind::graph_clique: {
        scheme = make_edge_toggle_scheme(15);
        code_bits = 15;
        shared_table = compile_truth_table(
            15, [](const BitString &edges) { return has_k_clique(edges, 6, 4); });
        set.description =
            "graph_clique: 6-vertex graphs, 15 edge bits in lexicographic pair order, exact "
            "4-clique base classifier standing in for a trained model; seeded "
            "ER(0.65)/ER(0.30) halves";
        break;
    }
    case ExperimentKind::sentiment: {
        code_bits = kRemovableTokens;
        set.description =
            "sentiment: 12-token review, 8 removable tokens (4 sentiment words + 4 "
            "stop-words, 8 code bits), signed lexicon sum standing in for a trained "
            "model; repository stop-word list, no claimed equivalence to any published "
            "list";
        break;
    }
    case ExperimentKind::truth_table: {
        if (config.oracle_file.empty()) {
            throw std::invalid_argument(
                "truth_table experiment requires oracle_file (path to a table file)");
        }
        shared_table = TruthTable::load(config.oracle_file);
        code_bits = shared_table.bits();
        set.description = "truth_table: user-supplied classifier over " +
                          std::to_string(code_bits) + " bits from '" + config.oracle_file +
                          "'";
        break;
    }
    }

    ExperimentDefaults defaults = defaults_for(config.experiment, code_bits);
    double pp = config.p_plus >= 0.0 ? config.p_plus : defaults.p_plus;
    double pm = config.p_minus >= 0.0 ? config.p_minus : defaults.p_minus;
    check_prob(pp, "p_plus");
    check_prob(pm, "p_minus");
    set.probs = FlipProbabilities(pp, pm);
    set.code_bits = code_bits;
    set.max_r_add = config.max_r_add >= 0 ? config.max_r_add : defaults.max_r_add;
    set.max_r_del = config.max_r_del >= 0 ? config.max_r_del : defaults.max_r_del;
    if (set.max_r_add > code_bits || set.max_r_del > code_bits) {
        throw std::invalid_argument("radius extent (" + std::to_string(set.max_r_add) + ", " +
                                    std::to_string(set.max_r_del) + ") exceeds the " +
                                    std::to_string(code_bits) + " code bits");
    }

    int count = config.instance_count >= 0 ? config.instance_count : defaults.instance_count;
    if (!config.input_bits.empty()) {
        count = 1;
    }
    if (count == 0) {
        throw std::invalid_argument("empty instance set: instance_count is 0");
    }
    if (count < 0) {
        throw std::invalid_argument("instance_count must be positive, got " +
                                    std::to_string(count));
    }

    switch (config.experiment) {
    case ExperimentKind::window_image: {
        for (int i = 0; i < count; ++i) {
            std::mt19937_64 rng =
                make_rng(config.seed, stream_id(StreamKind::instance, i, 0, 0));
            BitString x = BitString::zeros(code_bits);
            for (int j = 0; j < code_bits; ++j) {
                x.set_bit(j, uniform01(rng) < 0.5);
            }
            set.instances.push_back(ExperimentInstance{i, x, shared_table});
        }
        break;
    }
    case ExperimentKind::graph_clique: {
        std::vector<BitString> graphs;
        if (!config.graph_file.empty()) {
            graphs = load_graph_lines(config.graph_file, code_bits);
            if (config.instance_count < 0 && config.input_bits.empty()) {
                count = static_cast<int>(graphs.size());
                if (count == 0) {
                    throw std::invalid_argument("empty instance set: graph file '" +
                                                config.graph_file + "' holds no graphs");
                }
            } else if (static_cast<int>(graphs.size()) < count) {
                throw std::invalid_argument("graph file holds " +
                                            std::to_string(graphs.size()) +
                                            " graphs but instance_count is " +
                                            std::to_string(count));
            }
            graphs.resize(count);
        } else {
            const int dense_half = (count + 1) / 2;
            for (int i = 0; i < count; ++i) {
                std::mt19937_64 rng =
                    make_rng(config.seed, stream_id(StreamKind::instance, i, 0, 0));
                double edge_prob = i < dense_half ? 0.65 : 0.30;
                graphs.push_back(sample_er_graph(6, edge_prob, rng));
            }
        }
        for (int i = 0; i < count; ++i) {
            set.instances.push_back(ExperimentInstance{i, graphs[i], shared_table});
        }
        break;
    }
    case ExperimentKind::sentiment: {
        SentimentLexicon lexicon = sentiment_lexicon();
        // Review layout: stop-words at even slots 0..6 and the tail 8..11,
        // sentiment words at odd slots 1,3,5,7. Removals can reach all four
        // sentiment words plus a sign-balanced quartet of stop-words, so the
        // smoothed value spreads instead of pinning at the endpoints.
        std::vector<int> removable = {0, 1, 2, 3, 5, 7, 9, 10};
        for (int i = 0; i < count; ++i) {
            std::mt19937_64 rng =
                make_rng(config.seed, stream_id(StreamKind::instance, i, 0, 0));
            DomainPoint tokens(12, 0);
            const std::vector<int> stop_positions = {0, 2, 4, 6, 8, 9, 10, 11};
            int stop = 0;
            for (int pos : stop_positions) {
                tokens[pos] = stop++;
            }
            for (int slot = 0; slot < kReviewSentimentSlots; ++slot) {
                int word = 8 + static_cast<int>(uniform01(rng) * 12.0);
                tokens[slot * 2 + 1] = std::min(word, 19);
            }
            PerturbationScheme inst_scheme = make_token_removal_scheme(tokens, removable);
            WrappedClassifier wrapped =
                wrap_classifier(inst_scheme, tokens, [&lexicon](const DomainPoint &review) {
                    return stopword_sentiment_stub(review, lexicon);
                });
            set.instances.push_back(
                ExperimentInstance{i, BitString::zeros(code_bits), wrapped.table});
        }
        break;
    }
    case ExperimentKind::truth_table: {
        for (int i = 0; i < count; ++i) {
            std::mt19937_64 rng =
                make_rng(config.seed, stream_id(StreamKind::instance, i, 0, 0));
            uint32_t mask = (code_bits == 32) ? ~0u : ((1u << code_bits) - 1u);
            BitString x(code_bits, static_cast<uint32_t>(rng()) & mask);
            set.instances.push_back(ExperimentInstance{i, x, shared_table});
        }
        break;
    }
    }

    if (!config.input_bits.empty()) {
        BitString x = BitString::parse(config.input_bits);
        if (x.n != code_bits) {
            throw std::invalid_argument("input '" + config.input_bits + "' has " +
                                        std::to_string(x.n) + " bits; this experiment uses " +
                                        std::to_string(code_bits));
        }
        set.instances[0].x = x;
    }
    if (set.instances.empty()) {
        throw std::invalid_argument("empty instance set");
    }
    return set;
}

double fit_loglog_slope(const std::vector<double> &xs, const std::vector<double> &ys) {
    if (xs.size() != ys.size()) {
        throw std::invalid_argument("slope fit needs matching x/y lengths");
    }
    std::vector<double> lx, ly;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] > 0.0 && ys[i] > 0.0) {
            lx.push_back(std::log10(xs[i]));
            ly.push_back(std::log10(ys[i]));
        }
    }
    if (lx.size() < 2) {
        throw std::invalid_argument("slope fit needs at least two positive points");
    }
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < lx.size(); ++i) {
        num += (lx[i] - mx) * (ly[i] - my);
        den += (lx[i] - mx) * (lx[i] - mx);
    }
    if (den == 0.0) {
        throw std::invalid_argument("slope fit needs at least two distinct x values");
    }
    return num / den;
}

HeatmapSummary run_heatmap(const ExperimentConfig &raw) {
    PreparedConfig prep = prepare(raw);
    const ExperimentConfig &config = prep.config;
    const InstanceSet &set = prep.set;
    const int ra = set.max_r_add;
    const int rd = set.max_r_del;
    const size_t cells = static_cast<size_t>(ra + 1) * static_cast<size_t>(rd + 1);

    HeatmapSummary summary;
    summary.max_r_add = ra;
    summary.max_r_del = rd;
    summary.series.push_back(HeatmapSeries{EvalMethod::exact, 0, std::vector<double>(cells, 0.0)});
    for (size_t ti = 0; ti < config.counting_qubits.size(); ++ti) {
        summary.series.push_back(HeatmapSeries{EvalMethod::qae, config.counting_qubits[ti],
                                               std::vector<double>(cells, 0.0)});
    }

    for (const ExperimentInstance &inst : set.instances) {
        SmoothEvaluation exact = exact_smooth(inst.x, set.probs, inst.oracle);
        CertificateGrid exact_grid = certificate_grid(exact, inst.x, set.probs, ra, rd);
        summary.rows.push_back(ResultRow{inst.id, EvalMethod::exact, 0, exact.value,
                                         exact.value, exact.lower, exact.oracle_calls,
                                         max_certified_total_radius(exact_grid)});
        for (size_t c = 0; c < cells; ++c) {
            int cell_ra = static_cast<int>(c) / (rd + 1);
            int cell_rd = static_cast<int>(c) % (rd + 1);
            if (exact_grid.certified(cell_ra, cell_rd)) {
                summary.series[0].fractions[c] += 1.0;
            }
        }
        for (size_t ti = 0; ti < config.counting_qubits.size(); ++ti) {
            int t = config.counting_qubits[ti];
            QaeConfig qcfg;
            qcfg.counting_qubits = t;
            qcfg.delta = config.delta;
            qcfg.seed = derive_seed(config.seed,
                                    stream_id(StreamKind::qae, inst.id, static_cast<int>(ti), 0));
            AmplitudeEstimate est = estimate(inst.x, set.probs, inst.oracle, qcfg);
            SmoothEvaluation eval = qae_evaluation(est);
            CertificateGrid grid = certificate_grid(eval, inst.x, set.probs, ra, rd);
            summary.rows.push_back(ResultRow{inst.id, EvalMethod::qae,
                                             static_cast<uint64_t>(t), exact.value, est.point,
                                             est.lower, est.oracle_calls,
                                             max_certified_total_radius(grid)});
            for (size_t c = 0; c < cells; ++c) {
                int cell_ra = static_cast<int>(c) / (rd + 1);
                int cell_rd = static_cast<int>(c) % (rd + 1);
                if (grid.certified(cell_ra, cell_rd)) {
                    summary.series[1 + ti].fractions[c] += 1.0;
                }
            }
        }
    }
    const double denom = static_cast<double>(set.instances.size());
    for (HeatmapSeries &series : summary.series) {
        for (double &f : series.fractions) {
            f /= denom;
        }
    }

    std::string results_path = output_path(config, "results.csv");
    write_file(results_path, results_csv(set, config, summary.rows));
    summary.files.push_back(results_path);

    std::string cells_csv = csv_preamble(set, config);
    cells_csv += "method,budget,r_add,r_del,certified_fraction\n";
    for (const HeatmapSeries &series : summary.series) {
        for (size_t c = 0; c < cells; ++c) {
            int cell_ra = static_cast<int>(c) / (rd + 1);
            int cell_rd = static_cast<int>(c) % (rd + 1);
            cells_csv += std::string(method_name(series.method)) + "," +
                         std::to_string(series.budget) + "," + std::to_string(cell_ra) + "," +
                         std::to_string(cell_rd) + "," + fmt_g(series.fractions[c]) + "\n";
        }
    }
    std::string cells_path = output_path(config, "heatmap_cells.csv");
    write_file(cells_path, cells_csv);
    summary.files.push_back(cells_path);

    for (const HeatmapSeries &series : summary.series) {
        std::vector<HeatmapCellData> cell_data;
        for (size_t c = 0; c < cells; ++c) {
            int cell_ra = static_cast<int>(c) / (rd + 1);
            int cell_rd = static_cast<int>(c) % (rd + 1);
            cell_data.push_back(HeatmapCellData{cell_ra, cell_rd, series.fractions[c]});
        }
        std::string title = std::string(experiment_name(config.experiment)) +
                            ": certified fraction, " + series_label(series.method, series.budget);
        std::string svg = render_heatmap_svg(title, set.description, ra, rd, cell_data);
        std::string path = output_path(config, "heatmap_" +
                                                   series_file_tag(series.method, series.budget) +
                                                   ".svg");
        write_file(path, svg);
        summary.files.push_back(path);
    }
    return summary;
}

RatioSummary run_certified_ratio(const ExperimentConfig &raw) {
    PreparedConfig prep = prepare(raw);
    const ExperimentConfig &config = prep.config;
    const InstanceSet &set = prep.set;

    const bool add_only = set.probs.p_minus == 0.0;
    const bool del_only = !add_only && set.probs.p_plus == 0.0;
    RatioSummary summary;
    summary.one_sided = add_only || del_only;
    int r_max;
    int grid_ra, grid_rd;
    if (add_only) {
        r_max = set.max_r_add;
        grid_ra = r_max;
        grid_rd = 0;
    } else if (del_only) {
        r_max = set.max_r_del;
        grid_ra = 0;
        grid_rd = r_max;
    } else {
        r_max = std::min(set.max_r_add, set.max_r_del);
        grid_ra = r_max;
        grid_rd = r_max;
    }
    summary.max_radius = r_max;

    summary.series.push_back(
        RatioSeries{EvalMethod::exact, 0, std::vector<double>(r_max + 1, 0.0)});
    for (int t : config.counting_qubits) {
        summary.series.push_back(
            RatioSeries{EvalMethod::qae, t, std::vector<double>(r_max + 1, 0.0)});
    }

    auto certified_at_radius = [&](const CertificateGrid &grid, int r) {
        if (add_only) {
            return grid.certified(r, 0);
        }
        if (del_only) {
            return grid.certified(0, r);
        }
        // Robustness against the combined budget needs every split.
        for (int a = 0; a <= r; ++a) {
            if (!grid.certified(a, r - a)) {
                return false;
            }
        }
        return true;
    };

    for (const ExperimentInstance &inst : set.instances) {
        SmoothEvaluation exact = exact_smooth(inst.x, set.probs, inst.oracle);
        CertificateGrid exact_grid = certificate_grid(exact, inst.x, set.probs, grid_ra, grid_rd);
        summary.rows.push_back(ResultRow{inst.id, EvalMethod::exact, 0, exact.value,
                                         exact.value, exact.lower, exact.oracle_calls,
                                         max_certified_total_radius(exact_grid)});
        for (int r = 0; r <= r_max; ++r) {
            if (certified_at_radius(exact_grid, r)) {
                summary.series[0].fractions[r] += 1.0;
            }
        }
        for (size_t ti = 0; ti < config.counting_qubits.size(); ++ti) {
            int t = config.counting_qubits[ti];
            QaeConfig qcfg;
            qcfg.counting_qubits = t;
            qcfg.delta = config.delta;
            qcfg.seed = derive_seed(config.seed,
                                    stream_id(StreamKind::qae, inst.id, static_cast<int>(ti), 0));
            AmplitudeEstimate est = estimate(inst.x, set.probs, inst.oracle, qcfg);
            CertificateGrid grid =
                certificate_grid(qae_evaluation(est), inst.x, set.probs, grid_ra, grid_rd);
            summary.rows.push_back(ResultRow{inst.id, EvalMethod::qae,
                                             static_cast<uint64_t>(t), exact.value, est.point,
                                             est.lower, est.oracle_calls,
                                             max_certified_total_radius(grid)});
            for (int r = 0; r <= r_max; ++r) {
                if (certified_at_radius(grid, r)) {
                    summary.series[1 + ti].fractions[r] += 1.0;
                }
            }
        }
    }
    const double denom = static_cast<double>(set.instances.size());
    for (RatioSeries &series : summary.series) {
        for (double &f : series.fractions) {
            f /= denom;
        }
    }

    std::string results_path = output_path(config, "results.csv");
    write_file(results_path, results_csv(set, config, summary.rows));
    summary.files.push_back(results_path);

    std::string curve_csv = csv_preamble(set, config);
    curve_csv += "method,budget,radius,certified_fraction\n";
    for (const RatioSeries &series : summary.series) {
        for (int r = 0; r <= r_max; ++r) {
            curve_csv += std::string(method_name(series.method)) + "," +
                         std::to_string(series.budget) + "," + std::to_string(r) + "," +
                         fmt_g(series.fractions[r]) + "\n";
        }
    }
    std::string curve_path = output_path(config, "ratio_curve.csv");
    write_file(curve_path, curve_csv);
    summary.files.push_back(curve_path);

    std::vector<ChartSeries> chart;
    for (const RatioSeries &series : summary.series) {
        ChartSeries cs;
        cs.label = series_label(series.method, series.budget);
        for (int r = 0; r <= r_max; ++r) {
            cs.xs.push_back(static_cast<double>(r));
            cs.ys.push_back(series.fractions[r]);
        }
        chart.push_back(std::move(cs));
    }
    std::string axis_note = add_only ? "addition radius"
                            : del_only ? "deletion radius"
                                       : "total radius (every split certified)";
    std::string svg =
        render_line_chart_svg(std::string(experiment_name(config.experiment)) +
                                  ": certified ratio",
                              set.description, axis_note, "certified fraction", chart, false,
                              false);
    std::string svg_path = output_path(config, "certified_ratio.svg");
    write_file(svg_path, svg);
    summary.files.push_back(svg_path);
    return summary;
}

ConvergenceSummary run_convergence(const ExperimentConfig &raw) {
    PreparedConfig prep = prepare(raw);
    const ExperimentConfig &config = prep.config;
    const InstanceSet &set = prep.set;
    const int trials = config.mc_trials;
    const double denom = static_cast<double>(set.instances.size()) * trials;

    ConvergenceSummary summary;
    std::vector<double> exact_values;
    exact_values.reserve(set.instances.size());
    for (const ExperimentInstance &inst : set.instances) {
        exact_values.push_back(analytic_amplitude(inst.x, set.probs, inst.oracle));
    }

    std::vector<double> mc_err(config.mc_samples.size(), 0.0);
    std::vector<double> qae_err(config.counting_qubits.size(), 0.0);
    std::vector<uint64_t> qae_calls(config.counting_qubits.size(), 0);

    for (size_t ii = 0; ii < set.instances.size(); ++ii) {
        const ExperimentInstance &inst = set.instances[ii];
        const double g = exact_values[ii];
        for (size_t bi = 0; bi < config.mc_samples.size(); ++bi) {
            uint64_t samples = config.mc_samples[bi];
            for (int trial = 0; trial < trials; ++trial) {
                std::mt19937_64 rng =
                    make_rng(config.seed, stream_id(StreamKind::monte_carlo, inst.id,
                                                    static_cast<int>(bi), trial));
                SmoothEvaluation ev =
                    mc_estimate(inst.x, set.probs, inst.oracle, samples, config.delta, rng);
                mc_err[bi] += std::abs(ev.value - g);
                if (trial == 0) {
                    summary.rows.push_back(ResultRow{inst.id, EvalMethod::monte_carlo, samples,
                                                     g, ev.value, ev.lower, ev.oracle_calls,
                                                     -1});
                }
            }
        }
        for (size_t ti = 0; ti < config.counting_qubits.size(); ++ti) {
            int t = config.counting_qubits[ti];
            for (int trial = 0; trial < trials; ++trial) {
                QaeConfig qcfg;
                qcfg.counting_qubits = t;
                qcfg.delta = config.delta;
                qcfg.seed = derive_seed(config.seed, stream_id(StreamKind::qae, inst.id,
                                                               static_cast<int>(ti), trial));
                AmplitudeEstimate est = estimate(inst.x, set.probs, inst.oracle, qcfg);
                qae_err[ti] += std::abs(est.point - g);
                qae_calls[ti] = est.oracle_calls;
                if (trial == 0) {
                    summary.rows.push_back(ResultRow{inst.id, EvalMethod::qae,
                                                     static_cast<uint64_t>(t), g, est.point,
                                                     est.lower, est.oracle_calls, -1});
                }
            }
        }
    }

    std::vector<double> mc_budgets, mc_means, qae_budgets, qae_means;
    for (size_t bi = 0; bi < config.mc_samples.size(); ++bi) {
        double mean = mc_err[bi] / denom;
        summary.points.push_back(
            ConvergencePoint{EvalMethod::monte_carlo, config.mc_samples[bi], mean});
        mc_budgets.push_back(static_cast<double>(config.mc_samples[bi]));
        mc_means.push_back(mean);
    }
    for (size_t ti = 0; ti < config.counting_qubits.size(); ++ti) {
        double mean = qae_err[ti] / denom;
        summary.points.push_back(ConvergencePoint{EvalMethod::qae, qae_calls[ti], mean});
        qae_budgets.push_back(static_cast<double>(qae_calls[ti]));
        qae_means.push_back(mean);
    }
    summary.mc_slope = fit_loglog_slope(mc_budgets, mc_means);
    summary.qae_slope = fit_loglog_slope(qae_budgets, qae_means);
    summary.exponent = summary.qae_slope / summary.mc_slope;

    std::string results_path = output_path(config, "results.csv");
    write_file(results_path, results_csv(set, config, summary.rows));
    summary.files.push_back(results_path);

    std::string conv_csv = csv_preamble(set, config);
    conv_csv += "method,oracle_calls,mean_abs_error\n";
    for (const ConvergencePoint &pt : summary.points) {
        conv_csv += std::string(method_name(pt.method)) + "," + std::to_string(pt.budget) +
                    "," + fmt_g(pt.mean_abs_error) + "\n";
    }
    conv_csv += "# fit: monte_carlo slope=" + fmt_g(summary.mc_slope) + "\n";
    conv_csv += "# fit: qae slope=" + fmt_g(summary.qae_slope) + "\n";
    conv_csv += "# fit: classical_to_quantum_exponent=" + fmt_g(summary.exponent) + "\n";
    std::string conv_path = output_path(config, "convergence.csv");
    write_file(conv_path, conv_csv);
    summary.files.push_back(conv_path);

    std::vector<ChartSeries> chart(2);
    chart[0].label = "monte_carlo";
    chart[0].xs = mc_budgets;
    chart[0].ys = mc_means;
    chart[1].label = "qae";
    chart[1].xs = qae_budgets;
    chart[1].ys = qae_means;
    std::string svg = render_line_chart_svg(
        std::string(experiment_name(config.experiment)) + ": estimation error vs oracle calls",
        set.description, "oracle calls", "mean |estimate - g|", chart, true, true);
    std::string svg_path = output_path(config, "convergence.svg");
    write_file(svg_path, svg);
    summary.files.push_back(svg_path);
    return summary;
}

std::string run_single(const ExperimentConfig &raw) {
    PreparedConfig prep = prepare(raw);
    const ExperimentConfig &config = prep.config;
    const InstanceSet &set = prep.set;
    const ExperimentInstance &inst = set.instances.front();

    std::string out;
    out += "experiment: " + std::string(experiment_name(config.experiment)) + "\n";
    out += "note: " + set.description + "\n";
    out += "input: " + inst.x.str() + "\n";
    out += "p_plus=" + fmt_g(set.probs.p_plus) + " p_minus=" + fmt_g(set.probs.p_minus) +
           " delta=" + fmt_g(config.delta) + " seed=" + std::to_string(config.seed) + "\n";

    SmoothEvaluation exact = exact_smooth(inst.x, set.probs, inst.oracle);
    CertificateGrid exact_grid =
        certificate_grid(exact, inst.x, set.probs, set.max_r_add, set.max_r_del);
    out += "exact: g=" + fmt_g(exact.value) + " calls=" + std::to_string(exact.oracle_calls) +
           " certified_max_radius=" + std::to_string(max_certified_total_radius(exact_grid)) +
           "\n";

    for (size_t bi = 0; bi < config.mc_samples.size(); ++bi) {
        std::mt19937_64 rng = make_rng(
            config.seed, stream_id(StreamKind::monte_carlo, inst.id, static_cast<int>(bi), 0));
        SmoothEvaluation ev = mc_estimate(inst.x, set.probs, inst.oracle,
                                          config.mc_samples[bi], config.delta, rng);
        CertificateGrid grid =
            certificate_grid(ev, inst.x, set.probs, set.max_r_add, set.max_r_del);
        out += "monte_carlo[samples=" + std::to_string(config.mc_samples[bi]) +
               "]: value=" + fmt_g(ev.value) + " lower=" + fmt_g(ev.lower) +
               " calls=" + std::to_string(ev.oracle_calls) +
               " certified_max_radius=" + std::to_string(max_certified_total_radius(grid)) +
               "\n";
    }

    for (size_t ti = 0; ti < config.counting_qubits.size(); ++ti) {
        int t = config.counting_qubits[ti];
        QaeConfig qcfg;
        qcfg.counting_qubits = t;
        qcfg.delta = config.delta;
        qcfg.seed = derive_seed(config.seed,
                                stream_id(StreamKind::qae, inst.id, static_cast<int>(ti), 0));
        AmplitudeEstimate est = estimate(inst.x, set.probs, inst.oracle, qcfg);
        CertificateGrid grid = certificate_grid(qae_evaluation(est), inst.x, set.probs,
                                                set.max_r_add, set.max_r_del);
        out += "qae[t=" + std::to_string(t) + "]: point=" + fmt_g(est.point) +
               " lower=" + fmt_g(est.lower) + " upper=" + fmt_g(est.upper) +
               " calls=" + std::to_string(est.oracle_calls) +
               " certified_max_radius=" + std::to_string(max_certified_total_radius(grid)) +
               "\n";
    }

    out += "exact certificate grid ('#' certified, '.' not; rows r_del 0.." +
           std::to_string(set.max_r_del) + ", cols r_add 0.." + std::to_string(set.max_r_add) +
           "):\n";
    for (int rdv = 0; rdv <= set.max_r_del; ++rdv) {
        std::string line = "  ";
        for (int rav = 0; rav <= set.max_r_add; ++rav) {
            line += exact_grid.certified(rav, rdv) ? '#' : '.';
        }
        out += line + "\n";
    }
    return out;
}

} // namespace qsmooth
