#include "qsmooth/oracle.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "qsmooth/prng.hpp"

namespace qsmooth {

TruthTable::TruthTable(int n_bits) : n_(n_bits) {
    if (n_bits < 0 || n_bits > BitString::kMaxBits) {
        throw std::invalid_argument("TruthTable: width must be in [0, 26]");
    }
    words_.assign((size() + 63u) / 64u, 0ULL);
}

TruthTable TruthTable::from_function(int n_bits,
                                     const std::function<bool(const BitString &)> &f) {
    TruthTable t(n_bits);
    for (uint32_t i = 0; i < t.size(); ++i) {
        t.set(i, f(BitString(n_bits, i)));
    }
    return t;
}

TruthTable TruthTable::parse(std::istream &in) {
    std::string header;
    if (!std::getline(in, header) || header.rfind("n=", 0) != 0) {
        throw std::invalid_argument("truth table: first line must be n=<int>");
    }
    int n_bits = 0;
    try {
        size_t used = 0;
        n_bits = std::stoi(header.substr(2), &used);
        if (used != header.size() - 2) throw std::invalid_argument("");
    } catch (const std::exception &) {
        throw std::invalid_argument("truth table: could not parse width from '" + header + "'");
    }
    if (n_bits < 0 || n_bits > BitString::kMaxBits) {
        throw std::invalid_argument("truth table: width must be in [0, 26]");
    }
    std::string row;
    std::getline(in, row);
    if (!row.empty() && row.back() == '\r') row.pop_back();
    TruthTable t(n_bits);
    if (row.size() != t.size()) {
        std::ostringstream msg;
        msg << "truth table: declared n=" << n_bits << " so expected " << t.size()
            << " characters, found " << row.size();
        throw std::invalid_argument(msg.str());
    }
    for (uint32_t i = 0; i < t.size(); ++i) {
        char c = row[i];
        if (c != '0' && c != '1') {
            throw std::invalid_argument("truth table: row characters must be 0 or 1");
        }
        t.set(i, c == '1');
    }
    return t;
}

TruthTable TruthTable::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("truth table: cannot open '" + path + "'");
    }
    return parse(in);
}

std::string TruthTable::serialize() const {
    std::string out = "n=" + std::to_string(n_) + "\n";
    out.reserve(out.size() + size() + 1);
    for (uint32_t i = 0; i < size(); ++i) {
        out.push_back(value(i) ? '1' : '0');
    }
    out.push_back('\n');
    return out;
}

bool TruthTable::value(const BitString &x) const {
    if (x.n != n_) {
        throw std::invalid_argument("TruthTable: input width mismatch");
    }
    return value(x.word);
}

void TruthTable::set(uint32_t index, bool v) {
    uint64_t bit = 1ULL << (index & 63u);
    if (v) {
        words_[index >> 6] |= bit;
    } else {
        words_[index >> 6] &= ~bit;
    }
}

uint64_t TruthTable::count_ones() const {
    uint64_t total = 0;
    for (uint64_t w : words_) total += static_cast<uint64_t>(std::popcount(w));
    return total;
}

TruthTable compile_truth_table(int n_bits,
                               const std::function<bool(const BitString &)> &f) {
    return TruthTable::from_function(n_bits, f);
}

int edge_index(int vertices, int i, int j) {
    if (i < 0 || j <= i || j >= vertices) {
        throw std::invalid_argument("edge_index: need 0 <= i < j < vertices");
    }
    return i * vertices - i * (i + 1) / 2 + (j - i - 1);
}

bool has_k_clique(const BitString &edges, int vertices, int k) {
    if (vertices < 1 || vertices > 8) {
        throw std::invalid_argument("has_k_clique: vertices must be in [1, 8]");
    }
    if (edges.n != vertices * (vertices - 1) / 2) {
        throw std::invalid_argument("has_k_clique: edge count does not match vertices");
    }
    if (k <= 1) return k == 1 ? vertices >= 1 : true;
    for (uint32_t subset = 0; subset < (1u << vertices); ++subset) {
        if (std::popcount(subset) != k) continue;
        bool complete = true;
        for (int i = 0; i < vertices && complete; ++i) {
            if (!((subset >> i) & 1u)) continue;
            for (int j = i + 1; j < vertices; ++j) {
                if (!((subset >> j) & 1u)) continue;
                if (!edges.bit(edge_index(vertices, i, j))) {
                    complete = false;
                    break;
                }
            }
        }
        if (complete) return true;
    }
    return false;
}

bool WindowClassifier::predict(const std::vector<int> &window_pixels) const {
    if (window_pixels.size() != weights.size()) {
        throw std::invalid_argument("WindowClassifier: pixel count mismatch");
    }
    long sum = 0;
    for (size_t i = 0; i < weights.size(); ++i) {
        sum += static_cast<long>(weights[i]) * window_pixels[i];
    }
    return sum >= threshold;
}

int SentimentLexicon::weight(int token) const {
    if (token < 0 || token >= static_cast<int>(weights.size())) return 0;
    return weights[static_cast<size_t>(token)];
}

int stopword_sentiment_stub(const DomainPoint &tokens, const SentimentLexicon &lexicon) {
    long sum = 0;
    for (int token : tokens) {
        if (token >= 0) sum += lexicon.weight(token);
    }
    return sum > 0 ? 1 : 0;
}

WrappedClassifier wrap_classifier(const PerturbationScheme &scheme, const DomainPoint &x,
                                  const std::function<int(const DomainPoint &)> &classify) {
    WrappedClassifier wrapped;
    wrapped.scheme = scheme;
    wrapped.table = TruthTable::from_function(
        scheme.code_bits(), [&](const BitString &code) {
            return classify(decode_perturbation(scheme, x, code)) == 1;
        });
    return wrapped;
}

BitString sample_er_graph(int vertices, double edge_prob, std::mt19937_64 &rng) {
    int edges = vertices * (vertices - 1) / 2;
    BitString g = BitString::zeros(edges);
    for (int e = 0; e < edges; ++e) {
        if (uniform01(rng) < edge_prob) g.set_bit(e, true);
    }
    return g;
}

double smooth_probability(const BitString &x, const FlipProbabilities &probs,
                          const TruthTable &table) {
    if (table.bits() != x.n) {
        throw std::invalid_argument("smooth_probability: table width mismatch");
    }
    int zeros = x.zero_count();
    int ones = x.ones();
    std::vector<double> pow_add(static_cast<size_t>(zeros) + 1, 1.0);
    std::vector<double> pow_keep0(static_cast<size_t>(zeros) + 1, 1.0);
    std::vector<double> pow_del(static_cast<size_t>(ones) + 1, 1.0);
    std::vector<double> pow_keep1(static_cast<size_t>(ones) + 1, 1.0);
    for (int k = 1; k <= zeros; ++k) {
        pow_add[k] = pow_add[k - 1] * probs.p_plus;
        pow_keep0[k] = pow_keep0[k - 1] * (1.0 - probs.p_plus);
    }
    for (int k = 1; k <= ones; ++k) {
        pow_del[k] = pow_del[k - 1] * probs.p_minus;
        pow_keep1[k] = pow_keep1[k - 1] * (1.0 - probs.p_minus);
    }
    uint32_t mask = x.mask();
    double total = 0.0;
    for (uint32_t z = 0; z < table.size(); ++z) {
        if (!table.value(z)) continue;
        int k_add = std::popcount(~x.word & z & mask);
        int k_del = std::popcount(x.word & ~z);
        total += pow_add[k_add] * pow_keep0[zeros - k_add] * pow_del[k_del] *
                 pow_keep1[ones - k_del];
    }
    // Summation noise must not push the probability outside [0, 1].
    return std::clamp(total, 0.0, 1.0);
}

} // namespace qsmooth
