#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "qsmooth/bitdata.hpp"
#include "qsmooth/scheme.hpp"

namespace qsmooth {

// Classifier over n-bit inputs, fully tabulated. Bit i of the packed words
// holds the output on input index i.
class TruthTable {
public:
    TruthTable() = default;
    explicit TruthTable(int n_bits);

    static TruthTable from_function(int n_bits,
                                    const std::function<bool(const BitString &)> &f);

    // File format: first line "n=<int>", second line exactly 2^n characters
    // from {0,1}, where character i is the output on input index i.
    static TruthTable parse(std::istream &in);
    static TruthTable load(const std::string &path);
    std::string serialize() const;

    int bits() const { return n_; }
    uint32_t size() const { return 1u << n_; }
    bool value(uint32_t index) const {
        return (words_[index >> 6] >> (index & 63u)) & 1u;
    }
    bool value(const BitString &x) const;
    void set(uint32_t index, bool v);
    uint64_t count_ones() const;

    const std::vector<uint64_t> &words() const { return words_; }

private:
    int n_ = 0;
    std::vector<uint64_t> words_;
};

TruthTable compile_truth_table(int n_bits,
                               const std::function<bool(const BitString &)> &f);

// Edge (i, j), i < j, in lexicographic pair order over `vertices` labels.
int edge_index(int vertices, int i, int j);

// Exact subset enumeration; vertices <= 8.
bool has_k_clique(const BitString &edges, int vertices, int k);

struct WindowClassifier {
    std::vector<int> weights;
    int threshold = 0;

    // Predicts 1 iff the weighted sum of the window pixels reaches threshold.
    bool predict(const std::vector<int> &window_pixels) const;
};

struct SentimentLexicon {
    // token id -> signed weight; ids absent from the table score 0.
    std::vector<int> weights;

    int weight(int token) const;
};

// Sign of the summed lexicon weight over non-removed tokens (id >= 0).
// Ties, including the fully removed review, fall to class 0.
int stopword_sentiment_stub(const DomainPoint &tokens, const SentimentLexicon &lexicon);

// A domain classifier restricted to the admissible perturbations of x,
// tabulated over codes.
struct WrappedClassifier {
    PerturbationScheme scheme;
    TruthTable table;
};

WrappedClassifier wrap_classifier(const PerturbationScheme &scheme, const DomainPoint &x,
                                  const std::function<int(const DomainPoint &)> &classify);

BitString sample_er_graph(int vertices, double edge_prob, std::mt19937_64 &rng);

// Sum of transition_probability(z | x) over the accepted inputs z of the
// table. Exact; cost 2^n.
double smooth_probability(const BitString &x, const FlipProbabilities &probs,
                          const TruthTable &table);

} // namespace qsmooth
