#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace qsmooth {

// Bit vector of up to 26 positions. Position j is bit j of `word` (LSB
// first), so the integer value doubles as a basis-state / truth-table index.
// String form writes position j as character j, e.g. "011" has bit 0 clear.
struct BitString {
    static constexpr int kMaxBits = 26;

    int n = 0;
    uint32_t word = 0;

    BitString() = default;
    BitString(int n_bits, uint32_t bits);

    static BitString zeros(int n_bits) { return BitString(n_bits, 0); }
    static BitString parse(std::string_view chars);

    bool bit(int j) const { return (word >> j) & 1u; }
    void set_bit(int j, bool v);

    int ones() const;
    int zero_count() const { return n - ones(); }
    uint32_t mask() const { return (n == 32) ? ~0u : ((1u << n) - 1u); }

    std::string str() const;

    friend bool operator==(const BitString &, const BitString &) = default;
};

// Per-feature flip probabilities: p_plus applies to 0-bits, p_minus to
// 1-bits. They are independent knobs; no joint constraint.
struct FlipProbabilities {
    double p_plus = 0.0;
    double p_minus = 0.0;

    FlipProbabilities() = default;
    FlipProbabilities(double plus, double minus);
};

// Adversary budget: at most r_add flips 0->1 and r_del flips 1->0.
struct PerturbationBall {
    int r_add = 0;
    int r_del = 0;

    PerturbationBall() = default;
    PerturbationBall(int add, int del);
};

double flip_probability(const BitString &x, int j, const FlipProbabilities &probs);

// Product over positions of flip/stay factors; equals the probability that
// one smoothing draw around x lands exactly on xt.
double transition_probability(const BitString &xt, const BitString &x,
                              const FlipProbabilities &probs);

bool ball_contains(const BitString &x, const BitString &xt, const PerturbationBall &ball);

BitString sample_perturbation(const BitString &x, const FlipProbabilities &probs,
                              std::mt19937_64 &rng);

} // namespace qsmooth
