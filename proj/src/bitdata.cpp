#include "qsmooth/bitdata.hpp"

#include <bit>
#include <stdexcept>

#include "qsmooth/prng.hpp"

namespace qsmooth {

BitString::BitString(int n_bits, uint32_t bits) : n(n_bits), word(bits) {
    if (n_bits < 0 || n_bits > kMaxBits) {
        throw std::invalid_argument("BitString: length must be in [0, 26]");
    }
    if ((bits & ~mask()) != 0) {
        throw std::invalid_argument("BitString: value has bits beyond length");
    }
}

BitString BitString::parse(std::string_view chars) {
    if (chars.size() > static_cast<size_t>(kMaxBits)) {
        throw std::invalid_argument("BitString: string longer than 26");
    }
    uint32_t w = 0;
    for (size_t j = 0; j < chars.size(); ++j) {
        if (chars[j] == '1') {
            w |= 1u << j;
        } else if (chars[j] != '0') {
            throw std::invalid_argument("BitString: characters must be 0 or 1");
        }
    }
    return BitString(static_cast<int>(chars.size()), w);
}

void BitString::set_bit(int j, bool v) {
    if (j < 0 || j >= n) {
        throw std::out_of_range("BitString: position out of range");
    }
    if (v) {
        word |= 1u << j;
    } else {
        word &= ~(1u << j);
    }
}

int BitString::ones() const {
    return std::popcount(word);
}

std::string BitString::str() const {
    std::string s(static_cast<size_t>(n), '0');
    for (int j = 0; j < n; ++j) {
        if (bit(j)) s[static_cast<size_t>(j)] = '1';
    }
    return s;
}

FlipProbabilities::FlipProbabilities(double plus, double minus)
    : p_plus(plus), p_minus(minus) {
    if (!(plus >= 0.0 && plus <= 1.0) || !(minus >= 0.0 && minus <= 1.0)) {
        throw std::invalid_argument("FlipProbabilities: values must lie in [0, 1]");
    }
}

PerturbationBall::PerturbationBall(int add, int del) : r_add(add), r_del(del) {
    if (add < 0 || del < 0) {
        throw std::invalid_argument("PerturbationBall: radii must be nonnegative");
    }
}

double flip_probability(const BitString &x, int j, const FlipProbabilities &probs) {
    if (j < 0 || j >= x.n) {
        throw std::out_of_range("flip_probability: position out of range");
    }
    return x.bit(j) ? probs.p_minus : probs.p_plus;
}

namespace {

// Left-to-right product; the fixed association keeps results bit-identical
// with the power tables used by the smoothing sum.
double ipow(double base, int k) {
    double acc = 1.0;
    for (int i = 0; i < k; ++i) acc *= base;
    return acc;
}

} // namespace

double transition_probability(const BitString &xt, const BitString &x,
                              const FlipProbabilities &probs) {
    if (xt.n != x.n) {
        throw std::invalid_argument("transition_probability: length mismatch");
    }
    uint32_t added = ~x.word & xt.word & x.mask();
    uint32_t deleted = x.word & ~xt.word;
    int k_add = std::popcount(added);
    int k_del = std::popcount(deleted);
    int zeros = x.zero_count();
    int ones = x.ones();
    return ipow(probs.p_plus, k_add) * ipow(1.0 - probs.p_plus, zeros - k_add) *
           ipow(probs.p_minus, k_del) * ipow(1.0 - probs.p_minus, ones - k_del);
}

bool ball_contains(const BitString &x, const BitString &xt, const PerturbationBall &ball) {
    if (xt.n != x.n) {
        throw std::invalid_argument("ball_contains: length mismatch");
    }
    uint32_t added = ~x.word & xt.word & x.mask();
    uint32_t deleted = x.word & ~xt.word;
    return std::popcount(added) <= ball.r_add && std::popcount(deleted) <= ball.r_del;
}

BitString sample_perturbation(const BitString &x, const FlipProbabilities &probs,
                              std::mt19937_64 &rng) {
    BitString out = x;
    for (int j = 0; j < x.n; ++j) {
        double p = x.bit(j) ? probs.p_minus : probs.p_plus;
        if (uniform01(rng) < p) {
            out.set_bit(j, !x.bit(j));
        }
    }
    return out;
}

} // namespace qsmooth
