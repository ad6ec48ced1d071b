#include "qsmooth/qae.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <utility>

#include "qsmooth/prng.hpp"

namespace qsmooth {

namespace {

constexpr double kPi = std::numbers::pi;

void check_budget(int n, int t) {
    if (t < 1) {
        throw std::invalid_argument("counting_qubits must be at least 1, got " +
                                    std::to_string(t));
    }
    if (n + t > StateVector::kMaxQubits) {
        throw SimBudgetError("simulation needs " + std::to_string(n + t) +
                             " qubits (" + std::to_string(n) + " work + " +
                             std::to_string(t) + " counting); the dense limit is " +
                             std::to_string(StateVector::kMaxQubits));
    }
}

// Radix-2 transform with twiddle e^{-2 pi i k / len}; matches the inverse-QFT
// convention on the counting register.
class Fft {
public:
    explicit Fft(size_t len) : len_(len), twiddle_(len / 2) {
        for (size_t k = 0; k < twiddle_.size(); ++k) {
            double ang = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(len);
            twiddle_[k] = cplx(std::cos(ang), std::sin(ang));
        }
    }

    void run(cplx *data) const {
        for (size_t i = 1, j = 0; i < len_; ++i) {
            size_t bit = len_ >> 1;
            for (; j & bit; bit >>= 1) {
                j ^= bit;
            }
            j ^= bit;
            if (i < j) {
                std::swap(data[i], data[j]);
            }
        }
        for (size_t half = 1; half < len_; half <<= 1) {
            const size_t stride = len_ / (2 * half);
            for (size_t start = 0; start < len_; start += 2 * half) {
                for (size_t k = 0; k < half; ++k) {
                    cplx u = data[start + k];
                    cplx v = data[start + half + k] * twiddle_[k * stride];
                    data[start + k] = u + v;
                    data[start + half + k] = u - v;
                }
            }
        }
    }

private:
    size_t len_;
    std::vector<cplx> twiddle_;
};

std::vector<double> distribution_control_free(const GroverOperator &grover, int t,
                                              SimStats *stats) {
    const int n = grover.bits();
    const size_t dim = size_t{1} << n;
    const size_t outcomes = size_t{1} << t;

    StateVector state = grover.prepare();
    if (stats) {
        stats->loader_preparations += 1;
    }

    // Layout [i][y]: one contiguous run-indexed row per basis state, so the
    // transform below works on unit stride.
    std::vector<cplx> rows(dim * outcomes);
    for (size_t y = 0; y < outcomes; ++y) {
        const std::vector<cplx> &amps = state.amplitudes();
        for (size_t i = 0; i < dim; ++i) {
            rows[i * outcomes + y] = amps[i];
        }
        if (y + 1 < outcomes) {
            grover.apply(state);
            if (stats) {
                stats->grover_applications += 1;
            }
        }
    }

    // P(m) = (1/T^2) sum_i |sum_y e^{-2 pi i m y / T} <i|G^y|Psi>|^2.
    Fft fft(outcomes);
    std::vector<double> probs(outcomes, 0.0);
    const double scale = 1.0 / (static_cast<double>(outcomes) * static_cast<double>(outcomes));
    for (size_t i = 0; i < dim; ++i) {
        cplx *row = rows.data() + i * outcomes;
        fft.run(row);
        for (size_t m = 0; m < outcomes; ++m) {
            probs[m] += scale * std::norm(row[m]);
        }
    }

    double total = 0.0;
    for (double p : probs) {
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-8) {
        throw std::runtime_error("counting distribution mass drifted to " +
                                 std::to_string(total));
    }
    return probs;
}

std::vector<double> distribution_full_register(const GroverOperator &grover, int t,
                                               SimStats *stats) {
    const int n = grover.bits();

    StateVector state = new_ground_state(n + t);
    grover.loader().apply(state);
    if (stats) {
        stats->loader_preparations += 1;
    }
    for (int k = 0; k < t; ++k) {
        state.apply_hadamard(n + k);
    }
    // Controlled powers as repeated applications, so one oracle call per
    // Grover application holds on this path too.
    for (int k = 0; k < t; ++k) {
        const uint64_t reps = uint64_t{1} << k;
        for (uint64_t r = 0; r < reps; ++r) {
            grover.apply(state, n + k);
            if (stats) {
                stats->grover_applications += 1;
            }
        }
    }
    apply_inverse_qft(state, n, t);
    return state.register_probabilities(n, t);
}

} // namespace

GroverOperator::GroverOperator(const BitString &x, const FlipProbabilities &probs,
                               const TruthTable &oracle)
    : loader_(x, probs), oracle_(oracle) {
    if (oracle.bits() != x.n) {
        throw std::invalid_argument("oracle covers " + std::to_string(oracle.bits()) +
                                    " bits but the input has " + std::to_string(x.n));
    }
}

void GroverOperator::apply(StateVector &state, int control) const {
    state.apply_sign_diagonal(oracle_, control);
    const int n = loader_.bits();
    apply_unitary_conjugated(state, loader_, [n, control](StateVector &s) {
        s.apply_reflection_about_zero(n, control);
    });
}

StateVector GroverOperator::prepare() const {
    StateVector state = new_ground_state(loader_.bits());
    loader_.apply(state);
    return state;
}

GroverOperator build_grover(const BitString &x, const FlipProbabilities &probs,
                            const TruthTable &oracle) {
    return GroverOperator(x, probs, oracle);
}

double analytic_amplitude(const BitString &x, const FlipProbabilities &probs,
                          const TruthTable &oracle) {
    return smooth_probability(x, probs, oracle);
}

int default_repeats(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0,1), got " + std::to_string(delta));
    }
    return static_cast<int>(std::ceil(17.0 * std::log(1.0 / delta)));
}

int QaeConfig::effective_repeats() const {
    if (repeats < 0) {
        throw std::invalid_argument("repeats must be nonnegative, got " +
                                    std::to_string(repeats));
    }
    return repeats > 0 ? repeats : default_repeats(delta);
}

PhaseGrid::PhaseGrid(int t) : counting_qubits(t) {
    if (t < 1 || t > StateVector::kMaxQubits) {
        throw std::invalid_argument("counting_qubits must lie in [1, " +
                                    std::to_string(StateVector::kMaxQubits) + "], got " +
                                    std::to_string(t));
    }
}

double PhaseGrid::value(int j) const {
    if (j < 0 || j > top_index()) {
        throw std::invalid_argument("grid index " + std::to_string(j) +
                                    " outside [0, " + std::to_string(top_index()) + "]");
    }
    double s = std::sin(kPi * static_cast<double>(j) /
                        static_cast<double>(size_t{1} << counting_qubits));
    return s * s;
}

GridPoint fold_and_grid(uint64_t y, int t) {
    PhaseGrid grid(t);
    if (y >= grid.outcomes()) {
        throw std::invalid_argument("outcome " + std::to_string(y) +
                                    " outside [0, 2^" + std::to_string(t) + ")");
    }
    uint64_t mirrored = grid.outcomes() - y;
    int j = static_cast<int>(std::min(y, mirrored));
    return GridPoint{j, grid.value(j)};
}

int median_boost(std::vector<int> indices) {
    if (indices.empty()) {
        throw std::invalid_argument("median of an empty index sequence");
    }
    std::sort(indices.begin(), indices.end());
    return indices[(indices.size() - 1) / 2];
}

void apply_inverse_qft(StateVector &state, int lo, int t) {
    if (t < 1 || lo < 0 || lo + t > state.num_qubits()) {
        throw std::invalid_argument("inverse QFT register [" + std::to_string(lo) + ", " +
                                    std::to_string(lo + t) + ") outside the state");
    }
    for (int k = 0; k < t / 2; ++k) {
        state.apply_swap(lo + k, lo + t - 1 - k);
    }
    for (int q = 0; q < t; ++q) {
        for (int k = 0; k < q; ++k) {
            double angle = -2.0 * kPi / static_cast<double>(uint64_t{1} << (q - k + 1));
            state.apply_phase(lo + q, angle, lo + k);
        }
        state.apply_hadamard(lo + q);
    }
}

std::vector<double> counting_distribution(const GroverOperator &grover, int t,
                                          SimPath path, SimStats *stats) {
    check_budget(grover.bits(), t);
    switch (path) {
    case SimPath::control_free:
        return distribution_control_free(grover, t, stats);
    case SimPath::full_register:
        return distribution_full_register(grover, t, stats);
    }
    throw std::invalid_argument("unknown simulation path");
}

uint64_t run_phase_estimation(const GroverOperator &grover, int t, std::mt19937_64 &rng,
                              SimPath path, SimStats *stats) {
    std::vector<double> probs = counting_distribution(grover, t, path, stats);
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;
    return sample_cdf(cdf, uniform01(rng));
}

AmplitudeEstimate estimate(const BitString &x, const FlipProbabilities &probs,
                           const TruthTable &oracle, const QaeConfig &config) {
    if (!(config.delta > 0.0 && config.delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0,1), got " +
                                    std::to_string(config.delta));
    }
    const int t = config.counting_qubits;
    check_budget(x.n, t);
    const int reps = config.effective_repeats();

    GroverOperator grover = build_grover(x, probs, oracle);
    std::vector<int> folded(reps);
    if (config.audit_per_shot) {
        for (int r = 0; r < reps; ++r) {
            std::mt19937_64 rng = make_rng(config.seed, static_cast<uint64_t>(r));
            uint64_t y = run_phase_estimation(grover, t, rng);
            folded[r] = fold_and_grid(y, t).index;
        }
    } else {
        // The circuit is deterministic given (x, probs, oracle); one marginal
        // serves every repeat. Each repeat keeps its own derived rng so the
        // outcomes match the per-shot path draw for draw.
        std::vector<double> dist = counting_distribution(grover, t);
        std::vector<double> cdf(dist.size());
        double acc = 0.0;
        for (size_t i = 0; i < dist.size(); ++i) {
            acc += dist[i];
            cdf[i] = acc;
        }
        cdf.back() = 1.0;
        for (int r = 0; r < reps; ++r) {
            std::mt19937_64 rng = make_rng(config.seed, static_cast<uint64_t>(r));
            uint64_t y = sample_cdf(cdf, uniform01(rng));
            folded[r] = fold_and_grid(y, t).index;
        }
    }

    PhaseGrid grid(t);
    int j = median_boost(std::move(folded));
    AmplitudeEstimate est;
    est.grid_index = j;
    est.point = grid.value(j);
    est.lower = (j == 0) ? 0.0 : grid.value(j - 1);
    est.upper = (j >= grid.top_index()) ? 1.0 : grid.value(j + 1);
    est.confidence = 1.0 - config.delta;
    est.oracle_calls = static_cast<uint64_t>(reps) << t;
    return est;
}

} // namespace qsmooth
