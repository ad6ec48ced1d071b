#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "qsmooth/bitdata.hpp"
#include "qsmooth/oracle.hpp"
#include "qsmooth/statevec.hpp"

namespace qsmooth {

// Raised when a requested simulation needs more qubits than the dense
// simulator can hold. Distinct from configuration errors so callers can
// report it separately.
class SimBudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rotation whose repeated application advances the loaded state by twice the
// amplitude angle: a sign oracle followed by the reflection about the loaded
// superposition.
class GroverOperator {
public:
    GroverOperator(const BitString &x, const FlipProbabilities &probs,
                   const TruthTable &oracle);

    int bits() const { return loader_.bits(); }
    const Loader &loader() const { return loader_; }
    const TruthTable &oracle() const { return oracle_; }

    // Oracle sign flip, then loader^dagger, R0, loader. With control >= 0
    // (a qubit above the work register) only the oracle and the central
    // reflection carry the control; the conjugating loader cancels on the
    // control-clear branch.
    void apply(StateVector &state, int control = -1) const;

    // |0...0> -> loaded superposition on a fresh work register.
    StateVector prepare() const;

private:
    Loader loader_;
    TruthTable oracle_;
};

GroverOperator build_grover(const BitString &x, const FlipProbabilities &probs,
                            const TruthTable &oracle);

// Probability that a smoothing draw around x is accepted, via the same exact
// summation the certifier uses; it equals the squared good-component
// amplitude of the loaded state.
double analytic_amplitude(const BitString &x, const FlipProbabilities &probs,
                          const TruthTable &oracle);

struct QaeConfig {
    int counting_qubits = 5;
    double delta = 0.01;
    // 0 selects the median-boost default ceil(17 ln(1/delta)).
    int repeats = 0;
    uint64_t seed = 1;
    // Re-simulate the circuit for every repeat instead of sampling the Born
    // marginal once.
    bool audit_per_shot = false;

    int effective_repeats() const;
};

int default_repeats(double delta);

// Amplitudes reachable by a t-qubit counting measurement after folding:
// a_j = sin^2(pi j / 2^t), strictly increasing for j = 0 .. 2^(t-1).
struct PhaseGrid {
    int counting_qubits = 0;

    explicit PhaseGrid(int t);
    size_t outcomes() const { return size_t{1} << counting_qubits; }
    int top_index() const { return 1 << (counting_qubits - 1); }
    double value(int j) const;
};

struct GridPoint {
    int index = 0;
    double value = 0.0;
};

// Maps the symmetric outcome pair (y, 2^t - y) to one grid point:
// j = min(y, 2^t - y), value sin^2(pi j / 2^t).
GridPoint fold_and_grid(uint64_t y, int t);

// Lower median of the grid indices; errors on empty input.
int median_boost(std::vector<int> indices);

struct AmplitudeEstimate {
    double point = 0.0;
    double lower = 0.0;
    double upper = 1.0;
    double confidence = 0.0;
    uint64_t oracle_calls = 0;
    int grid_index = 0;
};

// Simulation cost counters; one phase-estimation run performs 2^t - 1 Grover
// applications and one loader preparation on either path.
struct SimStats {
    uint64_t grover_applications = 0;
    uint64_t loader_preparations = 0;
};

enum class SimPath {
    // Iterate G^y on the work register alone and Fourier-transform over the
    // run index; memory 2^t * 2^n amplitudes.
    control_free,
    // Literal joint register: Hadamards, controlled powers, inverse QFT;
    // memory 2^(n+t) amplitudes.
    full_register,
};

// Standard inverse Fourier transform on qubits [lo, lo+t): qubit reversal,
// then controlled phase rotations and Hadamards.
void apply_inverse_qft(StateVector &state, int lo, int t);

// Born distribution of the counting measurement; both paths are exact.
std::vector<double> counting_distribution(const GroverOperator &grover, int t,
                                          SimPath path = SimPath::control_free,
                                          SimStats *stats = nullptr);

// One measured counting value y, drawn with a single uniform variate from rng.
uint64_t run_phase_estimation(const GroverOperator &grover, int t, std::mt19937_64 &rng,
                              SimPath path = SimPath::control_free,
                              SimStats *stats = nullptr);

// Full estimation pipeline: repeated phase estimation, per-run folding,
// median grid index, one-step grid bounds.
AmplitudeEstimate estimate(const BitString &x, const FlipProbabilities &probs,
                           const TruthTable &oracle, const QaeConfig &config);

} // namespace qsmooth
