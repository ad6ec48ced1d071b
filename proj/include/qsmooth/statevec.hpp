#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "qsmooth/bitdata.hpp"
#include "qsmooth/oracle.hpp"

namespace qsmooth {

using cplx = std::complex<double>;

// Dense statevector over up to 26 qubits. Qubit k is bit k of the amplitude
// index, matching BitString positions. Gates preserve the norm; a drift
// beyond 1e-10 is reported as an error, never hidden by renormalizing.
class StateVector {
public:
    static constexpr int kMaxQubits = 26;
    static constexpr double kNormTolerance = 1e-10;

    explicit StateVector(int qubits);

    int num_qubits() const { return qubits_; }
    size_t size() const { return amps_.size(); }
    cplx amplitude(size_t i) const { return amps_[i]; }
    cplx &amplitude(size_t i) { return amps_[i]; }
    const std::vector<cplx> &amplitudes() const { return amps_; }

    void apply_su2(int qubit, const std::array<cplx, 4> &m);
    void apply_rx(int qubit, double theta);
    void apply_ry(int qubit, double theta);
    void apply_hadamard(int qubit);
    // diag(1, e^{i angle}) on `qubit`; two-qubit controlled version when
    // control >= 0.
    void apply_phase(int qubit, double angle, int control = -1);
    void apply_swap(int a, int b);

    // Sign oracle on the low table.bits() qubits.
    void apply_sign_diagonal(const TruthTable &table, int control = -1);
    // Negates every amplitude whose low work_bits are not all zero.
    void apply_reflection_about_zero(int work_bits, int control = -1);

    void scale(cplx factor);

    double norm_sq() const;
    void check_norm() const;

    // Marginal over qubits [lo, lo+count); validates total mass.
    std::vector<double> register_probabilities(int lo, int count) const;
    // Histogram of `shots` Born draws from the register marginal.
    std::vector<uint64_t> measure_register(int lo, int count, uint64_t shots,
                                           std::mt19937_64 &rng) const;

private:
    void check_qubit(int qubit) const;

    int qubits_;
    std::vector<cplx> amps_;
};

StateVector new_ground_state(int qubits);

// Rotation angles of the per-feature loader: theta0 prepares the flip
// amplitude of a 0-feature, theta0 + theta_delta (after an X-type flip) that
// of a 1-feature.
struct LoaderParams {
    double theta0 = 0.0;
    double theta_delta = 0.0;

    static LoaderParams from_probs(const FlipProbabilities &probs);
};

// Product of per-qubit rotations taking |0...0> to the superposition whose
// Born weights are the smoothing distribution around x (up to a global phase
// of (-i)^|x|).
class Loader {
public:
    Loader(const BitString &x, const FlipProbabilities &probs);

    int bits() const { return x_.n; }
    const BitString &center() const { return x_; }
    const LoaderParams &params() const { return params_; }
    cplx global_phase() const;

    void apply(StateVector &state) const;
    void apply_inverse(StateVector &state) const;

private:
    BitString x_;
    LoaderParams params_;
    std::vector<std::array<cplx, 4>> mats_;
};

StateVector load_superposition(const BitString &x, const FlipProbabilities &probs);

// inner^dagger, then wrapped, then inner: the sandwich realizing a reflection
// about the loaded state from a reflection about zero.
void apply_unitary_conjugated(StateVector &state, const Loader &inner,
                              const std::function<void(StateVector &)> &wrapped);

} // namespace qsmooth
