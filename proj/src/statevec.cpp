#include "qsmooth/statevec.hpp"

#include <cmath>
#include <stdexcept>

#include "qsmooth/kernels.hpp"
#include "qsmooth/prng.hpp"

namespace qsmooth {

StateVector::StateVector(int qubits) : qubits_(qubits) {
    if (qubits < 1 || qubits > kMaxQubits) {
        throw std::invalid_argument("StateVector: qubit count must be in [1, 26]");
    }
    amps_.assign(size_t{1} << qubits, cplx(0.0, 0.0));
    amps_[0] = cplx(1.0, 0.0);
}

void StateVector::check_qubit(int qubit) const {
    if (qubit < 0 || qubit >= qubits_) {
        throw std::out_of_range("StateVector: qubit index out of range");
    }
}

void StateVector::apply_su2(int qubit, const std::array<cplx, 4> &m) {
    check_qubit(qubit);
    kernels::active().apply_su2(amps_.data(), amps_.size(), qubit, m.data());
}

void StateVector::apply_rx(int qubit, double theta) {
    double c = std::cos(theta / 2.0);
    double s = std::sin(theta / 2.0);
    apply_su2(qubit, {cplx(c, 0.0), cplx(0.0, -s), cplx(0.0, -s), cplx(c, 0.0)});
}

void StateVector::apply_ry(int qubit, double theta) {
    double c = std::cos(theta / 2.0);
    double s = std::sin(theta / 2.0);
    apply_su2(qubit, {cplx(c, 0.0), cplx(-s, 0.0), cplx(s, 0.0), cplx(c, 0.0)});
}

void StateVector::apply_hadamard(int qubit) {
    const double h = 1.0 / std::sqrt(2.0);
    apply_su2(qubit, {cplx(h, 0.0), cplx(h, 0.0), cplx(h, 0.0), cplx(-h, 0.0)});
}

void StateVector::apply_phase(int qubit, double angle, int control) {
    check_qubit(qubit);
    if (control >= 0) {
        check_qubit(control);
        if (control == qubit) {
            throw std::invalid_argument("apply_phase: control equals target");
        }
    }
    cplx phase(std::cos(angle), std::sin(angle));
    kernels::active().apply_phase(amps_.data(), amps_.size(), qubit, phase, control);
}

void StateVector::apply_swap(int a, int b) {
    check_qubit(a);
    check_qubit(b);
    if (a == b) return;
    const size_t bit_a = size_t{1} << a;
    const size_t bit_b = size_t{1} << b;
    for (size_t i = 0; i < amps_.size(); ++i) {
        // Visit each mismatched pair once, from its a-set b-clear member.
        if ((i & bit_a) && !(i & bit_b)) {
            std::swap(amps_[i], amps_[(i & ~bit_a) | bit_b]);
        }
    }
}

void StateVector::apply_sign_diagonal(const TruthTable &table, int control) {
    if (table.bits() > qubits_) {
        throw std::invalid_argument("apply_sign_diagonal: table wider than the state");
    }
    if (control >= 0) {
        check_qubit(control);
        if (control < table.bits()) {
            throw std::invalid_argument(
                "apply_sign_diagonal: control must lie above the work register");
        }
    }
    kernels::active().apply_sign_table(amps_.data(), amps_.size(), table.bits(),
                                       table.words().data(), control);
}

void StateVector::apply_reflection_about_zero(int work_bits, int control) {
    if (work_bits < 0 || work_bits > qubits_) {
        throw std::invalid_argument("apply_reflection_about_zero: bad register width");
    }
    if (control >= 0) {
        check_qubit(control);
        if (control < work_bits) {
            throw std::invalid_argument(
                "apply_reflection_about_zero: control must lie above the work register");
        }
    }
    kernels::active().reflect_about_zero(amps_.data(), amps_.size(), work_bits, control);
}

void StateVector::scale(cplx factor) {
    for (cplx &a : amps_) a *= factor;
}

double StateVector::norm_sq() const {
    return kernels::active().norm_sq(amps_.data(), amps_.size());
}

void StateVector::check_norm() const {
    double n = norm_sq();
    if (std::abs(n - 1.0) > kNormTolerance) {
        throw std::runtime_error("StateVector: norm drifted beyond tolerance");
    }
}

std::vector<double> StateVector::register_probabilities(int lo, int count) const {
    if (lo < 0 || count < 1 || lo + count > qubits_) {
        throw std::invalid_argument("register_probabilities: bad register range");
    }
    std::vector<double> probs(size_t{1} << count, 0.0);
    const size_t mask = (size_t{1} << count) - 1;
    for (size_t i = 0; i < amps_.size(); ++i) {
        probs[(i >> lo) & mask] += std::norm(amps_[i]);
    }
    double total = 0.0;
    for (double p : probs) total += p;
    if (std::abs(total - 1.0) > kNormTolerance) {
        throw std::runtime_error("register_probabilities: norm drifted beyond tolerance");
    }
    return probs;
}

std::vector<uint64_t> StateVector::measure_register(int lo, int count, uint64_t shots,
                                                    std::mt19937_64 &rng) const {
    std::vector<double> probs = register_probabilities(lo, count);
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }
    cdf.back() = 1.0;
    std::vector<uint64_t> hist(probs.size(), 0);
    for (uint64_t s = 0; s < shots; ++s) {
        ++hist[sample_cdf(cdf, uniform01(rng))];
    }
    return hist;
}

StateVector new_ground_state(int qubits) {
    return StateVector(qubits);
}

LoaderParams LoaderParams::from_probs(const FlipProbabilities &probs) {
    double a_plus = std::acos(std::sqrt(1.0 - probs.p_plus));
    double a_minus = std::acos(std::sqrt(1.0 - probs.p_minus));
    return {2.0 * a_plus, -2.0 * (a_plus + a_minus)};
}

Loader::Loader(const BitString &x, const FlipProbabilities &probs)
    : x_(x), params_(LoaderParams::from_probs(probs)) {
    mats_.reserve(static_cast<size_t>(x.n));
    for (int j = 0; j < x.n; ++j) {
        double beta = params_.theta0 + (x.bit(j) ? params_.theta_delta : 0.0);
        double c = std::cos(beta / 2.0);
        double s = std::sin(beta / 2.0);
        if (x.bit(j)) {
            // RY(beta) * RX(pi); carries the per-qubit global phase -i.
            mats_.push_back({cplx(0.0, s), cplx(0.0, -c), cplx(0.0, -c), cplx(0.0, -s)});
        } else {
            mats_.push_back({cplx(c, 0.0), cplx(-s, 0.0), cplx(s, 0.0), cplx(c, 0.0)});
        }
    }
}

cplx Loader::global_phase() const {
    // (-i)^|x|
    static const cplx cycle[4] = {cplx(1, 0), cplx(0, -1), cplx(-1, 0), cplx(0, 1)};
    return cycle[x_.ones() % 4];
}

void Loader::apply(StateVector &state) const {
    if (state.num_qubits() < x_.n) {
        throw std::invalid_argument("Loader: state narrower than the loaded register");
    }
    for (int j = 0; j < x_.n; ++j) {
        state.apply_su2(j, mats_[static_cast<size_t>(j)]);
    }
}

void Loader::apply_inverse(StateVector &state) const {
    if (state.num_qubits() < x_.n) {
        throw std::invalid_argument("Loader: state narrower than the loaded register");
    }
    for (int j = 0; j < x_.n; ++j) {
        const std::array<cplx, 4> &m = mats_[static_cast<size_t>(j)];
        std::array<cplx, 4> inv = {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]),
                                   std::conj(m[3])};
        state.apply_su2(j, inv);
    }
}

StateVector load_superposition(const BitString &x, const FlipProbabilities &probs) {
    if (x.n < 1) {
        throw std::invalid_argument("load_superposition: empty register");
    }
    StateVector state(x.n);
    Loader(x, probs).apply(state);
    return state;
}

void apply_unitary_conjugated(StateVector &state, const Loader &inner,
                              const std::function<void(StateVector &)> &wrapped) {
    inner.apply_inverse(state);
    wrapped(state);
    inner.apply(state);
}

} // namespace qsmooth
