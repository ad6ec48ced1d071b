#include "qsmooth/scheme.hpp"

#include <stdexcept>

namespace qsmooth {

namespace {

void check_indices(const PerturbationScheme &scheme) {
    int prev = -1;
    for (int idx : scheme.perturbable) {
        if (idx <= prev || idx >= scheme.domain_size) {
            throw std::invalid_argument(
                "PerturbationScheme: perturbable indices must be strictly "
                "increasing and inside the domain");
        }
        prev = idx;
    }
    if (scheme.code_bits() > BitString::kMaxBits) {
        throw std::invalid_argument("PerturbationScheme: more than 26 perturbable features");
    }
}

} // namespace

BitString encode_perturbation(const PerturbationScheme &scheme, const DomainPoint &x,
                              const DomainPoint &xt) {
    check_indices(scheme);
    if (x.size() != static_cast<size_t>(scheme.domain_size) || xt.size() != x.size()) {
        throw std::invalid_argument("encode_perturbation: domain size mismatch");
    }
    size_t next_perturbable = 0;
    BitString code = BitString::zeros(scheme.code_bits());
    for (int i = 0; i < scheme.domain_size; ++i) {
        bool perturbable = next_perturbable < scheme.perturbable.size() &&
                           scheme.perturbable[next_perturbable] == i;
        if (!perturbable) {
            if (xt[i] != x[i]) {
                throw std::invalid_argument(
                    "encode_perturbation: point alters a non-perturbable feature");
            }
            continue;
        }
        int rank = static_cast<int>(next_perturbable++);
        if (xt[i] != x[i] && xt[i] != scheme.perturb(x[i], i)) {
            throw std::invalid_argument(
                "encode_perturbation: feature value outside the admissible pair");
        }
        code.set_bit(rank, scheme.flip_class(xt[i], i) == FlipClass::minus);
    }
    return code;
}

DomainPoint decode_perturbation(const PerturbationScheme &scheme, const DomainPoint &x,
                                const BitString &code) {
    check_indices(scheme);
    if (x.size() != static_cast<size_t>(scheme.domain_size)) {
        throw std::invalid_argument("decode_perturbation: domain size mismatch");
    }
    if (code.n != scheme.code_bits()) {
        throw std::invalid_argument("decode_perturbation: code length mismatch");
    }
    DomainPoint out = x;
    for (int rank = 0; rank < code.n; ++rank) {
        int i = scheme.perturbable[static_cast<size_t>(rank)];
        FlipClass want = code.bit(rank) ? FlipClass::minus : FlipClass::plus;
        out[i] = (scheme.flip_class(x[i], i) == want) ? x[i] : scheme.perturb(x[i], i);
    }
    return out;
}

PerturbationScheme make_pixel_complement_scheme(int image_size, std::vector<int> window) {
    PerturbationScheme s;
    s.domain_size = image_size;
    s.perturbable = std::move(window);
    s.perturb = [](int value, int) { return 1 - value; };
    s.flip_class = [](int value, int) { return value ? FlipClass::minus : FlipClass::plus; };
    check_indices(s);
    return s;
}

PerturbationScheme make_token_removal_scheme(DomainPoint base_tokens,
                                             std::vector<int> removable) {
    PerturbationScheme s;
    s.domain_size = static_cast<int>(base_tokens.size());
    s.perturbable = std::move(removable);
    s.perturb = [base = std::move(base_tokens)](int value, int index) {
        return value < 0 ? base[static_cast<size_t>(index)] : -1;
    };
    s.flip_class = [](int value, int) { return value < 0 ? FlipClass::minus : FlipClass::plus; };
    check_indices(s);
    return s;
}

PerturbationScheme make_edge_toggle_scheme(int edge_count) {
    PerturbationScheme s;
    s.domain_size = edge_count;
    s.perturbable.resize(static_cast<size_t>(edge_count));
    for (int i = 0; i < edge_count; ++i) s.perturbable[static_cast<size_t>(i)] = i;
    s.perturb = [](int value, int) { return 1 - value; };
    s.flip_class = [](int value, int) { return value ? FlipClass::minus : FlipClass::plus; };
    check_indices(s);
    return s;
}

} // namespace qsmooth
