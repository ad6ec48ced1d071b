#pragma once

#include <functional>
#include <vector>

#include "qsmooth/bitdata.hpp"

namespace qsmooth {

// Feature values are small ints: pixel 0/1, token id >= 0 with -1 meaning a
// removed token, or an edge bit 0/1.
using DomainPoint = std::vector<int>;

// Which flip probability governs a feature in its current state.
enum class FlipClass { plus, minus };

// A domain-level perturbation model: each perturbable feature has exactly two
// admissible values that `perturb` toggles between (an involution), and
// `flip_class` tags which of the two smoothing probabilities applies to the
// state the feature is currently in. perturb must swap the flip class.
struct PerturbationScheme {
    int domain_size = 0;
    std::vector<int> perturbable;
    std::function<int(int value, int index)> perturb;
    std::function<FlipClass(int value, int index)> flip_class;

    int code_bits() const { return static_cast<int>(perturbable.size()); }
};

// Maps an admissible perturbation of x to its code: code bit j is 1 iff the
// j-th perturbable feature of xt sits in its minus-class state.
BitString encode_perturbation(const PerturbationScheme &scheme, const DomainPoint &x,
                              const DomainPoint &xt);

DomainPoint decode_perturbation(const PerturbationScheme &scheme, const DomainPoint &x,
                                const BitString &code);

PerturbationScheme make_pixel_complement_scheme(int image_size,
                                                std::vector<int> window);

// Removal keeps the base token list in the closure so that restoring a
// removed position is well defined.
PerturbationScheme make_token_removal_scheme(DomainPoint base_tokens,
                                             std::vector<int> removable);

PerturbationScheme make_edge_toggle_scheme(int edge_count);

} // namespace qsmooth
