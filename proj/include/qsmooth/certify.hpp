#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "qsmooth/bitdata.hpp"
#include "qsmooth/oracle.hpp"

namespace qsmooth {

enum class EvalMethod { exact, monte_carlo, qae };

const char *method_name(EvalMethod method);

// One evaluation of the smoothed classifier's class-1 probability, carrying
// the guaranteed lower bound the certificate logic consumes.
struct SmoothEvaluation {
    double value = 0.0;
    double lower = 0.0;
    double confidence = 1.0;
    uint64_t oracle_calls = 0;
    EvalMethod method = EvalMethod::exact;
};

// Full 2^n summation; lower equals value and confidence is 1.
SmoothEvaluation exact_smooth(const BitString &x, const FlipProbabilities &probs,
                              const TruthTable &oracle);

// One-sided lower confidence bound for a binomial proportion: the
// delta-quantile of Beta(successes, samples - successes + 1); 0 when no
// successes were seen.
double clopper_pearson_lower(uint64_t successes, uint64_t samples, double delta);

SmoothEvaluation mc_estimate(const BitString &x, const FlipProbabilities &probs,
                             const TruthTable &oracle, uint64_t samples, double delta,
                             std::mt19937_64 &rng);

// Points sharing one likelihood ratio phi(z|x)/phi(z|xt), grouped by their
// agreement counts with xt over the differing positions.
struct LikelihoodRegion {
    double ratio = 0.0; // +infinity where mass_xt = 0 and mass_x > 0
    double mass_x = 0.0;
    double mass_xt = 0.0;
    int add_agreements = 0;
    int del_agreements = 0;
};

// Complete partition of the sample space for the pair (x, xt); region count
// is (differing additions + 1) * (differing deletions + 1).
std::vector<LikelihoodRegion> region_partition(const BitString &x, const BitString &xt,
                                               const FlipProbabilities &probs);

// Minimum of P[h(z)=1 under phi(.|xt)] over classifiers h constrained by
// P[h(z)=1 under phi(.|x)] = p_lower; greedy fill over the region partition.
double worst_case_value(double p_lower, const BitString &x, const BitString &xt,
                        const FlipProbabilities &probs);

// Same minimum by sorting all 2^n points; n <= 16.
double worst_case_value_enumerated(double p_lower, const BitString &x, const BitString &xt,
                                   const FlipProbabilities &probs);

// True iff the worst case stays strictly above 1/2 for every difference
// pattern the ball admits. Flip probabilities are position-independent, so
// one canonical xt per difference-count pair suffices.
bool certify_ball(double p_lower, const BitString &x, const FlipProbabilities &probs,
                  const PerturbationBall &ball);

struct CertificateGrid {
    int max_r_add = 0;
    int max_r_del = 0;
    double p_lower = 0.0;
    // Row-major over r_add, then r_del.
    std::vector<char> decisions;

    bool certified(int r_add, int r_del) const;
};

// Decisions over the full rectangle [0, max_r_add] x [0, max_r_del];
// anti-monotone by construction.
CertificateGrid certificate_grid(const SmoothEvaluation &evaluation, const BitString &x,
                                 const FlipProbabilities &probs, int max_r_add,
                                 int max_r_del);

// Largest r_add + r_del among certified cells; -1 when nothing is certified.
int max_certified_total_radius(const CertificateGrid &grid);

} // namespace qsmooth
