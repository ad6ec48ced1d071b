#include "qsmooth/certify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/beta.hpp>

namespace qsmooth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    uint64_t acc = 1;
    for (int i = 1; i <= k; ++i) {
        acc = acc * static_cast<uint64_t>(n - k + i) / static_cast<uint64_t>(i);
    }
    return acc;
}

void check_p_lower(double p_lower) {
    if (!(p_lower >= 0.0 && p_lower <= 1.0)) {
        throw std::invalid_argument("p_lower must lie in [0,1], got " +
                                    std::to_string(p_lower));
    }
}

struct MassPoint {
    double mass_x = 0.0;
    double mass_xt = 0.0;
};

// Shared greedy: pick mass in increasing phi(.|xt)/phi(.|x) order until the
// x-mass constraint is met. Zero-xt regions are free, zero-x regions inert.
double greedy_fill(std::vector<MassPoint> points, double p_lower) {
    std::stable_sort(points.begin(), points.end(), [](const MassPoint &a, const MassPoint &b) {
        bool a_free = a.mass_xt == 0.0 && a.mass_x > 0.0;
        bool b_free = b.mass_xt == 0.0 && b.mass_x > 0.0;
        if (a_free != b_free) {
            return a_free;
        }
        bool a_dead = a.mass_x == 0.0;
        bool b_dead = b.mass_x == 0.0;
        if (a_dead != b_dead) {
            return b_dead;
        }
        if (a_free || a_dead) {
            return false;
        }
        return a.mass_x * b.mass_xt > b.mass_x * a.mass_xt;
    });
    double remaining = p_lower;
    double worst = 0.0;
    for (const MassPoint &pt : points) {
        if (remaining <= 0.0) {
            break;
        }
        if (pt.mass_x <= 0.0) {
            continue;
        }
        double take = std::min(remaining, pt.mass_x);
        worst += (take / pt.mass_x) * pt.mass_xt;
        remaining -= take;
    }
    return worst;
}

// xt agreeing with x except for the first `adds` zeros turned on and the
// first `dels` ones turned off; position independence makes the choice of
// positions irrelevant.
BitString canonical_perturbed(const BitString &x, int adds, int dels) {
    BitString xt = x;
    int need_add = adds;
    int need_del = dels;
    for (int j = 0; j < x.n && (need_add > 0 || need_del > 0); ++j) {
        if (!x.bit(j) && need_add > 0) {
            xt.set_bit(j, true);
            --need_add;
        } else if (x.bit(j) && need_del > 0) {
            xt.set_bit(j, false);
            --need_del;
        }
    }
    return xt;
}

} // namespace

const char *method_name(EvalMethod method) {
    switch (method) {
    case EvalMethod::exact:
        return "exact";
    case EvalMethod::monte_carlo:
        return "monte_carlo";
    case EvalMethod::qae:
        return "qae";
    }
    throw std::invalid_argument("unknown evaluation method");
}

SmoothEvaluation exact_smooth(const BitString &x, const FlipProbabilities &probs,
                              const TruthTable &oracle) {
    SmoothEvaluation eval;
    eval.value = smooth_probability(x, probs, oracle);
    eval.lower = eval.value;
    eval.confidence = 1.0;
    eval.oracle_calls = uint64_t{1} << x.n;
    eval.method = EvalMethod::exact;
    return eval;
}

double clopper_pearson_lower(uint64_t successes, uint64_t samples, double delta) {
    if (samples == 0) {
        throw std::invalid_argument("sample count must be positive");
    }
    if (successes > samples) {
        throw std::invalid_argument("successes " + std::to_string(successes) +
                                    " exceed samples " + std::to_string(samples));
    }
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("delta must lie in (0,1), got " + std::to_string(delta));
    }
    if (successes == 0) {
        return 0.0;
    }
    if (successes == samples) {
        return std::pow(delta, 1.0 / static_cast<double>(samples));
    }
    boost::math::beta_distribution<double> dist(static_cast<double>(successes),
                                                static_cast<double>(samples - successes + 1));
    return boost::math::quantile(dist, delta);
}

SmoothEvaluation mc_estimate(const BitString &x, const FlipProbabilities &probs,
                             const TruthTable &oracle, uint64_t samples, double delta,
                             std::mt19937_64 &rng) {
    if (samples == 0) {
        throw std::invalid_argument("sample count must be positive");
    }
    if (oracle.bits() != x.n) {
        throw std::invalid_argument("oracle covers " + std::to_string(oracle.bits()) +
                                    " bits but the input has " + std::to_string(x.n));
    }
    uint64_t hits = 0;
    for (uint64_t s = 0; s < samples; ++s) {
        BitString z = sample_perturbation(x, probs, rng);
        if (oracle.value(z)) {
            ++hits;
        }
    }
    SmoothEvaluation eval;
    eval.value = static_cast<double>(hits) / static_cast<double>(samples);
    eval.lower = clopper_pearson_lower(hits, samples, delta);
    eval.confidence = 1.0 - delta;
    eval.oracle_calls = samples;
    eval.method = EvalMethod::monte_carlo;
    return eval;
}

std::vector<LikelihoodRegion> region_partition(const BitString &x, const BitString &xt,
                                               const FlipProbabilities &probs) {
    if (x.n != xt.n) {
        throw std::invalid_argument("length mismatch: " + std::to_string(x.n) + " vs " +
                                    std::to_string(xt.n));
    }
    const int c_a = std::popcount(~x.word & xt.word & x.mask());
    const int c_d = std::popcount(x.word & ~xt.word);
    const double pp = probs.p_plus;
    const double pm = probs.p_minus;

    // Power tables built by the same left-to-right products the point-mass
    // computation uses, keeping grouped sums reproducible.
    std::vector<double> pow_pp(c_a + c_d + 1), pow_qp(c_a + c_d + 1);
    std::vector<double> pow_pm(c_a + c_d + 1), pow_qm(c_a + c_d + 1);
    pow_pp[0] = pow_qp[0] = pow_pm[0] = pow_qm[0] = 1.0;
    for (int i = 1; i <= c_a + c_d; ++i) {
        pow_pp[i] = pow_pp[i - 1] * pp;
        pow_qp[i] = pow_qp[i - 1] * (1.0 - pp);
        pow_pm[i] = pow_pm[i - 1] * pm;
        pow_qm[i] = pow_qm[i - 1] * (1.0 - pm);
    }

    std::vector<LikelihoodRegion> regions;
    regions.reserve(static_cast<size_t>(c_a + 1) * static_cast<size_t>(c_d + 1));
    double total_x = 0.0;
    double total_xt = 0.0;
    for (int u = 0; u <= c_a; ++u) {
        const double comb_a = static_cast<double>(binomial(c_a, u));
        for (int v = 0; v <= c_d; ++v) {
            const double comb_d = static_cast<double>(binomial(c_d, v));
            LikelihoodRegion region;
            region.add_agreements = u;
            region.del_agreements = v;
            region.mass_x =
                comb_a * pow_pp[u] * pow_qp[c_a - u] * comb_d * pow_pm[v] * pow_qm[c_d - v];
            region.mass_xt =
                comb_a * pow_qm[u] * pow_pm[c_a - u] * comb_d * pow_qp[v] * pow_pp[c_d - v];
            if (region.mass_xt > 0.0) {
                region.ratio = region.mass_x / region.mass_xt;
            } else {
                region.ratio = region.mass_x > 0.0 ? kInf : 0.0;
            }
            total_x += region.mass_x;
            total_xt += region.mass_xt;
            regions.push_back(region);
        }
    }
    if (std::abs(total_x - 1.0) > 1e-9 || std::abs(total_xt - 1.0) > 1e-9) {
        throw std::runtime_error("region masses drifted: " + std::to_string(total_x) +
                                 ", " + std::to_string(total_xt));
    }
    return regions;
}

double worst_case_value(double p_lower, const BitString &x, const BitString &xt,
                        const FlipProbabilities &probs) {
    check_p_lower(p_lower);
    std::vector<LikelihoodRegion> regions = region_partition(x, xt, probs);
    std::vector<MassPoint> points;
    points.reserve(regions.size());
    for (const LikelihoodRegion &region : regions) {
        points.push_back(MassPoint{region.mass_x, region.mass_xt});
    }
    return greedy_fill(std::move(points), p_lower);
}

double worst_case_value_enumerated(double p_lower, const BitString &x, const BitString &xt,
                                   const FlipProbabilities &probs) {
    check_p_lower(p_lower);
    if (x.n != xt.n) {
        throw std::invalid_argument("length mismatch: " + std::to_string(x.n) + " vs " +
                                    std::to_string(xt.n));
    }
    if (x.n > 16) {
        throw std::invalid_argument("point enumeration is limited to 16 bits, got " +
                                    std::to_string(x.n));
    }
    const uint32_t dim = uint32_t{1} << x.n;
    std::vector<MassPoint> points(dim);
    for (uint32_t z = 0; z < dim; ++z) {
        BitString zb(x.n, z);
        points[z].mass_x = transition_probability(zb, x, probs);
        points[z].mass_xt = transition_probability(zb, xt, probs);
    }
    return greedy_fill(std::move(points), p_lower);
}

bool certify_ball(double p_lower, const BitString &x, const FlipProbabilities &probs,
                  const PerturbationBall &ball) {
    check_p_lower(p_lower);
    if (ball.r_add > x.n || ball.r_del > x.n) {
        throw std::invalid_argument("ball (" + std::to_string(ball.r_add) + ", " +
                                    std::to_string(ball.r_del) + ") exceeds the " +
                                    std::to_string(x.n) + "-bit input");
    }
    // Difference counts beyond the available zeros or ones are unrealizable.
    const int max_adds = std::min(ball.r_add, x.zero_count());
    const int max_dels = std::min(ball.r_del, x.ones());
    double worst = 1.0;
    for (int adds = 0; adds <= max_adds; ++adds) {
        for (int dels = 0; dels <= max_dels; ++dels) {
            BitString xt = canonical_perturbed(x, adds, dels);
            worst = std::min(worst, worst_case_value(p_lower, x, xt, probs));
        }
    }
    return worst > 0.5;
}

bool CertificateGrid::certified(int r_add, int r_del) const {
    if (r_add < 0 || r_add > max_r_add || r_del < 0 || r_del > max_r_del) {
        throw std::invalid_argument("radius (" + std::to_string(r_add) + ", " +
                                    std::to_string(r_del) + ") outside the grid");
    }
    return decisions[static_cast<size_t>(r_add) * static_cast<size_t>(max_r_del + 1) +
                     static_cast<size_t>(r_del)] != 0;
}

CertificateGrid certificate_grid(const SmoothEvaluation &evaluation, const BitString &x,
                                 const FlipProbabilities &probs, int max_r_add,
                                 int max_r_del) {
    if (max_r_add < 0 || max_r_del < 0 || max_r_add > x.n || max_r_del > x.n) {
        throw std::invalid_argument("grid extent (" + std::to_string(max_r_add) + ", " +
                                    std::to_string(max_r_del) + ") outside [0, " +
                                    std::to_string(x.n) + "]");
    }
    CertificateGrid grid;
    grid.max_r_add = max_r_add;
    grid.max_r_del = max_r_del;
    grid.p_lower = evaluation.lower;
    grid.decisions.assign(static_cast<size_t>(max_r_add + 1) * static_cast<size_t>(max_r_del + 1),
                          0);
    for (int ra = 0; ra <= max_r_add; ++ra) {
        for (int rd = 0; rd <= max_r_del; ++rd) {
            bool ok = certify_ball(evaluation.lower, x, probs, PerturbationBall(ra, rd));
            grid.decisions[static_cast<size_t>(ra) * static_cast<size_t>(max_r_del + 1) +
                           static_cast<size_t>(rd)] = ok ? 1 : 0;
        }
    }
    return grid;
}

int max_certified_total_radius(const CertificateGrid &grid) {
    int best = -1;
    for (int ra = 0; ra <= grid.max_r_add; ++ra) {
        for (int rd = 0; rd <= grid.max_r_del; ++rd) {
            if (grid.certified(ra, rd)) {
                best = std::max(best, ra + rd);
            }
        }
    }
    return best;
}

} // namespace qsmooth
