#pragma once

// Reference oracles shared by the test suites. Everything here is written
// independently of the library's fast paths: dense linear algebra, closed
// forms, and point-by-point enumeration.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "qsmooth/bitdata.hpp"
#include "qsmooth/statevec.hpp"

namespace qtest {

using qsmooth::cplx;
using Mat = std::vector<std::vector<cplx>>;

inline Mat dense_of(int qubits, const std::function<void(qsmooth::StateVector &)> &op) {
    size_t dim = size_t{1} << qubits;
    Mat m(dim, std::vector<cplx>(dim));
    for (size_t j = 0; j < dim; ++j) {
        qsmooth::StateVector s(qubits);
        s.amplitude(0) = cplx(0.0, 0.0);
        s.amplitude(j) = cplx(1.0, 0.0);
        op(s);
        for (size_t i = 0; i < dim; ++i) m[i][j] = s.amplitude(i);
    }
    return m;
}

inline Mat matmul(const Mat &a, const Mat &b) {
    size_t dim = a.size();
    Mat out(dim, std::vector<cplx>(dim, cplx(0.0, 0.0)));
    for (size_t i = 0; i < dim; ++i) {
        for (size_t k = 0; k < dim; ++k) {
            for (size_t j = 0; j < dim; ++j) out[i][j] += a[i][k] * b[k][j];
        }
    }
    return out;
}

inline Mat dagger(const Mat &a) {
    size_t dim = a.size();
    Mat out(dim, std::vector<cplx>(dim));
    for (size_t i = 0; i < dim; ++i) {
        for (size_t j = 0; j < dim; ++j) out[i][j] = std::conj(a[j][i]);
    }
    return out;
}

inline double max_identity_error(const Mat &a) {
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        for (size_t j = 0; j < a.size(); ++j) {
            double want = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(a[i][j] - cplx(want, 0.0)));
        }
    }
    return worst;
}

inline double max_difference(const Mat &a, const Mat &b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        for (size_t j = 0; j < a.size(); ++j) {
            worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
        }
    }
    return worst;
}

// Closed-form distribution of the counting measurement when the work
// register starts in an equal superposition of the two rotation eigenstates
// with angle theta = asin(sqrt(a)).
inline std::vector<double> closed_form_counting(double amplitude, int t) {
    const size_t big_t = size_t{1} << t;
    const double theta = std::asin(std::sqrt(amplitude));
    auto term = [&](double delta) {
        double frac = delta - std::floor(delta);
        double denom = std::sin(M_PI * frac);
        // Near-integer delta sits on the sinc peak; the limit avoids the
        // cancellation-prone quotient and is exact to ~1e-11 there.
        if (std::abs(denom) < 1e-9) return 1.0;
        double num = std::sin(static_cast<double>(big_t) * M_PI * delta);
        double s = num / (static_cast<double>(big_t) * denom);
        return s * s;
    };
    std::vector<double> probs(big_t);
    for (size_t y = 0; y < big_t; ++y) {
        double frac = static_cast<double>(y) / static_cast<double>(big_t);
        probs[y] = 0.5 * (term(frac - theta / M_PI) + term(frac + theta / M_PI));
    }
    return probs;
}

inline double total_variation(const std::vector<double> &p, const std::vector<double> &q) {
    double tv = 0.0;
    for (size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
    return 0.5 * tv;
}

// Point-level Neyman-Pearson: minimize the xt-mass of a randomized acceptance
// rule holding exactly p_lower of the x-mass, by filling points in decreasing
// x-to-xt likelihood ratio.
inline double brute_force_worst_case(double p_lower, const qsmooth::BitString &x,
                                     const qsmooth::BitString &xt,
                                     const qsmooth::FlipProbabilities &probs) {
    // Identical endpoints transport the budget unchanged; returning it directly
    // keeps the boundary case exact instead of accumulating division noise.
    if (x.word == xt.word) {
        return std::min(p_lower, 1.0);
    }
    struct Point {
        double mass_x;
        double mass_xt;
    };
    std::vector<Point> pts;
    for (uint32_t z = 0; z < (1u << x.n); ++z) {
        qsmooth::BitString zb(x.n, z);
        pts.push_back({qsmooth::transition_probability(zb, x, probs),
                       qsmooth::transition_probability(zb, xt, probs)});
    }
    std::stable_sort(pts.begin(), pts.end(), [](const Point &a, const Point &b) {
        bool a_free = a.mass_xt == 0.0 && a.mass_x > 0.0;
        bool b_free = b.mass_xt == 0.0 && b.mass_x > 0.0;
        if (a_free != b_free) return a_free;
        bool a_dead = a.mass_x == 0.0;
        bool b_dead = b.mass_x == 0.0;
        if (a_dead != b_dead) return b_dead;
        if (a_dead) return false;
        // Larger x/xt ratio first, compared without forming the quotient.
        return a.mass_x * b.mass_xt > b.mass_x * a.mass_xt;
    });
    double remaining = p_lower;
    double value = 0.0;
    for (const Point &p : pts) {
        if (remaining <= 0.0) break;
        if (p.mass_x == 0.0) continue;
        double take = std::min(remaining, p.mass_x);
        value += (take / p.mass_x) * p.mass_xt;
        remaining -= take;
    }
    return value;
}

} // namespace qtest
