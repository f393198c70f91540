#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "vring/errors.hpp"

namespace vring::quad {

/** Result of an adaptive integration: value per component plus an error estimate. */
template <std::size_t N>
struct Result {
    std::array<double, N> value{};
    double error = 0.0;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1] (positive half; node 7 is 0).
inline constexpr std::array<double, 8> xgk = {
    0.99145537112081263921, 0.94910791234275852453, 0.86486442335976907279,
    0.74153118559939443986, 0.58608723546769113029, 0.40584515137739716691,
    0.20778495500789846760, 0.0};
inline constexpr std::array<double, 8> wgk = {
    0.02293532201052922496, 0.06309209262997855329, 0.10479001032225018384,
    0.14065325971552591875, 0.16900472663926790283, 0.19035057806478540991,
    0.20443294007529889241, 0.20948214108472782801};
// Embedded Gauss-7 weights, matching xgk[1], xgk[3], xgk[5], xgk[7].
inline constexpr std::array<double, 4> wg = {
    0.12948496616886969327, 0.27970539148927666790, 0.38183005050511894495,
    0.41795918367346938776};

template <std::size_t N>
struct Segment {
    double a, b;
    std::array<double, N> value;
    double error;
};

// One 15-point Kronrod rule with embedded 7-point Gauss estimate on [a, b].
template <std::size_t N, class F>
Segment<N> rule15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    std::array<double, N> resk{};
    std::array<double, N> resg{};
    std::array<std::array<double, N>, 15> fv{};

    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        fv[j] = f(c - dx);
        fv[14 - j] = f(c + dx);
    }
    fv[7] = f(c);

    for (std::size_t k = 0; k < N; ++k) {
        double sk = wgk[7] * fv[7][k];
        double sg = wg[3] * fv[7][k];
        for (int j = 0; j < 7; ++j) {
            sk += wgk[j] * (fv[j][k] + fv[14 - j][k]);
            if (j % 2 == 1)
                sg += wg[j / 2] * (fv[j][k] + fv[14 - j][k]);
        }
        resk[k] = sk * h;
        resg[k] = sg * h;
    }

    // Scaled error estimate in the style of QUADPACK's qk15.
    double err = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        const double reskh = resk[k] * 0.5 / h;
        double resasc = wgk[7] * std::abs(fv[7][k] - reskh);
        for (int j = 0; j < 7; ++j)
            resasc += wgk[j] * (std::abs(fv[j][k] - reskh) + std::abs(fv[14 - j][k] - reskh));
        resasc *= std::abs(h);
        double e = std::abs(resk[k] - resg[k]);
        if (resasc != 0.0 && e != 0.0)
            e = resasc * std::min(1.0, std::pow(200.0 * e / resasc, 1.5));
        err += e;
    }
    return {a, b, resk, err};
}

} // namespace detail

/**
 * Adaptive Gauss-Kronrod integration of an array-valued integrand over [a, b].
 * Bisects the interval with the largest error estimate until the summed
 * estimate satisfies max(abs_tol, rel_tol * |value|_1). Throws AccuracyError
 * if the budget of subdivisions is exhausted first.
 */
template <std::size_t N, class F>
Result<N> integrate(const F& f, double a, double b, double rel_tol = 1e-13,
                    double abs_tol = 0.0, int max_segments = 2000) {
    std::vector<detail::Segment<N>> segs;
    segs.reserve(64);
    segs.push_back(detail::rule15<N>(f, a, b));

    const double min_width = 16.0 * std::numeric_limits<double>::epsilon() *
                             (std::abs(a) + std::abs(b) + 1.0);

    auto totals = [&segs]() {
        Result<N> r;
        for (const auto& s : segs) {
            for (std::size_t k = 0; k < N; ++k) r.value[k] += s.value[k];
            r.error += s.error;
        }
        return r;
    };

    while (true) {
        Result<N> t = totals();
        double scale = 0.0;
        for (std::size_t k = 0; k < N; ++k) scale += std::abs(t.value[k]);
        if (t.error <= std::max(abs_tol, rel_tol * scale))
            return t;

        // Split the largest-error segment that is still wide enough to bisect.
        auto worst = segs.end();
        for (auto it = segs.begin(); it != segs.end(); ++it) {
            if (it->b - it->a <= min_width)
                continue;
            if (worst == segs.end() || it->error > worst->error)
                worst = it;
        }
        if (worst == segs.end())
            return t; // every segment is at the roundoff floor
        if (static_cast<int>(segs.size()) >= max_segments)
            throw AccuracyError("adaptive quadrature did not converge: error " +
                                std::to_string(t.error) + " on " +
                                std::to_string(segs.size()) + " segments");

        const double mid = 0.5 * (worst->a + worst->b);
        detail::Segment<N> left = detail::rule15<N>(f, worst->a, mid);
        detail::Segment<N> right = detail::rule15<N>(f, mid, worst->b);
        *worst = left;
        segs.push_back(right);
    }
}

/** Scalar convenience wrapper around the array-valued integrator. */
template <class F>
Result<1> integrate_scalar(const F& f, double a, double b, double rel_tol = 1e-13,
                           double abs_tol = 0.0, int max_segments = 2000) {
    auto g = [&f](double t) { return std::array<double, 1>{f(t)}; };
    return integrate<1>(g, a, b, rel_tol, abs_tol, max_segments);
}

} // namespace vring::quad
