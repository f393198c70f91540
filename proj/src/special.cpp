#include "vring/special.hpp"

#include <array>
#include <cmath>
#include <string>

#include "vring/errors.hpp"
#include "vring/planar_vec.hpp"
#include "vring/quadrature.hpp"

namespace vring {
namespace {
constexpr double kMachEps = 2.220446049250313e-16;
}

namespace special_detail {
namespace {

// Small-a asymptote constants:
//   I1(a) = a^{-2} + (3/8) log a + c1 + O(a^2 |log a|)
//   I2(a) = -(1/2) log a + c2 + O(a^2 |log a|)
// c1 = 5/16 - (9/8) log 2, c2 = (3/2) log 2 - 1/2.
constexpr double kC1 = -0.46729057812993847309;
constexpr double kC2 = 0.53972077083991796413;

constexpr double kAsymA = 1e-10; // below: asymptote
constexpr double kSeriesA = 8.0; // above: binomial series

// Smooth quadrature remainders of the antiderivative decomposition on [0, pi]:
//   Qb = int 2 sin^2(t/2) (1 - cos(t/2)) / D^{3/2} dt
//   Qf = int (1 - cos(t/2)) sin^2(t/2) / (2 (1 + cos(t/2)) D^{3/2}) dt
// with D = a^2 + 4 sin^2(t/2); both are uniformly smooth in a >= 0.
quad::Result<2> smooth_parts(double a_sq) {
    auto f = [a_sq](double th) -> std::array<double, 2> {
        const double s = std::sin(0.5 * th);
        const double c = std::cos(0.5 * th);
        const double den = a_sq + 4.0 * s * s;
        const double p = den * std::sqrt(den);
        const double g = (1.0 - c) * s * s / p;
        return {g / (2.0 * (1.0 + c)), 2.0 * g};
    };
    return quad::integrate<2>(f, 0.0, kPi, 1e-14, 1e-18, 400);
}

Core core_asymptote(double a) {
    const double lg = std::log(a);
    Core c;
    c.r1 = 0.375 * lg + kC1;
    c.r2 = kC2;
    c.i1 = 1.0 / (a * a) + c.r1;
    c.i2 = -0.5 * lg + c.r2;
    c.phi1 = 1.0 + (a * a) * c.r1;
    c.phi2 = kC2;
    c.err = 10.0 * a * a * (1.0 + std::abs(lg)) + 4.0 * kMachEps * (1.0 + std::abs(c.r1));
    return c;
}

// Exact antiderivative pieces plus the smooth quadrature remainders, with
// E = sqrt(a^2 + 4):
//   I2 = -1/E + (1/2) log(2+E) - (1/2) log a + Qb
//   I1 = 2/(a^2 E) - (3/4) I2 + Qf,   and  2/(a^2 E) - a^{-2} = -1/(E(2+E)).
Core core_middle(double a) {
    const double a_sq = a * a;
    const quad::Result<2> q = smooth_parts(a_sq);
    const double qf = q.value[0];
    const double qb = q.value[1];

    const double E = std::sqrt(a_sq + 4.0);
    const double half_lg = 0.5 * std::log(a);

    Core c;
    c.phi2 = -1.0 / E + 0.5 * std::log(2.0 + E) + qb; // I2 + (1/2) log a
    c.i2 = c.phi2 - half_lg;
    c.r2 = (a < 1.0) ? c.phi2 : c.i2;
    c.r1 = -1.0 / (E * (2.0 + E)) - 0.75 * c.i2 + qf;
    c.i1 = 1.0 / a_sq + c.r1;
    c.phi1 = 1.0 + a_sq * c.r1;
    c.err = q.error + 1e-15 * (1.0 + std::abs(half_lg) + std::abs(c.i2));
    return c;
}

// Binomial expansion of the integrands in 2(1-cos t)/a^2, valid for a^2 > 4:
//   I1 = a^{-3} sum_{k>=1} b_k (2/a^2)^k M_k,  M_k = -(k/(k+1)) J_k
//   I2 = a^{-3} sum_{k>=0} b_k (2/a^2)^k J_{k+1}
// with J_m = pi 2^m (2m-1)!!/(2m)!! and b_k = (-1)^k (2k+1)!!/(2k)!!.
Core core_series(double a) {
    const double a_sq = a * a;
    const double q = 2.0 / a_sq;
    double b = 1.0;  // b_k
    double t = 1.0;  // q^k
    double Jk = kPi; // J_k
    double s1 = 0.0, s2 = 0.0;
    double tail = 0.0;
    bool converged = false;
    for (int k = 0; k < 200; ++k) {
        const double Jk1 = Jk * (2.0 * k + 1.0) / (k + 1.0);
        const double ck = b * t;
        const double term2 = ck * Jk1;
        s2 += term2;
        double term1 = 0.0;
        if (k >= 1) {
            term1 = ck * (-static_cast<double>(k) / (k + 1.0)) * Jk;
            s1 += term1;
        }
        tail = std::abs(term1) + std::abs(term2);
        if (k >= 2 && tail < 1e-18 * (std::abs(s1) + std::abs(s2))) {
            converged = true;
            break;
        }
        b *= -(2.0 * k + 3.0) / (2.0 * k + 2.0);
        t *= q;
        Jk = Jk1;
    }
    if (!converged)
        throw AccuracyError("series for I1/I2 did not converge at a = " + std::to_string(a));

    const double a3 = a_sq * a;
    Core c;
    c.i1 = s1 / a3;
    c.i2 = s2 / a3;
    c.r1 = c.i1 - 1.0 / a_sq;
    c.r2 = c.i2;
    c.phi1 = a_sq * c.i1;
    c.phi2 = c.i2 + 0.5 * std::log(a);
    c.err = tail / a3 + 4.0 * kMachEps * (std::abs(c.i1) + std::abs(c.i2));
    return c;
}

} // namespace

Core core(double a) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw DomainError("special-function argument must be positive and finite, got " +
                          std::to_string(a));
    if (a < kAsymA) return core_asymptote(a);
    if (a < kSeriesA) return core_middle(a);
    return core_series(a);
}

} // namespace special_detail

SpecialPair eval_special(double a) {
    const special_detail::Core c = special_detail::core(a);
    SpecialPair p;
    p.r1 = c.r1;
    p.r2 = c.r2;
    p.i1 = 1.0 / (a * a) + p.r1;
    p.i2 = (a < 1.0) ? (-0.5 * std::log(a) + p.r2) : p.r2;
    // The 1/a^2 term covers the cancellation floor of reconstructing i1 from
    // the remainder when a >> 1 and i1 << a^{-2}.
    p.err_est = c.err + 4.0 * kMachEps * (1.0 / (a * a) + std::abs(p.i1) + std::abs(p.i2));
    return p;
}

SpecialTable::SpecialTable() {
    // tau = log a on [log 1e-10, log 32]; inner coverage margins keep cell
    // lookups away from the boundary rounding.
    const double tau_lo = std::log(1e-10);
    const double tau_hi = std::log(32.0);
    cells_ = 8192;
    tau_min_ = tau_lo;
    const double h = (tau_hi - tau_lo) / cells_;
    inv_h_ = 1.0 / h;
    a2_min_ = 1.02e-20;
    a2_max_ = 1000.0;

    // Node values with two ghost nodes per side for the FD derivatives.
    const int n_nodes = cells_ + 1;
    std::vector<double> v1(n_nodes + 4), v2(n_nodes + 4);
    for (int i = -2; i <= cells_ + 2; ++i) {
        const double a = std::exp(tau_lo + i * h);
        const special_detail::Core c = special_detail::core(a);
        v1[i + 2] = c.phi1;
        v2[i + 2] = c.phi2;
    }

    auto deriv = [h](const std::vector<double>& v, int i) {
        // 4th-order central difference, pre-scaled by the cell width.
        return (v[i] - 8.0 * v[i + 1] + 8.0 * v[i + 3] - v[i + 4]) / 12.0;
    };

    co1_.resize(4 * cells_);
    co2_.resize(4 * cells_);
    for (int i = 0; i < cells_; ++i) {
        for (int which = 0; which < 2; ++which) {
            const std::vector<double>& v = which == 0 ? v1 : v2;
            std::vector<double>& co = which == 0 ? co1_ : co2_;
            const double p0 = v[i + 2], p1 = v[i + 3];
            const double d0 = deriv(v, i), d1 = deriv(v, i + 1);
            const double dp = p1 - p0;
            co[4 * i + 0] = p0;
            co[4 * i + 1] = d0;
            co[4 * i + 2] = 3.0 * dp - 2.0 * d0 - d1;
            co[4 * i + 3] = -2.0 * dp + d0 + d1;
        }
    }
}

const SpecialTable& SpecialTable::instance() {
    static const SpecialTable table;
    return table;
}

} // namespace vring
