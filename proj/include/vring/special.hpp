#pragma once

#include <cmath>
#include <vector>

namespace vring {

/**
 * Values and remainders of the angular integrals
 *   I1(a) = int_0^pi cos(t) / (a^2 + 2(1-cos t))^{3/2} dt
 *   I2(a) = int_0^pi (1-cos t) / (a^2 + 2(1-cos t))^{3/2} dt
 * with the decompositions
 *   I1(a) = a^{-2} + R1(a)
 *   I2(a) = -(1/2) log(a) * chi_(0,1)(a) + R2(a).
 *
 * The remainders r1, r2 are the primary outputs; i1 and i2 are reconstructed
 * from them, so the decomposition identities hold bitwise:
 *   i1 == 1/(a*a) + r1
 *   i2 == -0.5*log(a)*chi + r2
 * err_est is a conservative absolute error estimate for the remainders.
 */
struct SpecialPair {
    double i1;
    double i2;
    double r1;
    double r2;
    double err_est;
};

/** Evaluate I1, I2, R1, R2 at a > 0. Throws DomainError for a <= 0 or non-finite a. */
SpecialPair eval_special(double a);

namespace special_detail {

/**
 * Full-accuracy core evaluation. i1/i2 carry full relative accuracy in every
 * branch (the series branch's i1 is not forced through the a^{-2} + r1
 * reconstruction). phi1 = a^2*I1 and phi2 = I2 + (1/2)log a are the smooth
 * functions used to build the tabulated fast path.
 */
struct Core {
    double i1, i2;
    double r1, r2;
    double phi1, phi2;
    double err;
};

Core core(double a);

} // namespace special_detail

/**
 * Tabulated fast path for I1, I2 over a in [1e-10, 32], cubic Hermite in
 * tau = log a. Intended for the O(Np^2) particle loops; worst-case relative
 * error is pinned by tests (about 1e-10). Outside the covered range callers
 * fall back to the slow core.
 */
class SpecialTable {
public:
    static const SpecialTable& instance();

    bool covers(double a_sq) const { return a_sq >= a2_min_ && a_sq <= a2_max_; }

    /** I1, I2 from a^2 (saves the caller a sqrt). Requires covers(a_sq). */
    void eval(double a_sq, double& i1, double& i2) const {
        const double tau = 0.5 * std::log(a_sq);
        double t = (tau - tau_min_) * inv_h_;
        int idx = static_cast<int>(t);
        if (idx >= cells_) idx = cells_ - 1;
        const double u = t - idx;
        const double* c1 = &co1_[4 * idx];
        const double* c2 = &co2_[4 * idx];
        const double phi1 = c1[0] + u * (c1[1] + u * (c1[2] + u * c1[3]));
        const double phi2 = c2[0] + u * (c2[1] + u * (c2[2] + u * c2[3]));
        i1 = phi1 / a_sq;
        i2 = phi2 - 0.5 * tau;
    }

private:
    SpecialTable();

    int cells_;
    double tau_min_, inv_h_;
    double a2_min_, a2_max_;
    std::vector<double> co1_, co2_; // 4 cubic coefficients per cell, per function
};

/** I1, I2 at a = sqrt(a_sq): tabulated fast path when covered, slow core otherwise. */
inline void special_i(double a_sq, double& i1, double& i2) {
    const SpecialTable& t = SpecialTable::instance();
    if (t.covers(a_sq)) {
        t.eval(a_sq, i1, i2);
    } else {
        const special_detail::Core c = special_detail::core(std::sqrt(a_sq));
        i1 = c.i1;
        i2 = c.i2;
    }
}

} // namespace vring
