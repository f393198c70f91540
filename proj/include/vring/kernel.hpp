#pragma once

#include "vring/planar_vec.hpp"

namespace vring {

/** The reduced argument a = |x-y| (r0+x2)^{-1/2} (r0+y2)^{-1/2}. */
struct KernelArg {
    double a;
};

/** Compute the reduced argument, validating r0 + x2 > 0, r0 + y2 > 0 and x != y. */
KernelArg kernel_arg(PlanarVec x, PlanarVec y, double r0);

/**
 * Planar point-vortex kernel K(x) = (1/2pi) (-x2, x1)/|x|^2.
 * Satisfies x.K(x) = 0 and K(-x) = -K(x). Throws SingularityError at x = 0.
 */
PlanarVec eval_K(PlanarVec x);

/**
 * Axisymmetric ring kernel G(x, y) for ring radius offset r0, via the closed
 * form G1 = [(y2-x2) I1(a) + (r0+y2) I2(a)] / (2pi (r0+x2)^{3/2} (r0+y2)^{1/2}),
 * G2 = (x1-y1) I1(a) / (2pi (r0+x2)^{3/2} (r0+y2)^{1/2}).
 * Throws SingularityError at x = y and DomainError for nonpositive shifted radii.
 */
PlanarVec eval_G(PlanarVec x, PlanarVec y, double r0);

/**
 * Independent check route: adaptive quadrature of the defining theta-integrals
 * over [0, pi], using the substitution z = 2 sin(theta/2) on [0, pi/2] when
 * a < 1 to resolve the near-singular peak. tol is relative; the achieved
 * relative error estimate is stored in *err_out when given.
 */
PlanarVec eval_G_oracle(PlanarVec x, PlanarVec y, double r0, double tol = 1e-12,
                        double* err_out = nullptr);

/**
 * |G(x,y) - K(x-y)| divided by the bound bracket
 *   |log eps|^{-alpha} (1 + log|log eps| + |log|x-y|| chi_(0,1)(|x-y|)),
 * with r0 = |log eps|^alpha. Requires |x2| <= r0/2 and |y2| <= r0/2.
 * The measured supremum of this ratio over sampled pairs plays the role of
 * the bound's constant.
 */
double difference_ratio(PlanarVec x, PlanarVec y, double eps, double alpha);

} // namespace vring
