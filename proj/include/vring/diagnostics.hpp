#pragma once

#include "vring/planar_vec.hpp"
#include "vring/point_vortex.hpp"
#include "vring/ring_sim.hpp"

namespace vring {

/** Center of vorticity, moment of inertia, and support radius of one blob. */
struct BlobMoments {
    PlanarVec center;      // a^{-1} sum_p w_p x_p
    double inertia;        // sum_p |w_p| |x_p - center|^2
    double support_radius; // max_p |x_p - center|
};

/** Mollifier geometry; requires radius >= 2 * width. */
struct MollifierParams {
    double radius;
    double width;
};

/** Support-scaling bound evaluations at one (eps, alpha). */
struct BoundReport {
    double k;             // (alpha - 2) / 2
    double support_bound; // c_fit |log eps|^{-k}
    double delta_bound;   // |log eps|^{-(alpha-1)}
    double inertia_bound; // |log eps|^{-2(alpha-1)}
    double c_fit;
    double r_m;
    double epsilon0;      // exp(-(4 c_fit / r_m)^{1/k})
    bool regime_warning;  // 4 c_fit <= r_m: epsilon0 >= 1/e, outside the intended regime
};

/** Throws DomainError for an empty blob or zero intensity. */
BlobMoments blob_moments(const ParticleBlob& blob);

/**
 * Fraction of the blob's absolute circulation strictly farther than R from
 * its center: sum of |w_p|/|a| over |x_p - center| > R. Value in [0, 1].
 */
double mass_tail(const ParticleBlob& blob, double R);

/**
 * Smooth version of mass_tail: sum_p (|w_p|/|a|) (1 - W(x_p - center)) with
 * W(x) = psi((|x| - R)/h) and psi the quintic smoothstep (1 on s <= 0, 0 on
 * s >= 1). Satisfies the exact sandwich
 *   mollified_mass(R, h) <= mass_tail(R) <= mollified_mass(R - h, h).
 * Throws DomainError when R < 2h.
 */
double mollified_mass(const ParticleBlob& blob, MollifierParams m);

/** The quintic smoothstep cutoff used by mollified_mass (1 for s <= 0, 0 for s >= 1). */
double smoothstep_cutoff(double s);

/**
 * Evaluate the support-scaling bound expressions at params' (eps, alpha) with the
 * supplied fitted constant and separation scale r_m. Throws DomainError when
 * alpha <= 2 or inputs are nonpositive.
 */
BoundReport bound_report(const SimParams& params, double c_fit, double r_m);

/** max_i |center of blob i - reference position i|. Throws DomainError on count mismatch. */
double pv_deviation(const std::vector<ParticleBlob>& blobs, const PointVortexState& reference);

} // namespace vring
