#pragma once

#include <vector>

#include "vring/planar_vec.hpp"

namespace vring {

/** Parameters of one annular-blob simulation at a fixed concentration eps. */
struct SimParams {
    double eps = 1e-2;          // blob radius / concentration parameter, in (0,1)
    double alpha = 3.0;         // scaling exponent, > 2 (shrinking-support regime)
    double gamma = 2.0;         // peak-vorticity exponent, >= 2
    double m_bound = 0.0;       // L-infinity bound constant M; 0 = per-blob default |a|/pi * 1.01
    double r0 = 0.0;            // |log eps|^alpha, derived
    double dt = 1e-3;
    double horizon = 1.0;
    double delta = 0.0;         // blob regularization length, >= 0
    int particles_per_blob = 1000;
    double quad_tol = 1e-12;
};

/** Build SimParams with r0 = |log eps|^alpha derived and the invariants validated. */
SimParams make_sim_params(double eps, double alpha, bool exploratory = false);

/** Lagrangian particles discretizing one annular vorticity blob. */
struct ParticleBlob {
    int blob_index = 0;
    std::vector<PlanarVec> positions;
    std::vector<double> weights; // circulation elements, never mutated after init
    double intensity = 0.0;      // sum of weights (left fold in particle order)
    int sign = +1;
};

/** The external field on a blob split into its planar part and the curvature correction. */
struct FieldSplit {
    PlanarVec f1; // sum over other blobs of w K(point - x_q)
    PlanarVec f2; // sum over other blobs of w (G(point, x_q) - K(point - x_q))
};

/**
 * Sample each intensity as a uniform-vorticity disk of radius eps about its
 * center, on a concentric polar grid of n = round(sqrt(particles_per_blob))
 * rings with 2j+1 equal-area cells in ring j (n^2 particles realized, all of
 * equal weight; the last weight absorbs the rounding residue so the left-fold
 * sum of weights reproduces the intensity bitwise).
 * Throws ConfigError on disk overlap (pairwise center separation must exceed
 * 2 eps), zero intensity, gamma < 2, or a peak vorticity above m_bound eps^-gamma.
 */
std::vector<ParticleBlob> init_blobs(const SimParams& params,
                                     const std::vector<PlanarVec>& centers,
                                     const std::vector<double>& intensities);

/**
 * Velocity sum_q w_q G_delta(point, x_q) over all particles of all blobs,
 * where G_delta replaces |x-y|^2 by |x-y|^2 + delta^2 in the reduced argument.
 * With delta = 0, terms at zero separation (the self-term) are skipped.
 * Throws DomainError if r0 + point.x2 <= 0.
 */
PlanarVec induced_velocity(const std::vector<ParticleBlob>& blobs, PlanarVec point,
                           const SimParams& params);

/**
 * Velocity of every particle under the current configuration, in global
 * particle order (blob-major). The OpenMP path parallelizes over targets
 * only; every target accumulates its sum in the fixed global source order,
 * so parallel and serial results are bitwise identical for any worker count.
 */
std::vector<PlanarVec> compute_velocities(const std::vector<ParticleBlob>& blobs,
                                          const SimParams& params, bool parallel = true);

/**
 * One RK4 step of size params.dt for every particle. Weights and blob
 * membership are untouched; blobs are only mutated after the whole step
 * succeeds. Throws AxisCollisionError if any stage or the final position
 * reaches r0 + x2 <= 0.
 */
void advance(std::vector<ParticleBlob>& blobs, const SimParams& params);

/**
 * F = F1 + F2 split of the field generated at `point` by all blobs j != i,
 * unregularized (delta = 0): f1 from the planar kernel, f2 accumulated as the
 * pairwise difference G - K. Throws DomainError for an out-of-range index.
 */
FieldSplit external_field_split(const std::vector<ParticleBlob>& blobs, int i, PlanarVec point,
                                const SimParams& params);

} // namespace vring
