#pragma once

#include <vector>

#include "vring/planar_vec.hpp"

namespace vring {

/** Positions z_i and fixed intensities a_i of the planar N-vortex system. */
struct PointVortexState {
    std::vector<PlanarVec> positions;
    std::vector<double> intensities;
    double time = 0.0;

    int size() const { return static_cast<int>(positions.size()); }
};

/** First integrals of the point-vortex dynamics. */
struct PvInvariants {
    double hamiltonian;       // -(1/2pi) sum_{i<j} a_i a_j log|z_i - z_j|
    PlanarVec linear_impulse; // sum_i a_i z_i
    double angular_impulse;   // sum_i a_i |z_i|^2
};

/**
 * Velocities dz_i/dt = sum_{j != i} a_j K(z_i - z_j), plus the uniform drift
 * term e1 * a_i when drift is set. Throws CollapseError on coincident vortices.
 */
std::vector<PlanarVec> pv_rhs(const PointVortexState& state, bool drift = false);

/**
 * Fixed-step classical RK4 up to the horizon (final partial step allowed).
 * Every accepted step is recorded, the initial state first. Throws
 * CollapseError (with time and pair) as soon as the minimum pairwise
 * separation falls below collapse_threshold, including at the initial state.
 */
std::vector<PointVortexState> pv_integrate(const PointVortexState& initial, double horizon,
                                           double dt, double collapse_threshold,
                                           bool drift = false);

/** Hamiltonian, linear impulse, angular impulse. Throws CollapseError on coincident vortices. */
PvInvariants pv_invariants(const PointVortexState& state);

/** Minimum pairwise distance; +infinity for fewer than two vortices. */
double min_separation(const PointVortexState& state);

/** Step sizes of the fixed-dt schedule covering [0, horizon] (last one may be partial). */
std::vector<double> step_schedule(double horizon, double dt);

} // namespace vring
